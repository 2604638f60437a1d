/**
 * Simplified falling-block game: each piece is a short vertical bar dropped
 * into a chosen column. When every column of the bottom row is filled the
 * row clears (several at once score more, per the scoring table). A piece
 * that would overflow its column tops the board out: the board resets and
 * the piece scores nothing.
 */

import { type ScoringTable, DEFAULT_SCORING_TABLE, pointsForLines } from "./config.js";

/** Deterministic 32-bit PRNG (mulberry32); the demo needs replayable piece sequences. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let z = state;
    z = Math.imul(z ^ (z >>> 15), z | 1);
    z ^= z + Math.imul(z ^ (z >>> 7), z | 61);
    return ((z ^ (z >>> 14)) >>> 0) / 4294967296;
  };
}

export interface Piece {
  /** Cells the piece occupies in its column, 1..3. */
  height: number;
}

export interface PlacementResult {
  pointsEarned: number;
  linesCleared: number;
  toppedOut: boolean;
}

export interface GameOptions {
  width?: number;
  height?: number;
  scoringTable?: ScoringTable;
}

export class BlockGame {
  readonly width: number;
  readonly height: number;
  readonly scoringTable: ScoringTable;
  /** Filled cell count per column, bottom-up. */
  columns: number[];
  totalPoints = 0;
  private readonly random: () => number;

  constructor(seed: number, options: GameOptions = {}) {
    this.width = options.width ?? 7;
    this.height = options.height ?? 12;
    this.scoringTable = options.scoringTable ?? DEFAULT_SCORING_TABLE;
    this.columns = new Array<number>(this.width).fill(0);
    this.random = mulberry32(seed);
  }

  nextPiece(): Piece {
    return { height: 1 + Math.floor(this.random() * 3) };
  }

  /** Drop a piece into a 0-based column; returns the points it earned. */
  place(piece: Piece, column: number): PlacementResult {
    if (column < 0 || column >= this.width) {
      throw new Error(`column ${column} outside 0..${this.width - 1}`);
    }
    if (this.columns[column] + piece.height > this.height) {
      this.columns.fill(0); // top-out wipes the board, no points
      return { pointsEarned: 0, linesCleared: 0, toppedOut: true };
    }
    this.columns[column] += piece.height;
    const completeRows = Math.min(...this.columns);
    let points = 0;
    if (completeRows > 0) {
      this.columns = this.columns.map((h) => h - completeRows);
      points = pointsForLines(this.scoringTable, completeRows);
    }
    this.totalPoints += points;
    return { pointsEarned: points, linesCleared: completeRows, toppedOut: false };
  }
}

/** A way of playing one piece: picks the target column, or null to skip it. */
export interface ColumnChooser {
  chooseColumn(columns: readonly number[], piece: Piece): number | null;
}

/** Run one allocated turn of `pieces` pieces; returns the points earned. */
export function runPieces(game: BlockGame, chooser: ColumnChooser, pieces: number): number {
  let points = 0;
  for (let i = 0; i < pieces; i++) {
    const piece = game.nextPiece();
    const column = chooser.chooseColumn(game.columns, piece);
    if (column === null) continue;
    points += game.place(piece, column).pointsEarned;
  }
  return points;
}
