/** Demo configuration: service location, turn size, and the scoring table. */

export type ScoringTable = Record<number, number>;

/**
 * Points per number of simultaneously cleared rows. The values are
 * implementation-chosen defaults (classic arcade convention) and can be
 * replaced with any JSON table keyed by cleared-row count.
 */
export const DEFAULT_SCORING_TABLE: ScoringTable = { 1: 40, 2: 100, 3: 300, 4: 1200 };

export interface DemoConfig {
  baseUrl: string;
  piecesPerTurn: number;
  scoringTable: ScoringTable;
  boardWidth: number;
  boardHeight: number;
  pollIntervalMs: number;
}

export const DEFAULT_CONFIG: DemoConfig = {
  baseUrl: "http://127.0.0.1:8000",
  piecesPerTurn: 7,
  scoringTable: DEFAULT_SCORING_TABLE,
  boardWidth: 7,
  boardHeight: 12,
  pollIntervalMs: 1000,
};

/** Parse a user-supplied scoring table; rejects non-positive keys and NaN values. */
export function parseScoringTable(json: string): ScoringTable {
  const raw = JSON.parse(json) as Record<string, unknown>;
  const table: ScoringTable = {};
  for (const [key, value] of Object.entries(raw)) {
    const lines = Number(key);
    const points = Number(value);
    if (!Number.isInteger(lines) || lines < 1 || !Number.isFinite(points)) {
      throw new Error(`bad scoring table entry: ${key} -> ${String(value)}`);
    }
    table[lines] = points;
  }
  if (Object.keys(table).length === 0) {
    throw new Error("scoring table must have at least one entry");
  }
  return table;
}

/** Points for clearing `lines` rows at once: exact entry or the largest smaller one. */
export function pointsForLines(table: ScoringTable, lines: number): number {
  if (lines <= 0) return 0;
  if (table[lines] !== undefined) return table[lines];
  const keys = Object.keys(table).map(Number).sort((a, b) => a - b);
  let best = 0;
  for (const key of keys) {
    if (key <= lines) best = table[key];
  }
  return best;
}
