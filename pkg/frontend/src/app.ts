/**
 * Browser shell: wires the service client, the mini block game, and the
 * pattern strip into the page. All authoritative state (whose turn, scores,
 * history) comes from GET /sessions/{id}; this file only renders it and
 * feeds turns back through the API.
 */

import { ServiceClient, ServiceError, type SessionView } from "./api.js";
import { GreedyLevelerBot } from "./bot.js";
import { type DemoConfig } from "./config.js";
import { BlockGame, runPieces, type Piece } from "./game.js";
import { renderPattern, playerLabel } from "./pattern.js";

export type Seat = "human" | "bot";

interface HumanTurn {
  player: number;
  piecesLeft: number;
  points: number;
  piece: Piece;
}

export class DemoApp {
  private client: ServiceClient;
  private sessionId: string | null = null;
  private games: BlockGame[] = [];
  private seats: Seat[] = [];
  private timer: ReturnType<typeof setInterval> | null = null;
  private busy = false;
  private humanTurn: HumanTurn | null = null;
  private bot = new GreedyLevelerBot();

  constructor(
    private readonly root: HTMLElement,
    private readonly config: DemoConfig,
  ) {
    this.client = new ServiceClient(config.baseUrl);
  }

  async start(options: {
    rate: string;
    horizon: number;
    policy: "strict" | "stochastic";
    seed: number;
    seats: [Seat, Seat];
  }): Promise<void> {
    this.stop();
    this.client = new ServiceClient(this.config.baseUrl);
    const view = await this.client.createSession({
      players: 2,
      rate: options.rate,
      horizon: options.horizon,
      policy: options.policy,
      seed: options.seed,
    });
    this.sessionId = view.session_id;
    this.seats = [...options.seats];
    this.games = [
      new BlockGame(options.seed * 2 + 1, this.boardOptions()),
      new BlockGame(options.seed * 2 + 2, this.boardOptions()),
    ];
    this.humanTurn = null;
    this.renderView(view);
    this.timer = setInterval(() => void this.tick(), this.config.pollIntervalMs);
    void this.tick();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  private boardOptions() {
    return {
      width: this.config.boardWidth,
      height: this.config.boardHeight,
      scoringTable: this.config.scoringTable,
    };
  }

  private async tick(): Promise<void> {
    if (this.sessionId === null || this.busy) return;
    this.busy = true;
    try {
      const view = await this.client.getState(this.sessionId);
      this.renderView(view);
      if (view.status === "finished") {
        this.stop();
        this.setMessage("session finished");
        return;
      }
      const turn = await this.client.nextTurn(this.sessionId);
      const seat = this.seats[turn.player - 1];
      if (seat === "bot") {
        const game = this.games[turn.player - 1];
        const points = runPieces(game, this.bot, this.config.piecesPerTurn);
        await this.client.reportScore(this.sessionId, turn.player, points);
        this.renderView(await this.client.getState(this.sessionId));
      } else if (this.humanTurn === null || this.humanTurn.player !== turn.player) {
        const game = this.games[turn.player - 1];
        this.humanTurn = {
          player: turn.player,
          piecesLeft: this.config.piecesPerTurn,
          points: 0,
          piece: game.nextPiece(),
        };
        this.renderHumanControls();
      }
    } catch (error) {
      this.setMessage(error instanceof ServiceError ? error.message : String(error));
    } finally {
      this.busy = false;
    }
  }

  /** Human drops the current piece into a 0-based column. */
  async placeInColumn(column: number): Promise<void> {
    const turn = this.humanTurn;
    if (turn === null || this.sessionId === null) return;
    const game = this.games[turn.player - 1];
    turn.points += game.place(turn.piece, column).pointsEarned;
    turn.piecesLeft -= 1;
    if (turn.piecesLeft > 0) {
      turn.piece = game.nextPiece();
      this.renderHumanControls();
      return;
    }
    this.humanTurn = null;
    this.renderHumanControls();
    try {
      await this.client.reportScore(this.sessionId, turn.player, turn.points);
      this.renderView(await this.client.getState(this.sessionId));
    } catch (error) {
      this.setMessage(error instanceof ServiceError ? error.message : String(error));
    }
  }

  private element(id: string): HTMLElement {
    const node = this.root.querySelector<HTMLElement>(`#${id}`);
    if (node === null) throw new Error(`missing #${id}`);
    return node;
  }

  private setMessage(text: string): void {
    this.element("message").textContent = text;
  }

  private renderView(view: SessionView): void {
    this.element("status").textContent =
      `round ${view.round}/${view.horizon} | status ${view.status} | rate ${view.min_rate} | policy ${view.policy}`;
    for (const player of [1, 2]) {
      const key = String(player);
      this.element(`score-${player}`).textContent =
        `${playerLabel(player)} (${this.seats[player - 1] ?? "-"}): ` +
        `${view.scores[key] ?? 0} pts, ${view.turn_counts[key] ?? 0} turns`;
      const pending = view.pending_player === player ? " (to play)" : "";
      this.element(`score-${player}`).textContent += pending;
    }
    const strip = this.element("pattern-strip");
    strip.innerHTML = "";
    for (const cell of renderPattern(view.history)) {
      const node = document.createElement("span");
      node.className = cell.cssClass;
      node.textContent = cell.label;
      node.title = `round ${cell.round}: player ${cell.player} (${cell.provenance})`;
      strip.appendChild(node);
    }
    this.renderBoards();
  }

  private renderBoards(): void {
    for (const player of [1, 2]) {
      const game = this.games[player - 1];
      const board = this.element(`board-${player}`);
      board.innerHTML = "";
      if (!game) continue;
      for (const height of game.columns) {
        const column = document.createElement("div");
        column.className = "column";
        for (let row = 0; row < game.height; row++) {
          const cell = document.createElement("div");
          cell.className = row < game.height - height ? "cell-empty" : "cell-filled";
          column.appendChild(cell);
        }
        board.appendChild(column);
      }
    }
  }

  private renderHumanControls(): void {
    const controls = this.element("human-controls");
    controls.innerHTML = "";
    const turn = this.humanTurn;
    if (turn === null) return;
    const label = document.createElement("div");
    label.textContent =
      `player ${playerLabel(turn.player)}: piece of height ${turn.piece.height}, ` +
      `${turn.piecesLeft} pieces left, ${turn.points} pts this turn — pick a column`;
    controls.appendChild(label);
    for (let c = 0; c < this.config.boardWidth; c++) {
      const button = document.createElement("button");
      button.textContent = String(c + 1);
      button.addEventListener("click", () => void this.placeInColumn(c));
      controls.appendChild(button);
    }
  }
}
