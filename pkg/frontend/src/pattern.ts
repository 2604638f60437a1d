/**
 * Turn-pattern strip: a pure projection of the service's allocation history.
 * The client never invents a cell; every entry mirrors one recorded decision,
 * so the strip length always equals the service round counter.
 */

import type { HistoryEntry } from "./api.js";

export interface PatternCell {
  round: number;
  player: number;
  provenance: string;
  /** Single-letter player label: player 1 -> "A", 2 -> "B", ... */
  label: string;
  /** Style hooks: one class for the player, one for how the turn was chosen. */
  cssClass: string;
}

export function playerLabel(player: number): string {
  return String.fromCharCode(64 + player);
}

export function renderPattern(history: readonly HistoryEntry[]): PatternCell[] {
  return history.map((entry) => ({
    round: entry.round,
    player: entry.player,
    provenance: entry.provenance,
    label: playerLabel(entry.player),
    cssClass: `cell player-${entry.player} prov-${entry.provenance}`,
  }));
}
