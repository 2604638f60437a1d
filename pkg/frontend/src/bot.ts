/** Scripted opponents so one person (or nobody) can exercise the full loop. */

import type { ColumnChooser, Piece } from "./game.js";

/** Fills the lowest column first (leftmost on ties); clears lines steadily. */
export class GreedyLevelerBot implements ColumnChooser {
  chooseColumn(columns: readonly number[], _piece: Piece): number {
    let best = 0;
    for (let c = 1; c < columns.length; c++) {
      if (columns[c] < columns[best]) best = c;
    }
    return best;
  }
}

/** Never places a piece; a whole turn earns exactly zero points. */
export class NoopBot implements ColumnChooser {
  chooseColumn(): null {
    return null;
  }
}
