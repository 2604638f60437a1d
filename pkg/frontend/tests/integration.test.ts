/**
 * Bot-vs-bot demo loop against a real local service: the session must run
 * its full 30 rounds and the rendered pattern strip must mirror the
 * service's recorded allocation history exactly.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient, ServiceError } from "../src/api.js";
import { GreedyLevelerBot } from "../src/bot.js";
import { BlockGame, runPieces } from "../src/game.js";
import { renderPattern } from "../src/pattern.js";

const PORT = 8900 + (process.pid % 1000);
const BASE_URL = `http://127.0.0.1:${PORT}`;
const PIECES_PER_TURN = 7;

let service: ChildProcess;

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "fairbandit", "serve", "--host", "127.0.0.1", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  const client = new ServiceClient(BASE_URL);
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (await client.health()) return;
    await new Promise((resolve) => setTimeout(resolve, 300));
  }
  throw new Error("allocation service did not come up");
}, 40_000);

afterAll(() => {
  service?.kill();
});

async function playBotSession(rate: string, seed: number) {
  const client = new ServiceClient(BASE_URL);
  const view = await client.createSession({
    players: 2,
    rate,
    horizon: 30,
    policy: "strict",
    seed,
  });
  const bot = new GreedyLevelerBot();
  const games = [new BlockGame(seed * 2 + 1), new BlockGame(seed * 2 + 2)];
  const played: number[] = [];
  for (let round = 0; round < 30; round++) {
    const turn = await client.nextTurn(view.session_id);
    expect(turn.round).toBe(round);
    played.push(turn.player);
    const points = runPieces(games[turn.player - 1], bot, PIECES_PER_TURN);
    await client.reportScore(view.session_id, turn.player, points);
  }
  return { client, sessionId: view.session_id, played };
}

describe("bot-vs-bot demo loop", () => {
  it("completes 30 rounds and the pattern strip matches the recorded history", async () => {
    const { client, sessionId, played } = await playBotSession("1/3", 7);
    const state = await client.getState(sessionId);
    expect(state.status).toBe("finished");
    expect(state.round).toBe(30);

    const strip = renderPattern(state.history);
    expect(strip).toHaveLength(state.round);
    expect(strip.map((cell) => cell.player)).toEqual(played);
    strip.forEach((cell, index) => {
      expect(cell.round).toBe(state.history[index].round);
      expect(cell.player).toBe(state.history[index].player);
      expect(cell.provenance).toBe(state.history[index].provenance);
    });

    // both players hit the guaranteed floor for 30 rounds at rate 1/3
    expect(state.turn_counts["1"]).toBeGreaterThanOrEqual(10);
    expect(state.turn_counts["2"]).toBeGreaterThanOrEqual(10);
    expect(state.turn_counts["1"] + state.turn_counts["2"]).toBe(30);

    // init rounds, then the default schedule pins offsets 1,2 of each block
    expect(state.history[0]).toMatchObject({ player: 1, provenance: "init" });
    expect(state.history[1]).toMatchObject({ player: 2, provenance: "init" });
    for (let round = 2; round < 30; round++) {
      const offset = (round - 2) % 3; // block length 3 starting at round index 2
      const expected = offset === 0 ? "prescheduled" : offset === 1 ? "prescheduled" : "free";
      const provenance = state.history[round].provenance;
      if (expected === "prescheduled") {
        expect(provenance).toBe("prescheduled");
        expect(state.history[round].player).toBe(offset + 1);
      } else {
        expect(provenance).toBe("ucb-argmax");
      }
    }
  }, 30_000);

  it("alternates players strictly at the full rate", async () => {
    const { client, sessionId, played } = await playBotSession("1/2", 11);
    expect(played).toEqual(Array.from({ length: 30 }, (_, i) => (i % 2) + 1));
    const state = await client.getState(sessionId);
    expect(state.turn_counts).toMatchObject({ "1": 15, "2": 15 });
    const strip = renderPattern(state.history);
    expect(strip.map((cell) => cell.label).join("")).toBe("AB".repeat(15));
  }, 30_000);

  it("surfaces wrong-player reports as typed service errors", async () => {
    const client = new ServiceClient(BASE_URL);
    const view = await client.createSession({
      players: 2, rate: "1/2", horizon: 4, seed: 3,
    });
    const turn = await client.nextTurn(view.session_id);
    const wrong = turn.player === 1 ? 2 : 1;
    await expect(client.reportScore(view.session_id, wrong, 5)).rejects.toMatchObject({
      code: "wrong_player",
      status: 409,
    });
  }, 15_000);
});
