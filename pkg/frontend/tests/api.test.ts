import { describe, expect, it } from "vitest";

import { ServiceClient, ServiceError } from "../src/api.js";

interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

function stubClient(status: number, payload: unknown) {
  const calls: RecordedCall[] = [];
  const fetchFn = async (url: string, init?: RequestInit) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body === undefined ? undefined : JSON.parse(init.body as string),
    });
    return new Response(JSON.stringify(payload), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { client: new ServiceClient("http://svc", fetchFn), calls };
}

describe("ServiceClient", () => {
  it("creates sessions with defaults filled in", async () => {
    const { client, calls } = stubClient(201, { session_id: "s1", round: 0 });
    await client.createSession({ players: 2, rate: "1/3", horizon: 30 });
    expect(calls[0].url).toBe("http://svc/sessions");
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual({
      players: 2, rate: "1/3", horizon: 30, policy: "strict", seed: 0,
    });
  });

  it("requests turns and reports scores on the session routes", async () => {
    const { client, calls } = stubClient(200, { player: 1, round: 0, provenance: "init" });
    await client.nextTurn("abc");
    expect(calls[0].url).toBe("http://svc/sessions/abc/turn");
    await client.reportScore("abc", 1, 120.5);
    expect(calls[1].url).toBe("http://svc/sessions/abc/score");
    expect(calls[1].body).toEqual({ player: 1, points: 120.5 });
  });

  it("reads state with GET", async () => {
    const { client, calls } = stubClient(200, { session_id: "abc", history: [] });
    await client.getState("abc");
    expect(calls[0]).toMatchObject({ url: "http://svc/sessions/abc", method: "GET" });
  });

  it("surfaces service errors with their machine-readable code", async () => {
    const { client } = stubClient(409, {
      error: "wrong_player",
      detail: "player 2 is not the pending player (pending: 1)",
    });
    const attempt = client.reportScore("abc", 2, 10);
    await expect(attempt).rejects.toBeInstanceOf(ServiceError);
    await expect(attempt).rejects.toMatchObject({ code: "wrong_player", status: 409 });
  });

  it("health returns false when the service is unreachable", async () => {
    const failing = new ServiceClient("http://svc", async () => {
      throw new Error("connection refused");
    });
    expect(await failing.health()).toBe(false);
  });
});
