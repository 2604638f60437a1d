/** Typed client for the allocation service HTTP/JSON API. Players are 1-indexed. */

export interface TurnInfo {
  player: number;
  round: number;
  provenance: string;
}

export interface HistoryEntry {
  round: number;
  player: number;
  provenance: string;
}

export interface SessionView {
  session_id: string;
  status: "waiting" | "active" | "finished";
  policy: string;
  round: number;
  horizon: number;
  players: number;
  min_rate: string;
  m: number;
  pending_player: number | null;
  scores: Record<string, number>;
  turn_counts: Record<string, number>;
  pull_fractions: Record<string, number>;
  history: HistoryEntry[];
}

export interface ScoreAck extends SessionView {
  reward: number;
}

export interface CreateSessionOptions {
  players: number;
  rate: string;
  horizon: number;
  policy?: "strict" | "stochastic";
  seed?: number;
  m?: number;
}

/** Service-reported failure with its machine-readable code (wrong_player, ...). */
export class ServiceError extends Error {
  constructor(
    readonly code: string,
    readonly status: number,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
    this.name = "ServiceError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const code = typeof payload?.error === "string" ? payload.error : "unknown_error";
      const detail = typeof payload?.detail === "string" ? payload.detail : response.statusText;
      throw new ServiceError(code, response.status, detail);
    }
    return payload as T;
  }

  async health(): Promise<boolean> {
    try {
      const payload = await this.request<{ status: string }>("GET", "/health");
      return payload.status === "ok";
    } catch {
      return false;
    }
  }

  createSession(options: CreateSessionOptions): Promise<SessionView> {
    return this.request<SessionView>("POST", "/sessions", {
      policy: "strict",
      seed: 0,
      ...options,
    });
  }

  getState(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>("GET", `/sessions/${sessionId}`);
  }

  nextTurn(sessionId: string): Promise<TurnInfo> {
    return this.request<TurnInfo>("POST", `/sessions/${sessionId}/turn`);
  }

  reportScore(sessionId: string, player: number, points: number): Promise<ScoreAck> {
    return this.request<ScoreAck>("POST", `/sessions/${sessionId}/score`, {
      player,
      points,
    });
  }
}
