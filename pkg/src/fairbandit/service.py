"""Session-oriented HTTP/JSON service exposing live bandit turn allocation.

One session per team: players are arms, the policy picks who takes the
next turn, and reported points feed back as normalized rewards. Requests
for different sessions proceed concurrently; requests for one session are
serialized behind a per-session lock. Players are 1-indexed in every body
and response.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Literal, Mapping

import numpy as np
from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import (
    BanditState,
    Decision,
    FairnessConfig,
    Schedule,
    build_schedule,
    make_config,
    select_stochastic,
    select_strict,
    update,
)
from .envs import TeammateScore, teammate_reward
from .errors import (
    ConfigError,
    CorruptSnapshot,
    FairBanditError,
    NegativePoints,
    SessionFinished,
    UnknownSession,
    WrongPlayer,
    error_code,
)
from .policies import policy_rng

DEFAULT_NORMALIZER = 300.0

SessionStatus = Literal["waiting", "active", "finished"]


@dataclass
class Session:
    """Live allocation state for one team; the round counter is the state clock."""

    session_id: str
    config: FairnessConfig
    policy: str
    schedule: Schedule | None
    state: BanditState
    rng: np.random.Generator | None
    seed: int
    m: float
    scores: list[float]
    pending: Decision | None = None
    status: SessionStatus = "waiting"
    history: list[Decision] = field(default_factory=list)

    @property
    def round(self) -> int:
        return self.state.clock


def new_session(
    players: int,
    rate,
    horizon: int,
    policy: str = "strict",
    seed: int = 0,
    m: float = DEFAULT_NORMALIZER,
    slots: list[int] | None = None,
    assignment: list[int] | None = None,
) -> Session:
    """Create a session with a validated config and its default schedule."""
    if policy not in ("strict", "stochastic"):
        raise ConfigError(f"policy must be strict or stochastic, got {policy!r}")
    if m <= 0:
        raise ConfigError(f"normalizer m must be positive, got {m!r}")
    config = make_config(players, rate, horizon)
    schedule = None
    if policy == "strict" and config.min_rate > 0:
        if slots is not None or assignment is not None:
            if slots is None or assignment is None or len(slots) != len(assignment):
                raise ConfigError("slots and assignment must be given together, same length")
            schedule = build_schedule(config, set(slots), dict(zip(slots, assignment)))
        else:
            schedule = build_schedule(config)
    rng = policy_rng(seed) if policy == "stochastic" else None
    return Session(
        session_id=uuid.uuid4().hex,
        config=config,
        policy=policy,
        schedule=schedule,
        state=BanditState.fresh(config.num_arms),
        rng=rng,
        seed=seed,
        m=m,
        scores=[0.0] * config.num_arms,
    )


def _select(session: Session) -> Decision:
    if session.policy == "strict":
        return select_strict(session.state, session.schedule, session.config)
    return select_stochastic(session.state, session.config, session.rng)


def next_turn(session: Session) -> dict:
    """Advance to (or repeat) the pending decision for the next round.

    Idempotent: repeated calls without a score report return the same
    decision. Raises SessionFinished once the horizon is played out.
    """
    if session.status == "finished":
        raise SessionFinished(f"session {session.session_id} already played its horizon")
    if session.pending is None:
        session.pending = _select(session)
        session.status = "active"
    return {
        "player": session.pending.arm,
        "round": session.round,
        "provenance": session.pending.provenance,
    }


def report_score(session: Session, player: int, points: float) -> dict:
    """Record a turn's points for the pending player and advance the round.

    The reward fed to the bandit is the player's cumulative score over
    normalizer * turns, clamped to [0, 1].
    """
    if session.status == "finished":
        raise SessionFinished(f"session {session.session_id} already played its horizon")
    if points < 0:
        raise NegativePoints(f"points must be nonnegative, got {points!r}")
    if session.pending is None or session.pending.arm != player:
        pending = None if session.pending is None else session.pending.arm
        raise WrongPlayer(
            f"player {player} is not the pending player (pending: {pending})"
        )
    index = player - 1
    session.scores[index] += points
    turns_after = session.state.pull_count[index] + 1
    reward = teammate_reward(
        TeammateScore(session.scores[index], turns_after, session.m)
    )
    update(session.state, session.pending, reward)
    session.history.append(session.pending)
    session.pending = None
    if session.state.clock >= session.config.horizon:
        session.status = "finished"
    view = session_view(session)
    view["reward"] = reward
    return view


def session_view(session: Session) -> dict:
    """Read-only snapshot of everything a client needs to render the session."""
    clock = session.state.clock
    counts = session.state.pull_count
    return {
        "session_id": session.session_id,
        "status": session.status,
        "policy": session.policy,
        "round": clock,
        "horizon": session.config.horizon,
        "players": session.config.num_arms,
        "min_rate": str(session.config.min_rate),
        "m": session.m,
        "pending_player": None if session.pending is None else session.pending.arm,
        "scores": {str(i + 1): session.scores[i] for i in range(session.config.num_arms)},
        "turn_counts": {str(i + 1): counts[i] for i in range(session.config.num_arms)},
        "pull_fractions": {
            str(i + 1): (counts[i] / clock if clock else 0.0)
            for i in range(session.config.num_arms)
        },
        "history": [
            {"round": j, "player": d.arm, "provenance": d.provenance}
            for j, d in enumerate(session.history)
        ],
    }


def snapshot_session(session: Session) -> dict:
    """Full JSON persistence of a session, including the generator state."""
    return {
        "session_id": session.session_id,
        "policy": session.policy,
        "status": session.status,
        "seed": session.seed,
        "m": session.m,
        "config": session.config.to_json_dict(),
        "schedule": None if session.schedule is None else session.schedule.to_json_dict(),
        "state": session.state.to_json_dict(),
        "scores": list(session.scores),
        "pending": None if session.pending is None else session.pending.to_json_dict(),
        "history": [d.to_json_dict() for d in session.history],
        "rng_state": None if session.rng is None else session.rng.bit_generator.state,
    }


def restore_session(blob: Mapping) -> Session:
    """Rebuild a session from a snapshot blob; future decisions replay identically.

    Raises CorruptSnapshot when the blob is truncated, malformed, or
    internally inconsistent.
    """
    try:
        config = FairnessConfig.from_json_dict(blob["config"])
        policy = str(blob["policy"])
        if policy not in ("strict", "stochastic"):
            raise ConfigError(f"bad policy {policy!r}")
        status = str(blob["status"])
        if status not in ("waiting", "active", "finished"):
            raise ConfigError(f"bad status {status!r}")
        schedule = (
            None if blob["schedule"] is None else Schedule.from_json_dict(blob["schedule"])
        )
        state = BanditState.from_json_dict(blob["state"])
        if state.num_arms != config.num_arms:
            raise ConfigError("state and config disagree on the arm count")
        scores = [float(s) for s in blob["scores"]]
        if len(scores) != config.num_arms:
            raise ConfigError("scores length does not match the arm count")
        pending = (
            None if blob["pending"] is None else Decision.from_json_dict(blob["pending"])
        )
        history = [Decision.from_json_dict(d) for d in blob["history"]]
        rng = None
        if blob["rng_state"] is not None:
            rng_state = blob["rng_state"]
            if rng_state.get("bit_generator") != "PCG64":
                raise ConfigError("unsupported generator in snapshot")
            bit_generator = np.random.PCG64()
            bit_generator.state = rng_state
            rng = np.random.Generator(bit_generator)
        return Session(
            session_id=str(blob["session_id"]),
            config=config,
            policy=policy,
            schedule=schedule,
            state=state,
            rng=rng,
            seed=int(blob["seed"]),
            m=float(blob["m"]),
            scores=scores,
            pending=pending,
            status=status,
            history=history,
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CorruptSnapshot(f"snapshot failed to restore: {exc}") from exc


class SessionStore:
    """In-memory session map with one lock per session."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()

    def put(self, session: Session) -> None:
        with self._mutex:
            self._sessions[session.session_id] = session
            self._locks.setdefault(session.session_id, threading.Lock())

    def entry(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._mutex:
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSession(f"no session {session_id!r}")
            return session, self._locks[session_id]


class CreateSessionBody(BaseModel):
    players: int
    rate: str | float | int
    horizon: int
    policy: Literal["strict", "stochastic"] = "strict"
    seed: int = 0
    m: float | None = None
    slots: list[int] | None = None
    assignment: list[int] | None = None


class ScoreBody(BaseModel):
    player: int
    points: float


_HTTP_STATUS: tuple[tuple[type, int], ...] = (
    (UnknownSession, 404),
    (SessionFinished, 409),
    (WrongPlayer, 409),
    (NegativePoints, 400),
    (CorruptSnapshot, 400),
)


def _status_for(exc: FairBanditError) -> int:
    for klass, status in _HTTP_STATUS:
        if isinstance(exc, klass):
            return status
    return 400


def create_app(
    default_m: float = DEFAULT_NORMALIZER, snapshot_dir: str | None = None
) -> FastAPI:
    """Build the service app; snapshots are also written to snapshot_dir if set."""
    app = FastAPI(title="fairbandit allocation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    if snapshot_dir is not None:
        os.makedirs(snapshot_dir, exist_ok=True)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.exception_handler(FairBanditError)
    def _fairbandit_error(_request: Request, exc: FairBanditError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": error_code(exc), "detail": str(exc)},
        )

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict:
        session = new_session(
            players=body.players,
            rate=body.rate,
            horizon=body.horizon,
            policy=body.policy,
            seed=body.seed,
            m=default_m if body.m is None else body.m,
            slots=body.slots,
            assignment=body.assignment,
        )
        store.put(session)
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str) -> dict:
        session, lock = store.entry(session_id)
        with lock:
            return session_view(session)

    @app.post("/sessions/{session_id}/turn")
    def turn(session_id: str) -> dict:
        session, lock = store.entry(session_id)
        with lock:
            return next_turn(session)

    @app.post("/sessions/{session_id}/score")
    def score(session_id: str, body: ScoreBody) -> dict:
        session, lock = store.entry(session_id)
        with lock:
            return report_score(session, body.player, body.points)

    @app.post("/sessions/{session_id}/snapshot")
    def snapshot(session_id: str) -> dict:
        session, lock = store.entry(session_id)
        with lock:
            blob = snapshot_session(session)
        path = None
        if snapshot_dir is not None:
            path = os.path.join(snapshot_dir, f"{session_id}.json")
            with open(path, "w") as fh:
                json.dump(blob, fh, indent=2)
        return {"snapshot": blob, "path": path}

    @app.post("/sessions/restore")
    def restore(blob: dict = Body(...)) -> dict:
        session = restore_session(blob)
        store.put(session)
        return session_view(session)

    return app
