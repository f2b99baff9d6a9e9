"""HTTP session service: a human plays the poacher against a configured
ranger agent, one move per round, with the ranger's action committed
server-side before each human move arrives (simultaneity without trust).

API (JSON bodies, 0-indexed sites):
    GET  /presets                  list the built-in rhino distributions
    POST /sessions                 create a session
    GET  /sessions/{id}            public state (never the pending action)
    POST /sessions/{id}/moves      submit {"round": t, "site": i}
    GET  /sessions/{id}/log        JSONL download of resolved rounds
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import logio
from .agents import Agent, AgentSpec, make_agent
from .game import RANGER, RhinoDistribution, RoundOutcome, resolve_round, sample_rhinos
from .harness import GameConfig, digest_config

DEFAULT_HORIZON = 100
DEFAULT_RANGER = AgentSpec(kind="pfa", M=100, s=0)

# The four on-file experiment distributions.
PRESETS = {
    "a": (0.9, 0.6, 0.2),
    "b": (0.9, 0.6, 0.4, 0.9, 0.1),
    "c": (0.8, 0.3, 0.8, 0.3),
    "d": (0.3, 0.8, 0.7, 0.5),
}

RULES = (
    "You are the poacher. Each round you and the ranger simultaneously pick "
    "one of the sites. A rhino is at site i with the listed probability, "
    "independently every round, and the ranger knows the probabilities too. "
    "After both choices are made they are revealed along with the rhinos. "
    "You score +1 for catching a rhino without being caught, -1 if the "
    "ranger catches you (same site), and 0 otherwise. Historically this "
    "setup paid $1 plus a $0.10 bonus per point; here points are the game."
)


class CreateSessionRequest(BaseModel):
    preset: str | None = None
    distribution: list[float] | None = None
    ranger: str | dict | None = None
    horizon: int | None = None
    seed: int | None = None


class MoveRequest(BaseModel):
    round: int
    site: int


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"error": code, "message": message})


@dataclass
class Session:
    session_id: str
    config: GameConfig
    ranger: Agent
    rng: np.random.Generator
    pending_action: int
    outcomes: list[RoundOutcome] = field(default_factory=list)
    score: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)
    log_path: Path | None = None

    @property
    def current_round(self) -> int:
        return len(self.outcomes)

    @property
    def completed(self) -> bool:
        return self.current_round >= self.config.rounds


class SessionStore:
    def __init__(self, storage_dir: str | Path | None = None):
        self.sessions: dict[str, Session] = {}
        self.registry_lock = threading.Lock()
        self.storage_dir = Path(storage_dir) if storage_dir else None
        if self.storage_dir:
            self.storage_dir.mkdir(parents=True, exist_ok=True)

    def create(self, req: CreateSessionRequest) -> Session:
        if req.preset is not None:
            if req.preset not in PRESETS:
                raise _error(422, "unknown_preset",
                             f"preset must be one of {sorted(PRESETS)}")
            probs = PRESETS[req.preset]
        elif req.distribution is not None:
            probs = tuple(req.distribution)
        else:
            raise _error(422, "missing_distribution",
                         "provide either a preset or an explicit distribution")
        try:
            d = RhinoDistribution(probs)
            if req.ranger is None:
                ranger_spec = DEFAULT_RANGER
            elif isinstance(req.ranger, str):
                ranger_spec = AgentSpec.parse(req.ranger)
            else:
                ranger_spec = AgentSpec.from_dict(req.ranger)
            horizon = req.horizon if req.horizon is not None else DEFAULT_HORIZON
            seed = req.seed if req.seed is not None else secrets.randbits(63)
            config = GameConfig(
                distribution=d, rounds=horizon,
                poacher=AgentSpec(kind="level0-uniform"),  # placeholder: the human drives
                ranger=ranger_spec, seed=seed,
            )
        except (ValueError, IndexError) as exc:
            raise _error(422, "invalid_config", str(exc))

        rng = np.random.default_rng(config.seed)
        ranger = make_agent(ranger_spec, d, RANGER, rng)
        session = Session(
            session_id=secrets.token_hex(8),
            config=config, ranger=ranger, rng=rng,
            pending_action=ranger.act(rng),
        )
        if self.storage_dir:
            session.log_path = self.storage_dir / f"{session.session_id}.jsonl"
            cfg = self._meta_config(session)
            meta = logio.meta_record(cfg, digest_config(cfg),
                                     {"session_id": session.session_id})
            session.log_path.write_text(json.dumps(meta) + "\n", encoding="utf-8")
        with self.registry_lock:
            self.sessions[session.session_id] = session
        return session

    @staticmethod
    def _meta_config(session: Session) -> dict:
        cfg = session.config.to_dict()
        cfg["poacher"] = {"kind": "human"}
        return cfg

    def get(self, session_id: str) -> Session:
        with self.registry_lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise _error(404, "unknown_session", f"no session {session_id!r}")
        return session

    def submit_move(self, session_id: str, req: MoveRequest) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.completed:
                raise _error(409, "session_completed",
                             "all rounds have been played")
            if req.round != session.current_round:
                raise _error(409, "round_conflict",
                             f"expected round {session.current_round}, got {req.round}")
            n = session.config.distribution.n
            if not 0 <= req.site < n:
                raise _error(422, "invalid_site", f"site must be in [0, {n})")

            rhinos = sample_rhinos(session.config.distribution, session.rng)
            outcome = resolve_round(req.site, session.pending_action, rhinos)
            session.outcomes.append(outcome)
            session.score += outcome.poacher_utility
            if session.log_path:
                with session.log_path.open("a", encoding="utf-8") as f:
                    f.write(json.dumps(logio.round_record(len(session.outcomes) - 1,
                                                          outcome)) + "\n")
                    f.flush()
            session.ranger.observe(outcome, session.rng)
            # commit the next action before any future human move can arrive
            session.pending_action = session.ranger.act(session.rng)
            return {
                "round": session.current_round - 1,
                "outcome": {
                    "poacher_site": outcome.poacher_site,
                    "ranger_site": outcome.ranger_site,
                    "rhino_present": list(outcome.rhino_present),
                    "u_p": outcome.poacher_utility,
                    "u_r": outcome.ranger_utility,
                },
                "score": session.score,
                "rounds_played": session.current_round,
                "completed": session.completed,
            }


def public_state(session: Session) -> dict:
    """Everything the poacher may see: resolved history only. The ranger's
    pending action never appears here."""
    with session.lock:
        return {
            "session_id": session.session_id,
            "distribution": list(session.config.distribution.probs),
            "n": session.config.distribution.n,
            "horizon": session.config.rounds,
            "round": session.current_round,
            "score": session.score,
            "completed": session.completed,
            "history": [
                {
                    "round": t,
                    "poacher_site": o.poacher_site,
                    "ranger_site": o.ranger_site,
                    "rhino_present": list(o.rhino_present),
                    "u_p": o.poacher_utility,
                    "u_r": o.ranger_utility,
                }
                for t, o in enumerate(session.outcomes)
            ],
        }


def session_log_text(session: Session, store: SessionStore) -> str:
    with session.lock:
        cfg = store._meta_config(session)
        lines = [json.dumps(logio.meta_record(cfg, digest_config(cfg),
                                              {"session_id": session.session_id}))]
        lines += [json.dumps(logio.round_record(t, o))
                  for t, o in enumerate(session.outcomes)]
    return "\n".join(lines) + "\n"


def create_app(storage_dir: str | Path | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ranger-poacher session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    store = SessionStore(storage_dir)
    app.state.store = store

    @app.get("/presets")
    def presets():
        return {
            "presets": [
                {"id": key, "distribution": list(value)}
                for key, value in PRESETS.items()
            ]
        }

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        session = store.create(req)
        return {
            "session_id": session.session_id,
            "distribution": list(session.config.distribution.probs),
            "n": session.config.distribution.n,
            "horizon": session.config.rounds,
            "seed": session.config.seed,
            "rules": RULES,
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return public_state(store.get(session_id))

    @app.post("/sessions/{session_id}/moves")
    def submit_move(session_id: str, req: MoveRequest):
        return store.submit_move(session_id, req)

    @app.get("/sessions/{session_id}/log")
    def get_log(session_id: str):
        session = store.get(session_id)
        return PlainTextResponse(
            session_log_text(session, store),
            media_type="application/x-ndjson",
            headers={"Content-Disposition":
                     f'attachment; filename="{session_id}.jsonl"'},
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(host: str = "127.0.0.1", port: int = 8000,
          storage_dir: str | Path | None = None,
          ui_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(storage_dir, ui_dir), host=host, port=port)
