"""HTTP play service.

A small JSON API over the closed-form classifier and the move generator,
plus an in-memory session store so a browser client can play full games
against the engine.  The engine plays perfectly: on an N-position it makes
a constructed winning move; on a P-position every move loses against
correct play, so it plays the first legal move in deterministic order and
reports ``engine_expects_loss`` so a client can surface the situation.

Error protocol (all bodies are JSON):

* 400 ``{"error": <code>, "message": ...}`` -- malformed input
  (bad ruleset string, wrong heap count, heap out of range, bad JSON shape)
* 404 ``{"error": "unknown-session", ...}`` -- no such (or expired) session
* 409 ``{"error": "illegal-move", "reason": <code>, ...}`` -- well-formed
  but illegal move; ``reason`` is one of the validator's reason codes
* 409 ``{"error": "out-of-turn", ...}`` -- a move by the wrong player
* 410 ``{"error": "game-over", ...}`` -- the session already finished
* 422 ``{"error": "unsupported", ...}`` -- a ruleset outside the solved
  range (single-delete games on five or more heaps)

Sessions live in memory only and expire ``session_ttl`` seconds after
their last use (default one hour).
"""

from __future__ import annotations

import threading
import time
import uuid
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .classifier import classify, delete_nim_grundy
from .core import (
    DeleteNim,
    GameError,
    IllegalMove,
    MoveRecord,
    PN,
    Position,
    RULESET_FAMILIES,
    Ruleset,
    Unsupported,
    canonicalize,
    is_terminal,
    parse_ruleset,
)
from .strategy import MoveChoice, apply_move, legal_moves, winning_move

MAX_OPTIONS = 20_000

IN_PROGRESS = "in-progress"
HUMAN_WON = "human_won"
HUMAN_LOST = "human_lost"

HUMAN = "human"
ENGINE = "engine"


class ApiError(Exception):
    """Carries an HTTP status plus the JSON error body."""

    def __init__(self, status: int, body: dict):
        super().__init__(body.get("message", body.get("error", "")))
        self.status = status
        self.body = body


def _bad_request(code: str, message: str) -> ApiError:
    return ApiError(400, {"error": code, "message": message})


# ---------------------------------------------------------------------------
# request bodies


class SplitJson(BaseModel):
    index: int
    parts: list[int]


class MoveJson(BaseModel):
    deleted: list[int]
    splits: list[SplitJson] = Field(default_factory=list)


class PositionRequest(BaseModel):
    ruleset: str
    heaps: list[int]


class SessionRequest(BaseModel):
    ruleset: str
    heaps: list[int]
    human_first: bool = True


# ---------------------------------------------------------------------------
# sessions


class Session:
    def __init__(self, sid: str, ruleset: Ruleset, code: str, p: Position,
                 human_first: bool):
        self.id = sid
        self.ruleset = ruleset
        self.code = code
        self.initial = p
        self.heaps = p
        self.human_first = human_first
        self.history: list[dict] = []
        self.lock = threading.Lock()
        self.last_used = 0.0
        if is_terminal(ruleset, p):
            # The player to move cannot move and loses immediately.
            self.status = HUMAN_LOST if human_first else HUMAN_WON
        else:
            self.status = IN_PROGRESS

    @property
    def turn(self) -> Optional[str]:
        if self.status != IN_PROGRESS:
            return None
        first, second = (HUMAN, ENGINE) if self.human_first else (ENGINE, HUMAN)
        return first if len(self.history) % 2 == 0 else second

    def record(self, by: str, record: MoveRecord, result: Position) -> None:
        self.history.append({
            "by": by,
            "move": _move_json(record),
            "result": list(result.heaps),
        })
        self.heaps = result
        if is_terminal(self.ruleset, result):
            self.status = HUMAN_WON if by == HUMAN else HUMAN_LOST


class SessionStore:
    def __init__(self, ttl: float, clock: Callable[[], float]):
        self.ttl = ttl
        self.clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict(self, now: float) -> None:
        dead = [sid for sid, s in self._sessions.items()
                if now - s.last_used > self.ttl]
        for sid in dead:
            del self._sessions[sid]

    def add(self, session: Session) -> None:
        with self._lock:
            now = self.clock()
            self._evict(now)
            session.last_used = now
            self._sessions[session.id] = session

    def get(self, sid: str) -> Session:
        with self._lock:
            now = self.clock()
            self._evict(now)
            session = self._sessions.get(sid)
            if session is None:
                raise ApiError(404, {
                    "error": "unknown-session",
                    "message": f"no session {sid!r} (it may have expired)",
                })
            session.last_used = now
            return session


# ---------------------------------------------------------------------------
# JSON shapes


def _move_json(record: MoveRecord) -> dict:
    return {
        "deleted": list(record.deleted),
        "splits": [{"index": i, "parts": list(parts)}
                   for i, parts in record.splits],
    }


def _analysis_json(ruleset: Ruleset, p: Position) -> dict:
    out = classify(ruleset, p)
    body = {"outcome": str(out.pn), "certificate": out.certificate}
    if isinstance(ruleset, DeleteNim):
        body["grundy"] = delete_nim_grundy(*p.heaps)
    return body


def _session_json(s: Session) -> dict:
    return {
        "id": s.id,
        "ruleset": s.code,
        "initial": list(s.initial.heaps),
        "heaps": list(s.heaps.heaps),
        "human_first": s.human_first,
        "status": s.status,
        "turn": s.turn,
        "history": s.history,
        "analysis": _analysis_json(s.ruleset, s.heaps),
        "terminal": is_terminal(s.ruleset, s.heaps),
    }


def _parse_position(body: PositionRequest) -> tuple[Ruleset, Position]:
    ruleset = parse_ruleset(body.ruleset)
    return ruleset, canonicalize(ruleset, body.heaps)


def _to_record(move: MoveJson) -> MoveRecord:
    seen: set[int] = set()
    for split in move.splits:
        if split.index in seen:
            raise IllegalMove("deleted-and-split-overlap",
                              f"heap index {split.index} split twice")
        seen.add(split.index)
    return MoveRecord.make(move.deleted,
                           {s.index: s.parts for s in move.splits})


# ---------------------------------------------------------------------------
# app


def create_app(session_ttl: float = 3600.0,
               clock: Callable[[], float] | None = None,
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="delsplit", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(session_ttl, clock or time.monotonic)

    @app.exception_handler(ApiError)
    def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body)

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(part) for part in first.get("loc", ()))
        message = f"{loc}: {first.get('msg', 'invalid request')}"
        return JSONResponse(status_code=400,
                            content={"error": "bad-request", "message": message})

    @app.exception_handler(IllegalMove)
    def _illegal_move(request: Request, exc: IllegalMove):
        return JSONResponse(status_code=409, content={
            "error": "illegal-move", "reason": exc.reason, "message": str(exc),
        })

    @app.exception_handler(Unsupported)
    def _unsupported(request: Request, exc: Unsupported):
        return JSONResponse(status_code=422,
                            content={"error": "unsupported", "message": str(exc)})

    @app.exception_handler(GameError)
    def _game_error(request: Request, exc: GameError):
        return JSONResponse(status_code=400,
                            content={"error": "bad-request", "message": str(exc)})

    @app.get("/api/health")
    def health():
        return {"ok": True}

    @app.get("/api/rulesets")
    def rulesets():
        return {"families": list(RULESET_FAMILIES)}

    @app.post("/api/classify")
    def classify_endpoint(body: PositionRequest):
        ruleset, p = _parse_position(body)
        response = _analysis_json(ruleset, p)
        response["heaps"] = list(p.heaps)
        response["terminal"] = is_terminal(ruleset, p)
        return response

    @app.post("/api/options")
    def options_endpoint(body: PositionRequest):
        ruleset, p = _parse_position(body)
        choices = legal_moves(ruleset, p)
        if len(choices) > MAX_OPTIONS:
            raise _bad_request(
                "too-many-options",
                f"{len(choices)} legal moves exceeds the {MAX_OPTIONS} cap",
            )
        return {"options": [
            {
                "move": _move_json(choice.record),
                "result": list(choice.result.heaps),
                "outcome": str(classify(ruleset, choice.result).pn),
            }
            for choice in choices
        ]}

    @app.post("/api/session", status_code=201)
    def create_session(body: SessionRequest):
        ruleset = parse_ruleset(body.ruleset)
        p = canonicalize(ruleset, body.heaps)
        classify(ruleset, p)  # reject unsupported rulesets up front
        session = Session(uuid.uuid4().hex, ruleset, ruleset.code(), p,
                          body.human_first)
        store.add(session)
        return {"session": _session_json(session)}

    @app.get("/api/session/{sid}")
    def get_session(sid: str):
        return {"session": _session_json(store.get(sid))}

    def _require_turn(session: Session, who: str) -> None:
        if session.status != IN_PROGRESS:
            raise ApiError(410, {
                "error": "game-over",
                "message": f"session finished: {session.status}",
            })
        if session.turn != who:
            raise ApiError(409, {
                "error": "out-of-turn",
                "message": f"it is the {session.turn}'s turn",
            })

    @app.post("/api/session/{sid}/move")
    def human_move(sid: str, move: MoveJson):
        session = store.get(sid)
        with session.lock:
            _require_turn(session, HUMAN)
            record = _to_record(move)
            result = apply_move(session.ruleset, session.heaps, record)
            session.record(HUMAN, record, result)
            return {"session": _session_json(session)}

    @app.post("/api/session/{sid}/engine-move")
    def engine_move(sid: str):
        session = store.get(sid)
        with session.lock:
            _require_turn(session, ENGINE)
            choice = winning_move(session.ruleset, session.heaps)
            expects_loss = choice is None
            if choice is None:
                moves = legal_moves(session.ruleset, session.heaps)
                choice = moves[0]
            assert isinstance(choice, MoveChoice)
            session.record(ENGINE, choice.record, choice.result)
            return {
                "session": _session_json(session),
                "engine_expects_loss": expects_loss,
            }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="static")

    return app
