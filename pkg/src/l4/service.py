"""JSON-over-HTTP facade for the interview pipeline.

Endpoints (versioned under /v1): create sessions, post answers, read session
state and generated artifacts. Sessions persist as append-only JSONL event
logs when a persistence directory is configured; replaying a log rebuilds
the exact session state.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import fixtures
from .interview import (
    DuplicateConstant,
    InterviewConfig,
    InterviewError,
    InvalidOption,
    NoRuleForGoal,
    Session,
    WrongQuestion,
    question_view,
)
from .lexicon import MorphLexicon
from .pipeline import analyze, build_artifacts, plan_for
from .asp import CompileError, parse_query
from .source import SourceError


class CreateSessionRequest(BaseModel):
    source: Optional[str] = None
    program: Optional[str] = None
    goal: str
    config: Optional[dict] = None


class AnswerRequest(BaseModel):
    question_id: str
    value: Any


@dataclass
class StoredSession:
    session: Session
    source: str
    source_name: str
    goal: str
    config: Optional[dict]
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Sessions keyed by unguessable 128-bit ids, optionally event-logged."""

    def __init__(self, persist_dir: Optional[str] = None, morph: Optional[MorphLexicon] = None):
        self.sessions: dict[str, StoredSession] = {}
        self.persist_dir = Path(persist_dir) if persist_dir else None
        self.morph = morph
        if self.persist_dir is not None:
            self.persist_dir.mkdir(parents=True, exist_ok=True)
            self._load_all()

    def _build(self, source: str, source_name: str, goal: str, config: Optional[dict], sid: str) -> StoredSession:
        program = analyze(source, source_name)
        query = parse_query(program, goal)
        plan = plan_for(program, query, InterviewConfig.from_dict(config), self.morph)
        session = Session(program, plan, session_id=sid, morph=self.morph)
        return StoredSession(session, source, source_name, goal, config)

    def create(self, source: str, source_name: str, goal: str, config: Optional[dict]) -> StoredSession:
        sid = secrets.token_hex(16)
        stored = self._build(source, source_name, goal, config, sid)
        self.sessions[sid] = stored
        self._append(sid, {
            "event": "created", "source": source, "source_name": source_name,
            "goal": goal, "config": config,
        })
        return stored

    def get(self, sid: str) -> Optional[StoredSession]:
        return self.sessions.get(sid)

    def apply_answer(self, sid: str, question_id: str, value: Any) -> Session:
        stored = self.sessions[sid]
        with stored.lock:
            stored.session.answer(question_id, value)
            self._append(sid, {"event": "answer", "question_id": question_id, "value": value})
        return stored.session

    # ── event log ────────────────────────────────────────────

    def _append(self, sid: str, event: dict) -> None:
        if self.persist_dir is None:
            return
        with open(self.persist_dir / f"{sid}.jsonl", "a", encoding="utf-8") as log:
            log.write(json.dumps(event) + "\n")

    def _load_all(self) -> None:
        assert self.persist_dir is not None
        for path in sorted(self.persist_dir.glob("*.jsonl")):
            sid = path.stem
            events = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]
            if not events or events[0].get("event") != "created":
                continue
            head = events[0]
            stored = self._build(head["source"], head.get("source_name", "<source>"), head["goal"], head.get("config"), sid)
            for event in events[1:]:
                if event.get("event") == "answer":
                    stored.session.answer(event["question_id"], event["value"])
            self.sessions[sid] = stored


def _error(status: int, code: str, message: str, diagnostics: Optional[list[str]] = None) -> JSONResponse:
    return JSONResponse(
        {"code": code, "message": message, "diagnostics": diagnostics or []},
        status_code=status,
    )


def create_app(
    persist_dir: Optional[str] = None,
    ui_dir: Optional[str] = None,
    morph: Optional[MorphLexicon] = None,
) -> FastAPI:
    app = FastAPI(title="l4 interview service", version="1")
    store = SessionStore(persist_dir, morph)
    app.state.store = store

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/v1/sessions")
    def create_session(request: CreateSessionRequest):
        source, source_name, config = _resolve_source(request)
        if source is None:
            return _error(400, "bad-request", "provide either source text or a program ref")
        try:
            stored = store.create(source, source_name, request.goal, config)
        except SourceError as err:
            return _error(422, "invalid-program", "program has errors", [str(d) for d in err.diagnostics])
        except (CompileError, NoRuleForGoal) as err:
            return _error(400, "unknown-goal", str(err))
        session = stored.session
        body: dict[str, Any] = {"session_id": session.id}
        if session.pending is not None:
            body["question"] = question_view(session.pending)
        else:
            body["conclusion"] = session.conclusion_view()
        return body

    def _resolve_source(request: CreateSessionRequest):
        config = request.config
        if request.source is not None:
            return request.source, "<source>", config
        if request.program is not None:
            try:
                source, name, fixture_config = fixtures.load(request.program)
            except KeyError:
                return None, "", config
            if config is None:
                config = fixture_config
            return source, name, config
        return None, "", config

    @app.post("/v1/sessions/{sid}/answers")
    def post_answer(sid: str, request: AnswerRequest):
        stored = store.get(sid)
        if stored is None:
            return _error(404, "unknown-session", f"no session {sid}")
        try:
            session = store.apply_answer(sid, request.question_id, request.value)
        except WrongQuestion as err:
            return _error(409, "wrong-question", str(err))
        except (InvalidOption, DuplicateConstant) as err:
            return _error(400, "invalid-answer", str(err))
        except InterviewError as err:
            return _error(400, "invalid-answer", str(err))
        if session.pending is not None:
            return {"question": question_view(session.pending)}
        return {"conclusion": session.conclusion_view()}

    @app.get("/v1/sessions/{sid}")
    def get_session(sid: str):
        stored = store.get(sid)
        if stored is None:
            return _error(404, "unknown-session", f"no session {sid}")
        return stored.session.snapshot()

    @app.get("/v1/sessions/{sid}/artifacts")
    def get_artifacts(sid: str):
        stored = store.get(sid)
        if stored is None:
            return _error(404, "unknown-session", f"no session {sid}")
        program = stored.session.program
        config = InterviewConfig.from_dict(stored.config)
        return build_artifacts(program, stored.goal, config, stored.source_name, store.morph)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/app", StaticFiles(directory=ui_dir, html=True), name="app")

    return app
