"""HTTP front for debugging sessions.

Thin request/response wrapper over the session module: every mutation
loads the session snapshot, applies the change under the session's lock,
and persists the result before responding. The UI polls; nothing is
pushed.
"""
from __future__ import annotations

from typing import Optional

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .lang import ParseError
from .reasoning import InadmissibleDpiError, dpi_from_dict, sorted_ids
from .session import (AWAITING, SessionConfig, SessionState, next_query,
                      run_batch, session_from_dict, session_to_dict,
                      start_session, submit_answer)
from .store import SessionStore


def _view(session_id: str, state: SessionState) -> dict:
    """The client-facing projection of a session."""
    return {
        "session_id": session_id,
        "status": state.status,
        "query": list(state.pending.texts) if state.pending else None,
        "leading": [sorted_ids(d) for d in state.leading],
        "belief": [[sorted_ids(d), state.belief.get(d, 0.0)]
                   for d in state.leading],
        "history_length": len(state.history),
        "proposal": state.proposal.to_dict() if state.proposal else None,
        "contradiction": state.contradiction,
    }


def _parse_session_payload(payload: dict) -> SessionState:
    try:
        dpi = dpi_from_dict(payload["dpi"])
        config = SessionConfig.from_dict(payload.get("config") or {})
        state = start_session(dpi, config)
    except (KeyError, ValueError, ParseError, InadmissibleDpiError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    next_query(state)
    return state


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    store = store if store is not None else SessionStore()
    app = FastAPI(title="kbdebug", version="0.1.0")
    # the browser UI is served as static files from anywhere
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def load_record(session_id: str):
        try:
            record = store.load(session_id)
        except ValueError:  # hostile id: treat like any other miss
            record = None
        if record is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id}")
        return record

    def load_state(session_id: str) -> SessionState:
        return session_from_dict(load_record(session_id).snapshot)

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)) -> dict:
        state = _parse_session_payload(payload)
        record = store.create(session_to_dict(state))
        return _view(record.session_id, state)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return load_record(session_id).to_dict()

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, payload: dict = Body(...)) -> dict:
        value = payload.get("answer")
        if value not in ("yes", "no", "skip"):
            raise HTTPException(status_code=400,
                                detail="answer must be yes, no, or skip")
        with store.lock(session_id):
            state = load_state(session_id)
            if state.status != AWAITING or state.pending is None:
                raise HTTPException(status_code=409,
                                    detail="session has no pending query")
            submit_answer(state, value)
            if state.status == AWAITING:
                next_query(state)
            store.save(session_id, session_to_dict(state))
        return _view(session_id, state)

    @app.get("/sessions/{session_id}/diagnoses")
    def diagnoses(session_id: str) -> dict:
        state = load_state(session_id)
        return {
            "session_id": session_id,
            "status": state.status,
            "leading": [sorted_ids(d) for d in state.leading],
            "belief": [[sorted_ids(d), state.belief.get(d, 0.0)]
                       for d in state.leading],
            "proposal": state.proposal.to_dict() if state.proposal else None,
        }

    @app.post("/debug/batch")
    def batch(payload: dict = Body(...)) -> dict:
        try:
            dpi = dpi_from_dict(payload["dpi"])
            config = SessionConfig.from_dict(payload.get("config") or {})
            target = payload["target"]
            proposal, count, history = run_batch(dpi, config, target)
        except (KeyError, ValueError, ParseError, InadmissibleDpiError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "query_count": count,
            "diagnosis": sorted_ids(proposal.diagnosis),
            "proposal": proposal.to_dict(),
            "history": [h.to_dict() for h in history],
        }

    return app
