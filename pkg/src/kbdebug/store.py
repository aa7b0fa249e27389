"""Session persistence: one JSON file per session in a data directory.

Writes go to a temp file then rename, so readers never see a torn file.
Each session has its own lock; distinct sessions never contend.
"""
from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

DATA_DIR_ENV = "KBDEBUG_DATA_DIR"
DEFAULT_DATA_DIR = ".kbdebug-sessions"


@dataclass
class SessionRecord:
    session_id: str
    snapshot: dict
    created: float
    updated: float

    def to_dict(self) -> dict:
        return {"session_id": self.session_id, "snapshot": self.snapshot,
                "created": self.created, "updated": self.updated}

    @staticmethod
    def from_dict(data: dict) -> "SessionRecord":
        return SessionRecord(session_id=data["session_id"],
                             snapshot=data["snapshot"],
                             created=data["created"],
                             updated=data["updated"])


class SessionStore:
    """Create, load, and update session records on disk."""

    def __init__(self, data_dir: Union[str, Path, None] = None):
        base = data_dir or os.environ.get(DATA_DIR_ENV) or DEFAULT_DATA_DIR
        self.data_dir = Path(base)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _path(self, session_id: str) -> Path:
        if not session_id or not all(c.isalnum() or c == "-"
                                     for c in session_id):
            raise ValueError(f"bad session id: {session_id!r}")
        return self.data_dir / f"{session_id}.json"

    def create(self, snapshot: dict) -> SessionRecord:
        now = time.time()
        record = SessionRecord(session_id=uuid.uuid4().hex,
                               snapshot=snapshot, created=now, updated=now)
        self._write(record)
        return record

    def save(self, session_id: str, snapshot: dict) -> SessionRecord:
        existing = self.load(session_id)
        if existing is None:
            raise KeyError(session_id)
        record = SessionRecord(session_id=session_id, snapshot=snapshot,
                               created=existing.created, updated=time.time())
        self._write(record)
        return record

    def load(self, session_id: str) -> Optional[SessionRecord]:
        path = self._path(session_id)
        if not path.exists():
            return None
        with path.open("r", encoding="utf-8") as fh:
            return SessionRecord.from_dict(json.load(fh))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json"))

    def _write(self, record: SessionRecord) -> None:
        path = self._path(record.session_id)
        tmp = path.with_suffix(".json.tmp")
        with tmp.open("w", encoding="utf-8") as fh:
            json.dump(record.to_dict(), fh, indent=2)
        os.replace(tmp, path)
