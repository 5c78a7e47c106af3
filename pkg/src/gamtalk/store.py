"""Plain-file state: models, sessions, cassettes, reports, response cache.

Everything is JSON documents under one root directory, written atomically
(temp file + rename) so a crash between requests never corrupts state.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .gam.model import GamModel, model_from_dict, model_to_dict, model_to_json
from .prompts import DatasetContext, Message, validate_conversation


class StoreError(ValueError):
    """Unknown id or conflicting write in the store."""


class NotFoundError(StoreError):
    pass


class DuplicateError(StoreError):
    pass


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class StorePaths:
    root: Path

    def __post_init__(self):
        object.__setattr__(self, "root", Path(self.root))

    @property
    def models(self) -> Path:
        return self.root / "models"

    @property
    def sessions(self) -> Path:
        return self.root / "sessions"

    @property
    def cassettes(self) -> Path:
        return self.root / "cassettes"

    @property
    def reports(self) -> Path:
        return self.root / "reports"

    @property
    def cache(self) -> Path:
        return self.root / "cache"

    def cassette_path(self, name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else self.cassettes / f"{name}.jsonl"


@dataclass
class Session:
    """One conversation about one model (optionally one graph), persisted whole."""

    session_id: str
    model_id: str
    feature: str | None
    context: DatasetContext
    transcript: list[Message]
    graph_presented: bool = False
    created: str = field(default_factory=_now)
    updated: str = field(default_factory=_now)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "model_id": self.model_id,
            "feature": self.feature,
            "context": {"description": self.context.description,
                        "target_semantics": self.context.target_semantics},
            "transcript": [{"role": m.role, "content": m.content}
                           for m in self.transcript],
            "graph_presented": self.graph_presented,
            "created": self.created,
            "updated": self.updated,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(
            session_id=d["session_id"],
            model_id=d["model_id"],
            feature=d.get("feature"),
            context=DatasetContext(**d["context"]),
            transcript=[Message(**m) for m in d["transcript"]],
            graph_presented=d.get("graph_presented", False),
            created=d["created"],
            updated=d["updated"],
        )


class Store:
    """File-backed model/session/report state with per-session write locks."""

    def __init__(self, paths: StorePaths):
        self.paths = paths
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- models --------------------------------------------------------------

    def _model_path(self, model_id: str) -> Path:
        return self.paths.models / f"{model_id}.json"

    def _meta_path(self, model_id: str) -> Path:
        return self.paths.models / f"{model_id}.meta.json"

    def model_exists(self, model_id: str) -> bool:
        return self._model_path(model_id).exists()

    def save_model(self, model_id: str, model: GamModel, meta: dict | None = None,
                   overwrite: bool = False) -> None:
        if not overwrite and self.model_exists(model_id):
            raise DuplicateError(f"model {model_id!r} already exists")
        atomic_write_text(self._model_path(model_id), model_to_json(model))
        meta = dict(meta or {})
        meta.setdefault("created", _now())
        atomic_write_text(self._meta_path(model_id),
                          json.dumps(meta, indent=2, ensure_ascii=False) + "\n")

    def load_model(self, model_id: str) -> GamModel:
        path = self._model_path(model_id)
        if not path.exists():
            raise NotFoundError(f"no model {model_id!r}")
        return model_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def load_model_meta(self, model_id: str) -> dict:
        path = self._meta_path(model_id)
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def list_models(self) -> list[str]:
        if not self.paths.models.exists():
            return []
        return sorted(p.stem for p in self.paths.models.glob("*.json")
                      if not p.name.endswith(".meta.json"))

    def model_dict(self, model_id: str) -> dict:
        return model_to_dict(self.load_model(model_id))

    # -- sessions ------------------------------------------------------------

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def _session_path(self, session_id: str) -> Path:
        return self.paths.sessions / f"{session_id}.json"

    def new_session_id(self) -> str:
        return uuid.uuid4().hex[:12]

    def save_session(self, session: Session) -> None:
        validate_conversation(session.transcript)
        session.updated = _now()
        atomic_write_text(self._session_path(session.session_id),
                          json.dumps(session.to_dict(), indent=2, ensure_ascii=False)
                          + "\n")

    def load_session(self, session_id: str) -> Session:
        path = self._session_path(session_id)
        if not path.exists():
            raise NotFoundError(f"no session {session_id!r}")
        return Session.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_sessions(self) -> list[str]:
        if not self.paths.sessions.exists():
            return []
        return sorted(p.stem for p in self.paths.sessions.glob("*.json"))

    # -- reports ---------------------------------------------------------------

    def save_report(self, run_id: str, report_json: str) -> None:
        atomic_write_text(self.paths.reports / f"{run_id}.json", report_json)

    def load_report(self, run_id: str) -> dict:
        path = self.paths.reports / f"{run_id}.json"
        if not path.exists():
            raise NotFoundError(f"no report {run_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def report_exists(self, run_id: str) -> bool:
        return (self.paths.reports / f"{run_id}.json").exists()

    def list_reports(self) -> list[str]:
        if not self.paths.reports.exists():
            return []
        return sorted(p.stem for p in self.paths.reports.glob("*.json"))
