"""File-backed store: append-only event log plus a derived snapshot.

Layout under the store root:

    bank.yaml       question bank (copied in at init, self-contained)
    cohort.yaml     pass mark, deadline, sub-test composition
    events.log      one JSON event per line, append-only, fsynced
    snapshot.json   canonical engine state, rebuilt from the log
    analytics/      optional ingest files (marks.csv, quals.csv, tariff.yaml)

Write path: an operation's event is appended and fsynced BEFORE it is
applied and the snapshot rewritten, so killing the process between the
two writes never loses an acknowledged attempt; on the next open the
snapshot is rebuilt from the log.  A torn final line (crash mid-append)
belongs to an unacknowledged operation and is skipped with a warning.
"""

from __future__ import annotations

import json
import os
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Mapping

from ..questionbank import load_bank, validate_bank
from .engine import SessionEngine
from .model import CohortConfig, FeedbackView, iso_now


class StoreError(RuntimeError):
    pass


class EventStore:
    """Owns a SessionEngine and makes its operations durable."""

    def __init__(self, root: Path, engine: SessionEngine):
        self.root = Path(root)
        self.engine = engine
        self._lock = threading.Lock()
        self._student_locks: dict[str, threading.Lock] = {}
        self._defer_snapshots = False

    # -- paths ---------------------------------------------------------------

    @staticmethod
    def paths(root: Path) -> dict[str, Path]:
        root = Path(root)
        return {
            "bank": root / "bank.yaml",
            "cohort": root / "cohort.yaml",
            "events": root / "events.log",
            "snapshot": root / "snapshot.json",
            "analytics": root / "analytics",
        }

    # -- lifecycle -------------------------------------------------------------

    @classmethod
    def init(cls, root: Path, bank_text: str, cohort: CohortConfig) -> "EventStore":
        """Create a fresh store; validates the bank first."""
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        report = validate_bank(bank_text)
        if not report.ok:
            raise StoreError("bank does not validate:\n" + report.format_text())
        paths = cls.paths(root)
        paths["bank"].write_text(bank_text)
        paths["cohort"].write_text(cohort.to_yaml())
        paths["events"].touch()
        paths["analytics"].mkdir(exist_ok=True)
        store = cls(root, SessionEngine(load_bank(bank_text), cohort))
        store._write_snapshot()
        return store

    @classmethod
    def open(cls, root: Path) -> "EventStore":
        """Open an existing store, rebuilding state from the event log."""
        paths = cls.paths(root)
        for name in ("bank", "cohort", "events"):
            if not paths[name].exists():
                raise StoreError(f"store at {root} is missing {paths[name].name}")
        engine = SessionEngine(
            load_bank(paths["bank"].read_text()),
            CohortConfig.from_yaml(paths["cohort"].read_text()),
        )
        for event in read_events(paths["events"]):
            engine.apply(event)
        store = cls(Path(root), engine)
        store._write_snapshot()  # heal a stale or missing snapshot
        return store

    # -- write path --------------------------------------------------------------

    def _student_lock(self, student_id: str) -> threading.Lock:
        with self._lock:
            return self._student_locks.setdefault(student_id, threading.Lock())

    def _commit(self, event: Mapping[str, Any]) -> None:
        line = json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n"
        with self._lock:
            with open(self.paths(self.root)["events"], "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
        self.engine.apply(event)
        if not self._defer_snapshots:
            self._write_snapshot()

    def _write_snapshot(self) -> None:
        snapshot_path = self.paths(self.root)["snapshot"]
        tmp = snapshot_path.with_suffix(".json.tmp")
        tmp.write_text(self.engine.snapshot_json())
        os.replace(tmp, snapshot_path)

    def bulk(self):
        """Context manager deferring snapshot rewrites until the end of a
        batch.  The log is still appended and fsynced per event, so the
        durability story is unchanged; the snapshot is just refreshed once."""
        store = self

        class _Bulk:
            def __enter__(self):
                store._defer_snapshots = True
                return store

            def __exit__(self, exc_type, exc, tb):
                store._defer_snapshots = False
                store._write_snapshot()
                return False

        return _Bulk()

    # -- operations -----------------------------------------------------------------

    def register_student(self, student_id: str, token: str | None = None,
                         now: datetime | None = None) -> str:
        event = self.engine.prepare_register(student_id, token, iso_now(now))
        self._commit(event)
        return event["token"]

    def start_attempt(self, student_id: str, topic: str,
                      now: datetime | None = None) -> dict:
        with self._student_lock(student_id):
            event = self.engine.prepare_start(student_id, topic, iso_now(now))
            self._commit(event)
            return self.engine.attempt_view(student_id, topic)

    def submit(self, student_id: str, topic: str, responses: Mapping[str, Any],
               now: datetime | None = None) -> tuple[dict, FeedbackView]:
        with self._student_lock(student_id):
            event = self.engine.prepare_submit(student_id, topic, responses, iso_now(now))
            self._commit(event)
            record = self.engine.records[(student_id, topic)]
            summary = {
                "attempt_id": f"{student_id}:{topic}:{event['index']}",
                "index": event["index"],
                "score": event["score"],
                "passed": record.passed,
                "late": event["late"],
            }
            return summary, self.engine.feedback_view(student_id, topic, event)


def read_events(path: Path) -> list[dict]:
    events: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            events.append(json.loads(stripped))
        except json.JSONDecodeError:
            if lineno == len(lines):
                # torn final line from a crash mid-append: the operation
                # was never acknowledged, so dropping it loses nothing
                break
            raise StoreError(f"corrupt event log at line {lineno}")
    return events


def replay_verify(root: Path) -> bool:
    """True iff replaying the event log reproduces snapshot.json
    byte-for-byte."""
    paths = EventStore.paths(Path(root))
    engine = SessionEngine(
        load_bank(paths["bank"].read_text()),
        CohortConfig.from_yaml(paths["cohort"].read_text()),
    )
    for event in read_events(paths["events"]):
        engine.apply(event)
    rebuilt = engine.snapshot_json().encode()
    try:
        stored = paths["snapshot"].read_bytes()
    except FileNotFoundError:
        return False
    return rebuilt == stored
