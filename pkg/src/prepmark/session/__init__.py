"""Test sessions: retakes with carried-forward parts, pass tracking,
deadline handling, feedback policy and tutor follow-up reporting."""

from .engine import SessionEngine, canonical_json, derive_seed
from .model import (
    Attempt,
    CohortConfig,
    FeedbackItem,
    FeedbackView,
    NoOpenAttempt,
    NotYetDue,
    PartState,
    SessionError,
    SubTest,
    SubTestRecord,
    TopicStatus,
    UnknownStudent,
    UnknownTopic,
    format_timestamp,
    parse_timestamp,
)
from .store import EventStore, StoreError, read_events, replay_verify

__all__ = [
    "Attempt",
    "CohortConfig",
    "EventStore",
    "FeedbackItem",
    "FeedbackView",
    "NoOpenAttempt",
    "NotYetDue",
    "PartState",
    "SessionEngine",
    "SessionError",
    "StoreError",
    "SubTest",
    "SubTestRecord",
    "TopicStatus",
    "UnknownStudent",
    "UnknownTopic",
    "canonical_json",
    "derive_seed",
    "format_timestamp",
    "parse_timestamp",
    "read_events",
    "replay_verify",
]
