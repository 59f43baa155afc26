"""Service configuration: one YAML file, overridable by PREPMARK_* env vars.

Keys: store (path), bank (path, used to initialize a fresh store), cohort
(path to a cohort YAML, same purpose), bind ("host:port"), fake_now
(ISO timestamp; test hook that freezes the service clock).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import yaml

from ..session.model import parse_timestamp

ENV_PREFIX = "PREPMARK_"


@dataclass
class ServiceConfig:
    store: Path
    bank: Path | None = None
    cohort: Path | None = None
    bind_host: str = "127.0.0.1"
    bind_port: int = 8071
    fake_now: datetime | None = None

    def now(self) -> datetime:
        return self.fake_now or datetime.now(timezone.utc)

    @classmethod
    def load(cls, config_path: Path | None = None,
             env: dict[str, str] | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)
        doc: dict = {}
        path = config_path or env.get(ENV_PREFIX + "CONFIG")
        if path:
            doc = yaml.safe_load(Path(path).read_text()) or {}

        def pick(key: str, default=None):
            return env.get(ENV_PREFIX + key.upper(), doc.get(key, default))

        store = pick("store")
        if store is None:
            raise ValueError("a store path is required (config key 'store' or PREPMARK_STORE)")
        bind = str(pick("bind", "127.0.0.1:8071"))
        host, _, port = bind.rpartition(":")
        fake_now_raw = pick("fake_now")
        bank = pick("bank")
        cohort = pick("cohort")
        return cls(
            store=Path(store),
            bank=Path(bank) if bank else None,
            cohort=Path(cohort) if cohort else None,
            bind_host=host or "127.0.0.1",
            bind_port=int(port),
            fake_now=parse_timestamp(str(fake_now_raw)) if fake_now_raw else None,
        )
