"""Append-only JSON-lines store of stratum results.

Each line is ``{"key": {"m", "lambda", "fingerprint"}, "result": {...}}``.
Entries written under a different configuration fingerprint are ignored.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path

from .config import CountingConfig
from .partitions import MDPartition
from .stratum import StratumResult

log = logging.getLogger(__name__)


class ResultsCache:
    def __init__(self, path: str | Path, cfg: CountingConfig):
        self.path = Path(path)
        self.fingerprint = cfg.fingerprint()
        self._entries: dict[tuple[int, str], dict] = {}
        self.stale = 0
        if self.path.exists():
            self._load()

    def _load(self):
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    key = rec["key"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    log.warning("%s:%d: unreadable cache line skipped", self.path, lineno)
                    continue
                if key.get("fingerprint") != self.fingerprint:
                    self.stale += 1
                    continue
                # later lines win
                self._entries[(key["m"], key["lambda"])] = rec["result"]

    def records(self, m: int | None = None) -> dict[tuple[int, str], dict]:
        return {k: v for k, v in self._entries.items() if m is None or k[0] == m}

    def get(self, lam: MDPartition) -> StratumResult | None:
        rec = self._entries.get((lam.m, lam.encode()))
        if rec is None:
            return None
        try:
            return StratumResult.from_record(rec)
        except (KeyError, TypeError, ValueError):
            log.warning("malformed cache entry for %s ignored", lam.encode())
            return None

    def put(self, result: StratumResult) -> None:
        key = (result.lam.m, result.lam.encode())
        rec = result.to_record()
        self._entries[key] = rec
        line = json.dumps(
            {"key": {"m": key[0], "lambda": key[1], "fingerprint": self.fingerprint}, "result": rec},
            sort_keys=True,
        )
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(line + "\n")
            fh.flush()
