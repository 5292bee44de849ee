from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field


def first_primes(k: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


DEFAULT_BUDGET = 200_000_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CountingConfig:
    """Knobs for point counting and interpolation.

    ``primes`` is the pool counts are drawn from in ascending order; a stratum
    needing ``D + 1`` interpolation nodes uses the first ``D + 1`` of them and
    the next ``holdout_count`` for validation.
    """

    primes: tuple[int, ...] = field(default_factory=lambda: tuple(first_primes(24)))
    holdout_count: int = 2
    budget: int = DEFAULT_BUDGET
    workers: int = 1
    assume_polynomial: bool = False
    cache_path: str | None = None
    seed: int = 0
    method: str = "split"

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ConfigError("primes must be strictly ascending")
        if any(p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)) for p in ps):
            raise ConfigError("primes list contains a non-prime")
        if self.method not in ("split", "brute"):
            raise ConfigError(f"unknown counting method {self.method!r}")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.holdout_count < 1:
            raise ConfigError("holdout_count must be >= 1")

    def fingerprint(self) -> str:
        """Hash of the fields that can change a stratum result."""
        payload = {"primes": list(self.primes), "holdout_count": self.holdout_count}
        raw = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(raw).hexdigest()[:16]

    def to_json(self) -> dict:
        d = asdict(self)
        d["primes"] = list(self.primes)
        return d

    @classmethod
    def from_env(cls, **overrides) -> "CountingConfig":
        env = {}
        if "HILBSTRATA_CACHE" in os.environ:
            env["cache_path"] = os.environ["HILBSTRATA_CACHE"]
        if "HILBSTRATA_WORKERS" in os.environ:
            env["workers"] = int(os.environ["HILBSTRATA_WORKERS"])
        env.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**env)
