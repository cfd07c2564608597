"""Budgets and environment overrides.

Every limit can be overridden with an environment variable carrying the
``CYCLOSRG_`` prefix, e.g. ``CYCLOSRG_BUDGET_ENUM=100000000``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

ENV_PREFIX = "CYCLOSRG_"


def _default_cache_dir() -> str:
    return os.environ.get(ENV_PREFIX + "CACHE_DIR",
                          str(Path.home() / ".cache" / "cyclosrg"))


@dataclass(frozen=True)
class Budgets:
    enum: int = 60_000_000       # max field order enumerated element by element
    brute: int = 3_000           # max vertices for adjacency brute force
    guard_bits: int = 64         # 16 p^(ftilde-2b) must stay below 2**guard_bits
    work: int = 200_000_000      # max lattice points visited by the three-squares search
    workers: int = 1
    cache_dir: str = field(default_factory=_default_cache_dir)

    def __post_init__(self):
        for name in ("enum", "brute", "guard_bits", "work", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget {name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "Budgets":
        """Defaults, then ``CYCLOSRG_*`` variables, then explicit overrides."""
        kw = {}
        for f in fields(cls):
            raw = os.environ.get(ENV_PREFIX + f.name.upper())
            if raw is None and f.name in ("enum", "brute"):
                raw = os.environ.get(ENV_PREFIX + "BUDGET_" + f.name.upper())
            if raw is not None:
                kw[f.name] = raw if f.name == "cache_dir" else int(raw)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    def with_(self, **kw) -> "Budgets":
        return replace(self, **kw)


class BudgetExceeded(RuntimeError):
    """A configured size limit would be exceeded."""
