"""Run configuration: enumeration budget, cache directory, thread count.

Library functions read the active configuration through ``get_config()``;
the CLI installs one per invocation with ``use_config``.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, replace
from pathlib import Path

from cwilf.errors import InvalidInputError

DEFAULT_BUDGET_N = 9
# definitional overlap scans enumerate S_{2j-2}; 10! permutations at most
DEFAULT_SCAN_LIMIT = 3_628_800
CODE_VERSION = "cwilf-1"


@dataclass(frozen=True)
class RunConfig:
    budget_n: int = DEFAULT_BUDGET_N
    scan_limit: int = DEFAULT_SCAN_LIMIT
    cache_dir: Path | None = None
    threads: int = 1
    fmt: str = "json"

    def __post_init__(self):
        if self.budget_n < 1:
            raise InvalidInputError("budget_n must be >= 1")
        if self.threads < 1:
            raise InvalidInputError("threads must be >= 1")
        if self.fmt not in ("json", "csv", "pretty"):
            raise InvalidInputError(f"unknown output format {self.fmt!r}")

    @classmethod
    def from_env(cls, **overrides) -> RunConfig:
        kw = {}
        if os.environ.get("CWILF_BUDGET"):
            try:
                kw["budget_n"] = int(os.environ["CWILF_BUDGET"])
            except ValueError:
                raise InvalidInputError("CWILF_BUDGET must be an integer") from None
        if os.environ.get("CWILF_CACHE"):
            kw["cache_dir"] = Path(os.environ["CWILF_CACHE"])
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)

    def with_(self, **kw) -> RunConfig:
        return replace(self, **kw)


_active = RunConfig.from_env()


def get_config() -> RunConfig:
    return _active


def set_config(cfg: RunConfig) -> None:
    global _active
    _active = cfg


@contextlib.contextmanager
def use_config(cfg: RunConfig):
    global _active
    old, _active = _active, cfg
    try:
        yield cfg
    finally:
        _active = old
