"""Runtime knobs.  Only two environment variables are read; everything else is a flag."""

from __future__ import annotations

import os

DEFAULT_BLOCK_SIZE = 1 << 20
DEFAULT_ORACLE_CAP = 10**6
DEFAULT_SUM_CAP = 10**9
DEFAULT_DIGITS = 30
DEFAULT_CUTOFF = 101


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


def block_size() -> int:
    return _env_int("MODCOUNT_BLOCK_SIZE", DEFAULT_BLOCK_SIZE)


def threads() -> int:
    return _env_int("MODCOUNT_THREADS", 1)
