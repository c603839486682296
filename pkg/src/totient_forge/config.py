"""Runtime configuration: cache location, bounds, worker counts.

Precedence: explicit flags beat the environment, which beats defaults. Only
the cache directory is environment-configurable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

CACHE_ENV = "TOTIENT_FORGE_CACHE"

DEFAULT_FACTORING_BOUND = 10**18
DEFAULT_PRESIEVE_BOUND = 10**5
DEFAULT_SEGMENT_SIZE = 1 << 22
VERIFICATION_LEVELS = ("quick", "full", "extreme")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "totient_forge"


@dataclass
class Config:
    cache_dir: Path = field(default_factory=default_cache_dir)
    factoring_bound: int = DEFAULT_FACTORING_BOUND
    presieve_bound: int = DEFAULT_PRESIEVE_BOUND
    segment_size: int = DEFAULT_SEGMENT_SIZE
    thread_count: int = 1
    verification_level: str = "quick"

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        if self.verification_level not in VERIFICATION_LEVELS:
            raise ValueError(f"verification_level must be one of {VERIFICATION_LEVELS}")
        if self.thread_count < 1:
            raise ValueError("thread_count must be >= 1")
