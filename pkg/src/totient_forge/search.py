"""Minimal-witness search for r such that a*r+1 and b*r+1 are both prime.

Candidates are scanned in increasing order in fixed-width blocks, each block
presieved against small primes before any probable-prime test runs. With
several workers, blocks are still reduced lowest-first, so the returned r is
identical to the sequential scan's.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .config import default_cache_dir
from .primality import (
    PRESIEVE_BOUND,
    SEGMENT_CANDIDATES,
    PrimalityVerdict,
    Verdict,
    is_probable_prime,
    presieve,
)

__all__ = [
    "Parity",
    "PairSearchTask",
    "PairSearchResult",
    "LimitExhausted",
    "search_pair_r",
    "verify_r_table",
    "PAIR_WITNESS_TABLE",
    "RTableRow",
]

log = logging.getLogger(__name__)

DEFAULT_CANDIDATE_BUDGET = 10**7

# Bundled witnesses r (indexed by the Fermat prime exponent m) for which both
# (2^(2^m)) * r + 1 and (2^(2^m) + 1) * r + 1 pass the probable-prime tests.
PAIR_WITNESS_TABLE = {
    0: 10**100 + 9760,
    1: 10**100 + 60128,
    2: 10**100 + 150326,
    3: 10**100 + 51326,
    4: 10**100 + 14786,
}


class Parity(Enum):
    ANY = "any"
    EVEN_ONLY = "even"


class LimitExhausted(RuntimeError):
    """No qualifying r below the give-up bound."""


@dataclass(frozen=True)
class PairSearchTask:
    a: int
    b: int
    start: int = 1
    parity: Parity = Parity.ANY
    avoid_divisors_of: int | None = None
    limit: int | None = None

    def __post_init__(self):
        if self.a < 1 or self.b <= self.a:
            raise ValueError("need 1 <= a < b")
        if self.start < 1:
            raise ValueError("start must be >= 1")


@dataclass(frozen=True)
class PairSearchResult:
    r: int
    p1: int
    p2: int
    verdicts: tuple[PrimalityVerdict, PrimalityVerdict]
    candidates_tested: int


def _scan_block(task: PairSearchTask, block_start: int, count: int, step: int,
                presieve_bound: int):
    """Test one presieved block; return (result_or_None, tested count)."""
    # sieving beyond sqrt(max candidate value) buys nothing
    top = task.b * (block_start + (count - 1) * step) + 1
    bound = max(3, min(presieve_bound, math.isqrt(top) + 1))
    mask = presieve(task.a, task.b, block_start, count, step, bound)
    avoid = task.avoid_divisors_of
    tested = 0
    for i, alive in enumerate(mask):
        if not alive:
            continue
        r = block_start + i * step
        p1 = task.a * r + 1
        p2 = task.b * r + 1
        if avoid is not None and (avoid % p1 == 0 or avoid % p2 == 0):
            continue
        tested += 1
        v1 = is_probable_prime(p1)
        if v1.verdict is Verdict.COMPOSITE:
            continue
        v2 = is_probable_prime(p2)
        if v2.verdict is Verdict.COMPOSITE:
            continue
        return PairSearchResult(r, p1, p2, (v1, v2), tested), tested
    return None, tested


def search_pair_r(
    task: PairSearchTask,
    presieve_bound: int = PRESIEVE_BOUND,
    segment: int = SEGMENT_CANDIDATES,
    threads: int = 1,
    cache_dir: Path | str | None = None,
    use_cache: bool = True,
) -> PairSearchResult:
    """Smallest qualifying r >= task.start (respecting parity and avoid list)."""
    step = 2 if task.parity is Parity.EVEN_ONLY else 1
    first = task.start
    if task.parity is Parity.EVEN_ONLY and first % 2:
        first += 1
    limit = task.limit if task.limit is not None else first + DEFAULT_CANDIDATE_BUDGET * step

    cacheable = use_cache and task.avoid_divisors_of is None
    cache_path = _cache_path(cache_dir, task) if cacheable else None
    if cache_path is not None:
        cached = _load_cached(cache_path, task)
        if cached is not None:
            return cached

    def blocks():
        # blocks grow geometrically so tiny searches stay tiny
        block_start, count = first, 1 << 12
        while block_start < limit:
            count = min(count, (limit - block_start + step - 1) // step)
            yield block_start, count
            block_start += count * step
            count = min(count * 4, segment)

    result = None
    tested_total = 0
    if threads <= 1:
        for start, count in blocks():
            hit, tested = _scan_block(task, start, count, step, presieve_bound)
            tested_total += tested
            if hit is not None:
                result = hit
                break
    else:
        # windows of `threads` blocks; the lowest block with a hit wins, so the
        # reduction is deterministic regardless of completion order
        block_iter = blocks()
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while result is None:
                window = list(itertools.islice(block_iter, threads))
                if not window:
                    break
                futures = [
                    pool.submit(_scan_block, task, start, count, step, presieve_bound)
                    for start, count in window
                ]
                hits = [f.result() for f in futures]
                tested_total += sum(t for _, t in hits)
                for hit, _ in hits:
                    if hit is not None:
                        result = hit
                        break

    if result is None:
        raise LimitExhausted(f"no qualifying r in [{first}, {limit}) for a={task.a}, b={task.b}")
    result = PairSearchResult(
        result.r, result.p1, result.p2, result.verdicts, tested_total
    )
    if cache_path is not None:
        _store_cached(cache_path, task, result)
    return result


# ---------------------------------------------------------------------------
# result cache: one file per (a, b, start, parity) key


def _cache_path(cache_dir: Path | str | None, task: PairSearchTask) -> Path:
    root = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    key = f"{task.a}|{task.b}|{task.start}|{task.parity.value}"
    digest = hashlib.sha256(key.encode()).hexdigest()[:24]
    return root / "pair_search" / f"{digest}.txt"


def _store_cached(path: Path, task: PairSearchTask, result: PairSearchResult) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        str(task.a),
        str(task.b),
        str(task.start),
        task.parity.value,
        str(result.r),
        result.verdicts[0].verdict.value,
        result.verdicts[1].verdict.value,
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_cached(path: Path, task: PairSearchTask) -> PairSearchResult | None:
    if not path.exists():
        return None
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
        a, b, start, parity, r = int(lines[0]), int(lines[1]), int(lines[2]), lines[3], int(lines[4])
        if (a, b, start, parity) != (task.a, task.b, task.start, task.parity.value):
            raise ValueError("key mismatch")
        if r < task.start or (task.parity is Parity.EVEN_ONLY and r % 2):
            raise ValueError("cached r violates the task")
        v1 = is_probable_prime(a * r + 1)
        v2 = is_probable_prime(b * r + 1)
        if v1.verdict.value != lines[5] or v2.verdict.value != lines[6]:
            raise ValueError("cached verdicts no longer reproduce")
        if not (v1.is_prime and v2.is_prime):
            raise ValueError("cached r is not a witness")
        return PairSearchResult(r, a * r + 1, b * r + 1, (v1, v2), 0)
    except (ValueError, IndexError) as exc:
        log.warning("discarding corrupt search cache %s (%s)", path, exc)
        return None


# ---------------------------------------------------------------------------
# bundled witness table verification


@dataclass(frozen=True)
class RTableRow:
    m: int
    r: int
    p1_verdict: PrimalityVerdict
    p2_verdict: PrimalityVerdict

    @property
    def ok(self) -> bool:
        return self.p1_verdict.is_prime and self.p2_verdict.is_prime


def verify_r_table() -> list[RTableRow]:
    """Re-test both linear forms for every bundled witness row."""
    rows = []
    for m, r in sorted(PAIR_WITNESS_TABLE.items()):
        fermat = (1 << (1 << m)) + 1
        rows.append(
            RTableRow(m, r, is_probable_prime((fermat - 1) * r + 1), is_probable_prime(fermat * r + 1))
        )
    return rows
