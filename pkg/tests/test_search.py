import random

import pytest
import sympy

from totient_forge.primality import Verdict
from totient_forge.search import (
    PAIR_WITNESS_TABLE,
    LimitExhausted,
    PairSearchTask,
    Parity,
    search_pair_r,
    verify_r_table,
)


def brute_force_r(a, b, start, parity=Parity.ANY, avoid=None, limit=10**6):
    """Independent oracle: test every candidate with sympy, no presieve."""
    r = start
    if parity is Parity.EVEN_ONLY and r % 2:
        r += 1
    step = 2 if parity is Parity.EVEN_ONLY else 1
    while r < start + limit:
        p1, p2 = a * r + 1, b * r + 1
        if (avoid is None or (avoid % p1 and avoid % p2)) and \
                sympy.isprime(p1) and sympy.isprime(p2):
            return r
        r += step
    raise AssertionError("oracle exhausted")


class TestSearchPairR:
    def test_tiny(self):
        res = search_pair_r(PairSearchTask(a=2, b=3), use_cache=False)
        assert (res.r, res.p1, res.p2) == (2, 5, 7)

    def test_avoid_divisors(self):
        res = search_pair_r(PairSearchTask(a=16, b=17, avoid_divisors_of=34), use_cache=False)
        assert (res.r, res.p1, res.p2) == (6, 97, 103)

    def test_against_brute_force(self):
        rng = random.Random(424242)
        for _ in range(200):
            a = rng.randrange(1, 50)
            b = rng.randrange(a + 1, 51)
            start = rng.randrange(1, 101)
            parity = rng.choice([Parity.ANY, Parity.EVEN_ONLY])
            task = PairSearchTask(a=a, b=b, start=start, parity=parity)
            res = search_pair_r(task, use_cache=False)
            assert res.r == brute_force_r(a, b, start, parity)
            assert res.p1 == a * res.r + 1 and res.p2 == b * res.r + 1
            assert all(v.is_prime for v in res.verdicts)
            assert res.r >= start
            if parity is Parity.EVEN_ONLY:
                assert res.r % 2 == 0

    def test_threads_match_sequential(self):
        for a, b, start in [(2, 3, 50), (16, 17, 1), (6, 35, 1), (4, 9, 1000)]:
            task = PairSearchTask(a=a, b=b, start=start)
            seq = search_pair_r(task, use_cache=False, threads=1)
            par = search_pair_r(task, use_cache=False, threads=4)
            assert seq.r == par.r

    def test_limit_exhausted(self):
        with pytest.raises(LimitExhausted):
            search_pair_r(PairSearchTask(a=2, b=3, start=1, limit=2), use_cache=False)

    def test_task_validation(self):
        with pytest.raises(ValueError):
            PairSearchTask(a=3, b=3)
        with pytest.raises(ValueError):
            PairSearchTask(a=2, b=3, start=0)


class TestCache:
    def test_hit_round_trip(self, tmp_path):
        task = PairSearchTask(a=2, b=3, start=17)
        first = search_pair_r(task, cache_dir=tmp_path)
        again = search_pair_r(task, cache_dir=tmp_path)
        assert again.r == first.r
        assert again.candidates_tested == 0  # served from cache

    def test_corrupt_cache_regenerates(self, tmp_path):
        task = PairSearchTask(a=2, b=3, start=17)
        first = search_pair_r(task, cache_dir=tmp_path)
        files = list((tmp_path / "pair_search").iterdir())
        assert len(files) == 1
        files[0].write_text("garbage\n")
        again = search_pair_r(task, cache_dir=tmp_path)
        assert again.r == first.r

    def test_wrong_r_in_cache_rejected(self, tmp_path):
        task = PairSearchTask(a=2, b=3, start=1)
        first = search_pair_r(task, cache_dir=tmp_path)
        files = list((tmp_path / "pair_search").iterdir())
        text = files[0].read_text().splitlines()
        text[4] = "3"  # r=3 gives p2 = 10, not prime
        files[0].write_text("\n".join(text) + "\n")
        again = search_pair_r(task, cache_dir=tmp_path)
        assert again.r == first.r == 2


class TestRTable:
    def test_all_rows_pass(self):
        rows = verify_r_table()
        assert [row.m for row in rows] == [0, 1, 2, 3, 4]
        for row in rows:
            assert row.ok
            assert row.p1_verdict.verdict is Verdict.PROBABLE_PRIME
            assert row.p2_verdict.verdict is Verdict.PROBABLE_PRIME

    def test_offsets(self):
        assert {m: r - 10**100 for m, r in PAIR_WITNESS_TABLE.items()} == {
            0: 9760, 1: 60128, 2: 150326, 3: 51326, 4: 14786,
        }
