import random

import pytest
import sympy

from totient_forge.sieve_enum import (
    MAX_SIEVE_VALUE,
    RangeTooLarge,
    enumerate_solutions,
    sieve_totient,
    solution_count_table,
    totients_upto,
)


class TestSieveTotient:
    def test_first_ten(self):
        seg = sieve_totient(1, 11)
        assert seg.values.tolist() == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]

    def test_power_point(self):
        assert sieve_totient(10**6, 10**6 + 1).values.tolist() == [400000]

    def test_single_cell(self):
        assert sieve_totient(1, 2).values.tolist() == [1]

    def test_against_sympy_random_segments(self):
        rng = random.Random(77)
        for _ in range(20):
            lo = rng.randrange(1, 10**9 - 600)
            seg = sieve_totient(lo, lo + 500)
            for offset in (0, 123, 499):
                n = lo + offset
                assert seg.values[offset] == sympy.totient(n), n

    def test_bounds(self):
        with pytest.raises(ValueError):
            sieve_totient(0, 10)
        with pytest.raises(RangeTooLarge):
            sieve_totient(1, 2 + (1 << 22), segment_size=1 << 22)
        with pytest.raises(RangeTooLarge):
            sieve_totient(MAX_SIEVE_VALUE, MAX_SIEVE_VALUE + 10)

    def test_totients_upto(self):
        t = totients_upto(1000, segment_size=128)
        for n in (1, 2, 96, 97, 720, 1000):
            assert t[n] == sympy.totient(n)


class TestEnumerate:
    def test_k6_flagship(self):
        assert enumerate_solutions(6, 2, 10**6).solutions == (4, 6, 7, 10)

    def test_k1_m1(self):
        assert enumerate_solutions(1, 1, 10).solutions == (1, 3)

    def test_prefix_property(self):
        for k, M in [(1, 1), (6, 2), (7, 2), (10, 1)]:
            small = enumerate_solutions(k, M, 300).solutions
            large = enumerate_solutions(k, M, 3000).solutions
            assert large[: len(small)] == small

    def test_csv_shape(self):
        lines = enumerate_solutions(6, 2, 100).to_csv().splitlines()
        assert lines[0] == "k,M,limit"
        assert lines[1] == "6,2,100"
        assert lines[2:] == ["4", "6", "7", "10"]

    def test_matches_naive(self):
        for k, M in [(3, 2), (4, 1), (5, 2)]:
            expected = tuple(
                n for n in range(1, 2001)
                if sympy.totient(n + k) == M * sympy.totient(n)
            )
            assert enumerate_solutions(k, M, 2000).solutions == expected

    def test_validation(self):
        with pytest.raises(ValueError):
            enumerate_solutions(0, 2, 100)
        with pytest.raises(ValueError):
            enumerate_solutions(2, 3, 100)


class TestCountTable:
    def test_small_even_counts(self):
        table = solution_count_table(10, 2, 100)
        for k in range(2, 11, 2):
            assert table.counts[k] >= 1  # n = k always works for even k

    def test_k1_m1(self):
        table = solution_count_table(1, 1, 10)
        assert table.counts == {1: 2}
        assert table.min_count == 2
        assert table.min_achievers == (1,)

    def test_csv(self):
        lines = solution_count_table(3, 2, 50).to_csv().splitlines()
        assert lines[0] == "k,count"
        assert len(lines) == 4
