import random

import pytest
import sympy

from totient_forge.primality import (
    DETERMINISTIC_LIMIT,
    Verdict,
    _mr_composite,
    is_prime_small,
    is_probable_prime,
    iter_primes,
    presieve,
    primes_upto,
)


class TestIsPrimeSmall:
    def test_units_composite(self):
        assert is_prime_small(0).verdict is Verdict.COMPOSITE
        assert is_prime_small(1).verdict is Verdict.COMPOSITE

    def test_fermat_prime(self):
        assert is_prime_small(65537).verdict is Verdict.PRIME

    def test_fermat_f5_composite_with_factor(self):
        v = is_prime_small(4294967297)
        assert v.verdict is Verdict.COMPOSITE
        assert v.witness == 641

    def test_rejects_huge(self):
        with pytest.raises(ValueError):
            is_prime_small(DETERMINISTIC_LIMIT)

    def test_exhaustive_small_against_sympy(self):
        for n in range(0, 100_000):
            assert is_prime_small(n).is_prime == sympy.isprime(n), n

    def test_random_word_size_against_sympy(self):
        rng = random.Random(31337)
        for _ in range(2000):
            n = rng.randrange(2, DETERMINISTIC_LIMIT)
            assert is_prime_small(n).is_prime == sympy.isprime(n), n


class TestIsProbablePrime:
    def test_delegates_below_threshold(self):
        assert is_probable_prime(65537).verdict is Verdict.PRIME

    def test_r_table_rows(self):
        r = 10**100 + 9760
        assert is_probable_prime(2 * r + 1).verdict is Verdict.PROBABLE_PRIME
        assert is_probable_prime(3 * r + 1).verdict is Verdict.PROBABLE_PRIME

    def test_power_of_ten_composite(self):
        assert is_probable_prime(10**100).verdict is Verdict.COMPOSITE

    def test_random_large_against_sympy(self):
        rng = random.Random(99)
        for _ in range(400):
            n = rng.randrange(2**64, 2**160)
            assert is_probable_prime(n).is_prime == sympy.isprime(n), n

    def test_large_known_primes(self):
        # primes big enough to exercise the Lucas path
        for p in [2**89 - 1, 2**107 - 1, 2**127 - 1, 10**40 + 121]:
            assert is_probable_prime(p).verdict is Verdict.PROBABLE_PRIME
            assert sympy.isprime(p)

    def test_strong_base2_pseudoprimes_rejected(self):
        for n in [2047, 3277, 4033, 4681, 8321, 15841, 29341]:
            assert not is_probable_prime(n).is_prime

    def test_lucas_matches_published_pseudoprime_list(self):
        from totient_forge.primality import _strong_lucas_composite

        # known strong Lucas pseudoprimes (Selfridge parameters): the Lucas
        # half alone must accept them, and the base-2 half must reject them
        for n in [5459, 5777, 10877, 16109, 18971, 22499, 24569, 25199]:
            assert not sympy.isprime(n)
            assert not _strong_lucas_composite(n)
            d = n - 1
            s = (d & -d).bit_length() - 1
            assert _mr_composite(n, 2, d >> s, s)
        for n in sympy.primerange(5000, 6000):
            assert not _strong_lucas_composite(n)

    def test_square_of_large_prime_composite(self):
        p = 2**107 - 1
        assert is_probable_prime(p * p).verdict is Verdict.COMPOSITE

    def test_composite_witnesses_verify(self):
        rng = random.Random(5)
        for _ in range(500):
            n = rng.randrange(4, 2**70)
            v = is_probable_prime(n)
            if v.verdict is not Verdict.COMPOSITE or v.witness is None:
                continue
            w = v.witness
            if 1 < w < n and n % w == 0:
                continue  # divisor certificate
            d = n - 1
            s = (d & -d).bit_length() - 1
            assert _mr_composite(n, w, d >> s, s)


class TestSieves:
    def test_primes_upto_matches_sympy(self):
        assert primes_upto(10**6).tolist() == list(sympy.primerange(2, 10**6 + 1))

    def test_iter_primes_segments(self):
        got = list(iter_primes(10**6 - 10**4, 10**6 + 10**4, segment_size=2048))
        assert got == list(sympy.primerange(10**6 - 10**4, 10**6 + 10**4 + 1))

    def test_iter_primes_from_two(self):
        assert list(iter_primes(1, 30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


class TestPresieve:
    def test_small_survivors(self):
        mask = presieve(2, 3, 1, 10)
        survivors = [1 + i for i, alive in enumerate(mask) if alive]
        assert 2 in survivors          # 5 and 7 are both prime
        assert 4 not in survivors      # 2*4+1 = 9 is divisible by 3
        assert survivors == [2, 6]

    def test_empty_range(self):
        assert presieve(2, 3, 1, 0) == bytearray()

    def test_never_kills_prime_pairs(self):
        rng = random.Random(11)
        for _ in range(50):
            a = rng.randrange(1, 60)
            b = a + rng.randrange(1, 40)
            start = rng.randrange(1, 500)
            mask = presieve(a, b, start, 256)
            for i, alive in enumerate(mask):
                r = start + i
                if sympy.isprime(a * r + 1) and sympy.isprime(b * r + 1):
                    assert alive, (a, b, r)

    def test_dead_candidates_really_composite(self):
        mask = presieve(4, 9, 5, 512, step=2)
        for i, alive in enumerate(mask):
            r = 5 + 2 * i
            if not alive:
                assert not (sympy.isprime(4 * r + 1) and sympy.isprime(9 * r + 1))

    def test_segment_cap(self):
        with pytest.raises(ValueError):
            presieve(2, 3, 1, 2**20 + 1)
