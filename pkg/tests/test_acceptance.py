"""Acceptance criteria, one test per criterion (C1..C8, P1, P2).

Each test prints a single PASS/FAIL line. Two sub-assertions are known to be
unattainable and fail honestly (see notes inline):

* C2 asserts the literal "product > 4*10^58"; the exact product of the pinned
  21-term sequence is ~2.015*10^58. What exceeds 4*10^58 is twice the product
  (the even-k coverage bound), so the pinned list and the product claim
  cannot both hold.
* C4 asserts "product exponent 83" for the pinned 27-term branch sequence,
  whose exact product has exponent 80.
"""

import math
import os
import random

import pytest
import sympy

from totient_forge.arith import totient, v2
from totient_forge.claims import (
    EXPECTED_HASANALIZADE,
    EXPECTED_NEW_BASE,
    EXPECTED_NEW_BRANCH7_PREFIX,
    EXPECTED_NEW_BRANCH13_23,
    NEW_BRANCH7_BOUND,
)
from totient_forge.config import Config
from totient_forge.constructions import solve, verify_solution
from totient_forge.search import (
    PAIR_WITNESS_TABLE,
    PairSearchTask,
    Parity,
    search_pair_r,
    verify_r_table,
)
from totient_forge.sequences import SequenceVariant, generate_sequence, sequence_product_magnitude
from totient_forge.sieve_enum import (
    enumerate_solutions,
    sieve_totient,
    solution_count_table,
    totients_upto,
)

# mirrors the CLI levels: quick = C1..C6, full adds C7, extreme adds C8;
# the default runs everything because all criteria are cheap here
LEVEL = os.environ.get("TOTIENT_FORGE_LEVEL", "extreme")


def announce(cid: str, ok: bool, detail: str) -> None:
    print(f"{cid} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.fixture(scope="module")
def cfg(cache_dir):
    return Config(cache_dir=cache_dir)


def test_c1_r_table_primality():
    rows = verify_r_table()
    ok = all(row.ok for row in rows)
    announce("C1", ok, "both forms probable prime for every bundled (m, r) row")
    assert ok


def test_c2_hasanalizade_sequence(cfg):
    seq = generate_sequence(SequenceVariant.HASANALIZADE, 2 * 10**5, cfg.cache_dir)
    list_ok = seq.terms == EXPECTED_HASANALIZADE
    product_ok = seq.product > 4 * 10**58
    announce(
        "C2",
        list_ok and product_ok,
        f"21-term match: {list_ok}; product {seq.product:.3e} > 4e58: {product_ok} "
        f"(2 * product = {2 * seq.product:.3e} is the even-k coverage bound)",
    )
    assert list_ok
    # defective stated value: the pinned sequence's exact product is
    # ~2.015e58; only twice the product exceeds 4e58 (see test_sequences)
    assert product_ok, (
        f"product is {seq.product:.6e}; the literal criterion 'product > 4*10^58' "
        f"is unattainable for the pinned 21-term list (2*product = {2 * seq.product:.6e})"
    )


def test_c3_new_base_sequence(cfg):
    seq = generate_sequence(SequenceVariant.NEW_BASE, 10**8, cfg.cache_dir)
    mantissa, exponent = sequence_product_magnitude(seq)
    ok = seq.terms == EXPECTED_NEW_BASE and exponent == 26
    announce("C3", ok, f"13-term match: {seq.terms == EXPECTED_NEW_BASE}; "
                       f"product {mantissa:.2f}e{exponent}")
    assert seq.terms == EXPECTED_NEW_BASE
    assert exponent == 26


def test_c4_branch_sequences(cfg):
    seq23 = generate_sequence(SequenceVariant.NEW_BRANCH13_23, 2 * 10**7, cfg.cache_dir)
    _, exp23 = sequence_product_magnitude(seq23)
    seq7 = generate_sequence(SequenceVariant.NEW_BRANCH7, NEW_BRANCH7_BOUND, cfg.cache_dir)
    _, exp7 = sequence_product_magnitude(seq7)
    list23_ok = seq23.terms == EXPECTED_NEW_BRANCH13_23
    prefix7_ok = seq7.terms[: len(EXPECTED_NEW_BRANCH7_PREFIX)] == EXPECTED_NEW_BRANCH7_PREFIX
    member_ok = 12011 in seq7.terms
    exp7_ok = exp7 >= 310
    exp23_ok = exp23 == 83
    announce(
        "C4",
        list23_ok and prefix7_ok and member_ok and exp7_ok and exp23_ok,
        f"27-term match: {list23_ok}; its exponent {exp23} == 83: {exp23_ok}; "
        f"7-branch prefix: {prefix7_ok}; contains 12011: {member_ok}; "
        f"7-branch exponent {exp7} >= 310: {exp7_ok}",
    )
    assert list23_ok
    assert prefix7_ok and member_ok and exp7_ok
    # defective stated value: the pinned 27-term product is 3.595e80
    # (exponent 80); no extension under the stated bound can reach 83
    assert exp23_ok, (
        f"pinned 27-term product has exponent {exp23}, the stated 83 is unattainable"
    )


def test_c5_k6_enumeration(cfg):
    small = enumerate_solutions(6, 2, 10**6, cfg.segment_size)
    large = enumerate_solutions(6, 2, 10**7, cfg.segment_size)
    ok = small.solutions == (4, 6, 7, 10) and large.solutions == (4, 6, 7, 10)
    announce("C5", ok, f"10^6 -> {list(small.solutions)}, 10^7 -> {list(large.solutions)}")
    assert small.solutions == (4, 6, 7, 10)
    assert large.solutions == (4, 6, 7, 10)


def test_c6_theorem_counts_desk_scale(cfg):
    failures = []
    for k in range(1, 2001):
        m2 = solve(k, 2, cache_dir=cfg.cache_dir)
        needed = 5 if k % 2 else 3
        if len(m2) < needed:
            failures.append(f"k={k} M=2 count {len(m2)}")
        if not all(verify_solution(s) for s in m2):
            failures.append(f"k={k} M=2 verify")
        if k % 2 == 0:
            m1 = solve(k, 1, cache_dir=cfg.cache_dir)
            if len(m1) < 5:
                failures.append(f"k={k} M=1 count {len(m1)}")
            if len({v2(s.n) for s in m1}) != len(m1):
                failures.append(f"k={k} M=1 v2 collision")
            if not all(verify_solution(s) for s in m1):
                failures.append(f"k={k} M=1 verify")
    announce("C6", not failures,
             failures[0] if failures else "counts and exact verification hold for all k <= 2000")
    assert not failures


@pytest.mark.skipif(LEVEL == "quick", reason="full/extreme level only")
def test_c7_full_sweep(cfg):
    table = solution_count_table(10**4, 2, 10**6, cfg.segment_size)
    ok = table.min_count == 4 and table.min_achievers == (6,)
    announce("C7", ok, f"min count {table.min_count} achieved at {list(table.min_achievers)}")
    assert table.min_count == 4
    assert table.min_achievers == (6,)


@pytest.mark.skipif(LEVEL in ("quick", "full"), reason="extreme level only")
def test_c8_witness_rediscovery(cfg):
    notes = []
    ok = True
    for m, expected in sorted(PAIR_WITNESS_TABLE.items()):
        fermat = (1 << (1 << m)) + 1
        result = search_pair_r(
            PairSearchTask(a=fermat - 1, b=fermat, start=10**100,
                           parity=Parity.EVEN_ONLY, limit=10**100 + 10**6),
            presieve_bound=cfg.presieve_bound,
            cache_dir=cfg.cache_dir,
        )
        if result.r == expected:
            notes.append(f"m={m} exact")
        elif result.r < expected and all(vd.is_prime for vd in result.verdicts):
            # minimality of the bundled values is an assumption, not a claim:
            # a smaller valid witness is reported as a finding, not a failure
            notes.append(f"m={m} FINDING: smaller witness 10^100+{result.r - 10**100} "
                         f"(bundled 10^100+{expected - 10**100})")
        else:
            ok = False
            notes.append(f"m={m} MISSED (got {result.r})")
    announce("C8", ok, "; ".join(notes))
    assert ok


def test_p1_oracle_containment(cfg):
    limit = 10**5
    bad = []
    for k in range(1, 201):
        for M in (1, 2):
            oracle = set(enumerate_solutions(k, M, limit, cfg.segment_size).solutions)
            for s in solve(k, M, cache_dir=cfg.cache_dir):
                if s.n <= limit and s.n not in oracle:
                    bad.append((k, M, s.n))
    announce("P1", not bad,
             bad[0] if bad else "every constructed n <= 10^5 appears in the oracle output, k <= 200")
    assert not bad


def _factor_dicts_upto(limit: int) -> list[dict[int, int]]:
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    dicts = [dict() for _ in range(limit + 1)]
    for n in range(2, limit + 1):
        m, d = n, {}
        while m > 1:
            p = spf[m]
            d[p] = d.get(p, 0) + 1
            m //= p
        dicts[n] = d
    return dicts


def _phi_from_merge(da: dict, db: dict) -> int:
    out = 1
    merged = dict(db)
    for p, e in da.items():
        merged[p] = merged.get(p, 0) + e
    for p, e in merged.items():
        out *= p ** (e - 1) * (p - 1)
    return out


def test_p2_identity_suite(cfg):
    limit = 10**4
    phi = totients_upto(limit)
    facts = _factor_dicts_upto(limit)

    # (1) totient(a*b) = a * totient(b) whenever primes(a) are within primes(b)
    checked = 0
    for b in range(1, limit + 1):
        primes = sorted(facts[b])
        smooth = [1]
        for p in primes:
            extended = []
            for a in smooth:
                v = a * p
                while v <= limit:
                    extended.append(v)
                    v *= p
            smooth.extend(extended)
        for a in smooth:
            assert _phi_from_merge(facts[a], facts[b]) == a * phi[b], (a, b)
            checked += 1

    # (2) a * totient(b) = b * totient(a) under equal radicals
    by_radical: dict[int, list[int]] = {}
    for n in range(1, limit + 1):
        by_radical.setdefault(math.prod(facts[n]) if facts[n] else 1, []).append(n)
    pair_count = 0
    for group in by_radical.values():
        for i, a in enumerate(group):
            for b in group[i + 1 :]:
                assert a * phi[b] == b * phi[a], (a, b)
                pair_count += 1

    # (3) F_m - 1 = 2 * totient(F_m - 1)
    for m in range(5):
        value = (1 << (1 << m)) + 1
        assert value - 1 == 2 * totient(value - 1)

    # (4) sieve totients match factorization totients: all n <= 10^5, then
    # 10^4 random points below 10^9 cross-checked against sympy
    big_facts = _factor_dicts_upto(10**5)
    sieved = totients_upto(10**5)
    for n in range(1, 10**5 + 1):
        assert sieved[n] == _phi_from_merge({}, big_facts[n]), n
    rng = random.Random(2024)
    width = 100
    for _ in range(100):
        lo = rng.randrange(1, 10**9 - width)
        seg = sieve_totient(lo, lo + width)
        for offset in range(width):
            assert seg.values[offset] == sympy.totient(lo + offset), lo + offset

    announce("P2", True,
             f"identities held: {checked} star-divides pairs, {pair_count} equal-radical pairs, "
             f"5 Fermat identities, sieve agreement at 10^5 + 10^4 random points")
