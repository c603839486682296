"""Greedy generation of the prime sequences used by the even-k constructions.

Two rule families exist. The Hasanalizade rules admit a prime p when

    (p - 2) | product(earlier terms)   and   rad(p - 1) | rad(2 * product),

the doubling rules ("new" variants) admit p = 2a + 1 when

    rad(a) | rad(product)   and   (a + 1) | product.

Each variant starts from a forced prefix, exempt from the rules (branch
variants deliberately reorder small primes), and then greedily appends the
smallest qualifying prime, strictly increasing among generated terms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .arith import star_divides
from .config import default_cache_dir
from .primality import is_probable_prime, iter_primes

__all__ = [
    "SequenceVariant",
    "PrimeSequence",
    "generate_sequence",
    "sequence_product_magnitude",
    "validate_sequence",
]

log = logging.getLogger(__name__)

_PREFIXES = {
    "hasanalizade": (3,),
    "newbase": (2,),
    "newbranch7": (2, 3, 5, 11, 7),
    "newbranch13_23": (2, 3, 5, 11, 13, 23),
}


class SequenceVariant(Enum):
    HASANALIZADE = "hasanalizade"
    NEW_BASE = "newbase"
    NEW_BRANCH7 = "newbranch7"
    NEW_BRANCH13_23 = "newbranch13_23"

    @property
    def prefix(self) -> tuple[int, ...]:
        return _PREFIXES[self.value]

    @property
    def uses_aux(self) -> bool:
        return self is not SequenceVariant.HASANALIZADE


@dataclass(frozen=True)
class PrimeSequence:
    """A generated sequence: full term list, forced prefix, aux values a_i.

    aux is parallel to terms for the doubling variants: aux[i] = (p-1)/2 for
    odd terms and 0 as a placeholder for the initial 2. Empty otherwise.
    """

    variant: SequenceVariant
    prefix: tuple[int, ...]
    terms: tuple[int, ...]
    aux: tuple[int, ...]
    product: int
    search_bound: int


def _hasanalizade_ok(p: int, product: int) -> bool:
    return p > 2 and product % (p - 2) == 0 and star_divides(p - 1, 2 * product)


def _doubling_ok(p: int, product: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    a = (p - 1) // 2
    return product % (a + 1) == 0 and star_divides(a, product)


def _rule(variant: SequenceVariant):
    return _hasanalizade_ok if variant is SequenceVariant.HASANALIZADE else _doubling_ok


_memo: dict[tuple[SequenceVariant, int, str], PrimeSequence] = {}


def generate_sequence(
    variant: SequenceVariant,
    bound: int,
    cache_dir: Path | str | None = None,
) -> PrimeSequence:
    """Generate (or load from cache) the variant's sequence up to `bound`."""
    if bound < max(variant.prefix):
        raise ValueError("bound must cover the forced prefix")
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    key = (variant, bound, str(cache_dir))
    if key in _memo:
        return _memo[key]
    path = cache_dir / "sequences" / f"{variant.value}_{bound}.txt"
    seq = _load_cached(path, variant, bound)
    if seq is None:
        seq = _generate(variant, bound)
        _store(path, seq)
    _memo[key] = seq
    return seq


def _generate(variant: SequenceVariant, bound: int) -> PrimeSequence:
    rule = _rule(variant)
    terms = list(variant.prefix)
    seen = set(terms)
    product = math.prod(terms)
    last_generated = 1
    while True:
        found = None
        for p in iter_primes(last_generated + 1, bound):
            if p in seen:
                continue
            if rule(p, product):
                found = p
                break
        if found is None:
            break
        terms.append(found)
        seen.add(found)
        product *= found
        last_generated = found
    aux = _aux_for(variant, terms)
    return PrimeSequence(variant, variant.prefix, tuple(terms), aux, product, bound)


def _aux_for(variant: SequenceVariant, terms) -> tuple[int, ...]:
    if not variant.uses_aux:
        return ()
    return tuple((p - 1) // 2 if p % 2 else 0 for p in terms)


def sequence_product_magnitude(seq: PrimeSequence) -> tuple[float, int]:
    """The exact product as (mantissa, decimal exponent), mantissa in [1, 10)."""
    if not seq.terms:
        raise ValueError("empty sequence")
    digits = str(seq.product)
    exponent = len(digits) - 1
    mantissa = float(digits[0] + "." + (digits[1:16] or "0"))
    return mantissa, exponent


def validate_sequence(seq: PrimeSequence) -> None:
    """Re-check every invariant of a generated sequence; raise on violation."""
    if tuple(seq.terms[: len(seq.prefix)]) != tuple(seq.prefix):
        raise ValueError("sequence does not start with its forced prefix")
    if seq.prefix != seq.variant.prefix:
        raise ValueError("prefix does not match the variant")
    if len(set(seq.terms)) != len(seq.terms):
        raise ValueError("repeated term")
    rule = _rule(seq.variant)
    product = 1
    generated_prev = 1
    for i, p in enumerate(seq.terms):
        if not is_probable_prime(p).is_prime:
            raise ValueError(f"term {p} is not prime")
        if p > seq.search_bound:
            raise ValueError(f"term {p} beyond the search bound")
        if i >= len(seq.prefix):
            if p <= generated_prev:
                raise ValueError("generated terms must increase")
            if not rule(p, product):
                raise ValueError(f"term {p} violates the generation rules")
            generated_prev = p
        product *= p
    if product != seq.product:
        raise ValueError("stored product mismatch")
    if seq.aux != _aux_for(seq.variant, seq.terms):
        raise ValueError("aux values mismatch")


# ---------------------------------------------------------------------------
# disk cache: "# variant bound", one term per line (tab + aux for doubling
# variants), and a "# count=N" trailer so truncation is detectable.


def _store(path: Path, seq: PrimeSequence) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {seq.variant.value} {seq.search_bound}"]
    for i, p in enumerate(seq.terms):
        if seq.variant.uses_aux:
            lines.append(f"{p}\t{seq.aux[i]}")
        else:
            lines.append(str(p))
    lines.append(f"# count={len(seq.terms)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_cached(path: Path, variant: SequenceVariant, bound: int) -> PrimeSequence | None:
    if not path.exists():
        return None
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
        header = lines[0].split()
        if header[:1] != ["#"] or header[1] != variant.value or int(header[2]) != bound:
            raise ValueError("header mismatch")
        trailer = lines[-1]
        if not trailer.startswith("# count="):
            raise ValueError("missing trailer")
        count = int(trailer.split("=", 1)[1])
        term_lines = lines[1:-1]
        if len(term_lines) != count:
            raise ValueError("term count mismatch")
        terms = tuple(int(line.split("\t")[0]) for line in term_lines)
        seq = PrimeSequence(
            variant, variant.prefix, terms, _aux_for(variant, terms), math.prod(terms), bound
        )
        validate_sequence(seq)
        return seq
    except (ValueError, IndexError) as exc:
        log.warning("discarding corrupt sequence cache %s (%s)", path, exc)
        return None
