"""Exact arithmetic and subset machinery shared by the whole package.

Subsets of the index range {1..n} are stored as plain ints used as
occupancy words: bit i-1 is set exactly when index i is a member.  The
index count n is capped at 63 so every subset fits in one machine word
(term counts blow up as 2^n long before that cap matters).

Coefficients are `fractions.Fraction` values throughout; nothing in this
package ever rounds.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

logger = logging.getLogger(__name__)

#: Exact coefficient domain.  Fraction already guarantees the storage
#: invariants we need: reduced form, positive denominator, 0 == 0/1.
Rational = Fraction

RationalLike = Union[Fraction, int, str]

MAX_INDICES = 63


class IdentityError(ValueError):
    """Malformed identity data or out-of-range parameters."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce to an exact Fraction; floats are refused to keep arithmetic exact."""
    if isinstance(value, float):
        raise IdentityError(
            f"coefficients must be exact rationals, not floats: {value!r}"
        )
    return Fraction(value)


def check_index_count(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise IdentityError(f"index count must be a positive integer, got {n!r}")
    if n > MAX_INDICES:
        raise IdentityError(f"index count {n} exceeds the {MAX_INDICES}-index limit")
    return n


def binomial(n: int, k: int) -> int:
    """C(n, k) with the convention that out-of-range k gives 0."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# Occupancy-word subsets


def mask_of(indices: Iterable[int]) -> int:
    """Pack 1-based indices into an occupancy word."""
    mask = 0
    for i in indices:
        if not isinstance(i, int) or isinstance(i, bool) or i < 1 or i > MAX_INDICES:
            raise IdentityError(f"subset index out of range 1..{MAX_INDICES}: {i!r}")
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    """Unpack an occupancy word into sorted 1-based indices."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def card(mask: int) -> int:
    return mask.bit_count()


def _scatter(word: int, positions: list[int]) -> int:
    # Deposit bit j of `word` at bit `positions[j]`.  Monotone in `word`
    # because positions are ascending, so enumeration order is preserved.
    out = 0
    j = 0
    while word:
        if word & 1:
            out |= 1 << positions[j]
        word >>= 1
        j += 1
    return out


def subsets_of(parent: int, size: int | None = None) -> Iterator[int]:
    """Enumerate subsets of `parent`, each exactly once, in ascending
    occupancy-word order.  With `size` given, only subsets of that
    cardinality are produced (Gosper's hack keeps this lazy)."""
    positions = [i for i in range(parent.bit_length()) if parent >> i & 1]
    k = len(positions)
    if size is None:
        for word in range(1 << k):
            yield _scatter(word, positions)
        return
    if size < 0 or size > k:
        return
    if size == 0:
        yield 0
        return
    word = (1 << size) - 1
    limit = 1 << k
    while word < limit:
        yield _scatter(word, positions)
        low = word & -word
        ripple = word + low
        word = (((ripple ^ word) >> 2) // low) | ripple


# ---------------------------------------------------------------------------
# Plain identities


TermsInput = Union[Mapping[int, RationalLike], Iterable[tuple[int, RationalLike]]]


class PlainIdentity:
    """The assertion sum(c_A * ||x_A||^2 for nonempty A in {1..n}) == 0,
    where x_A is the sum of the vectors indexed by A.

    Terms map occupancy words to exact coefficients.  Duplicate subsets in
    the input are combined, zero coefficients are pruned, and an empty-set
    term is dropped (||x_{}||^2 contributes nothing).  Instances are
    immutable values.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: TermsInput = ()):
        check_index_count(n)
        items = terms.items() if isinstance(terms, Mapping) else terms
        combined: dict[int, Fraction] = {}
        ceiling = full_mask(n)
        for mask, coeff in items:
            if not isinstance(mask, int) or isinstance(mask, bool) or mask < 0:
                raise IdentityError(f"subset must be a nonnegative int mask, got {mask!r}")
            value = as_rational(coeff)
            if mask == 0:
                logger.debug("dropping empty-set term with coefficient %s", value)
                continue
            if mask & ~ceiling:
                raise IdentityError(
                    f"subset {indices_of(mask)} not contained in 1..{n}"
                )
            combined[mask] = combined.get(mask, Fraction(0)) + value
        object.__setattr__(self, "_n", n)
        object.__setattr__(
            self, "_terms", {m: c for m, c in combined.items() if c != 0}
        )

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mask: int) -> Fraction:
        return self._terms.get(mask, Fraction(0))

    def scaled(self, factor: RationalLike) -> "PlainIdentity":
        c = as_rational(factor)
        return PlainIdentity(self._n, [(m, c * v) for m, v in self._terms.items()])

    def with_term(self, mask: int, delta: RationalLike) -> "PlainIdentity":
        """New identity with `delta` added to the coefficient of `mask`."""
        return PlainIdentity(self._n, list(self._terms.items()) + [(mask, delta)])

    def __add__(self, other: "PlainIdentity") -> "PlainIdentity":
        if not isinstance(other, PlainIdentity):
            return NotImplemented
        n = max(self._n, other._n)
        return PlainIdentity(
            n, list(self._terms.items()) + list(other._terms.items())
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlainIdentity):
            return NotImplemented
        return self._n == other._n and self._terms == other._terms

    def __hash__(self):
        return hash((self._n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{set(indices_of(m))}: {c}" for m, c in sorted(self._terms.items())
        )
        return f"PlainIdentity(n={self._n}, {{{parts}}})"
