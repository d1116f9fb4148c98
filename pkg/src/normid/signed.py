"""Sign-sum identities: terms of the form ||x_J - x_K||^2 with J, K disjoint.

Every such term collapses to plain squared-norm terms through

    ||x_J - x_K||^2 = 2||x_J||^2 + 2||x_K||^2 - ||x_{J u K}||^2,

so a sign-sum identity can be verified by the plain-identity decision
procedure.  For weighted families that sum ||x_J - x_{I\\J}||^2 over all
splits J of each member set I, validity also has a direct test: the sum
of 2^|I| * weight(I) over the members containing index i must vanish for
every i.  (The 2^|I| factor counts the splits of I; the property-based
suite cross-checks this against the full reduction pipeline.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

from .core import (
    IdentityError,
    PlainIdentity,
    RationalLike,
    as_rational,
    card,
    check_index_count,
    full_mask,
    indices_of,
    subsets_of,
)

#: Hard ceiling on how many split terms a family expansion may emit.
MAX_EXPANSION_TERMS = 10**7


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed the split-term ceiling."""


@dataclass(frozen=True)
class SignedTerm:
    """coeff * ||x_plus - x_minus||^2 over disjoint index sets."""

    plus: int
    minus: int
    coeff: Fraction

    def __post_init__(self):
        if self.plus < 0 or self.minus < 0:
            raise IdentityError("signed-term masks must be nonnegative")
        if self.plus & self.minus:
            raise IdentityError(
                f"plus and minus parts overlap on {indices_of(self.plus & self.minus)}"
            )
        if not (self.plus | self.minus):
            raise IdentityError("signed term needs a nonempty support")
        object.__setattr__(self, "coeff", as_rational(self.coeff))

    @property
    def support(self) -> int:
        return self.plus | self.minus


class SignedIdentity:
    """A weighted list of signed terms asserted to sum to zero.

    The term list keeps construction order; `coefficients()` gives the
    combined (plus, minus) -> coefficient association, which is also what
    equality compares.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Iterable[SignedTerm] = ()):
        check_index_count(n)
        terms = tuple(terms)
        ceiling = full_mask(n)
        for t in terms:
            if t.support & ~ceiling:
                raise IdentityError(
                    f"term support {indices_of(t.support)} not contained in 1..{n}"
                )
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> tuple[SignedTerm, ...]:
        return self._terms

    def coefficients(self) -> dict[tuple[int, int], Fraction]:
        combined: dict[tuple[int, int], Fraction] = {}
        for t in self._terms:
            key = (t.plus, t.minus)
            combined[key] = combined.get(key, Fraction(0)) + t.coeff
        return {k: c for k, c in combined.items() if c != 0}

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignedIdentity):
            return NotImplemented
        return self._n == other._n and self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash((self._n, frozenset(self.coefficients().items())))

    def __repr__(self) -> str:
        return f"SignedIdentity(n={self._n}, {len(self._terms)} terms)"


class WeightedFamily:
    """Nonempty index sets with exact weights, to be expanded over all
    sign splits of each member.  Zero weights are pruned; an empty-set
    entry contributes nothing and is dropped."""

    __slots__ = ("_n", "_family")

    def __init__(
        self,
        n: int,
        family: Union[Mapping[int, RationalLike], Iterable[tuple[int, RationalLike]]],
    ):
        check_index_count(n)
        items = family.items() if isinstance(family, Mapping) else family
        ceiling = full_mask(n)
        combined: dict[int, Fraction] = {}
        for mask, weight in items:
            value = as_rational(weight)
            if mask == 0:
                continue
            if mask < 0 or mask & ~ceiling:
                raise IdentityError(
                    f"family member {indices_of(mask)} not contained in 1..{n}"
                )
            combined[mask] = combined.get(mask, Fraction(0)) + value
        object.__setattr__(self, "_n", n)
        object.__setattr__(
            self, "_family", {m: w for m, w in combined.items() if w != 0}
        )

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def n(self) -> int:
        return self._n

    @property
    def family(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._family)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedFamily):
            return NotImplemented
        return self._n == other._n and self._family == other._family

    def __hash__(self):
        return hash((self._n, frozenset(self._family.items())))

    def __repr__(self) -> str:
        return f"WeightedFamily(n={self._n}, {len(self._family)} members)"


def product_family(scalars: Sequence[RationalLike]) -> WeightedFamily:
    """Family over every nonempty subset I of {1..len(scalars)} with
    weight prod(scalars[i-1] for i in I)."""
    n = check_index_count(len(scalars))
    values = [as_rational(a) for a in scalars]
    weights = []
    for mask in subsets_of(full_mask(n)):
        if mask == 0:
            continue
        w = Fraction(1)
        for i in indices_of(mask):
            w *= values[i - 1]
        weights.append((mask, w))
    return WeightedFamily(n, weights)


def plain_as_signed(ident: PlainIdentity) -> SignedIdentity:
    """Lift a plain identity to the signed form (all minus parts empty)."""
    return SignedIdentity(
        ident.n,
        [SignedTerm(mask, 0, coeff) for mask, coeff in sorted(ident.terms.items())],
    )


def signed_to_plain(sid: SignedIdentity) -> PlainIdentity:
    """Rewrite each coeff * ||x_J - x_K||^2 as
    coeff * (2||x_J||^2 + 2||x_K||^2 - ||x_{J u K}||^2), dropping
    empty-subset norms and combining like terms exactly."""
    pieces: list[tuple[int, Fraction]] = []
    for t in sid.terms:
        if t.plus:
            pieces.append((t.plus, 2 * t.coeff))
        if t.minus:
            pieces.append((t.minus, 2 * t.coeff))
        pieces.append((t.support, -t.coeff))
    return PlainIdentity(sid.n, pieces)


def expand_sign_family(wf: WeightedFamily) -> SignedIdentity:
    """Emit, for every member I with weight a, all 2^|I| split terms
    (J, I\\J, a) — J ranges over every subset of I including the empty
    set and I itself, so each unordered sign pattern appears twice."""
    total = sum(1 << card(mask) for mask in wf.family)
    if total > MAX_EXPANSION_TERMS:
        raise ResourceLimitError(
            f"family expands to {total} split terms (limit {MAX_EXPANSION_TERMS})"
        )
    terms = []
    for mask in sorted(wf.family):
        weight = wf.family[mask]
        for sub in subsets_of(mask):
            terms.append(SignedTerm(sub, mask & ~sub, weight))
    return SignedIdentity(wf.n, terms)


def sign_family_sums(wf: WeightedFamily) -> dict[int, Fraction]:
    """Per-index sums t_i = sum(2^|I| * weight(I) for members I with i in I)."""
    sums = {i: Fraction(0) for i in range(1, wf.n + 1)}
    for mask, weight in wf.family.items():
        contribution = (1 << card(mask)) * weight
        for i in indices_of(mask):
            sums[i] += contribution
    return sums


def sign_family_check(wf: WeightedFamily) -> tuple[bool, dict[int, Fraction]]:
    """Fast validity test for the full sign-split expansion of `wf`:
    valid exactly when every per-index sum vanishes."""
    sums = sign_family_sums(wf)
    return all(v == 0 for v in sums.values()), sums


def product_family_check(scalars: Sequence[RationalLike]) -> bool:
    """Closed-form validity test for the product family over the whole
    power set: for every i, 2*a_i * prod(1 + 2*a_j for j != i) == 0."""
    if len(scalars) < 2:
        raise IdentityError("product-family check needs at least two scalars")
    values = [as_rational(a) for a in scalars]
    for i, a in enumerate(values):
        prod = Fraction(1)
        for j, b in enumerate(values):
            if j != i:
                prod *= 1 + 2 * b
        if 2 * a * prod != 0:
            return False
    return True
