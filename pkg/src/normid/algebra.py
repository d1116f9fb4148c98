"""Reduce squared-norm identities to pair/singleton form and decide
validity exactly, with certificates and explicit counterexample vectors.

The reduction rests on an equality that holds in every inner-product
space for any vectors x_1..x_m, m >= 2:

    ||x_1 + ... + x_m||^2
        = sum(||x_i + x_j||^2 for i < j) - (m - 2) * sum(||x_i||^2)

Substituting it into every term with more than two indices leaves an
equivalent combination of pair and singleton squared norms.  The original
identity holds in every inner-product space of dimension >= 2 exactly
when (1) all reduced pair coefficients vanish and (2) for each index i
the plain coefficient sum s_i = sum(c_A for A containing i) vanishes —
s_i is the identity's exact value when x_i is a unit vector and every
other vector is zero, so no numeric substitution is needed.

Verdicts are statements about dimension >= 2 (the witness construction
needs two orthogonal directions); nothing is claimed about
one-dimensional spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .core import PlainIdentity, card, indices_of, mask_of, subsets_of
from .evaluate import VectorAssignment, eval_exact


class InternalError(RuntimeError):
    """An invariant the caller relied on was broken (a bug, not bad input)."""


@dataclass(frozen=True)
class ReducedForm:
    """Pair and singleton coefficients left after substitution; zero
    coefficients are pruned.  Pair keys are two-bit occupancy words,
    singleton keys are plain indices."""

    n: int
    pair_coeffs: Mapping[int, Fraction]
    singleton_coeffs: Mapping[int, Fraction]

    @property
    def is_zero(self) -> bool:
        return not self.pair_coeffs and not self.singleton_coeffs

    def to_identity(self) -> PlainIdentity:
        terms = list(self.pair_coeffs.items())
        terms += [(mask_of([i]), c) for i, c in self.singleton_coeffs.items()]
        return PlainIdentity(self.n, terms)


@dataclass(frozen=True)
class Certificate:
    """A nonzero coefficient proving invalidity: either a reduced pair
    coefficient or a per-index coefficient sum."""

    kind: str  # "pair" | "singleton"
    indices: tuple[int, ...]
    value: Fraction


@dataclass(frozen=True)
class Witness:
    """Rational plane vectors on which the identity provably fails."""

    vectors: tuple[tuple[Fraction, Fraction], ...]
    residual: Fraction


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reduced: ReducedForm
    singleton_sums: Mapping[int, Fraction]
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None


def expand_to_pairs(ident: PlainIdentity) -> ReducedForm:
    """Push every term with more than two indices down to pair and
    singleton terms, combining like terms exactly."""
    pairs: dict[int, Fraction] = {}
    singles: dict[int, Fraction] = {}

    def add_pair(mask: int, c: Fraction) -> None:
        pairs[mask] = pairs.get(mask, Fraction(0)) + c

    def add_single(i: int, c: Fraction) -> None:
        singles[i] = singles.get(i, Fraction(0)) + c

    for mask, coeff in ident.terms.items():
        size = card(mask)
        if size == 1:
            add_single(mask.bit_length(), coeff)
        elif size == 2:
            add_pair(mask, coeff)
        else:
            for pair in subsets_of(mask, 2):
                add_pair(pair, coeff)
            drop = coeff * (size - 2)
            for i in indices_of(mask):
                add_single(i, -drop)
    return ReducedForm(
        ident.n,
        {m: c for m, c in pairs.items() if c != 0},
        {i: c for i, c in singles.items() if c != 0},
    )


def singleton_sums(ident: PlainIdentity) -> dict[int, Fraction]:
    """s_i = sum(c_A for A containing i), for every i in 1..n: the exact
    value of the identity when x_i is any unit vector and the rest are
    zero (||x_A||^2 is 1 exactly when A contains i)."""
    sums = {i: Fraction(0) for i in range(1, ident.n + 1)}
    for mask, coeff in ident.terms.items():
        for i in indices_of(mask):
            sums[i] += coeff
    return sums


#: x_j trials for a pair witness; the three cos values are distinct, and
#: evaluations at two distinct cos values differ by a nonzero multiple of
#: the pair coefficient, so at most one trial can evaluate to zero.
_PAIR_TRIALS: tuple[tuple[Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(0)),   # cos = 1
    (Fraction(-1), Fraction(0)),  # cos = -1
    (Fraction(0), Fraction(1)),   # cos = 0
)

_ZERO2 = (Fraction(0), Fraction(0))
_UNIT2 = (Fraction(1), Fraction(0))


def make_witness(ident: PlainIdentity, certificate: Certificate) -> Witness:
    """Explicit rational vectors in the plane where the identity evaluates
    to a nonzero rational, matching the given certificate."""
    n = ident.n
    if certificate.kind == "singleton":
        (i,) = certificate.indices
        vectors = tuple(_UNIT2 if j == i else _ZERO2 for j in range(1, n + 1))
        residual = eval_exact(ident, VectorAssignment(n, 2, vectors))
        if residual != certificate.value or residual == 0:
            raise InternalError(
                f"singleton certificate {certificate} does not match the identity"
            )
        return Witness(vectors, residual)
    if certificate.kind == "pair":
        i, j = certificate.indices
        stated = expand_to_pairs(ident).pair_coeffs.get(mask_of([i, j]))
        if stated != certificate.value or certificate.value == 0:
            raise InternalError(
                f"pair certificate {certificate} does not match the identity"
            )
        for trial in _PAIR_TRIALS:
            vectors = tuple(
                _UNIT2 if k == i else trial if k == j else _ZERO2
                for k in range(1, n + 1)
            )
            residual = eval_exact(ident, VectorAssignment(n, 2, vectors))
            if residual != 0:
                return Witness(vectors, residual)
        # Unreachable: evaluations at two distinct cos values differ by a
        # nonzero multiple of the (nonzero) pair coefficient.
        raise InternalError(f"no trial separated pair certificate {certificate}")
    raise InternalError(f"unknown certificate kind {certificate.kind!r}")


def verify(ident: PlainIdentity) -> Verdict:
    """Decide validity in inner-product spaces of dimension >= 2.

    Valid exactly when every reduced pair coefficient and every per-index
    sum is zero.  Invalid verdicts carry the first failing coefficient
    (pairs in ascending occupancy-word order, then indices ascending) and
    witness vectors; the same identity always yields the same certificate.
    """
    reduced = expand_to_pairs(ident)
    sums = singleton_sums(ident)
    certificate = None
    for mask in sorted(reduced.pair_coeffs):
        certificate = Certificate("pair", indices_of(mask), reduced.pair_coeffs[mask])
        break
    if certificate is None:
        for i in range(1, ident.n + 1):
            if sums[i] != 0:
                certificate = Certificate("singleton", (i,), sums[i])
                break
    if certificate is None:
        return Verdict(True, reduced, sums)
    return Verdict(False, reduced, sums, certificate, make_witness(ident, certificate))
