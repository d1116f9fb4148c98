"""Shared generators for randomized tests (all take an explicit rng)."""

from __future__ import annotations

import random
from fractions import Fraction

from normid import (
    PlainIdentity,
    SignedIdentity,
    SignedTerm,
    VectorAssignment,
    WeightedFamily,
    full_mask,
    indices_of,
    mask_of,
)


def rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def nonzero_rational(rng: random.Random, bound: int = 9) -> Fraction:
    while True:
        value = rational(rng, bound)
        if value != 0:
            return value


def random_mask(rng: random.Random, n: int) -> int:
    return rng.randint(1, full_mask(n))


def random_plain(
    rng: random.Random, max_n: int = 8, max_terms: int = 20
) -> PlainIdentity:
    n = rng.randint(1, max_n)
    terms = [
        (random_mask(rng, n), nonzero_rational(rng))
        for _ in range(rng.randint(1, max_terms))
    ]
    return PlainIdentity(n, terms)


def random_signed(
    rng: random.Random, max_n: int = 6, max_terms: int = 8
) -> SignedIdentity:
    n = rng.randint(1, max_n)
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        support = random_mask(rng, n)
        plus = support & rng.randint(0, full_mask(n))
        terms.append(SignedTerm(plus, support & ~plus, nonzero_rational(rng)))
    return SignedIdentity(n, terms)


def random_family(
    rng: random.Random, max_n: int = 6, max_members: int = 8
) -> WeightedFamily:
    n = rng.randint(2, max_n)
    members = [
        (random_mask(rng, n), nonzero_rational(rng))
        for _ in range(rng.randint(1, max_members))
    ]
    return WeightedFamily(n, members)


def random_scalars(rng: random.Random, n: int) -> list[Fraction]:
    """Scalar vectors biased toward the interesting -1/2 coincidences."""
    pool = [Fraction(-1, 2), Fraction(-1, 2), Fraction(0), Fraction(1)]
    return [
        rng.choice(pool) if rng.random() < 0.7 else rational(rng, 4)
        for _ in range(n)
    ]


def rational_assignment(
    rng: random.Random, n: int, dim: int, bound: int = 4
) -> VectorAssignment:
    vectors = tuple(
        tuple(rational(rng, bound) for _ in range(dim)) for _ in range(n)
    )
    return VectorAssignment(n, dim, vectors)


def float_assignment(
    rng: random.Random, n: int, dim: int, span: float = 2.0
) -> VectorAssignment:
    vectors = tuple(
        tuple(rng.uniform(-span, span) for _ in range(dim)) for _ in range(n)
    )
    return VectorAssignment(n, dim, vectors)


def permute_mask(mask: int, perm: dict[int, int]) -> int:
    return mask_of([perm[i] for i in indices_of(mask)])


def permute_plain(ident: PlainIdentity, perm: dict[int, int]) -> PlainIdentity:
    return PlainIdentity(
        ident.n, [(permute_mask(m, perm), c) for m, c in ident.terms.items()]
    )


def permute_assignment(va: VectorAssignment, perm: dict[int, int]) -> VectorAssignment:
    vectors = [None] * va.n
    for i in range(1, va.n + 1):
        vectors[perm[i] - 1] = va.vectors[i - 1]
    return VectorAssignment(va.n, va.dim, tuple(vectors))
