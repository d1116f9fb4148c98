"""Generators for the named identity families the verifier ships with.

All of them are valid in every inner-product space (the regression suite
sweeps them through the decision procedure), which also makes them the
stock inputs for demonstrating failure under norms that do not come from
an inner product.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import (
    IdentityError,
    PlainIdentity,
    RationalLike,
    binomial,
    card,
    full_mask,
    mask_of,
    subsets_of,
)
from .signed import (
    SignedIdentity,
    SignedTerm,
    WeightedFamily,
    expand_sign_family,
    product_family,
)


def frechet() -> PlainIdentity:
    """The classical three-vector alternating identity

        ||x+y+z||^2 - ||x+y||^2 - ||x+z||^2 - ||y+z||^2
            + ||x||^2 + ||y||^2 + ||z||^2 = 0,

    which characterizes inner-product norms (Frechet)."""
    terms = [(mask_of([1, 2, 3]), Fraction(1))]
    terms += [(m, Fraction(-1)) for m in subsets_of(full_mask(3), 2)]
    terms += [(m, Fraction(1)) for m in subsets_of(full_mask(3), 1)]
    return PlainIdentity(3, terms)


def parallelogram() -> SignedIdentity:
    """||x+y||^2 + ||x-y||^2 - 2||x||^2 - 2||y||^2 = 0 (Jordan-von Neumann)."""
    one = mask_of([1])
    two = mask_of([2])
    return SignedIdentity(
        2,
        [
            SignedTerm(one | two, 0, Fraction(1)),
            SignedTerm(one, two, Fraction(1)),
            SignedTerm(one, 0, Fraction(-2)),
            SignedTerm(two, 0, Fraction(-2)),
        ],
    )


def k_subset_identity(n: int, k: int) -> PlainIdentity:
    """Relates the full sum to the sums over all k-element subsets:

        C(n-2,k-2) * ||x_1+...+x_n||^2
            = sum(||x_A||^2, |A| = k) - C(n-2,k-1) * sum(||x_i||^2)

    as a zero-sum identity.  Needs 2 <= k <= n; k = n is allowed and
    degenerates to the empty identity (every coefficient cancels).
    """
    if not 2 <= k <= n:
        raise IdentityError(f"need 2 <= k <= n, got k={k}, n={n}")
    whole = full_mask(n)
    terms = [(whole, Fraction(binomial(n - 2, k - 2)))]
    terms += [(m, Fraction(-1)) for m in subsets_of(whole, k)]
    single = Fraction(binomial(n - 2, k - 1))
    terms += [(m, single) for m in subsets_of(whole, 1)]
    return PlainIdentity(n, terms)


def alternating_identity(n: int) -> PlainIdentity:
    """sum((-1)^|I| * ||x_I||^2 over nonempty I in {1..n}) = 0.

    Holds for n >= 3 only; at n = 2 the same alternation is the visibly
    false ||x_1+x_2||^2 - ||x_1||^2 - ||x_2||^2."""
    if n < 3:
        raise IdentityError(f"alternating identity needs n >= 3, got {n}")
    terms = []
    for mask in subsets_of(full_mask(n)):
        if mask:
            terms.append((mask, Fraction(-1) if card(mask) % 2 else Fraction(1)))
    return PlainIdentity(n, terms)


def parallelepiped_weights(n: int) -> WeightedFamily:
    """Weights (-1)^k * 2^(n-k) on every nonempty subset of size k."""
    if n < 2:
        raise IdentityError(f"parallelepiped identity needs n >= 2, got {n}")
    weights = []
    for mask in subsets_of(full_mask(n)):
        if mask:
            k = card(mask)
            weights.append((mask, Fraction((-1) ** k * 2 ** (n - k))))
    return WeightedFamily(n, weights)


def parallelepiped_identity(n: int) -> SignedIdentity:
    """The n-vector parallelepiped law: for every nonempty subset of size
    k, all 2^k sign splits with coefficient (-1)^k * 2^(n-k), summing to
    zero.  At n = 2 merging mirror-image splits leaves exactly twice the
    parallelogram law."""
    return expand_sign_family(parallelepiped_weights(n))


def product_family_identity(scalars: Sequence[RationalLike]) -> SignedIdentity:
    """Sign-split expansion of the product-form family: nonempty subsets I
    weighted by the product of the chosen scalars over I.  Valid exactly
    when every per-index condition 2*a_i * prod(1 + 2*a_j, j != i) = 0
    holds, e.g. whenever two scalars equal -1/2."""
    if len(scalars) < 2:
        raise IdentityError("product family needs at least two scalars")
    return expand_sign_family(product_family(scalars))
