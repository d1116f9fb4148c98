import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from normid import (
    IdentityError,
    MAX_INDICES,
    PlainIdentity,
    binomial,
    full_mask,
    indices_of,
    mask_of,
    subsets_of,
)

BIG = 2**256

rationals_256 = st.builds(
    Fraction,
    st.integers(min_value=-BIG, max_value=BIG),
    st.integers(min_value=1, max_value=BIG),
)


@given(rationals_256, rationals_256)
def test_rational_addition_is_exact(a, b):
    assert (a + b) - b == a


@given(rationals_256, rationals_256)
def test_rational_multiplication_division_roundtrip(a, b):
    if b != 0:
        assert (a * b) / b == a


def test_rational_is_stored_reduced():
    assert Fraction(2, 4) == Fraction(1, 2)
    assert Fraction(2, 4).denominator == 2
    assert Fraction(3, -6) == Fraction(-1, 2)
    assert Fraction(3, -6).denominator > 0
    assert Fraction(0, 17) == Fraction(0, 1)


def test_rational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Fraction(3, 1) / Fraction(0, 1)


def test_binomial_values():
    assert binomial(4, 2) == 6
    assert binomial(5, -1) == 0
    assert binomial(3, 7) == 0
    assert binomial(0, 0) == 1


def test_binomial_pascal_recurrence():
    for n in range(3, 21):
        for k in range(2, n):
            assert binomial(n - 2, k - 2) + binomial(n - 2, k - 1) == binomial(
                n - 1, k - 1
            )


def test_binomial_is_arbitrary_precision():
    assert binomial(60, 30) == 118264581564861424


# ---------------------------------------------------------------------------
# Occupancy-word subsets


def test_mask_roundtrip():
    assert indices_of(mask_of([3, 1, 5])) == (1, 3, 5)
    assert mask_of([]) == 0
    assert indices_of(0) == ()


def test_mask_rejects_bad_indices():
    with pytest.raises(IdentityError):
        mask_of([0])
    with pytest.raises(IdentityError):
        mask_of([MAX_INDICES + 1])
    with pytest.raises(IdentityError):
        mask_of([-2])


def test_subsets_fixed_cardinality():
    assert list(subsets_of(mask_of([1, 2, 3]), 2)) == [
        mask_of([1, 2]),
        mask_of([1, 3]),
        mask_of([2, 3]),
    ]


def test_subsets_all():
    assert list(subsets_of(mask_of([1, 2]))) == [0, 1, 2, 3]


def test_subsets_of_sparse_parent_stay_inside():
    parent = mask_of([2, 5, 7])
    seen = list(subsets_of(parent))
    assert len(seen) == 8
    assert all(s & ~parent == 0 for s in seen)
    assert seen == sorted(seen)


def test_subsets_out_of_range_cardinality():
    assert list(subsets_of(mask_of([1, 2]), 5)) == []
    assert list(subsets_of(mask_of([1, 2]), 0)) == [0]


def test_subset_enumeration_is_ascending_and_distinct():
    for n in range(1, 9):
        seen = list(subsets_of(full_mask(n)))
        assert seen == sorted(seen)
        assert len(set(seen)) == (1 << n)


def test_subset_counts_match_binomial():
    # Independent cross-check of the enumerator against the formula.
    for n in range(0, 13):
        parent = full_mask(n)
        for k in range(0, n + 1):
            assert sum(1 for _ in subsets_of(parent, k)) == binomial(n, k)


# ---------------------------------------------------------------------------
# PlainIdentity construction


def test_identity_combines_and_prunes():
    m = mask_of([1, 2])
    ident = PlainIdentity(2, [(m, Fraction(1, 2)), (m, Fraction(1, 2))])
    assert ident.terms == {m: Fraction(1)}
    cancelled = PlainIdentity(2, [(m, Fraction(3)), (m, Fraction(-3))])
    assert cancelled.is_zero


def test_identity_drops_empty_set_term():
    ident = PlainIdentity(2, [(0, Fraction(5)), (1, Fraction(1))])
    assert ident.terms == {1: Fraction(1)}


def test_identity_rejects_out_of_range_subsets():
    with pytest.raises(IdentityError):
        PlainIdentity(2, {mask_of([3]): 1})


def test_identity_rejects_bad_n():
    with pytest.raises(IdentityError):
        PlainIdentity(0)
    with pytest.raises(IdentityError):
        PlainIdentity(64)
    with pytest.raises(IdentityError):
        PlainIdentity(-3)


def test_identity_rejects_float_coefficients():
    with pytest.raises(IdentityError):
        PlainIdentity(1, {1: 0.5})


def test_identity_accepts_int_and_str_coefficients():
    ident = PlainIdentity(1, {1: "2/3"})
    assert ident.coefficient(1) == Fraction(2, 3)


def test_identity_algebra():
    a = PlainIdentity(2, {1: Fraction(1), 3: Fraction(2)})
    b = PlainIdentity(2, {1: Fraction(-1), 2: Fraction(5)})
    total = a + b
    assert total.terms == {2: Fraction(5), 3: Fraction(2)}
    assert a.scaled(Fraction(1, 2)).terms == {1: Fraction(1, 2), 3: Fraction(1)}
    assert a.with_term(1, -1).terms == {3: Fraction(2)}


def test_identity_is_immutable():
    ident = PlainIdentity(2, {1: 1})
    with pytest.raises(AttributeError):
        ident.n = 5
    with pytest.raises(TypeError):
        ident.terms[2] = Fraction(1)


def test_max_index_count_is_allowed():
    ident = PlainIdentity(63, {1 << 62: 1})
    assert ident.coefficient(1 << 62) == 1


def test_random_large_rationals_survive_identity_arithmetic():
    rng = random.Random(7)
    for _ in range(50):
        a = Fraction(rng.getrandbits(256) - 2**255, rng.getrandbits(256) + 1)
        b = Fraction(rng.getrandbits(256) - 2**255, rng.getrandbits(256) + 1)
        assert (a + b) - b == a
