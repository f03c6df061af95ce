from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cantube import (
    a_dim,
    canonical_type,
    classify,
    delta_interval,
    delta_invariant,
    e_interval,
    e_vector,
    euler_form,
    h_vector,
    in_R,
    is_tame,
    threshold_N,
    unflatten,
    unit_vector,
    zero_vector,
)

T222 = canonical_type([2, 2, 2])
T233 = canonical_type([2, 3, 3])
T234 = canonical_type([2, 3, 4])


def vec(t, *flat):
    return unflatten(t, flat)


def vectors(t, lo=-4, hi=4):
    size = 1 + 1 + sum(mi - 1 for mi in t.m)
    return st.lists(st.integers(lo, hi), min_size=size, max_size=size).map(
        lambda flat: unflatten(t, flat)
    )


# --- type validation ---------------------------------------------------------


def test_type_validation():
    with pytest.raises(ValueError):
        canonical_type([2, 2])
    with pytest.raises(ValueError):
        canonical_type([2, 1, 2])
    with pytest.raises(ValueError):
        canonical_type([2, 2, 2, 2], [2, 3])  # first parameter must be 1
    with pytest.raises(ValueError):
        canonical_type([2, 2, 2, 2], [1, 1])  # distinct
    with pytest.raises(ValueError):
        canonical_type([2, 2, 2, 2], [1, 0])  # nonzero
    t = canonical_type([3, 4, 5, 6])
    assert t.lam == (Fraction(1), Fraction(2))
    t = canonical_type([2, 2, 2, 2, 2, 2])
    assert t.lam == (Fraction(1), Fraction(2), Fraction(3), Fraction(4))


def test_derived_counts():
    for t in (T222, T233, T234, canonical_type([2, 2, 2, 2])):
        assert t.vertex_count == 2 + sum(mi - 1 for mi in t.m)
        assert t.arrow_count == sum(t.m)
        assert t.relation_count == t.n - 2
        assert len(t.vertices()) == t.vertex_count


# --- weight invariant and threshold ------------------------------------------


def test_delta_invariant_values():
    # independent evaluation of (n - 2 - sum(1/m_i)) / 2 with exact fractions
    def oracle(m):
        return (len(m) - 2 - sum(Fraction(1, x) for x in m)) / 2

    for m, expect, tame in (
        ([2, 2, 2], Fraction(-1, 4), True),
        ([3, 3, 3], Fraction(0), True),
        ([2, 3, 7], Fraction(1, 84), False),
    ):
        t = canonical_type(m)
        assert delta_invariant(t) == oracle(m) == expect
        assert is_tame(t) is tame


def test_threshold():
    assert threshold_N(T222) == 3
    assert threshold_N(canonical_type([2, 2, 2, 2])) == 5
    assert threshold_N(canonical_type([2, 3, 7])) is None
    assert threshold_N(canonical_type([3, 3, 3])) == 4


# --- basis vectors ------------------------------------------------------------


def test_basis_vectors():
    assert e_vector(T222, 1, 0) == vec(T222, 1, 1, 0, 1, 1)
    assert e_interval(T222, 1, 0, 1) == h_vector(T222)
    assert unit_vector(T222, "0") == vec(T222, 1, 0, 0, 0, 0)
    assert unit_vector(T222, (2, 1)) == vec(T222, 0, 0, 0, 1, 0)
    with pytest.raises(ValueError):
        unit_vector(T222, (1, 2))


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(1, 3))
def test_e_vector_periodic(l, j, i):
    for t in (T222, T234):
        mi = t.m[i - 1]
        assert e_vector(t, i, l * mi + j) == e_vector(t, i, j)


def test_e_interval_matches_sum():
    for t in (T222, T234):
        for i in range(1, 4):
            for j1 in range(-3, 3):
                for j2 in range(j1, j1 + 2 * t.m[i - 1]):
                    total = zero_vector(t)
                    for j in range(j1, j2 + 1):
                        total = total + e_vector(t, i, j)
                    assert e_interval(t, i, j1, j2) == total


# --- Euler form ----------------------------------------------------------------


@given(vectors(T233), vectors(T233))
@settings(max_examples=60)
def test_euler_h_pairing(a, b):
    h = h_vector(T233)
    assert euler_form(T233, a, h) == a.d0 - a.dinf
    assert euler_form(T233, h, a) == a.dinf - a.d0
    # bilinearity
    assert euler_form(T233, a + b, a) == euler_form(T233, a, a) + euler_form(T233, b, a)
    assert euler_form(T233, a, a + b) == euler_form(T233, a, a) + euler_form(T233, a, b)


def test_euler_h_self_zero():
    for t in (T222, T233, T234, canonical_type([2, 2, 2, 2, 3])):
        assert euler_form(t, h_vector(t), h_vector(t)) == 0


def test_euler_worked_value():
    e0, einf = unit_vector(T222, "0"), unit_vector(T222, "inf")
    h = h_vector(T222)
    assert euler_form(T222, h - e0, h - einf) == -2


@given(vectors(T234), st.integers(1, 3), st.integers(-4, 8))
@settings(max_examples=80)
def test_euler_delta_pairing(d, i, j):
    assert euler_form(T234, e_vector(T234, i, j), d) == -delta_interval(T234, d, i, j, j)
    assert euler_form(T234, d, e_vector(T234, i, j)) == delta_interval(
        T234, d, i, j + 1, j + 1
    )


# --- interval drops -------------------------------------------------------------


def naive_delta_interval(t, d, i, j1, j2):
    # per-index reduction into [1, m_i], summed directly
    mi = t.m[i - 1]
    total = 0
    for j in range(j1, j2 + 1):
        jr = (j - 1) % mi + 1
        upper = d.dinf if jr == mi else d.at(i, jr)
        total += d.at(i, jr - 1) - upper
    return total


@given(vectors(T234), st.integers(1, 3), st.integers(-5, 5), st.integers(0, 9))
@settings(max_examples=100)
def test_delta_interval_against_naive(d, i, j1, span):
    j2 = j1 + span
    assert delta_interval(T234, d, i, j1, j2) == naive_delta_interval(T234, d, i, j1, j2)


def test_delta_interval_values():
    d = 2 * h_vector(T222) + e_vector(T222, 1, 1)
    assert delta_interval(T222, d, 1, 1, 1) == -1
    e0 = unit_vector(T222, "0")
    assert delta_interval(T222, e0, 1, 2, 2) == 0
    for t in (T222, T234):
        for i in range(1, 4):
            d = vec(t, *range(2, 2 + 2 + sum(mi - 1 for mi in t.m)))
            assert delta_interval(t, d, i, 1, t.m[i - 1]) == d.d0 - d.dinf
    with pytest.raises(ValueError):
        delta_interval(T222, h_vector(T222), 1, 2, 1)


# --- classification --------------------------------------------------------------


def test_classify_examples():
    e0 = unit_vector(T222, "0")
    flags = classify(T222, e0)
    assert (flags.in_P, flags.in_R, flags.in_Q) == (True, False, False)
    flags = classify(T222, h_vector(T222))
    assert (flags.in_P, flags.in_R, flags.in_Q) == (False, True, False)
    flags = classify(T222, zero_vector(T222))
    assert (flags.in_P, flags.in_R, flags.in_Q) == (True, True, True)
    with pytest.raises(ValueError):
        classify(T222, -e0)


@given(vectors(T233, lo=0, hi=3))
@settings(max_examples=150)
def test_classify_properties(d):
    flags = classify(T233, d)
    if flags.in_P and flags.in_Q:
        assert d.is_zero()
    if flags.in_P and not d.is_zero():
        assert euler_form(T233, d, h_vector(T233)) > 0
    if flags.in_Q and not d.is_zero():
        assert euler_form(T233, d, h_vector(T233)) < 0


def test_regular_iff_realizable():
    # membership matches realizability as a sum of tube classes (after
    # splitting off any number of full homogeneous copies)
    from itertools import product as iproduct

    from cantube import enumerate_regular

    t = T222
    for flat in iproduct(range(3), repeat=5):
        d = unflatten(t, flat)
        realizable = bool(enumerate_regular(t, d)) or (
            d.d0 == d.dinf
            and any(
                min(d.flatten()) >= q and enumerate_regular(t, d - q * h_vector(t))
                for q in range(1, min(d.flatten()) + 1)
            )
        )
        assert in_R(t, d) == realizable, flat


# --- expected variety dimension ---------------------------------------------------


def test_a_dim_values():
    assert a_dim(T222, h_vector(T222)) == 5
    assert a_dim(T222, zero_vector(T222)) == 0
    assert a_dim(T222, 2 * h_vector(T222)) == 20
    assert a_dim(T233, h_vector(T233)) == 7


@given(vectors(T234, lo=0, hi=4))
@settings(max_examples=60)
def test_a_dim_formulas_agree(d):
    # the function itself raises if its two routes disagree
    a_dim(T234, d)
