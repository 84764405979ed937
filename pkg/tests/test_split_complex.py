import numpy as np
import pytest
from hypothesis import given, strategies as st

from antisync.split_complex import (
    M_I,
    M_R,
    ONE,
    ZERO,
    SplitComplex,
    abs_pair,
    hat,
    pos_part,
    product_split,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False,
                   allow_infinity=False)
pairs = st.builds(SplitComplex, finite, finite)


def test_product_matrices_are_the_expected_constants():
    assert np.array_equal(M_R, [[1.0, 0.0], [0.0, -1.0]])
    assert np.array_equal(M_I, [[0.0, 1.0], [1.0, 0.0]])


def test_hat_and_abs_pair():
    a = SplitComplex(-3.0, 2.5)
    assert hat(a) == (-3.0, 2.5)
    assert abs_pair(a) == (3.0, 2.5)


def test_pos_part():
    assert pos_part(2.0) == 2.0
    assert pos_part(-2.0) == 0.0
    assert pos_part(0.0) == 0.0


def test_constants():
    assert ZERO.to_complex() == 0j
    assert ONE.to_complex() == 1 + 0j


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        SplitComplex(float("nan"), 0.0)
    with pytest.raises(ValueError):
        SplitComplex(0.0, float("inf"))


def test_known_product():
    # (1 + 2i)(3 - 4i) = 11 + 2i
    p = product_split(SplitComplex(1.0, 2.0), SplitComplex(3.0, -4.0))
    assert p.re == pytest.approx(11.0, abs=1e-12)
    assert p.im == pytest.approx(2.0, abs=1e-12)


@given(pairs, pairs)
def test_product_matches_complex_multiplication(a, b):
    want = a.to_complex() * b.to_complex()
    got = product_split(a, b)
    scale = max(1.0, abs(want))
    assert abs(got.re - want.real) <= 1e-12 * scale
    assert abs(got.im - want.imag) <= 1e-12 * scale


@given(pairs, pairs)
def test_product_commutes(a, b):
    ab = product_split(a, b)
    ba = product_split(b, a)
    assert ab.re == pytest.approx(ba.re, abs=1e-9, rel=1e-12)
    assert ab.im == pytest.approx(ba.im, abs=1e-9, rel=1e-12)


def test_product_rule_equivalence_bulk():
    # >= 1000 random pairs against ordinary complex arithmetic.
    rng = np.random.default_rng(7)
    vals = rng.uniform(-100.0, 100.0, size=(1200, 4))
    for ar, ai, br, bi in vals:
        a = SplitComplex(ar, ai)
        b = SplitComplex(br, bi)
        want = a.to_complex() * b.to_complex()
        got = product_split(a, b)
        scale = max(1.0, abs(want))
        assert abs(got.re - want.real) <= 1e-12 * scale
        assert abs(got.im - want.imag) <= 1e-12 * scale


@given(pairs, pairs)
def test_addition_subtraction_negation(a, b):
    assert (a + b).to_complex() == a.to_complex() + b.to_complex()
    assert (a - b).to_complex() == a.to_complex() - b.to_complex()
    assert (-a).to_complex() == -a.to_complex()


@given(pairs, finite)
def test_scale_matches_complex(a, c):
    want = c * a.to_complex()
    got = a.scale(c)
    assert got.re == want.real
    assert got.im == want.imag


@given(pairs)
def test_identities(a):
    assert product_split(a, ONE) == a
    z = product_split(a, ZERO)
    assert z.re == 0.0 and z.im == 0.0


def test_from_complex_roundtrip():
    z = complex(0.25, -8.5)
    assert SplitComplex.from_complex(z).to_complex() == z
