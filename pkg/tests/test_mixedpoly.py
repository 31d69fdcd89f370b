import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspidal.mixedpoly import (
    MAX_EXPONENT,
    ONE,
    Z,
    ZBAR,
    ZERO,
    MixedPolynomial,
    abs_eval,
    add,
    conjugate,
    d_dz,
    d_dzbar,
    evaluate,
    evaluate_many,
    imag_part,
    is_real_valued,
    mul,
    pretty,
    prune,
    real_part,
    scale,
    shift,
    to_text,
)

from conftest import random_mixed

coef = st.complex_numbers(min_magnitude=0, max_magnitude=10, allow_nan=False, allow_infinity=False)
term = st.tuples(st.tuples(st.integers(0, 4), st.integers(0, 4)), coef)
poly = st.lists(term, max_size=6).map(MixedPolynomial)
# small integer coefficients keep products exact
int_poly = st.lists(
    st.tuples(st.tuples(st.integers(0, 3), st.integers(0, 3)),
              st.builds(complex, st.integers(-5, 5), st.integers(-5, 5))),
    max_size=5,
).map(MixedPolynomial)


def test_construction_merges_and_drops_zeros():
    g = MixedPolynomial([((1, 0), 2.0), ((1, 0), -2.0), ((0, 1), 3.0)])
    assert g == MixedPolynomial.monomial(0, 1, 3.0)
    assert len(g) == 1


def test_zero_and_degree():
    assert ZERO.is_zero()
    assert ZERO.degree == -1
    assert (Z * Z * ZBAR).degree == 3
    assert to_text(ZERO) == "0"


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        MixedPolynomial({(-1, 0): 1.0})
    with pytest.raises(ValueError):
        MixedPolynomial({(0, 0): float("nan")})
    with pytest.raises(OverflowError):
        MixedPolynomial({(MAX_EXPONENT + 1, 0): 1.0})
    with pytest.raises(TypeError):
        MixedPolynomial({(1.5, 0): 1.0})


def test_derivatives_of_monomial():
    g = MixedPolynomial.monomial(3, 2, 2j)
    assert d_dz(g) == MixedPolynomial.monomial(2, 2, 6j)
    assert d_dzbar(g) == MixedPolynomial.monomial(3, 1, 4j)
    assert d_dz(ZBAR).is_zero()
    assert d_dzbar(Z).is_zero()


def test_holomorphic_flag():
    assert (Z**3 + Z).is_holomorphic()
    assert not (Z + ZBAR).is_holomorphic()


def test_real_and_imag_parts():
    g = Z * Z + 3j * ZBAR
    z = 0.3 - 1.2j
    assert evaluate(real_part(g), z) == pytest.approx(evaluate(g, z).real, abs=1e-14)
    assert evaluate(imag_part(g), z) == pytest.approx(evaluate(g, z).imag, abs=1e-14)
    assert is_real_valued(real_part(g)) and is_real_valued(imag_part(g))


def test_zzbar_is_real_valued():
    assert is_real_valued(Z * ZBAR)
    assert not is_real_valued(Z)
    assert is_real_valued(ONE)


def test_evaluate_matches_formula():
    g = MixedPolynomial({(2, 1): 1 + 1j, (0, 3): -2.0, (0, 0): 0.5})
    z = 0.7 + 0.2j
    expect = (1 + 1j) * z**2 * z.conjugate() - 2 * z.conjugate() ** 3 + 0.5
    assert evaluate(g, z) == pytest.approx(expect, rel=1e-14)
    vals, absum = evaluate_many(g, np.array([z, -z]))
    assert vals[0] == pytest.approx(expect, rel=1e-14)
    assert absum[0] == pytest.approx(abs_eval(g, z), rel=1e-14)


def test_evaluate_rejects_nonfinite():
    with pytest.raises(ValueError):
        evaluate(Z, complex(math.inf, 0))


def test_shift_matches_translation(rng):
    g = random_mixed(rng, max_deg=5)
    w = 0.4 - 0.3j
    h = shift(g, w)
    for u in (0.1 + 0.2j, -0.5j, 0.33):
        assert evaluate(h, u) == pytest.approx(evaluate(g, w + u), rel=1e-12, abs=1e-12)


def test_prune_relative_and_absolute():
    g = MixedPolynomial({(1, 0): 1.0, (2, 0): 1e-14})
    assert prune(g, 1e-12) == Z
    assert prune(g, 1e-20, relative=False) == g


def test_operators():
    assert Z + 1 == add(Z, ONE)
    assert 2 * Z == scale(Z, 2)
    assert (Z - Z).is_zero()
    assert (1 - Z) == add(ONE, scale(Z, -1))
    assert Z**0 == ONE
    assert (Z + ZBAR) ** 2 == Z * Z + 2 * Z * ZBAR + ZBAR * ZBAR
    with pytest.raises(ValueError):
        Z ** -1


def test_pretty_is_readable():
    assert pretty(Z**3 + Z) in ("z + z^3", "z^3 + z")
    assert pretty(ZERO) == "0"


@given(int_poly, int_poly)
@settings(max_examples=80, deadline=None)
def test_leibniz_rules_exact(g, h):
    assert d_dz(mul(g, h)) == add(mul(d_dz(g), h), mul(g, d_dz(h)))
    assert d_dzbar(mul(g, h)) == add(mul(d_dzbar(g), h), mul(g, d_dzbar(h)))


@given(poly)
@settings(max_examples=80, deadline=None)
def test_conjugation_identities(g):
    assert conjugate(conjugate(g)) == g
    assert d_dzbar(conjugate(g)) == conjugate(d_dz(g))
    assert is_real_valued(mul(g, conjugate(g)))
    assert is_real_valued(add(g, conjugate(g)))


@given(poly, st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
@settings(max_examples=80, deadline=None)
def test_conjugate_evaluates_to_conjugate(g, z):
    assert evaluate(conjugate(g), z) == pytest.approx(evaluate(g, z).conjugate(), rel=1e-12, abs=1e-9)
