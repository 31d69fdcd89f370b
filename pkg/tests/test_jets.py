import math

import numpy as np
import pytest

from cuspidal.errors import InputError
from cuspidal.jets import (
    Deformation,
    General,
    Linear,
    SecondDeformation,
    capital_phi,
    critical_polys,
    cusp_poly,
    cusp_poly_linear_closed_form,
    genericity_polys,
    jacobian,
    jacobian_linear_closed_form,
    multiplicity_at_origin,
    realize,
    regularity_poly,
    regularity_poly_linear_closed_form,
)
from cuspidal.mixedpoly import (
    Z,
    ZBAR,
    MixedPolynomial,
    abs_eval,
    evaluate,
    is_real_valued,
)

from conftest import random_holomorphic, random_mixed


def coeff_gap(g, h):
    keys = set(g.terms) | set(h.terms)
    scale = max(g.max_abs_coeff(), h.max_abs_coeff(), 1e-300)
    return max((abs(g.coeff(*k) - h.coeff(*k)) for k in keys), default=0.0) / scale


def test_realize_linear():
    d = Deformation.linear(Z**3, 1.0, 2.0, 0.1)
    assert realize(d) == Z**3 + complex(0.1, 0.2) * ZBAR


def test_realize_second():
    d = SecondDeformation(Deformation.linear(Z**3, 1, 0, 0.01), ZBAR**2, 1e-5)
    assert realize(d) == Z**3 + 0.01 * ZBAR + 1e-5 * ZBAR**2
    assert d.t == 0.01 and d.base == Z**3
    assert d.with_s(0).s == 0.0


def test_deformation_validation():
    with pytest.raises(InputError):
        Deformation.linear(Z**2 + ZBAR, 1, 0, 0.1)
    with pytest.raises(InputError):
        Deformation.linear(Z**2, 0, 0, 0.1)
    with pytest.raises(InputError):
        Deformation.general(Z**2, ZBAR + 1, 0.1)
    with pytest.raises(InputError):
        SecondDeformation(Deformation.linear(Z**2, 1, 0, 0.1), ZBAR, 1e-3)
    # (a, b) = 0 is fine when t = 0
    assert realize(Deformation.linear(Z**2, 0, 0, 0)) == Z**2


def test_jacobian_of_holomorphic_is_abs_square():
    f = Z**3 + 2 * Z
    J = jacobian(f)
    z = 0.3 + 0.4j
    assert evaluate(J, z).real == pytest.approx(abs(3 * z**2 + 2) ** 2, rel=1e-13)


def test_jacobian_matches_real_determinant():
    g = Z**2 + 0.3 * ZBAR**2 + (0.1 + 0.5j) * Z * ZBAR
    z, h = 0.4 - 0.2j, 1e-6
    gx = (evaluate(g, z + h) - evaluate(g, z - h)) / (2 * h)
    gy = (evaluate(g, z + 1j * h) - evaluate(g, z - 1j * h)) / (2 * h)
    det = gx.real * gy.imag - gx.imag * gy.real
    assert evaluate(jacobian(g), z).real == pytest.approx(det, rel=1e-7)


def test_closed_forms(rng):
    for _ in range(20):
        f = random_holomorphic(rng, int(rng.integers(2, 7)))
        d = Deformation.linear(f, rng.normal(), rng.normal(), 10 ** rng.uniform(-4, -1))
        g = realize(d)
        assert coeff_gap(cusp_poly(g), cusp_poly_linear_closed_form(d)) <= 1e-12
        assert set(jacobian(g).terms) == set(jacobian_linear_closed_form(d).terms)
        assert coeff_gap(jacobian(g), jacobian_linear_closed_form(d)) <= 1e-14
        assert coeff_gap(regularity_poly(g), regularity_poly_linear_closed_form(d)) <= 1e-12


def test_closed_form_needs_linear():
    d = Deformation.general(Z**2, ZBAR**2, 0.1)
    with pytest.raises(InputError):
        cusp_poly_linear_closed_form(d)


def test_cusp_poly_example():
    # z^2 + t zbar: G = -2i (2z)^2 * 2 + 2 t i * 2 * conj(2z)
    t = 0.01
    G = cusp_poly(realize(Deformation.linear(Z**2, 1, 0, t)))
    assert coeff_gap(G, -16j * Z**2 + 8j * t * ZBAR) < 1e-15


def test_critical_polys_bundle():
    g = realize(Deformation.linear(Z**3, 1, 0, 0.01))
    cp = critical_polys(g)
    assert cp.g == g
    assert cp.J == jacobian(g)
    assert cp.G == cusp_poly(g)
    assert cp.H == regularity_poly(g)


def test_critical_values_at_monomial_cusp():
    n, t = 3, 0.01
    r = (t / n) ** (1 / (n - 1))
    cp = critical_polys(realize(Deformation.linear(Z**n, 1, 0, t)))
    for p in (cp.J, cp.G):
        assert abs(evaluate(p, r)) <= 1e-12 * abs_eval(p, r)
    assert abs(evaluate(cp.H, r)) > 1e-3 * abs_eval(cp.H, r)


def test_genericity_polys_real_and_psi_values():
    phi1, phi2, psi = genericity_polys(Z**2)
    assert psi == MixedPolynomial.constant(48.0)
    _, _, psi3 = genericity_polys(Z**3)
    assert psi3 == MixedPolynomial.monomial(2, 2, 2592.0)
    for p in (phi1, phi2, psi):
        assert is_real_valued(p)


def test_phi_real_on_random(rng):
    for _ in range(10):
        f = random_holomorphic(rng, int(rng.integers(2, 7)))
        for p in genericity_polys(f):
            assert is_real_valued(p)
    with pytest.raises(InputError):
        genericity_polys(Z + ZBAR)


def test_capital_phi():
    p1, p2 = Z * ZBAR, MixedPolynomial.constant(1.0)
    assert capital_phi(p1, p2, 2, 3) == 2 * Z * ZBAR + 3


def test_multiplicity_at_origin():
    assert multiplicity_at_origin(Z**2 + Z**5) == 2
    assert multiplicity_at_origin(Z**3 + Z**7 + Z**8) == 3
    assert multiplicity_at_origin(Z) == 1
    with pytest.raises(InputError):
        multiplicity_at_origin(Z + 1)
    with pytest.raises(InputError):
        multiplicity_at_origin(MixedPolynomial())


def test_general_deformation_term():
    h = ZBAR + ZBAR**2
    d = Deformation.general(Z**3, h, 1e-3)
    assert d.term() == h
    assert isinstance(d.kind, General)
    assert isinstance(Deformation.linear(Z, 1, 1, 1).kind, Linear)
    assert d.with_t(0.5).t == 0.5


def test_jacobian_real_valued_random(rng):
    for _ in range(10):
        assert is_real_valued(jacobian(random_mixed(rng)))
