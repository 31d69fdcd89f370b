import math

import numpy as np
import pytest

from cuspidal.analysis import (
    DEFAULT_SEED,
    T_MAX,
    T_MIN,
    Tolerances,
    _localize,
    analyze,
    auto_ab,
    auto_t,
    check_excellent,
    count_cusps,
    default_region,
    example1_positions,
    genericity_scan,
    local_radius,
    singularities,
    verify_theorem1,
    verify_theorem3,
)
from cuspidal.degree import Contour, RootClass, winding_number
from cuspidal.errors import EqualModuli, InputError, MultiplicityTooSmall
from cuspidal.jets import Deformation, critical_polys, cusp_poly, realize
from cuspidal.mixedpoly import Z, ZBAR, abs_eval, evaluate


def test_tolerance_overrides():
    tol = Tolerances().with_overrides({"j_tol": "1e-6", "max_depth": "12"})
    assert tol.j_rel == 1e-6 and tol.max_depth == 12
    with pytest.raises(InputError):
        Tolerances().with_overrides({"nope": 1})
    with pytest.raises(InputError):
        Tolerances().with_overrides({"h_rel": "abc"})


def test_singularities_with_multiplicity():
    s = singularities(Z**4 + Z**2)
    assert [x.multiplicity for x in s] == [1, 1, 1]
    pts = sorted((x.point for x in s), key=lambda z: z.imag)
    assert abs(pts[0] + 1j / 2**0.5) < 1e-12 and abs(pts[1]) < 1e-12
    s = singularities(Z**5)
    assert len(s) == 1 and s[0].multiplicity == 4 and abs(s[0].point) < 1e-12
    assert singularities(Z) == []
    with pytest.raises(InputError):
        singularities(Z + ZBAR)


def test_local_radius_and_auto_t():
    s = singularities(Z**3 + Z)  # +-i/sqrt(3)
    assert local_radius(s, 0) == pytest.approx(1 / 3**0.5)
    assert auto_t(Z**3 + Z) == T_MAX  # 1e-2 * 2/sqrt(3), clamped
    assert auto_t(Z**4 + Z**2) == pytest.approx(1e-2 / 2**0.5)
    assert auto_t(Z**4) == T_MAX
    assert auto_t(Z) == T_MAX
    # close pair, high multiplicity: clamped from below
    f = Z**3 * (1 / 3) - 1e-3 * Z**2  # f' = z (z - 2e-3)
    assert T_MIN <= auto_t(f) <= 1e-2


def test_default_region_contains_singularities():
    f = Z**4 - 3 * Z**2
    reg = default_region(f)
    assert all(reg.contains(s.point) for s in singularities(f))


def test_closed_form_positions():
    pos = example1_positions(2, 1, 0, 0.02)
    assert len(pos) == 3
    assert all(abs(abs(p) - 0.01) < 1e-15 for p in pos)
    pos = example1_positions(3, 0, 1, 0.5)
    assert [round(math.atan2(p.imag, p.real) % (2 * math.pi), 12) for p in pos] == [
        round(((math.pi / 2 + 2 * j * math.pi) / 4) % (2 * math.pi), 12) for j in range(4)
    ]
    with pytest.raises(InputError):
        example1_positions(1, 1, 0, 0.1)
    with pytest.raises(InputError):
        example1_positions(3, 0, 0, 0.1)
    with pytest.raises(InputError):
        example1_positions(3, 1, 0, 0)


def test_genericity_scan_cases():
    assert not genericity_scan(Z**3, 0, 0)
    res = genericity_scan(Z**2, 0.3, 0.8)
    assert res.ok and res.points_checked == 0 and res.heuristic
    assert genericity_scan(Z**4 + Z, 0.6, 0.8).points_checked >= 0
    with pytest.raises(InputError):
        genericity_scan(Z**3, 1, 0, radius=-1.0)


def test_auto_ab_is_seeded():
    a1 = auto_ab(Z**3 + Z, seed=7)
    a2 = auto_ab(Z**3 + Z, seed=7)
    assert a1 == a2
    a, b, used = a1
    assert a * a + b * b == pytest.approx(1.0)
    assert used >= 7
    assert auto_ab(Z**3)[2] >= DEFAULT_SEED


def test_analyze_rejects_t_zero():
    with pytest.raises(InputError):
        analyze(Deformation.linear(Z**3, 1, 0, 0))


def test_check_excellent():
    ok, wit = check_excellent(Deformation.linear(Z**3, 1, 0, 0.01))
    assert ok and wit == []
    ok, wit = check_excellent(Deformation.linear(Z**3, 1, 0, 0))
    assert not ok and len(wit) == 1 and abs(wit[0]) < 1e-12


def test_report_invariants():
    d = Deformation.linear(Z**4 + Z**2, 0.6, 0.8, 1e-3)
    rep = count_cusps(d)
    tol = Tolerances()
    cp = critical_polys(realize(d))
    assert rep.count == 4 - 1 + 2 * 3
    assert rep.excellent
    sings = singularities(d.base)
    for r in rep.cusps:
        z = r.center
        assert r.classification is RootClass.POSITIVE
        assert abs(evaluate(cp.G, z)) <= tol.refine_tol
        # J and H are judged in the coordinates centred at the nearest
        # singular point, where they carry no cancellation from far terms
        s = min(sings, key=lambda s: abs(z - s.point))
        loc = critical_polys(_localize(d, s.point, s.multiplicity))
        u = z - s.point
        assert abs(evaluate(loc.J, u)) <= tol.j_rel * abs_eval(loc.J, u)
        assert abs(evaluate(loc.H, u)) > tol.h_rel * abs_eval(loc.H, u)
    assert sum(p.cusps for p in rep.per_singularity) == rep.count
    assert rep.t == 1e-3


def test_degree_bookkeeping_per_singularity():
    f = Z**4 + Z**2
    d = Deformation.linear(f, 0.6, 0.8, 1e-3)
    rep = analyze(d)
    G0 = cusp_poly(f)
    for loc in rep.per_singularity:
        ms0 = winding_number(G0, Contour.circle(loc.point, loc.radius / 2)).degree
        assert ms0 == loc.cusps - 1 == loc.multiplicity + 1


def test_count_invariant_under_t_halving():
    f = Z**3 + Z
    counts = {analyze(Deformation.linear(f, 0.6, 0.8, t)).count for t in (1e-2, 5e-3, 2.5e-3)}
    assert counts == {6}


def test_local_count_preconditions():
    with pytest.raises(MultiplicityTooSmall):
        verify_theorem1(Z)
    v = verify_theorem1(Z**4, t=1e-3, radius=0.5)
    assert v.passed and v.expected == v.observed == 5
    assert v.details["ms_G0"] == 4 and v.details["ms_Gt_origin"] == -1
    assert v.details["t_schedule"] == [1e-3]


def test_general_term_equal_moduli():
    with pytest.raises(EqualModuli):
        verify_theorem3(Z**3, Z**2)


def test_general_term_inapplicable_when_h_check_fails():
    # demanding |H| > |H|-scale at every cusp cannot hold: (i) fails
    tol = Tolerances(h_rel=1.0)
    v = verify_theorem3(Z**3, ZBAR + ZBAR**2, t=1e-3, tol=tol)
    assert v.status == "inapplicable" and not v.passed
    assert v.expected == (4, None)


def test_general_term_linear_h_is_exact():
    v = verify_theorem3(Z**3, ZBAR, t=1e-3)
    assert v.passed and v.observed == 4
