import os
import subprocess
import sys

import numpy as np
import pytest

from cuspidal import _kernels
from cuspidal._kernels import (
    B_DZ,
    B_DZ_TAIL,
    B_DZB,
    B_DZB_TAIL,
    B_ERR0,
    B_TAIL,
    B_VAL,
)
from cuspidal.mixedpoly import d_dz, d_dzbar, evaluate

from conftest import random_mixed

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not importable")


def points(rng, n=200, r=1.5):
    return rng.uniform(-r, r, n) + 1j * rng.uniform(-r, r, n)


@needs_numba
def test_eval_parity(rng):
    for _ in range(10):
        g = random_mixed(rng, max_deg=7, n_terms=10)
        z = points(rng)
        v1, a1 = _kernels.eval_mixed(*g.arrays(), z, use_numba=True)
        v2, a2 = _kernels.eval_mixed(*g.arrays(), z, use_numba=False)
        np.testing.assert_allclose(v1, v2, rtol=0, atol=1e-14 * a1.max())
        np.testing.assert_allclose(a1, a2, rtol=1e-14)


@needs_numba
def test_bounds_parity(rng):
    for _ in range(10):
        g = random_mixed(rng, max_deg=7, n_terms=10)
        z = points(rng)
        rho = rng.uniform(1e-3, 0.5, z.size)
        b1 = _kernels.taylor_bounds(*g.arrays(), z, rho, use_numba=True)
        b2 = _kernels.taylor_bounds(*g.arrays(), z, rho, use_numba=False)
        np.testing.assert_allclose(b1, b2, rtol=1e-12, atol=1e-300)


@needs_numba
def test_shift_parity(rng):
    g = random_mixed(rng, max_deg=6, n_terms=10)
    s1 = _kernels.taylor_shift(*g.arrays(), 0.3 - 0.7j, use_numba=True)
    s2 = _kernels.taylor_shift(*g.arrays(), 0.3 - 0.7j, use_numba=False)
    np.testing.assert_allclose(s1, s2, rtol=1e-13, atol=1e-13)


@needs_numba
def test_marching_squares_parity(rng):
    F = rng.normal(size=(40, 50))
    np.testing.assert_array_equal(
        _kernels.marching_squares(F, use_numba=True), _kernels.marching_squares(F, use_numba=False)
    )


def test_taylor_bounds_are_bounds(rng):
    for _ in range(5):
        g = random_mixed(rng, max_deg=6, n_terms=8)
        gz, gzb = d_dz(g), d_dzbar(g)
        c = complex(*rng.uniform(-1, 1, 2))
        rho = 0.3
        b = _kernels.taylor_bounds(*g.arrays(), np.array([c]), np.array([rho]))[0]
        g0 = evaluate(g, c)
        assert b[B_VAL] == pytest.approx(abs(g0), rel=1e-12)
        assert b[B_DZ] == pytest.approx(abs(evaluate(gz, c)), rel=1e-12, abs=1e-14)
        assert b[B_DZB] == pytest.approx(abs(evaluate(gzb, c)), rel=1e-12, abs=1e-14)
        assert b[B_ERR0] > 0
        for u in rho * np.sqrt(rng.uniform(0, 1, 50)) * np.exp(2j * np.pi * rng.uniform(0, 1, 50)):
            assert abs(evaluate(g, c + u) - g0) <= b[B_TAIL] * (1 + 1e-12)
            assert abs(evaluate(gz, c + u) - evaluate(gz, c)) <= b[B_DZ_TAIL] * (1 + 1e-12) + 1e-14
            assert abs(evaluate(gzb, c + u) - evaluate(gzb, c)) <= b[B_DZB_TAIL] * (1 + 1e-12) + 1e-14


def test_shift_dense_layout():
    from cuspidal.mixedpoly import Z, ZBAR
    g = Z * Z * ZBAR
    sh = _kernels.taylor_shift(*g.arrays(), 1.0)
    # (1+u)^2 (1+ubar) = 1 + 2u + u^2 + ubar + 2 u ubar + u^2 ubar
    expect = np.array([[1, 1], [2, 2], [1, 1]], dtype=complex)
    np.testing.assert_allclose(sh, expect)


def test_marching_squares_circle():
    n = 101
    xs = np.linspace(-1, 1, n)
    F = xs[None, :] ** 2 + xs[:, None] ** 2 - 0.5
    segs = _kernels.marching_squares(F)
    assert len(segs) > 50
    # endpoints lie on the circle up to linear interpolation error
    h = 2 / (n - 1)
    for cols in ((0, 1), (2, 3)):
        x = -1 + segs[:, cols[0]] * h
        y = -1 + segs[:, cols[1]] * h
        assert np.max(np.abs(np.hypot(x, y) - 0.5**0.5)) < 5 * h * h


def test_marching_squares_degenerate():
    assert _kernels.marching_squares(np.ones((1, 5))).shape == (0, 4)
    assert _kernels.marching_squares(np.ones((5, 5))).shape == (0, 4)


def test_empty_polynomial_inputs():
    P = np.zeros(0, dtype=np.int64)
    C = np.zeros(0, dtype=np.complex128)
    v, a = _kernels.eval_mixed(P, P, C, np.array([1j]))
    assert v[0] == 0 and a[0] == 0
    assert _kernels.taylor_bounds(P, P, C, np.array([0j]), 1.0).shape == (1, 8)


@pytest.mark.parametrize("flag,expect", [("1", False), ("0", True), ("", True)])
def test_env_flag_selects_path(flag, expect):
    env = dict(os.environ, CUSPIDAL_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from cuspidal import _kernels; print(_kernels.USE_NUMBA)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == str(expect and _kernels.HAVE_NUMBA)
