import numpy as np
import pytest

from cuspidal.mixedpoly import Z, MixedPolynomial, d_dz


def random_mixed(rng, max_deg=4, n_terms=6, real_coeffs=False):
    terms = {}
    for _ in range(n_terms):
        p = int(rng.integers(0, max_deg + 1))
        q = int(rng.integers(0, max_deg + 1 - p))
        c = rng.normal() if real_coeffs else complex(rng.normal(), rng.normal())
        terms[(p, q)] = c
    return MixedPolynomial(terms)


def random_holomorphic(rng, deg):
    coeffs = [complex(rng.normal(), rng.normal()) for _ in range(deg)] + [1.0]
    coeffs[0] = 0.0
    return MixedPolynomial.holomorphic(coeffs)


def dyadic_instance(rng):
    """Monic f of degree 2..6 whose f' has dyadic roots with random multiplicities.

    Roots sit on the grid k/8 at mutual distance >= 1/4, so f' is exact in
    floating point and the expected counts are unambiguous.
    Returns (f, n, multiplicities, roots).
    """
    while True:
        n = int(rng.integers(2, 7))
        left, ms = n - 1, []
        while left:
            m = int(rng.integers(1, left + 1))
            ms.append(m)
            left -= m
        ws = []
        while len(ws) < len(ms):
            w = complex(rng.integers(-8, 9) / 8, rng.integers(-8, 9) / 8)
            if all(abs(w - u) >= 0.25 for u in ws):
                ws.append(w)
        fz = MixedPolynomial.holomorphic([n])
        for w, m in zip(ws, ms):
            for _ in range(m):
                fz = fz * (Z - w)
        f = MixedPolynomial({(p + 1, 0): c / (p + 1) for (p, _), c in fz})
        if d_dz(f) == fz:
            return f, n, ms, ws


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance criteria register their outcome here; printed at session end
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {msg}")
