"""Cusp counting, excellence checks and the claim verifiers.

Cusps of a deformation bifurcate out of the singular points w of f (zeros
of f').  Each singular point is analysed in its own coordinates
u = z - w, where f(w + u) - f(w) starts at u^(m+1) exactly; this keeps the
tiny local structure of G out of the rounding noise of the global
coefficients.  A final pass over the rest of the search region, with the
local disks removed, catches anything else.
"""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple, Union

import numpy as np

from . import _kernels
from ._kernels import B_ERR0, B_TAIL, B_VAL
from .degree import Contour, RootClass, delta_of, winding_number
from .errors import (
    BoundaryZero,
    IndeterminateCluster,
    InputError,
    MultiplicityTooSmall,
    NonConvergent,
    NumericError,
)
from .jets import (
    Deformation,
    General,
    Linear,
    SecondDeformation,
    capital_phi,
    critical_polys,
    cusp_poly,
    genericity_polys,
    multiplicity_at_origin,
    realize,
)
from .locator import CertifiedRoot, SearchRegion, isolate_roots
from .mixedpoly import (
    ZBAR,
    MixedPolynomial,
    abs_eval,
    add,
    d_dz,
    evaluate,
    evaluate_many,
    scale,
    shift,
)

DEFAULT_SEED = 0x5EED
T_MIN, T_MAX = 1e-8, 1e-2
T_RETRIES = 4


@dataclass(frozen=True)
class Tolerances:
    j_rel: float = 1e-7
    h_rel: float = 1e-7
    phi_tol: float = 1e-6
    refine_tol: float = 1e-10
    max_depth: int = 40

    _ALIASES = {"j_tol": "j_rel", "h_tol": "h_rel"}

    def with_overrides(self, pairs):
        """Apply ``{key: value}`` overrides (values may be strings)."""
        kw = {}
        for key, val in dict(pairs).items():
            name = self._ALIASES.get(key, key)
            if name.startswith("_") or name not in self.__dataclass_fields__:
                raise InputError(f"unknown tolerance {key!r}")
            typ = int if name == "max_depth" else float
            try:
                kw[name] = typ(val)
            except ValueError as exc:
                raise InputError(f"bad value for {key}: {val!r}") from exc
        return replace(self, **kw)


@dataclass(frozen=True)
class Singularity:
    point: complex
    multiplicity: int


@dataclass
class LocalCount:
    point: complex
    multiplicity: int
    radius: float
    cusps: int


@dataclass
class CuspReport:
    deformation: Union[Deformation, SecondDeformation]
    region: SearchRegion
    cusps: List[CertifiedRoot]
    spurious_G_zeros: List[CertifiedRoot]
    excellent: bool
    per_singularity: List[LocalCount]
    witnesses: List[complex] = field(default_factory=list)

    @property
    def count(self):
        return len(self.cusps)

    @property
    def t(self):
        return self.deformation.t


@dataclass
class Verdict:
    claim: str
    expected: Union[int, Tuple[int, int]]
    observed: Optional[int]
    passed: bool
    status: str = ""
    details: dict = field(default_factory=dict)
    report: Optional[CuspReport] = None

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"


# ------------------------------------------------------------ singularities

def _fz_cauchy_radius(f):
    fz = d_dz(f)
    if fz.degree <= 0:
        return 1.0
    lead = abs(fz.coeff(fz.degree, 0))
    return 1.0 + max((abs(c) / lead for (p, _), c in fz if p < fz.degree), default=0.0)


def default_region(f, tol=Tolerances()):
    """Square of half-width 2 * Cauchy bound of the zeros of f', about 0."""
    return SearchRegion.square(0, 2 * _fz_cauchy_radius(f), max_depth=tol.max_depth,
                               refine_tol=tol.refine_tol)


def _holo_derivative(p, k):
    for _ in range(k):
        p = d_dz(p)
    return p


def singularities(f, region=None, tol=Tolerances()):
    """Distinct zeros of f' with multiplicities, sorted by (Re, Im)."""
    if not f.is_holomorphic():
        raise InputError("singularities need a holomorphic f")
    fz = d_dz(f)
    if fz.degree <= 0:
        return []
    if region is None:
        region = default_region(f, tol)
    out = []
    for r in isolate_roots(fz, region):
        m = r.degree
        if m is None or m <= 0:
            raise IndeterminateCluster(f"unresolved zero cluster of f' near {r.center}")
        w = r.center
        if r.is_cluster:
            w = _polish_multiple(fz, w, m, r.box)
        out.append(Singularity(complex(w), int(m)))
    return out


def _polish_multiple(fz, w, m, box):
    # w is a simple zero of the (m-1)-th derivative of f'
    p = _holo_derivative(fz, m - 1)
    dp = d_dz(p)
    z = complex(w)
    for _ in range(60):
        d = evaluate(dp, z)
        if d == 0:
            break
        step = evaluate(p, z) / d
        z -= step
        if abs(step) <= 4 * _kernels.UNIT_ROUNDOFF * max(abs(z), 1e-300):
            break
    return z if box.contains(z, slack=box.width) else w


def local_radius(sings, i):
    w = sings[i].point
    others = [abs(w - s.point) for j, s in enumerate(sings) if j != i]
    return 0.5 * min(others) if others else 1.0


# ------------------------------------------------------------- t and (a, b)

def auto_t(f, sings=None, tol=Tolerances()):
    """1e-2 * (min singular-point distance)^(max multiplicity), clamped."""
    if sings is None:
        sings = singularities(f, tol=tol)
    if not sings:
        return T_MAX
    mmax = max(s.multiplicity for s in sings)
    if len(sings) > 1:
        pts = np.array([s.point for s in sings])
        dd = np.abs(pts[:, None] - pts[None, :])
        dmin = float(dd[np.triu_indices(len(pts), 1)].min())
    else:
        dmin = 1.0
    return min(max(1e-2 * dmin**mmax, T_MIN), T_MAX)


@dataclass
class ScanResult:
    ok: bool
    witnesses: List[complex]
    points_checked: int
    heuristic: bool = True

    def __bool__(self):
        return self.ok


def genericity_scan(f, a, b, radius=None, n_samples=256, tol=Tolerances(), sings=None):
    """Heuristic check that Phi = a phi1 + b phi2 avoids the zeros of psi.

    Samples psi on circles of radius ``radius * 2^-i`` (i = 0..6) about each
    singular point, bisects every sign change of psi to a zero, and flags
    the zero if |Phi| < phi_tol * sqrt(phi1^2 + phi2^2) there.
    """
    if not f.is_holomorphic():
        raise InputError("genericity scan needs a holomorphic f")
    if radius is not None and not radius > 0:
        raise InputError("scan radius must be positive")
    if a == 0 and b == 0:
        return ScanResult(False, [0j], 0)
    if sings is None:
        sings = singularities(f, tol=tol)
    phi1, phi2, psi = genericity_polys(f)
    Phi = capital_phi(phi1, phi2, a, b)
    theta = np.linspace(0.0, 2 * math.pi, n_samples, endpoint=False)
    witnesses, checked = [], 0
    for i, s in enumerate(sings):
        r0 = radius if radius is not None else local_radius(sings, i)
        for lvl in range(7):
            r = r0 * 2.0**-lvl
            vals = evaluate_many(psi, s.point + r * np.exp(1j * theta))[0].real
            nxt = np.roll(vals, -1)
            for k in np.flatnonzero(np.sign(vals) != np.sign(nxt)):
                p = _bisect_circle(psi, s.point, r, theta[k], theta[k] + 2 * math.pi / n_samples)
                checked += 1
                v1, v2 = evaluate(phi1, p).real, evaluate(phi2, p).real
                scale_ = math.hypot(v1, v2)
                if scale_ == 0 or abs(evaluate(Phi, p).real) < tol.phi_tol * scale_:
                    witnesses.append(p)
    return ScanResult(not witnesses, witnesses, checked)


def _bisect_circle(psi, c, r, t0, t1, iters=60):
    def val(t):
        return evaluate(psi, c + r * complex(math.cos(t), math.sin(t))).real

    f0 = val(t0)
    for _ in range(iters):
        tm = 0.5 * (t0 + t1)
        fm = val(tm)
        if fm == 0:
            t0 = t1 = tm
            break
        if (fm > 0) == (f0 > 0):
            t0, f0 = tm, fm
        else:
            t1 = tm
    tm = 0.5 * (t0 + t1)
    return c + r * complex(math.cos(tm), math.sin(tm))


def auto_ab(f, seed=DEFAULT_SEED, tol=Tolerances(), attempts=32, sings=None):
    """Seeded random unit (a, b) that passes the genericity scan.

    Returns (a, b, seed_used).
    """
    if sings is None:
        sings = singularities(f, tol=tol)
    for k in range(attempts):
        rng = np.random.default_rng(seed + k)
        ang = rng.uniform(0.0, 2 * math.pi)
        a, b = math.cos(ang), math.sin(ang)
        if genericity_scan(f, a, b, tol=tol, sings=sings):
            return a, b, seed + k
    raise NonConvergent(f"no (a, b) passed the genericity scan in {attempts} seeds")


# ------------------------------------------------------------ local algebra

def _drop_constant(p):
    return MixedPolynomial({k: c for k, c in p if k != (0, 0)})


def _localize(d, w, m):
    """The deformed map in coordinates u = z - w, constants dropped."""
    if isinstance(d, SecondDeformation):
        inner = _localize(d.inner, w, m)
        return add(inner, scale(_drop_constant(shift(d.g, w)), d.s))
    if w == 0:
        f_loc = _drop_constant(d.base)
    else:
        f_loc = _drop_constant(shift(d.base, w))
    # f' has an order-m zero at w, so f(w+u) - f(w) starts at u^(m+1)
    f_loc = MixedPolynomial({k: c for k, c in f_loc if k[0] > m})
    if isinstance(d.kind, Linear):
        term = scale(ZBAR, d.kind.c)
    else:
        term = _drop_constant(shift(d.kind.h, w))
    return add(f_loc, scale(term, d.t))


def _translate(r, w):
    if w == 0:
        return r
    # tiny local boxes would collapse when moved far from the origin
    c = r.box.center + w
    h = max(0.5 * r.box.width, 0.5 * r.box.height, 16 * _kernels.UNIT_ROUNDOFF * abs(c))
    box = SearchRegion(c - complex(h, h), c + complex(h, h), r.box.max_depth, r.box.refine_tol)
    return CertifiedRoot(box, r.center + w, r.degree, r.classification)


class _NearBoundary(Exception):
    pass


def _split_roots(cp, roots, tol, disk=None):
    """Sort G-zeros into cusps and spurious zeros; collect H failures."""
    cusps, spurious, witnesses = [], [], []
    for r in roots:
        if disk is not None:
            c, rad = disk
            dist = abs(r.center - c)
            if abs(dist - rad) <= 10 * tol.refine_tol * max(1.0, rad):
                raise _NearBoundary()
            if dist > rad:
                continue
        if r.is_cluster:
            if _j_nonvanishing(cp.J, r.box):
                spurious.append(r)
                continue
            raise IndeterminateCluster(
                f"unresolved zero cluster of G (degree {r.degree}) meets the critical set near {r.center}"
            )
        z = r.center
        jv = abs(evaluate(cp.J, z))
        if jv <= tol.j_rel * abs_eval(cp.J, z):
            cusps.append(r)
            if abs(evaluate(cp.H, z)) <= tol.h_rel * abs_eval(cp.H, z):
                witnesses.append(z)
        else:
            spurious.append(r)
    return cusps, spurious, witnesses


def _j_nonvanishing(J, box):
    P, Q, C = J.arrays()
    c = np.array([0.5 * (box.lo + box.hi)])
    rho = np.array([0.5 * abs(box.hi - box.lo)])
    b = _kernels.taylor_bounds(P, Q, C, c, rho)[0]
    return b[B_VAL] - b[B_ERR0] > b[B_TAIL]


def _local_analysis(d, sing, radius, tol):
    """Cusps and spurious G-zeros in the disk |z - w| <= radius."""
    w, m = sing.point, sing.multiplicity
    cp = critical_polys(_localize(d, w, m))
    last = None
    for rad in (radius, radius * 1.01, radius * 0.99):
        region = SearchRegion.square(0, rad, max_depth=tol.max_depth, refine_tol=tol.refine_tol)
        if cp.G.is_zero():
            raise IndeterminateCluster(f"cusp polynomial vanishes identically near {w}")
        try:
            roots = isolate_roots(cp.G, region, within=(0j, rad))
            cusps, spur, wit = _split_roots(cp, roots, tol, disk=(0j, rad))
        except (_NearBoundary, BoundaryZero):
            last = rad
            continue
        return (
            [_translate(r, w) for r in cusps],
            [_translate(r, w) for r in spur],
            [z + w for z in wit],
            rad,
        )
    raise NonConvergent(f"G-zeros keep landing on the local disk boundary near {w} (r={last})")


def analyze(d, region=None, tol=Tolerances(), sings=None):
    """Full cusp report for a deformation (t must be nonzero)."""
    if d.t == 0:
        raise InputError("cusp counting needs t != 0; the undeformed map is degenerate")
    f = d.base
    if region is None:
        region = default_region(f, tol)
    if sings is None:
        sings = singularities(f, region, tol)
    cusps, spurious, witnesses, per, disks = [], [], [], [], []
    for i, s in enumerate(sings):
        rad = local_radius(sings, i)
        c, sp, wit, rad = _local_analysis(d, s, rad, tol)
        cusps += [r for r in c if region.contains(r.center)]
        spurious += [r for r in sp if region.contains(r.center)]
        witnesses += wit
        per.append(LocalCount(s.point, s.multiplicity, rad, len(c)))
        disks.append((s.point, rad))

    cp = critical_polys(realize(d))
    if not cp.G.is_zero():
        rest = isolate_roots(cp.G, region, exclude=disks)
        c, sp, wit = _split_roots(cp, rest, tol)
        cusps += c
        spurious += sp
        witnesses += wit

    key = lambda r: (r.center.real, r.center.imag)  # noqa: E731
    cusps.sort(key=key)
    spurious.sort(key=key)
    return CuspReport(d, region, cusps, spurious, not witnesses, per, witnesses)


def count_cusps(d, region=None, tol=Tolerances()):
    return analyze(d, region, tol)


def check_excellent(d, region=None, tol=Tolerances()):
    """(excellent, witnesses).  At t = 0 the singular points themselves fail."""
    if d.t == 0:
        pts = [s.point for s in singularities(d.base, region, tol)]
        return (not pts), pts
    rep = analyze(d, region, tol)
    return rep.excellent, rep.witnesses


# -------------------------------------------------------------- verifiers

def _schedule(run, t, auto):
    """Run ``run(t)``; with auto t, retry at t/10 up to T_RETRIES times."""
    tried = []
    verdict, error = None, None
    for _ in range(T_RETRIES + 1 if auto else 1):
        tried.append(t)
        try:
            verdict, error = run(t), None
        except NumericError as exc:
            verdict, error = None, exc
        if verdict is not None and verdict.passed:
            break
        t /= 10
    if verdict is None:
        raise error
    verdict.details["t_schedule"] = tried
    verdict.details["t_used"] = tried[-1]
    return verdict


def _resolve_ab(f, a, b, seed, tol, sings):
    if a is None and b is None:
        a, b, seed = auto_ab(f, seed, tol, sings=sings)
        return a, b, seed, True
    return float(a or 0.0), float(b or 0.0), seed, False


def _g0_degree(f, radius):
    """m_s(G_0, 0) on a circle that avoids the other zeros of f' f''."""
    G0 = cusp_poly(f)
    rho = radius / 2
    for p in (d_dz(f), d_dz(d_dz(f))):
        coeffs = [p.coeff(k, 0) for k in range(p.degree, -1, -1)]
        if len(coeffs) > 1:
            nz = [abs(z) for z in np.roots(coeffs) if abs(z) > 1e-6]
            if nz:
                rho = min(rho, 0.5 * min(nz))
    return winding_number(G0, Contour.circle(0, rho)).degree


def verify_theorem1(f, a=None, b=None, t=None, radius=None, tol=Tolerances(), seed=DEFAULT_SEED):
    """Local cusp count k+1 near a singular point of multiplicity k at 0."""
    k = multiplicity_at_origin(f)
    if k < 2:
        raise MultiplicityTooSmall(f"origin multiplicity k={k}; need k >= 2")
    sings = singularities(f, tol=tol)
    idx = min(range(len(sings)), key=lambda i: abs(sings[i].point))
    if radius is None:
        radius = local_radius(sings, idx)
    a, b, seed, auto = _resolve_ab(f, a, b, seed, tol, sings)
    origin = Singularity(0j, k - 1)
    ms0 = _g0_degree(f, radius)

    def run(tt):
        d = Deformation.linear(f, a, b, tt)
        cusps, spur, wit, rad = _local_analysis(d, origin, radius, tol)
        center = [r for r in spur if abs(r.center) <= 1e-9 * max(radius, 1.0) or r.box.contains(0)]
        ms_center = sum(r.degree for r in center if r.degree is not None) if center else None
        nu = len(cusps)
        book = ms_center is not None and nu + ms_center == ms0 == k
        ok = nu == k + 1 and book and not wit
        return Verdict(
            "theorem1", k + 1, nu, ok,
            details={"k": k, "radius": rad, "a": a, "b": b, "seed": seed, "auto_ab": auto,
                     "ms_G0": ms0, "ms_Gt_origin": ms_center, "bookkeeping": book,
                     "excellent": not wit},
            report=CuspReport(d, SearchRegion.square(0, rad), cusps, spur, not wit,
                              [LocalCount(0j, k - 1, rad, nu)], wit),
        )

    auto_t_ = t is None
    t0 = auto_t(f, sings, tol) if auto_t_ else float(t)
    return _schedule(run, t0, auto_t_)


def verify_corollary1(f, a=None, b=None, t=None, tol=Tolerances(), seed=DEFAULT_SEED):
    """Total count n - 1 + 2l, inside [n+1, 3n-3]."""
    if not f.is_holomorphic():
        raise InputError("total count check needs a holomorphic f")
    n = f.degree
    if n < 2:
        raise InputError(f"degree {n} < 2")
    sings = singularities(f, tol=tol)
    ell = len(sings)
    a, b, seed, auto = _resolve_ab(f, a, b, seed, tol, sings)
    expected = n - 1 + 2 * ell

    def run(tt):
        rep = analyze(Deformation.linear(f, a, b, tt), tol=tol, sings=sings)
        cnt = rep.count
        ok = cnt == expected and n + 1 <= cnt <= 3 * n - 3 and rep.excellent
        return Verdict(
            "corollary1", expected, cnt, ok,
            details={"n": n, "ell": ell, "interval": [n + 1, 3 * n - 3], "a": a, "b": b,
                     "seed": seed, "auto_ab": auto, "excellent": rep.excellent,
                     "multiplicities": [s.multiplicity for s in sings]},
            report=rep,
        )

    auto_t_ = t is None
    t0 = auto_t(f, sings, tol) if auto_t_ else float(t)
    return _schedule(run, t0, auto_t_)


def verify_theorem2(sd, region=None, tol=Tolerances()):
    """Cusp count of f + t(a+ib)zbar + s g equals the count at s = 0."""
    if sd.t == 0:
        raise InputError("stability check needs t != 0")
    sings = singularities(sd.base, tol=tol)
    rep0 = analyze(sd.inner, region, tol, sings)
    rep_s = rep0 if sd.s == 0 else analyze(sd, region, tol, sings)
    ok = rep0.count == rep_s.count and rep0.excellent and rep_s.excellent
    return Verdict(
        "theorem2", rep0.count, rep_s.count, ok,
        details={"t": sd.t, "s": sd.s, "excellent_s0": rep0.excellent,
                 "excellent_s": rep_s.excellent, "t_used": sd.t},
        report=rep_s,
    )


def verify_theorem3(f, h, t=None, radius=None, tol=Tolerances()):
    """Local cusp count of f + t h near 0 is at least k - delta."""
    delta = delta_of(h)
    k = multiplicity_at_origin(f)
    if k < 2:
        raise MultiplicityTooSmall(f"origin multiplicity k={k}; need k >= 2")
    sings = singularities(f, tol=tol)
    idx = min(range(len(sings)), key=lambda i: abs(sings[i].point))
    if radius is None:
        radius = local_radius(sings, idx)
    bound = k - delta
    origin = Singularity(0j, k - 1)

    def run(tt):
        d = Deformation.general(f, h, tt)
        info = {"k": k, "delta": delta, "bound": bound, "radius": radius}
        try:
            cusps, spur, wit, rad = _local_analysis(d, origin, radius, tol)
        except IndeterminateCluster as exc:
            return Verdict("theorem3", (bound, None), None, False, "inapplicable",
                           details={**info, "reason": str(exc)})
        simple = all(r.classification in (RootClass.POSITIVE, RootClass.NEGATIVE) for r in cusps)
        rep = CuspReport(d, SearchRegion.square(0, rad), cusps, spur, not wit,
                         [LocalCount(0j, k - 1, rad, len(cusps))], wit)
        info.update(excellent=not wit, simple_cusps=simple, radius=rad)
        if wit or not simple:
            return Verdict("theorem3", (bound, None), len(cusps), False, "inapplicable",
                           details=info, report=rep)
        return Verdict("theorem3", (bound, None), len(cusps), len(cusps) >= bound,
                       details=info, report=rep)

    auto_t_ = t is None
    t0 = auto_t(f, sings, tol) if auto_t_ else float(t)
    return _schedule(run, t0, auto_t_)


def example1_positions(n, a, b, t):
    """Closed-form cusp positions of z^n + t(a+ib) zbar."""
    if n < 2:
        raise InputError("n must be at least 2")
    if not t > 0:
        raise InputError("t must be positive")
    if a == 0 and b == 0:
        raise InputError("(a, b) must be nonzero")
    tau = math.hypot(a, b)
    iota = math.atan2(b, a)
    r = (t * tau / n) ** (1.0 / (n - 1))
    return [r * complex(math.cos(th), math.sin(th))
            for th in ((iota + 2 * j * math.pi) / (n + 1) for j in range(n + 1))]
