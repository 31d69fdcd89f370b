"""Zero isolation for mixed polynomials by quadtree subdivision.

Every box is tested against the Taylor expansion of g about its center,
over the circumscribed disk D(c, rho):

* exclusion: ``|g(c)| - err > tail(rho)`` means g has no zero in the box;
* injectivity: ``| |g_z(c)| - |g_zbar(c)| | > tail_z + tail_zbar + err``
  means the real derivative of g stays within a ball of invertible linear
  maps over D, so g is injective there and has at most one zero, which is
  simple with sign ``sign(|g_z| - |g_zbar|)``.  A chord iteration then
  finds it (or shows it lies outside the box).

Boxes that pass neither test are split.  Boxes whose values are at the
rounding level, or that reach ``max_depth``, are pooled; connected pools
become clusters whose degree is measured on an enlarged bounding box.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from ._kernels import (
    B_DZ,
    B_DZ_TAIL,
    B_DZB,
    B_DZB_TAIL,
    B_ERR0,
    B_ERR1,
    B_TAIL,
    B_VAL,
    UNIT_ROUNDOFF,
)
from .degree import Contour, RootClass, winding_number
from .errors import BoundaryZero, Diverged, InputError, ModulusTooSmall, NonConvergent
from .mixedpoly import d_dz, d_dzbar

MAX_BOXES = 400_000
# deterministic jitter applied to cluster margins when a contour hits a zero
JITTER = (0.0, 1 / 1000, -1 / 1000, 1 / 500, -1 / 500, 1 / 250, -1 / 250, 1 / 125)


@dataclass(frozen=True)
class SearchRegion:
    lo: complex
    hi: complex
    max_depth: int = 40
    refine_tol: float = 1e-10

    def __post_init__(self):
        lo, hi = complex(self.lo), complex(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (lo.real < hi.real and lo.imag < hi.imag):
            raise InputError(f"search region {lo} .. {hi} has empty interior")
        if not (0 <= self.max_depth <= 60):
            raise InputError("max_depth must lie in [0, 60]")
        if not self.refine_tol > 0:
            raise InputError("refine_tol must be positive")

    @classmethod
    def square(cls, center, half_width, **kw):
        c = complex(center)
        h = complex(half_width, half_width)
        return cls(c - h, c + h, **kw)

    @property
    def center(self):
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self):
        return self.hi.real - self.lo.real

    @property
    def height(self):
        return self.hi.imag - self.lo.imag

    def contains(self, z, slack=0.0):
        z = complex(z)
        return (self.lo.real - slack <= z.real <= self.hi.real + slack
                and self.lo.imag - slack <= z.imag <= self.hi.imag + slack)

    def boundary(self, **kw):
        return Contour.box(self.lo, self.hi, **kw)


@dataclass(frozen=True)
class CertifiedRoot:
    box: SearchRegion
    center: complex
    degree: Optional[int]
    classification: RootClass

    @property
    def ms(self):
        return self.degree

    @property
    def is_cluster(self):
        return self.classification is RootClass.INDETERMINATE


# ------------------------------------------------------------------ helpers

def _solve(a, b, r):
    """v with a v + b conj(v) = r (the real 2x2 system in Wirtinger form)."""
    return (np.conj(a) * r - b * np.conj(r)) / (np.abs(a) ** 2 - np.abs(b) ** 2)


class _Evaluator:
    def __init__(self, g, use_numba):
        self.g = g
        self.arr = g.arrays()
        self.arr_z = d_dz(g).arrays()
        self.arr_zb = d_dzbar(g).arrays()
        self.use_numba = use_numba

    def val(self, z):
        return _kernels.eval_mixed(*self.arr, z, self.use_numba)

    def jet(self, z):
        v, s = self.val(z)
        a, _ = _kernels.eval_mixed(*self.arr_z, z, self.use_numba)
        b, _ = _kernels.eval_mixed(*self.arr_zb, z, self.use_numba)
        return v, s, a, b

    def bounds(self, c, rho):
        return _kernels.taylor_bounds(*self.arr, c, rho, self.use_numba)


def _newton(ev, z, iters=12):
    """Vectorized full Newton polish; returns (z, |g(z)|, abs term sum)."""
    z = np.array(z, dtype=np.complex128)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(iters):
        if not active.any():
            break
        za = z[active]
        v, _, a, b = ev.jet(za)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = _solve(a, b, v)
        finite = np.isfinite(step)
        step = np.where(finite, step, 0)
        z[active] = za - step
        tiny = np.abs(step) <= 4 * UNIT_ROUNDOFF * np.maximum(np.abs(za), 1e-300)
        idx = np.flatnonzero(active)
        active[idx[tiny | ~finite | (v == 0)]] = False
    v, s = ev.val(z)
    return z, np.abs(v), s


def _chord(ev, c, rho, iters=200):
    """Chord iteration z <- z - A^{-1} g(z), A the derivative at c.

    Returns (z, status) with status 1 when converged inside the disk
    D(c, rho), 0 when it escaped, -1 when undecided.
    """
    v0, _, a0, b0 = ev.jet(c)
    z = c.copy()
    status = np.full(c.shape, -1, dtype=np.int64)
    active = np.ones(c.shape, dtype=bool)
    r = v0
    for _ in range(iters):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        step = _solve(a0[idx], b0[idx], r)
        z[idx] -= step
        out = np.abs(z[idx] - c[idx]) > rho[idx] * (1 + 1e-9)
        conv = np.abs(step) <= 1e-7 * rho[idx]
        status[idx[out]] = 0
        status[idx[conv & ~out]] = 1
        active[idx[out | conv]] = False
        if active.any():
            r, _ = ev.val(z[active])
    return z, status


# --------------------------------------------------------------- isolation

def isolate_roots(g, region, exclude=(), within=None, max_boxes=MAX_BOXES, use_numba=None):
    """All zeros of ``g`` in ``region`` as certified roots or clusters.

    ``exclude`` is a sequence of ``(center, radius)`` disks; boxes inside
    one are skipped and roots found in one are dropped.  ``within`` is an
    optional ``(center, radius)`` disk; boxes missing it are skipped (roots
    just outside it may still be reported).
    """
    if g.is_zero():
        raise InputError("cannot isolate zeros of the zero polynomial")
    ev = _Evaluator(g, use_numba)
    ex_c = np.array([complex(c) for c, _ in exclude], dtype=np.complex128)
    ex_r = np.array([float(r) for _, r in exclude], dtype=np.float64)

    lo = np.array([region.lo])
    hi = np.array([region.hi])
    roots = []  # (z, sign, c, rho, width)
    pool_lo, pool_hi = [], []
    processed = 0
    depth = 0
    while lo.size:
        processed += lo.size
        if processed > max_boxes:
            raise NonConvergent(f"root isolation exceeded {max_boxes} boxes")
        if ex_c.size:
            inside = _boxes_inside_disks(lo, hi, ex_c, ex_r)
            lo, hi = lo[~inside], hi[~inside]
        if within is not None:
            wc, wr = complex(within[0]), float(within[1])
            nx = np.clip(wc.real, lo.real, hi.real)
            ny = np.clip(wc.imag, lo.imag, hi.imag)
            hit = np.abs(nx + 1j * ny - wc) <= wr * (1 + 1e-9)
            lo, hi = lo[hit], hi[hit]
        if not lo.size:
            break
        c = 0.5 * (lo + hi)
        rho = 0.5 * np.abs(hi - lo)
        b = ev.bounds(c, rho)
        excl = b[:, B_VAL] - b[:, B_ERR0] > b[:, B_TAIL]
        noise = ~excl & (b[:, B_VAL] <= 2 * b[:, B_ERR0]) & (b[:, B_TAIL] <= 4 * b[:, B_ERR0])
        margin = np.abs(b[:, B_DZ] - b[:, B_DZB]) - (b[:, B_DZ_TAIL] + b[:, B_DZB_TAIL]) - 2 * b[:, B_ERR1]
        inj = ~excl & ~noise & (margin > 0)

        settled = excl | noise
        if inj.any():
            ii = np.flatnonzero(inj)
            zc, status = _chord(ev, c[ii], rho[ii])
            conv = status == 1
            if conv.any():
                jj = ii[conv]
                zs, _, _ = _newton(ev, zc[conv])
                slack = 1e-9 * (hi[jj].real - lo[jj].real)
                inbox = (
                    (zs.real >= lo[jj].real - slack) & (zs.real <= hi[jj].real + slack)
                    & (zs.imag >= lo[jj].imag - slack) & (zs.imag <= hi[jj].imag + slack)
                )
                indisk = np.abs(zs - c[jj]) <= rho[jj] * (1 + 1e-9)
                sign = np.where(b[jj, B_DZ] > b[jj, B_DZB], 1, -1)
                for k in np.flatnonzero(inbox & indisk):
                    j = jj[k]
                    roots.append((complex(zs[k]), int(sign[k]), complex(c[j]), float(rho[j]),
                                  float(hi[j].real - lo[j].real)))
                settled[jj[indisk]] = True
        for k in np.flatnonzero(noise):
            pool_lo.append(lo[k])
            pool_hi.append(hi[k])

        rest = np.flatnonzero(~settled)
        if depth >= region.max_depth:
            pool_lo.extend(lo[rest])
            pool_hi.extend(hi[rest])
            break
        lo, hi = _split(lo[rest], hi[rest])
        depth += 1

    return _assemble(ev, region, roots, np.array(pool_lo, dtype=np.complex128),
                     np.array(pool_hi, dtype=np.complex128), ex_c, ex_r)


def _boxes_inside_disks(lo, hi, ex_c, ex_r):
    corners = np.stack([lo, hi, lo.real + 1j * hi.imag, hi.real + 1j * lo.imag], axis=1)
    d = np.abs(corners[:, :, None] - ex_c[None, None, :])
    return np.any(np.all(d <= ex_r[None, None, :], axis=1), axis=1)


def _split(lo, hi):
    m = 0.5 * (lo + hi)
    x0, x1, xm = lo.real, hi.real, m.real
    y0, y1, ym = lo.imag, hi.imag, m.imag
    nlo = np.concatenate([x0 + 1j * y0, xm + 1j * y0, x0 + 1j * ym, xm + 1j * ym])
    nhi = np.concatenate([xm + 1j * ym, x1 + 1j * ym, xm + 1j * y1, x1 + 1j * y1])
    return nlo, nhi


def _components(lo, hi):
    """Connected components of closed boxes (touching counts)."""
    n = lo.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        touch = (
            (lo.real <= hi[i].real) & (hi.real >= lo[i].real)
            & (lo.imag <= hi[i].imag) & (hi.imag >= lo[i].imag)
        )
        for j in np.flatnonzero(touch[i + 1:]) + i + 1:
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(v) for _, v in sorted(groups.items())]


def _overlap(a_lo, a_hi, b_lo, b_hi):
    return (a_lo.real <= b_hi.real and b_lo.real <= a_hi.real
            and a_lo.imag <= b_hi.imag and b_lo.imag <= a_hi.imag)


def _assemble(ev, region, roots, pool_lo, pool_hi, ex_c, ex_r):
    g = ev.g
    # deduplicate roots found by two neighbouring closed boxes
    roots.sort(key=lambda r: (r[0].real, r[0].imag))
    uniq = []
    for r in roots:
        if any(abs(r[0] - u[0]) <= 1e-9 * max(r[4], u[4]) + 1e-14 * abs(r[0]) for u in uniq):
            continue
        uniq.append(r)

    clusters = []
    if pool_lo.size:
        comps = []
        for idx in _components(pool_lo, pool_hi):
            blo = complex(pool_lo[idx].real.min(), pool_lo[idx].imag.min())
            bhi = complex(pool_hi[idx].real.max(), pool_hi[idx].imag.max())
            wmin = float((pool_hi[idx].real - pool_lo[idx].real).min())
            comps.append([blo, bhi, wmin])
        clusters = _grow_clusters(comps)

    out = []
    taken = [False] * len(uniq)
    for blo, bhi, wmin in clusters:
        ext = max(bhi.real - blo.real, bhi.imag - blo.imag, wmin)
        deg, elo, ehi = None, None, None
        for j in JITTER:
            m = ext * (1 + j)
            elo, ehi = blo - complex(m, m), bhi + complex(m, m)
            try:
                deg = winding_number(g, Contour.box(elo, ehi), ev.use_numba).degree
                break
            except ModulusTooSmall:
                continue
        else:
            raise BoundaryZero(
                f"no zero-free enlargement around cluster [{blo}, {bhi}] after {len(JITTER)} attempts"
            )
        for k, r in enumerate(uniq):
            if not taken[k] and elo.real <= r[0].real <= ehi.real and elo.imag <= r[0].imag <= ehi.imag:
                taken[k] = True
        center = 0.5 * (blo + bhi)
        if ex_c.size and np.any(np.abs(center - ex_c) <= ex_r):
            continue
        box = SearchRegion(elo, ehi, region.max_depth, region.refine_tol)
        out.append(CertifiedRoot(box, center, deg, RootClass.INDETERMINATE))

    kept = [r for k, r in enumerate(uniq) if not taken[k]]
    if ex_c.size:
        kept = [r for r in kept if not np.any(np.abs(r[0] - ex_c) <= ex_r)]
    zs = [r[0] for r in kept]
    for k, (z, sign, c, rho, _w) in enumerate(kept):
        h = (rho - abs(z - c)) / (2 * math.sqrt(2))
        others = [abs(z - w) for i, w in enumerate(zs) if i != k]
        if others:
            h = min(h, 0.3 * min(others))
        h = max(h, 1e-12 * max(abs(z), rho))
        box = SearchRegion(z - complex(h, h), z + complex(h, h), region.max_depth, region.refine_tol)
        cls = RootClass.POSITIVE if sign > 0 else RootClass.NEGATIVE
        out.append(CertifiedRoot(box, z, sign, cls))

    out.sort(key=lambda r: (r.center.real, r.center.imag))
    return out


def _grow_clusters(comps):
    """Merge components whose enlarged boxes overlap."""
    changed = True
    while changed:
        changed = False
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                a, b = comps[i], comps[j]
                ma = max(a[1].real - a[0].real, a[1].imag - a[0].imag, a[2]) * 1.01
                mb = max(b[1].real - b[0].real, b[1].imag - b[0].imag, b[2]) * 1.01
                if _overlap(a[0] - complex(ma, ma), a[1] + complex(ma, ma),
                            b[0] - complex(mb, mb), b[1] + complex(mb, mb)):
                    comps[i] = [
                        complex(min(a[0].real, b[0].real), min(a[0].imag, b[0].imag)),
                        complex(max(a[1].real, b[1].real), max(a[1].imag, b[1].imag)),
                        min(a[2], b[2]),
                    ]
                    del comps[j]
                    changed = True
                    break
            if changed:
                break
    comps.sort(key=lambda c: (c[0].real, c[0].imag))
    return comps


# --------------------------------------------------------------- refinement

def refine_root(g, seed, tol, box=None, use_numba=None):
    """Newton's method on the real 2x2 system, then box shrinking if needed.

    The real Jacobian [[Re(g_z+g_zb), -Im(g_z-g_zb)], [Im(g_z+g_zb), Re(g_z-g_zb)]]
    is applied in its complex form ``a v + b conj(v)``.
    """
    ev = _Evaluator(g, use_numba)
    z = complex(seed)
    for _ in range(50):
        v, _, a, b = (x[0] for x in ev.jet(np.array([z])))
        if v == 0:
            return z
        det = abs(a) ** 2 - abs(b) ** 2
        if det == 0 or not math.isfinite(det):
            break
        step = (a.conjugate() * v - b * v.conjugate()) / det
        z -= step
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            break
        if abs(step) <= 4 * UNIT_ROUNDOFF * abs(z):
            break
    if math.isfinite(z.real) and math.isfinite(z.imag) and abs(ev.val(np.array([z]))[0][0]) <= tol:
        return z
    return _shrink(ev, complex(seed), tol, box)


def _shrink(ev, seed, tol, box):
    if box is None:
        h = 1e-3 * (1 + abs(seed))
        lo, hi = seed - complex(h, h), seed + complex(h, h)
    else:
        lo, hi = complex(box.lo), complex(box.hi)
    g = ev.g
    try:
        deg = winding_number(g, Contour.box(lo, hi), ev.use_numba).degree
    except (ModulusTooSmall, NonConvergent) as exc:
        raise Diverged(f"cannot bracket a root near {seed}") from exc
    if deg == 0:
        raise Diverged(f"no root with nonzero degree near {seed}")
    for _ in range(200):
        c = 0.5 * (lo + hi)
        v, _ = ev.val(np.array([c]))
        if abs(v[0]) <= tol or (hi - lo).real < 4 * UNIT_ROUNDOFF * max(abs(c), 1e-300):
            return c
        clo, chi = _split(np.array([lo]), np.array([hi]))
        for k in range(4):
            try:
                d = winding_number(g, Contour.box(clo[k], chi[k]), ev.use_numba).degree
            except ModulusTooSmall as exc:
                if exc.point is not None and abs(ev.val(np.array([exc.point]))[0][0]) <= tol:
                    return complex(exc.point)
                continue
            if d != 0:
                lo, hi = complex(clo[k]), complex(chi[k])
                break
        else:
            raise Diverged(f"box shrinking lost the root near {seed}")
    raise Diverged(f"refinement budget exhausted near {seed}")
