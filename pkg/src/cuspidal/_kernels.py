"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and the environment
variable ``CUSPIDAL_DISABLE_NUMBA`` is unset (or ``0``).  Both paths accumulate
terms in the same order, so results agree to rounding.

Polynomials enter as three parallel arrays ``P, Q, C`` (exponent of z,
exponent of zbar, complex coefficient).
"""
import os
import warnings

import numpy as np

_flag = os.environ.get("CUSPIDAL_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLED
if not HAVE_NUMBA and not _DISABLED:  # pragma: no cover
    warnings.warn("numba not importable; using the numpy kernels")

UNIT_ROUNDOFF = 2.0 ** -53

# columns of the taylor_bounds result
B_VAL, B_TAIL, B_DZ, B_DZ_TAIL, B_DZB, B_DZB_TAIL, B_ERR0, B_ERR1 = range(8)


# ---------------------------------------------------------------- evaluation

def _eval_loop(P, Q, C, z):
    n = z.shape[0]
    m = C.shape[0]
    maxp = 0
    maxq = 0
    for k in range(m):
        if P[k] > maxp:
            maxp = P[k]
        if Q[k] > maxq:
            maxq = Q[k]
    vals = np.zeros(n, dtype=np.complex128)
    absum = np.zeros(n, dtype=np.float64)
    zp = np.empty(maxp + 1, dtype=np.complex128)
    zq = np.empty(maxq + 1, dtype=np.complex128)
    rp = np.empty(maxp + maxq + 1, dtype=np.float64)
    A = np.abs(C)
    for i in range(n):
        w = z[i]
        wb = w.conjugate()
        r = abs(w)
        zp[0] = 1.0
        for p in range(1, maxp + 1):
            zp[p] = zp[p - 1] * w
        zq[0] = 1.0
        for q in range(1, maxq + 1):
            zq[q] = zq[q - 1] * wb
        rp[0] = 1.0
        for e in range(1, maxp + maxq + 1):
            rp[e] = rp[e - 1] * r
        acc = 0j
        sa = 0.0
        for k in range(m):
            acc += C[k] * zp[P[k]] * zq[Q[k]]
            sa += A[k] * rp[P[k] + Q[k]]
        vals[i] = acc
        absum[i] = sa
    return vals, absum


def _eval_numpy(P, Q, C, z):
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    maxp = int(P.max()) if P.size else 0
    maxq = int(Q.max()) if Q.size else 0
    zp = np.empty((maxp + 1, n), dtype=np.complex128)
    zq = np.empty((maxq + 1, n), dtype=np.complex128)
    zp[0] = 1.0
    zq[0] = 1.0
    zb = z.conj()
    for p in range(1, maxp + 1):
        zp[p] = zp[p - 1] * z
    for q in range(1, maxq + 1):
        zq[q] = zq[q - 1] * zb
    r = np.abs(z)
    rp = np.empty((maxp + maxq + 1, n))
    rp[0] = 1.0
    for e in range(1, maxp + maxq + 1):
        rp[e] = rp[e - 1] * r
    A = np.abs(C)
    vals = np.zeros(n, dtype=np.complex128)
    absum = np.zeros(n, dtype=np.float64)
    for k in range(C.shape[0]):
        vals += C[k] * zp[P[k]] * zq[Q[k]]
        absum += A[k] * rp[P[k] + Q[k]]
    return vals, absum


# ----------------------------------------------------- local taylor bounds

def _binomials(n):
    B = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        B[i, 0] = 1.0
        for j in range(1, i + 1):
            B[i, j] = B[i - 1, j - 1] + B[i - 1, j]
    return B


def _bounds_loop(P, Q, C, centers, radii, binom):
    n = centers.shape[0]
    m = C.shape[0]
    maxp = 0
    maxq = 0
    for k in range(m):
        if P[k] > maxp:
            maxp = P[k]
        if Q[k] > maxq:
            maxq = Q[k]
    deg = 0
    for k in range(m):
        if P[k] + Q[k] > deg:
            deg = P[k] + Q[k]
    gamma = 4.0 * (deg + 2) * 1.1102230246251565e-16
    out = np.zeros((n, 8))
    sh = np.zeros((maxp + 1, maxq + 1), dtype=np.complex128)
    cp = np.empty(maxp + 1, dtype=np.complex128)
    cq = np.empty(maxq + 1, dtype=np.complex128)
    for s in range(n):
        c = centers[s]
        rho = radii[s]
        cb = c.conjugate()
        cp[0] = 1.0
        for p in range(1, maxp + 1):
            cp[p] = cp[p - 1] * c
        cq[0] = 1.0
        for q in range(1, maxq + 1):
            cq[q] = cq[q - 1] * cb
        for i in range(maxp + 1):
            for j in range(maxq + 1):
                sh[i, j] = 0j
        big = abs(c) + rho
        e0 = 0.0
        e1 = 0.0
        for k in range(m):
            p = P[k]
            q = Q[k]
            ck = C[k]
            for i in range(p + 1):
                bi = binom[p, i] * ck * cp[p - i]
                for j in range(q + 1):
                    sh[i, j] += bi * binom[q, j] * cq[q - j]
            e0 += abs(ck) * big ** (p + q)
            if p + q > 0:
                e1 += (p + q) * abs(ck) * big ** (p + q - 1)
        tail = 0.0
        tz = 0.0
        tzb = 0.0
        for i in range(maxp + 1):
            for j in range(maxq + 1):
                a = abs(sh[i, j])
                if a == 0.0:
                    continue
                if i + j > 0:
                    tail += a * rho ** (i + j)
                if i >= 1 and not (i == 1 and j == 0):
                    tz += i * a * rho ** (i - 1 + j)
                if j >= 1 and not (i == 0 and j == 1):
                    tzb += j * a * rho ** (i + j - 1)
        out[s, 0] = abs(sh[0, 0])
        out[s, 1] = tail
        out[s, 2] = abs(sh[1, 0]) if maxp >= 1 else 0.0
        out[s, 3] = tz
        out[s, 4] = abs(sh[0, 1]) if maxq >= 1 else 0.0
        out[s, 5] = tzb
        out[s, 6] = gamma * e0
        out[s, 7] = gamma * e1
    return out


def _bounds_numpy(P, Q, C, centers, radii, binom):
    centers = np.asarray(centers, dtype=np.complex128)
    radii = np.asarray(radii, dtype=np.float64)
    n = centers.shape[0]
    maxp = int(P.max()) if P.size else 0
    maxq = int(Q.max()) if Q.size else 0
    deg = int((P + Q).max()) if P.size else 0
    gamma = 4.0 * (deg + 2) * UNIT_ROUNDOFF
    cp = np.empty((maxp + 1, n), dtype=np.complex128)
    cq = np.empty((maxq + 1, n), dtype=np.complex128)
    cp[0] = 1.0
    cq[0] = 1.0
    cb = centers.conj()
    for p in range(1, maxp + 1):
        cp[p] = cp[p - 1] * centers
    for q in range(1, maxq + 1):
        cq[q] = cq[q - 1] * cb
    sh = np.zeros((maxp + 1, maxq + 1, n), dtype=np.complex128)
    big = np.abs(centers) + radii
    e0 = np.zeros(n)
    e1 = np.zeros(n)
    for k in range(C.shape[0]):
        p, q, ck = int(P[k]), int(Q[k]), C[k]
        for i in range(p + 1):
            bi = binom[p, i] * ck * cp[p - i]
            for j in range(q + 1):
                sh[i, j] += bi * binom[q, j] * cq[q - j]
        e0 += abs(ck) * big ** (p + q)
        if p + q > 0:
            e1 += (p + q) * abs(ck) * big ** (p + q - 1)
    a = np.abs(sh)
    ii = np.arange(maxp + 1)[:, None, None]
    jj = np.arange(maxq + 1)[None, :, None]
    rho = radii[None, None, :]
    with np.errstate(invalid="ignore"):
        pw = rho ** (ii + jj)
        tail = np.where(ii + jj > 0, a * pw, 0.0).sum(axis=(0, 1))
        mz = (ii >= 1) & ~((ii == 1) & (jj == 0))
        tz = np.where(mz, ii * a * rho ** np.maximum(ii - 1 + jj, 0), 0.0).sum(axis=(0, 1))
        mzb = (jj >= 1) & ~((ii == 0) & (jj == 1))
        tzb = np.where(mzb, jj * a * rho ** np.maximum(ii + jj - 1, 0), 0.0).sum(axis=(0, 1))
    out = np.zeros((n, 8))
    out[:, 0] = a[0, 0]
    out[:, 1] = tail
    out[:, 2] = a[1, 0] if maxp >= 1 else 0.0
    out[:, 3] = tz
    out[:, 4] = a[0, 1] if maxq >= 1 else 0.0
    out[:, 5] = tzb
    out[:, 6] = gamma * e0
    out[:, 7] = gamma * e1
    return out


def _shift_loop(P, Q, C, c, binom):
    maxp = 0
    maxq = 0
    for k in range(C.shape[0]):
        if P[k] > maxp:
            maxp = P[k]
        if Q[k] > maxq:
            maxq = Q[k]
    sh = np.zeros((maxp + 1, maxq + 1), dtype=np.complex128)
    cb = c.conjugate()
    cp = np.empty(maxp + 1, dtype=np.complex128)
    cq = np.empty(maxq + 1, dtype=np.complex128)
    cp[0] = 1.0
    cq[0] = 1.0
    for p in range(1, maxp + 1):
        cp[p] = cp[p - 1] * c
    for q in range(1, maxq + 1):
        cq[q] = cq[q - 1] * cb
    for k in range(C.shape[0]):
        p = P[k]
        q = Q[k]
        for i in range(p + 1):
            bi = binom[p, i] * C[k] * cp[p - i]
            for j in range(q + 1):
                sh[i, j] += bi * binom[q, j] * cq[q - j]
    return sh


def _shift_numpy(P, Q, C, c, binom):
    c = complex(c)
    maxp = int(P.max()) if P.size else 0
    maxq = int(Q.max()) if Q.size else 0
    sh = np.zeros((maxp + 1, maxq + 1), dtype=np.complex128)
    cp = np.empty(maxp + 1, dtype=np.complex128)
    cq = np.empty(maxq + 1, dtype=np.complex128)
    cp[0] = cq[0] = 1.0
    for p in range(1, maxp + 1):
        cp[p] = cp[p - 1] * c
    for q in range(1, maxq + 1):
        cq[q] = cq[q - 1] * c.conjugate()
    for k in range(C.shape[0]):
        p, q = int(P[k]), int(Q[k])
        bi = binom[p, : p + 1] * C[k] * cp[p::-1]
        bj = binom[q, : q + 1] * cq[q::-1]
        sh[: p + 1, : q + 1] += bi[:, None] * bj[None, :]
    return sh


# --------------------------------------------------------- marching squares

# (edge_a, edge_b) pairs per case; edges 0 bottom, 1 right, 2 top, 3 left.
# saddles 5 and 10 carry both resolutions: rows [case] for the "center
# outside" reading, rows [16 + case] for "center inside".
_MS_TABLE = np.full((32, 2, 2), -1, dtype=np.int64)
for _case, _segs in {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
    5: [(3, 0), (1, 2)], 6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)],
    9: [(0, 2)], 10: [(0, 1), (2, 3)], 11: [(1, 2)], 12: [(1, 3)],
    13: [(0, 1)], 14: [(3, 0)],
}.items():
    for _k, _s in enumerate(_segs):
        _MS_TABLE[_case, _k] = _s
_MS_TABLE[16 + 5] = [(0, 1), (2, 3)]
_MS_TABLE[16 + 10] = [(3, 0), (1, 2)]


def _ms_loop(F, table):
    ny, nx = F.shape
    out = np.empty((2 * (ny - 1) * (nx - 1), 4))
    cnt = 0
    ex = np.empty(4)
    ey = np.empty(4)
    for i in range(ny - 1):
        for j in range(nx - 1):
            v0 = F[i, j]
            v1 = F[i, j + 1]
            v2 = F[i + 1, j + 1]
            v3 = F[i + 1, j]
            case = 0
            if v0 > 0:
                case |= 1
            if v1 > 0:
                case |= 2
            if v2 > 0:
                case |= 4
            if v3 > 0:
                case |= 8
            if case == 0 or case == 15:
                continue
            if case == 5 or case == 10:
                if 0.25 * (v0 + v1 + v2 + v3) > 0:
                    case += 16
            ex[0] = j + v0 / (v0 - v1) if v0 != v1 else j + 0.5
            ey[0] = i
            ex[1] = j + 1
            ey[1] = i + v1 / (v1 - v2) if v1 != v2 else i + 0.5
            ex[2] = j + v3 / (v3 - v2) if v3 != v2 else j + 0.5
            ey[2] = i + 1
            ex[3] = j
            ey[3] = i + v0 / (v0 - v3) if v0 != v3 else i + 0.5
            for k in range(2):
                ea = table[case, k, 0]
                if ea < 0:
                    break
                eb = table[case, k, 1]
                out[cnt, 0] = ex[ea]
                out[cnt, 1] = ey[ea]
                out[cnt, 2] = ex[eb]
                out[cnt, 3] = ey[eb]
                cnt += 1
    return out[:cnt]


def _ms_numpy(F, table):
    F = np.asarray(F, dtype=np.float64)
    ny, nx = F.shape
    v0 = F[:-1, :-1]
    v1 = F[:-1, 1:]
    v2 = F[1:, 1:]
    v3 = F[1:, :-1]
    case = ((v0 > 0) * 1 | (v1 > 0) * 2 | (v2 > 0) * 4 | (v3 > 0) * 8).astype(np.int64)
    saddle = (case == 5) | (case == 10)
    case = np.where(saddle & (0.25 * (v0 + v1 + v2 + v3) > 0), case + 16, case)
    I, Jc = np.meshgrid(np.arange(ny - 1), np.arange(nx - 1), indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        ex = np.stack([
            np.where(v0 != v1, Jc + v0 / (v0 - v1), Jc + 0.5),
            Jc + 1.0,
            np.where(v3 != v2, Jc + v3 / (v3 - v2), Jc + 0.5),
            Jc * 1.0,
        ])
        ey = np.stack([
            I * 1.0,
            np.where(v1 != v2, I + v1 / (v1 - v2), I + 0.5),
            I + 1.0,
            np.where(v0 != v3, I + v0 / (v0 - v3), I + 0.5),
        ])
    flat = case.ravel()
    exf = ex.reshape(4, -1)
    eyf = ey.reshape(4, -1)
    cells = np.arange(flat.size)
    keys = []
    segs = []
    for k in range(2):
        ea = table[flat, k, 0]
        eb = table[flat, k, 1]
        ok = ea >= 0
        c = cells[ok]
        a, b = ea[ok], eb[ok]
        segs.append(np.stack([exf[a, c], eyf[a, c], exf[b, c], eyf[b, c]], axis=1))
        keys.append(c * 2 + k)
    keys = np.concatenate(keys)
    segs = np.concatenate(segs)
    return segs[np.argsort(keys, kind="stable")]


# ------------------------------------------------------------------ dispatch

_BINOM = _binomials(64)

NUMPY_IMPL = {
    "eval": _eval_numpy,
    "bounds": _bounds_numpy,
    "shift": _shift_numpy,
    "marching_squares": _ms_numpy,
}

if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    NUMBA_IMPL = {
        "eval": _jit(_eval_loop),
        "bounds": _jit(_bounds_loop),
        "shift": _jit(_shift_loop),
        "marching_squares": _jit(_ms_loop),
    }
else:  # pragma: no cover
    NUMBA_IMPL = {}


def _impl(name, use_numba=None):
    if use_numba is None:
        use_numba = USE_NUMBA
    return (NUMBA_IMPL if use_numba else NUMPY_IMPL)[name]


def _binom_for(deg):
    if deg < _BINOM.shape[0]:
        return _BINOM
    return _binomials(deg + 1)


def eval_mixed(P, Q, C, z, use_numba=None):
    """Values and absolute term sums sum |c| |z|^(p+q) at each point of ``z``."""
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    if C.shape[0] == 0:
        return np.zeros(z.shape[0], dtype=np.complex128), np.zeros(z.shape[0])
    return _impl("eval", use_numba)(P, Q, C, z)


def taylor_bounds(P, Q, C, centers, radii, use_numba=None):
    """Per-disk bounds from the Taylor expansion about each center.

    Columns (see ``B_*``): |g(c)|, tail of |g(c+u) - g(c)| over |u| <= rho,
    |g_z(c)| and its tail, |g_zbar(c)| and its tail, rounding bound for the
    value, rounding bound for the first derivatives.
    """
    centers = np.ascontiguousarray(centers, dtype=np.complex128).ravel()
    radii = np.ascontiguousarray(np.broadcast_to(radii, centers.shape), dtype=np.float64)
    if C.shape[0] == 0:
        return np.zeros((centers.shape[0], 8))
    deg = int((P + Q).max())
    return _impl("bounds", use_numba)(P, Q, C, centers, radii, _binom_for(deg))


def taylor_shift(P, Q, C, c, use_numba=None):
    """Dense coefficient array of g(c + u) in powers u^i ubar^j."""
    if C.shape[0] == 0:
        return np.zeros((1, 1), dtype=np.complex128)
    deg = int(max(P.max(), Q.max()))
    return _impl("shift", use_numba)(P, Q, C, complex(c), _binom_for(deg))


def marching_squares(F, use_numba=None):
    """Zero-level segments of a sampled field, in (column, row) index units."""
    F = np.ascontiguousarray(F, dtype=np.float64)
    if F.shape[0] < 2 or F.shape[1] < 2:
        return np.zeros((0, 4))
    return _impl("marching_squares", use_numba)(F, _MS_TABLE)
