"""Sparse polynomials in z and zbar with Wirtinger calculus.

A :class:`MixedPolynomial` is an immutable finite sum ``sum c[p, q] z^p zbar^q``
with double-precision complex coefficients.  Stored coefficients are never
exactly zero; an epsilon prune is available for post-arithmetic cleanup.

Products accumulate each coefficient with :func:`math.fsum` over the real
partial products, so the result does not depend on term order.  That makes
conjugation symmetry exact: for real-valued inputs the coefficients of a
product satisfy ``c[p, q] == conj(c[q, p])`` bit for bit, and
:func:`is_real_valued` can use exact equality.
"""
import math
from collections import defaultdict
from types import MappingProxyType

import numpy as np

from . import _kernels

MAX_EXPONENT = 2**32 - 1


def _check_point(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite point {z!r}")
    return z


def _order_key(pq):
    return (pq[0] + pq[1], pq[0])


class MixedPolynomial:
    """Immutable sparse mixed polynomial.

    ``terms`` may be a mapping ``{(p, q): c}`` or an iterable of
    ``((p, q), c)`` pairs; repeated exponents are summed.
    """

    __slots__ = ("_terms", "_arrays")

    def __init__(self, terms=(), eps=0.0):
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for (p, q), c in items:
            p, q = _check_exponent(p), _check_exponent(q)
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError(f"non-finite coefficient {c!r} at {(p, q)}")
            acc[(p, q)] = acc.get((p, q), 0j) + c
        cut = eps * max((abs(c) for c in acc.values()), default=0.0) if eps else 0.0
        self._terms = {
            k: acc[k] for k in sorted(acc, key=_order_key)
            if acc[k] != 0 and abs(acc[k]) > cut
        }
        self._arrays = None

    # ----------------------------------------------------------- construct
    @classmethod
    def monomial(cls, p, q, c=1.0):
        return cls({(p, q): c})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def holomorphic(cls, coeffs):
        """Polynomial ``sum coeffs[p] z^p`` (ascending powers)."""
        return cls({(p, 0): c for p, c in enumerate(coeffs)})

    # ----------------------------------------------------------- inspect
    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """Total degree max(p+q); -1 for the zero polynomial."""
        return max((p + q for p, q in self._terms), default=-1)

    def is_holomorphic(self):
        return all(q == 0 for _, q in self._terms)

    def coeff(self, p, q):
        return self._terms.get((p, q), 0j)

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def arrays(self):
        """(P, Q, C) numpy arrays in canonical order, cached."""
        if self._arrays is None:
            keys = list(self._terms)
            P = np.array([k[0] for k in keys], dtype=np.int64)
            Q = np.array([k[1] for k in keys], dtype=np.int64)
            C = np.array([self._terms[k] for k in keys], dtype=np.complex128)
            self._arrays = (P, Q, C)
        return self._arrays

    # ----------------------------------------------------------- dunders
    def __eq__(self, other):
        if isinstance(other, MixedPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, float, complex)):
            return self._terms == MixedPolynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        return f"MixedPolynomial({to_text(self)!r})"

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, scale(_coerce(other), -1.0))

    def __rsub__(self, other):
        return add(_coerce(other), scale(self, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, MixedPolynomial):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = MixedPolynomial.constant(1.0)
        base = self
        while n:
            if n & 1:
                out = mul(out, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return out


def _check_exponent(e):
    if isinstance(e, bool) or not isinstance(e, (int, np.integer)):
        raise TypeError(f"exponent must be an int, got {type(e).__name__}")
    e = int(e)
    if e < 0:
        raise ValueError(f"negative exponent {e}")
    if e > MAX_EXPONENT:
        raise OverflowError(f"exponent {e} exceeds 32-bit range")
    return e


def _coerce(x):
    if isinstance(x, MixedPolynomial):
        return x
    return MixedPolynomial.constant(x)


Z = MixedPolynomial.monomial(1, 0)
ZBAR = MixedPolynomial.monomial(0, 1)
ZERO = MixedPolynomial()
ONE = MixedPolynomial.constant(1.0)


# ------------------------------------------------------------------ algebra

def add(g, h, eps=0.0):
    terms = dict(g._terms)
    for k, c in h._terms.items():
        terms[k] = terms.get(k, 0j) + c
    return MixedPolynomial(terms, eps=eps)


def scale(g, c, eps=0.0):
    c = complex(c)
    if c.imag == 0.0:
        r = c.real
        return MixedPolynomial({k: complex(v.real * r, v.imag * r) for k, v in g._terms.items()}, eps=eps)
    return MixedPolynomial({k: v * c for k, v in g._terms.items()}, eps=eps)


def mul(g, h, eps=0.0):
    re = defaultdict(list)
    im = defaultdict(list)
    for (p1, q1), a in g._terms.items():
        for (p2, q2), b in h._terms.items():
            k = (p1 + p2, q1 + q2)
            if k[0] > MAX_EXPONENT or k[1] > MAX_EXPONENT:
                raise OverflowError(f"product exponent {k} exceeds 32-bit range")
            re[k] += (a.real * b.real, -(a.imag * b.imag))
            im[k] += (a.real * b.imag, a.imag * b.real)
    return MixedPolynomial(
        {k: complex(math.fsum(re[k]), math.fsum(im[k])) for k in re}, eps=eps
    )


def conjugate(g):
    return MixedPolynomial({(q, p): c.conjugate() for (p, q), c in g._terms.items()})


def d_dz(g):
    return MixedPolynomial({(p - 1, q): p * c for (p, q), c in g._terms.items() if p > 0})


def d_dzbar(g):
    return MixedPolynomial({(p, q - 1): q * c for (p, q), c in g._terms.items() if q > 0})


def real_part(g):
    """Re g as a real-valued mixed polynomial, (g + conj g) / 2."""
    return scale(add(g, conjugate(g)), 0.5)


def imag_part(g):
    """Im g as a real-valued mixed polynomial, (g - conj g) / 2i."""
    return scale(add(g, scale(conjugate(g), -1.0)), -0.5j)


def prune(g, eps, relative=True):
    """Drop coefficients with magnitude at most ``eps`` (times max |c| if relative)."""
    cut = eps * g.max_abs_coeff() if relative else eps
    return MixedPolynomial({k: c for k, c in g._terms.items() if abs(c) > cut})


def is_real_valued(g):
    t = g._terms
    for (p, q), c in t.items():
        if t.get((q, p)) != c.conjugate():
            return False
    return True


def shift(g, w):
    """The polynomial u -> g(w + u), expanded in u and ubar."""
    w = _check_point(w)
    if g.is_zero():
        return g
    if w == 0:
        return g
    sh = _kernels.taylor_shift(*g.arrays(), w)
    nz = np.nonzero(sh)
    return MixedPolynomial({(int(i), int(j)): complex(sh[i, j]) for i, j in zip(*nz)})


# --------------------------------------------------------------- evaluation

def evaluate(g, z):
    """g(z, zbar) with powers formed by repeated multiplication."""
    z = _check_point(z)
    if not g._terms:
        return 0j
    maxp = max(p for p, _ in g._terms)
    maxq = max(q for _, q in g._terms)
    zp = [1 + 0j]
    for _ in range(maxp):
        zp.append(zp[-1] * z)
    zb = z.conjugate()
    zq = [1 + 0j]
    for _ in range(maxq):
        zq.append(zq[-1] * zb)
    acc = 0j
    for (p, q), c in g._terms.items():
        acc += c * zp[p] * zq[q]
    return acc


def evaluate_many(g, zs):
    """Vectorized evaluation; returns (values, absolute term sums)."""
    return _kernels.eval_mixed(*g.arrays(), zs)


def abs_eval(g, z):
    """sum |c| |z|^(p+q): the scale against which g(z) is judged."""
    r = abs(_check_point(z))
    return math.fsum(abs(c) * r ** (p + q) for (p, q), c in g._terms.items())


# ------------------------------------------------------------ serialization

def _fmt(x):
    return repr(float(x))


def to_text(g):
    """Canonical text form ``(re,im)*z^p*zbar^q + ...``; ``0`` for zero."""
    if not g._terms:
        return "0"
    return " + ".join(
        f"({_fmt(c.real)},{_fmt(c.imag)})*z^{p}*zbar^{q}" for (p, q), c in g._terms.items()
    )


def pretty(g, digits=6):
    """Compact human-readable form, lossy."""
    if not g._terms:
        return "0"
    parts = []
    for (p, q), c in g._terms.items():
        if c.imag == 0:
            cs = f"{c.real:.{digits}g}"
        elif c.real == 0:
            cs = f"{c.imag:.{digits}g}i"
        else:
            cs = f"({c.real:.{digits}g}{c.imag:+.{digits}g}i)"
        zs = "" if p == 0 else ("z" if p == 1 else f"z^{p}")
        zbs = "" if q == 0 else ("zbar" if q == 1 else f"zbar^{q}")
        mono = "*".join(x for x in (zs, zbs) if x)
        if mono and cs in ("1", "1.0"):
            parts.append(mono)
        elif mono:
            parts.append(f"{cs}*{mono}")
        else:
            parts.append(cs)
    return " + ".join(parts)
