"""Mapping degree of g/|g| along closed contours, and root classification.

The winding number is accumulated from wrapped phase differences between
consecutive samples.  A segment is accepted only when (a) the phase turn
across it is at most ``max_step_turn`` and (b) a Taylor bound about the
segment midpoint shows |g| stays away from zero on the whole segment.  (b)
makes the count immune to a pair of zeros slipping between two samples.
"""
import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels
from ._kernels import B_ERR0, B_TAIL, B_VAL
from .errors import EqualModuli, ModulusTooSmall, NonConvergent, NotARoot
from .mixedpoly import d_dz, d_dzbar, evaluate

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"circle radius must be positive, got {self.radius}")

    @property
    def length(self):
        return 2 * math.pi * self.radius

    def points(self, s):
        return self.center + self.radius * np.exp(1j * (np.asarray(s) / self.radius))

    def breakpoints(self):
        return ()


@dataclass(frozen=True)
class BoxBoundary:
    lo: complex
    hi: complex

    def __post_init__(self):
        lo, hi = complex(self.lo), complex(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (lo.real < hi.real and lo.imag < hi.imag):
            raise ValueError(f"degenerate box {lo} .. {hi}")

    @property
    def width(self):
        return self.hi.real - self.lo.real

    @property
    def height(self):
        return self.hi.imag - self.lo.imag

    @property
    def length(self):
        return 2 * (self.width + self.height)

    def breakpoints(self):
        w, h = self.width, self.height
        return (w, w + h, 2 * w + h)

    def points(self, s):
        # counterclockwise from lo, parametrized by arc length
        s = np.asarray(s, dtype=np.float64)
        w, h = self.width, self.height
        x0, y0, x1, y1 = self.lo.real, self.lo.imag, self.hi.real, self.hi.imag
        x = np.select(
            [s <= w, s <= w + h, s <= 2 * w + h],
            [x0 + s, x1 + 0 * s, x1 - (s - w - h)],
            default=x0 + 0 * s,
        )
        y = np.select(
            [s <= w, s <= w + h, s <= 2 * w + h],
            [y0 + 0 * s, y0 + (s - w), y1 + 0 * s],
            default=y1 - (s - 2 * w - h),
        )
        return x + 1j * y


@dataclass(frozen=True)
class Contour:
    """A closed curve plus the sampling policy used along it.

    ``min_modulus`` is an absolute floor.  Samples are also rejected when
    |g| falls below ``relative_floor`` times the absolute term sum at the
    sample; left as None this is a small multiple of the rounding bound
    for a polynomial of g's degree, which stays meaningful at any scale.
    """

    shape: Union[Circle, BoxBoundary]
    min_modulus: float = 0.0
    max_step_turn: float = math.pi / 2
    relative_floor: Optional[float] = None
    max_samples: int = DEFAULT_BUDGET
    initial_samples: int = 64

    def __post_init__(self):
        if not (0 < self.max_step_turn < math.pi):
            raise ValueError("max_step_turn must lie in (0, pi)")
        if self.min_modulus < 0:
            raise ValueError("min_modulus must be non-negative")

    @classmethod
    def circle(cls, center, radius, **kw):
        return cls(Circle(complex(center), float(radius)), **kw)

    @classmethod
    def box(cls, lo, hi, **kw):
        return cls(BoxBoundary(complex(lo), complex(hi)), **kw)


@dataclass(frozen=True)
class DegreeResult:
    degree: int
    min_modulus_seen: float
    samples_used: int


def _scale_of(shape):
    if isinstance(shape, Circle):
        return abs(shape.center) + shape.radius
    return max(abs(shape.lo), abs(shape.hi))


def winding_number(g, c, use_numba=None):
    """Degree of g/|g| along ``c`` traversed counterclockwise."""
    if g.is_zero():
        raise ValueError("winding number of the zero polynomial is undefined")
    P, Q, C = g.arrays()
    shape = c.shape
    L = shape.length
    min_seg = 1e-13 * max(_scale_of(shape), L)

    n0 = max(int(c.initial_samples), 8)
    s = np.unique(np.concatenate([np.linspace(0.0, L, n0 + 1), shape.breakpoints()]))
    z = shape.points(s)
    vals, absum = _kernels.eval_mixed(P, Q, C, z, use_numba)
    rel = c.relative_floor
    if rel is None:
        rel = 8 * 4 * (g.degree + 2) * _kernels.UNIT_ROUNDOFF
    _check_floor(c, rel, z, vals, absum)
    used = len(s)
    min_seen = float(np.min(np.abs(vals)))

    # pending segments: parallel arrays of endpoints
    s0, s1 = s[:-1], s[1:]
    v0, v1 = vals[:-1], vals[1:]
    total = 0.0
    while s0.size:
        sm = 0.5 * (s0 + s1)
        zm = shape.points(sm)
        half = 0.5 * (s1 - s0)
        b = _kernels.taylor_bounds(P, Q, C, zm, half, use_numba)
        turn = np.abs(np.angle(v1 / v0))
        ok = (turn <= c.max_step_turn) & (b[:, B_TAIL] + b[:, B_ERR0] < b[:, B_VAL])
        total += float(np.sum(np.angle(v1[ok] / v0[ok])))
        bad = ~ok
        if not bad.any():
            break
        if np.any(half[bad] * 2 < min_seg):
            k = int(np.argmax(bad & (half * 2 < min_seg)))
            raise ModulusTooSmall("contour passes through (or too near) a zero", complex(zm[k]))
        sm, zm_b = sm[bad], zm[bad]
        vm, am = _kernels.eval_mixed(P, Q, C, zm_b, use_numba)
        _check_floor(c, rel, zm_b, vm, am)
        used += sm.size
        if used > c.max_samples:
            raise NonConvergent(f"winding number needed more than {c.max_samples} samples")
        min_seen = min(min_seen, float(np.min(np.abs(vm))))
        s0 = np.concatenate([s0[bad], sm])
        s1 = np.concatenate([sm, s1[bad]])
        v0 = np.concatenate([v0[bad], vm])
        v1 = np.concatenate([vm, v1[bad]])

    w = total / (2 * math.pi)
    deg = int(round(w))
    if abs(w - deg) >= 0.25:
        raise NonConvergent(f"winding residue {w - deg:.3g} too large")
    return DegreeResult(deg, min_seen, used)


def _check_floor(c, rel, z, vals, absum):
    mod = np.abs(vals)
    floor = np.maximum(c.min_modulus, rel * absum)
    bad = mod <= floor
    if bad.any():
        k = int(np.argmax(bad))
        raise ModulusTooSmall(
            f"|g| = {mod[k]:.3g} below floor {floor[k]:.3g} on contour", complex(z[k])
        )


# ---------------------------------------------------------------- classes

class RootClass(str, enum.Enum):
    POSITIVE = "PositiveSimple"
    NEGATIVE = "NegativeSimple"
    INDETERMINATE = "Indeterminate"

    def __str__(self):
        return self.value

    @property
    def sign(self):
        return {"PositiveSimple": 1, "NegativeSimple": -1}.get(self.value, 0)


def classify_root(g, alpha, tol, margin=0.0):
    """Sign of the simple root ``alpha`` from |g_z| versus |g_zbar|.

    ``margin`` adds a relative dead band: the derivative moduli must differ
    by more than ``tol + margin * (|g_z| + |g_zbar|)``.
    """
    alpha = complex(alpha)
    val = abs(evaluate(g, alpha))
    if val > tol:
        raise NotARoot(f"|g(alpha)| = {val:.3g} exceeds tol {tol:.3g}")
    a = abs(evaluate(d_dz(g), alpha))
    b = abs(evaluate(d_dzbar(g), alpha))
    band = tol + margin * (a + b)
    if a > b + band:
        return RootClass.POSITIVE
    if b > a + band:
        return RootClass.NEGATIVE
    return RootClass.INDETERMINATE


def delta_of(h, rel_tol=1e-12):
    """+1 when |h_z(0)| > |h_zbar(0)|, -1 when smaller."""
    a = abs(evaluate(d_dz(h), 0))
    b = abs(evaluate(d_dzbar(h), 0))
    if abs(a - b) <= rel_tol * max(a, b) or max(a, b) == 0:
        raise EqualModuli(f"|h_z(0)| = {a:.6g} and |h_zbar(0)| = {b:.6g} coincide")
    return 1 if a > b else -1
