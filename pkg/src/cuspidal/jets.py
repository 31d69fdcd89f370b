"""Deformations of a complex polynomial and the polynomials that detect
their singularities.

For a mixed map g the Jacobian determinant is ``J = |g_z|^2 - |g_zbar|^2``.
The cusp polynomial ``G = G1 + i G2`` packs the two minors
``d(g_i, J)/d(x, y)``; in Wirtinger form ``G = -2i g_z J_zbar + 2i g_zbar J_z``.
The regularity polynomial ``H`` repeats the construction with G in place of
g.  Cusps are the common zeros of J and G; the map is excellent when H does
not vanish there as well.
"""
from dataclasses import dataclass
from typing import Union

from .errors import InputError
from .mixedpoly import (
    ZBAR,
    MixedPolynomial,
    add,
    conjugate,
    d_dz,
    d_dzbar,
    evaluate,
    imag_part,
    mul,
    real_part,
    scale,
)


@dataclass(frozen=True)
class Linear:
    a: float
    b: float

    @property
    def c(self):
        return complex(self.a, self.b)


@dataclass(frozen=True)
class General:
    h: MixedPolynomial


@dataclass(frozen=True)
class Deformation:
    """``f + t(a+ib) zbar`` (Linear) or ``f + t h`` (General)."""

    base: MixedPolynomial
    kind: Union[Linear, General]
    t: float

    def __post_init__(self):
        if not self.base.is_holomorphic():
            raise InputError("base polynomial must be holomorphic (no zbar terms)")
        object.__setattr__(self, "t", float(self.t))
        if isinstance(self.kind, Linear):
            if self.t != 0 and self.kind.a == 0 and self.kind.b == 0:
                raise InputError("linear deformation needs (a, b) != (0, 0) when t != 0")
        elif isinstance(self.kind, General):
            if self.kind.h.coeff(0, 0) != 0:
                raise InputError("deformation term h must satisfy h(0) = 0")
        else:
            raise TypeError(f"unknown deformation kind {self.kind!r}")

    @classmethod
    def linear(cls, f, a, b, t):
        return cls(f, Linear(float(a), float(b)), t)

    @classmethod
    def general(cls, f, h, t):
        return cls(f, General(h), t)

    def with_t(self, t):
        return Deformation(self.base, self.kind, t)

    def term(self):
        """The deformation direction: (a+ib) zbar or h."""
        if isinstance(self.kind, Linear):
            return scale(ZBAR, self.kind.c)
        return self.kind.h


@dataclass(frozen=True)
class SecondDeformation:
    """``f + t(a+ib) zbar + s g`` with g_z(0) = g_zbar(0) = 0."""

    inner: Deformation
    g: MixedPolynomial
    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        if evaluate(d_dz(self.g), 0) != 0 or evaluate(d_dzbar(self.g), 0) != 0:
            raise InputError("second deformation term needs vanishing first derivatives at 0")

    @property
    def base(self):
        return self.inner.base

    @property
    def t(self):
        return self.inner.t

    def with_s(self, s):
        return SecondDeformation(self.inner, self.g, s)


AnyDeformation = Union[Deformation, SecondDeformation]


def realize(d):
    """The mixed polynomial of a deformation."""
    if isinstance(d, SecondDeformation):
        return add(realize(d.inner), scale(d.g, d.s))
    return add(d.base, scale(d.term(), d.t))


# -------------------------------------------------------------- general forms

def jacobian(g):
    """J = |g_z|^2 - |g_zbar|^2, the real Jacobian determinant of g."""
    gz, gzb = d_dz(g), d_dzbar(g)
    return add(mul(gz, conjugate(gz)), scale(mul(gzb, conjugate(gzb)), -1.0))


def _minor_combination(g, J):
    # -2i g_z J_zbar + 2i g_zbar J_z  ==  d(Re g, J)/d(x,y) + i d(Im g, J)/d(x,y)
    return add(
        scale(mul(d_dz(g), d_dzbar(J)), -2j),
        scale(mul(d_dzbar(g), d_dz(J)), 2j),
    )


def cusp_poly(g, J=None):
    """G = G1 + i G2 with G_i the Jacobian minors of (g_i, J)."""
    if J is None:
        J = jacobian(g)
    return _minor_combination(g, J)


def regularity_poly(g, J=None, G=None):
    """H = -2i G_z J_zbar + 2i G_zbar J_z."""
    if J is None:
        J = jacobian(g)
    if G is None:
        G = cusp_poly(g, J)
    return _minor_combination(G, J)


@dataclass(frozen=True)
class CriticalPolys:
    g: MixedPolynomial
    J: MixedPolynomial
    G: MixedPolynomial
    H: MixedPolynomial


def critical_polys(g):
    J = jacobian(g)
    G = cusp_poly(g, J)
    return CriticalPolys(g, J, G, regularity_poly(g, J, G))


# ----------------------------------------------------- linear closed forms

def _require_linear(d):
    if not isinstance(d, Deformation) or not isinstance(d.kind, Linear):
        raise InputError("closed form only applies to linear deformations")


def cusp_poly_linear_closed_form(d):
    """-2i (f')^2 conj(f'') + 2ti(a+ib) f'' conj(f')."""
    _require_linear(d)
    fz = d_dz(d.base)
    fzz = d_dz(fz)
    return add(
        scale(mul(mul(fz, fz), conjugate(fzz)), -2j),
        scale(mul(fzz, conjugate(fz)), 2j * d.t * d.kind.c),
    )


def jacobian_linear_closed_form(d):
    """|f'|^2 - t^2 (a^2 + b^2)."""
    _require_linear(d)
    fz = d_dz(d.base)
    return add(mul(fz, conjugate(fz)), MixedPolynomial.constant(-(d.t**2) * abs(d.kind.c) ** 2))


def regularity_poly_linear_closed_form(d):
    """-4 (f')^2 f'' conj(2 f''^2 - f' f''') + 4t(a+ib) conj(f' f'') (f' f''' - f''^2)."""
    _require_linear(d)
    f1 = d_dz(d.base)
    f2 = d_dz(f1)
    f3 = d_dz(f2)
    inner = add(scale(mul(f2, f2), 2.0), scale(mul(f1, f3), -1.0))
    first = scale(mul(mul(mul(f1, f1), f2), conjugate(inner)), -4.0)
    second = scale(
        mul(conjugate(mul(f1, f2)), add(mul(f1, f3), scale(mul(f2, f2), -1.0))),
        4.0 * d.t * d.kind.c,
    )
    return add(first, second)


# ------------------------------------------------------- genericity polys

def genericity_polys(f):
    """(phi1, phi2, psi) for a holomorphic f.

    phi1 and phi2 are the real polynomials written with the x,y partials of
    Re f, translated through f1_x = Re f', f1_y = -Im f', f1_xy = -Im f'',
    f1_yy = -Re f''.  psi = 3|f''|^4 - f''^2 conj(f' f''') - conj(f'')^2 f' f'''.
    """
    if not f.is_holomorphic():
        raise InputError("genericity polynomials need a holomorphic f")
    f1 = d_dz(f)
    f2 = d_dz(f1)
    f3 = d_dz(f2)

    X = real_part(f1)
    Y = scale(imag_part(f1), -1.0)
    Pxy = scale(imag_part(f2), -1.0)
    Pyy = scale(real_part(f2), -1.0)

    X2, Y2 = mul(X, X), mul(Y, Y)
    A = add(scale(X2, -3.0), Y2)           # -3 X^2 + Y^2
    B = add(scale(X2, -1.0), scale(Y2, 3.0))  # -X^2 + 3 Y^2
    D = add(mul(Pyy, Pyy), scale(mul(Pxy, Pxy), -1.0))
    PP = mul(Pxy, Pyy)

    phi1 = add(mul(mul(A, Y), D), scale(mul(mul(B, X), PP), 2.0))
    phi2 = add(mul(mul(B, X), D), scale(mul(mul(A, Y), PP), -2.0))

    a2 = mul(f2, conjugate(f2))
    cross = mul(mul(f2, f2), conjugate(mul(f1, f3)))
    psi = add(scale(mul(a2, a2), 3.0), scale(add(cross, conjugate(cross)), -1.0))
    return phi1, phi2, psi


def capital_phi(phi1, phi2, a, b):
    return add(scale(phi1, float(a)), scale(phi2, float(b)))


def multiplicity_at_origin(f):
    """Order of vanishing of a holomorphic f at 0 (f(0) must be 0)."""
    if f.is_zero():
        raise InputError("multiplicity of the zero polynomial is undefined")
    if not f.is_holomorphic():
        raise InputError("multiplicity_at_origin needs a holomorphic polynomial")
    if f.coeff(0, 0) != 0:
        raise InputError("f(0) must be 0")
    return min(p for (p, _), _c in f)
