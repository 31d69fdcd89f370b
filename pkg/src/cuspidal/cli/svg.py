"""SVG picture of the critical curve J = 0 with cusps and singular points."""
import math
from xml.sax.saxutils import escape

import numpy as np

from .. import _kernels
from ..jets import jacobian, realize
from ..mixedpoly import evaluate_many

DEFAULT_GRID = 512


def _view(report, pad=0.6):
    """Square window framing the features, or the report region if none."""
    pts = [r.center for r in report.cusps] + [r.center for r in report.spurious_G_zeros]
    pts += [p.point for p in report.per_singularity]
    if not pts:
        reg = report.region
        return reg.lo.real, reg.lo.imag, reg.hi.real, reg.hi.imag
    xs = [p.real for p in pts]
    ys = [p.imag for p in pts]
    cx, cy = 0.5 * (min(xs) + max(xs)), 0.5 * (min(ys) + max(ys))
    half = 0.5 * max(max(xs) - min(xs), max(ys) - min(ys))
    half = max(half * (1 + pad), 1e-6 * max(1.0, abs(cx), abs(cy)))
    if half == 0 or not math.isfinite(half):
        half = 1.0
    return cx - half, cy - half, cx + half, cy + half


def _f(x):
    return f"{x:.3f}"


def render_svg(report, canvas=(640, 640), grid=DEFAULT_GRID, view=None, title=None):
    """Return the SVG document as a string (byte-identical for equal input)."""
    W, H = canvas
    plot = min(W, H) - 120
    ox, oy = 60, 40
    x0, y0, x1, y1 = view or _view(report)

    def to_px(z):
        return (ox + (z.real - x0) / (x1 - x0) * plot, oy + (y1 - z.imag) / (y1 - y0) * plot)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{ox}" y="{oy}" width="{plot}" height="{plot}" fill="none" stroke="#888" stroke-width="1"/>',
    ]
    # axis labels at the window corners
    out.append(f'<text x="{ox}" y="{oy + plot + 16}" font-size="11" font-family="monospace">{x0:.4g}</text>')
    out.append(f'<text x="{ox + plot}" y="{oy + plot + 16}" font-size="11" font-family="monospace" '
               f'text-anchor="end">{x1:.4g}</text>')
    out.append(f'<text x="{ox - 4}" y="{oy + plot}" font-size="11" font-family="monospace" '
               f'text-anchor="end">{y0:.4g}</text>')
    out.append(f'<text x="{ox - 4}" y="{oy + 10}" font-size="11" font-family="monospace" '
               f'text-anchor="end">{y1:.4g}</text>')

    d = report.deformation
    J = jacobian(realize(d))
    if grid >= 2 and not J.is_zero():
        xs = np.linspace(x0, x1, grid)
        ys = np.linspace(y0, y1, grid)
        Z = (xs[None, :] + 1j * ys[:, None]).ravel()
        F = evaluate_many(J, Z)[0].real.reshape(grid, grid)
        segs = _kernels.marching_squares(F)
        if len(segs):
            sx = plot / (grid - 1)
            parts = []
            for a, b, c, e in segs:
                parts.append(f"M{_f(ox + a * sx)} {_f(oy + plot - b * sx)}L{_f(ox + c * sx)} {_f(oy + plot - e * sx)}")
            out.append(f'<path d="{"".join(parts)}" fill="none" stroke="#1f5fa8" stroke-width="1"/>')

    for r in report.cusps:
        px, py = to_px(r.center)
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="4" fill="#c0392b"/>')
    for r in report.spurious_G_zeros:
        px, py = to_px(r.center)
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="4" fill="none" stroke="#555" stroke-width="1.2"/>')
    for s in report.per_singularity:
        px, py = to_px(s.point)
        out.append(f'<path d="M{_f(px - 5)} {_f(py - 5)}L{_f(px + 5)} {_f(py + 5)}'
                   f'M{_f(px - 5)} {_f(py + 5)}L{_f(px + 5)} {_f(py - 5)}" stroke="black" stroke-width="1.2"/>')

    # legend
    lx, ly = ox + plot + 8, oy + 10
    legend = [
        f'<g font-size="11" font-family="monospace">',
        f'<line x1="{lx}" y1="{ly}" x2="{lx + 14}" y2="{ly}" stroke="#1f5fa8"/>',
        f'<text x="{lx + 18}" y="{ly + 4}">J=0</text>',
        f'<circle cx="{lx + 7}" cy="{ly + 18}" r="4" fill="#c0392b"/>',
        f'<text x="{lx + 18}" y="{ly + 22}">cusp</text>',
        f'<circle cx="{lx + 7}" cy="{ly + 36}" r="4" fill="none" stroke="#555"/>',
        f'<text x="{lx + 18}" y="{ly + 40}">G=0</text>',
        f'<path d="M{lx + 3} {ly + 50}L{lx + 11} {ly + 58}M{lx + 3} {ly + 58}L{lx + 11} {ly + 50}" stroke="black"/>',
        f'<text x="{lx + 18}" y="{ly + 58}">sing</text>',
        "</g>",
    ]
    out.extend(legend)

    kind = getattr(d, "kind", None) or getattr(getattr(d, "inner", None), "kind", None)
    a = getattr(kind, "a", None)
    b = getattr(kind, "b", None)
    cap = f"t={d.t:.6g}"
    if a is not None:
        cap = f"a={a:.6g} b={b:.6g} " + cap
    if hasattr(d, "s"):
        cap += f" s={d.s:.6g}"
    cap += f"  cusps={len(report.cusps)}"
    out.append(f'<text x="{ox}" y="{H - 20}" font-size="12" font-family="monospace">{escape(cap)}</text>')
    if title:
        out.append(f'<text x="{ox}" y="24" font-size="13" font-family="monospace">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
