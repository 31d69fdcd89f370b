#!/usr/bin/env python3
"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 64 20000]

The numba timings exclude the first (compiling) call.  Each row also
reports the largest disagreement between the two paths.  Small batches
are what the quadtree and the contour sampler issue, so both sizes are
shown by default.
"""
import argparse
import time

import numpy as np

from cuspidal import _kernels
from cuspidal.jets import Deformation, cusp_poly, jacobian, realize
from cuspidal.mixedpoly import MixedPolynomial


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, nargs="+", default=[64, 20000])
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1

    rng = np.random.default_rng(args.seed)
    f = MixedPolynomial.holomorphic([1.0, 0.3, -0.2, 0.0, 0.5, 0.1, 1.0])
    g = cusp_poly(realize(Deformation.linear(f, 1.0, 0.4, 1e-2)))
    P, Q, C = g.arrays()

    J = jacobian(realize(Deformation.linear(f, 1.0, 0.4, 1e-2)))
    xs = np.linspace(-1, 1, args.grid)
    Z = (xs[None, :] + 1j * xs[:, None]).ravel()
    F = _kernels.eval_mixed(*J.arrays(), Z)[0].real.reshape(args.grid, args.grid)

    cases = {
        "taylor_shift": lambda nb: _kernels.taylor_shift(P, Q, C, 0.3 - 0.2j, use_numba=nb),
        "marching_squares": lambda nb: _kernels.marching_squares(F, use_numba=nb),
    }
    for npts in args.points:
        z = rng.uniform(-1, 1, npts) + 1j * rng.uniform(-1, 1, npts)
        radii = rng.uniform(1e-4, 1e-1, npts)
        cases[f"eval_mixed/{npts}"] = (
            lambda nb, z=z: _kernels.eval_mixed(P, Q, C, z, use_numba=nb)[0])
        cases[f"taylor_bounds/{npts}"] = (
            lambda nb, z=z, radii=radii: _kernels.taylor_bounds(P, Q, C, z, radii, use_numba=nb))

    print(f"G has {len(C)} terms, degree {int((P + Q).max())}; grid {args.grid}")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, fn in cases.items():
        fn(True)  # compile
        t_np, r_np = _time(lambda: fn(False), args.repeat)
        t_nb, r_nb = _time(lambda: fn(True), args.repeat)
        if r_np.shape != r_nb.shape:
            diff = float("nan")
        else:
            scale = max(float(np.abs(r_np).max()), 1e-300)
            diff = float(np.abs(r_np - r_nb).max()) / scale
        print(f"{name:<22}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}{diff:>15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
