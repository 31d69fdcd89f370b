"""``cuspidal`` command line.

Exit codes: 0 success, 1 a verdict failed, 2 bad input, 3 numerical
breakdown.
"""
import argparse
import math
import os
import sys

from ..analysis import (
    DEFAULT_SEED,
    Tolerances,
    analyze,
    auto_ab,
    auto_t,
    example1_positions,
    genericity_scan,
    singularities,
    verify_corollary1,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    Verdict,
)
from ..errors import InputError, NumericError
from ..jets import Deformation, SecondDeformation
from ..locator import SearchRegion
from ..mixedpoly import MixedPolynomial
from . import report as rpt
from .parser import parse_poly
from .svg import DEFAULT_GRID, render_svg

__all__ = ["main", "parse_poly", "render_svg", "run"]

COMMANDS = ("analyze", "theorem1", "corollary1", "theorem2", "theorem3", "example1", "genericity")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _region(text):
    try:
        x0, y0, x1, y1 = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("region must be x0,y0,x1,y1") from exc
    return (x0, y0, x1, y1)


def _tol_pair(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("tolerance must be KEY=VAL")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _default_seed():
    env = os.environ.get("CUSPIDAL_SEED")
    if env is None or not env.strip():
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError:
        raise InputError(f"CUSPIDAL_SEED={env!r} is not an integer") from None


def build_parser():
    p = _Parser(prog="cuspidal", description="Count and certify cusps of deformed complex polynomials.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--poly", help="complex polynomial f, e.g. 'z^3 + z'")
        s.add_argument("--a", type=float)
        s.add_argument("--b", type=float)
        s.add_argument("--t", type=float)
        s.add_argument("--s", type=float)
        s.add_argument("--n", type=int)
        s.add_argument("--g", help="second deformation term (theorem2)")
        s.add_argument("--h", help="general deformation term (theorem3)")
        s.add_argument("--radius", type=float)
        s.add_argument("--region", type=_region, help="x0,y0,x1,y1")
        s.add_argument("--seed", type=int)
        s.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="KEY=VAL")
        s.add_argument("--json", metavar="PATH|-")
        s.add_argument("--csv", metavar="PATH")
        s.add_argument("--svg", metavar="PATH")
        s.add_argument("--grid", type=int, default=DEFAULT_GRID)
        s.add_argument("--auto-ab", action="store_true")
    return p


# ----------------------------------------------------------------- helpers

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.command} requires " + ", ".join("--" + m for m in missing))


def _holo(args):
    _need(args, "poly")
    f = parse_poly(args.poly)
    if not f.is_holomorphic():
        raise InputError("--poly must be a complex polynomial in z only")
    return f


def _ab(args, f, seed, tol, warn):
    """Explicit (a, b) skips the genericity gate; otherwise pick one."""
    if args.auto_ab or (args.a is None and args.b is None):
        if args.a is not None or args.b is not None:
            raise InputError("--auto-ab conflicts with --a/--b")
        a, b, used = auto_ab(f, seed, tol)
        return a, b, used
    a = args.a if args.a is not None else 0.0
    b = args.b if args.b is not None else 0.0
    warn("explicit --a/--b: genericity gate skipped")
    return a, b, seed


def _search_region(args, tol):
    if args.region is None:
        return None
    x0, y0, x1, y1 = args.region
    return SearchRegion(complex(x0, y0), complex(x1, y1), tol.max_depth, tol.refine_tol)


def _echo(args, seed, tol):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("tol",)}
    cfg["tol"] = {k: v for k, v in sorted(vars(tol).items())}
    cfg["seed"] = seed
    if cfg.get("region") is not None:
        cfg["region"] = list(cfg["region"])
    return cfg


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ----------------------------------------------------------------- commands

def run(args, warn=None):
    """Execute parsed arguments; returns (exit code, document, report)."""
    warn = warn or (lambda msg: print(f"cuspidal: warning: {msg}", file=sys.stderr))
    seed = args.seed if args.seed is not None else _default_seed()
    tol = Tolerances().with_overrides(dict(args.tol))
    if args.grid < 2:
        raise InputError("--grid must be at least 2")
    cmd = args.command
    verdicts, rep, excellent, t_used = [], None, None, None
    cusps = spurious = ()

    if cmd == "analyze":
        f = _holo(args)
        a, b, seed = _ab(args, f, seed, tol, warn)
        region = _search_region(args, tol)
        t = args.t if args.t is not None else auto_t(f, tol=tol)
        if t == 0:
            raise InputError("--t must be nonzero")
        d = Deformation.linear(f, a, b, t)
        if args.s is not None or args.g is not None:
            _need(args, "g", "s")
            d = SecondDeformation(d, parse_poly(args.g), args.s)
        rep = analyze(d, region, tol)
        excellent, t_used = rep.excellent, t
        verdicts.append(Verdict("excellent", 1, int(rep.excellent), rep.excellent,
                                details={"witnesses": rep.witnesses, "a": a, "b": b,
                                         "count": rep.count,
                                         "per_singularity": [[p.point, p.multiplicity, p.cusps]
                                                             for p in rep.per_singularity]}))
    elif cmd == "theorem1":
        f = _holo(args)
        a, b, seed = _ab(args, f, seed, tol, warn)
        v = verify_theorem1(f, a, b, args.t, args.radius, tol, seed)
        verdicts.append(v)
        rep, t_used = v.report, v.details.get("t_used")
        excellent = v.details.get("excellent")
    elif cmd == "corollary1":
        f = _holo(args)
        a, b, seed = _ab(args, f, seed, tol, warn)
        v = verify_corollary1(f, a, b, args.t, tol, seed)
        verdicts.append(v)
        rep, t_used = v.report, v.details.get("t_used")
        excellent = v.details.get("excellent")
    elif cmd == "theorem2":
        f = _holo(args)
        _need(args, "g")
        a, b, seed = _ab(args, f, seed, tol, warn)
        t = args.t if args.t is not None else auto_t(f, tol=tol)
        s = args.s if args.s is not None else 0.0
        sd = SecondDeformation(Deformation.linear(f, a, b, t), parse_poly(args.g), s)
        v = verify_theorem2(sd, _search_region(args, tol), tol)
        verdicts.append(v)
        rep, t_used = v.report, t
        excellent = v.details["excellent_s0"] and v.details["excellent_s"]
    elif cmd == "theorem3":
        f = _holo(args)
        _need(args, "h")
        v = verify_theorem3(f, parse_poly(args.h), args.t, args.radius, tol)
        verdicts.append(v)
        rep, t_used = v.report, v.details.get("t_used")
        excellent = v.details.get("excellent")
    elif cmd == "example1":
        _need(args, "n", "a", "b", "t")
        n = args.n
        f = MixedPolynomial.monomial(n, 0)
        pos = example1_positions(n, args.a, args.b, args.t)
        rep = analyze(Deformation.linear(f, args.a, args.b, args.t), _search_region(args, tol), tol)
        dev = max((min(abs(c.center - p) for p in pos) for c in rep.cusps), default=math.inf)
        ok = rep.count == n + 1 and dev <= 1e-8
        verdicts.append(Verdict("example1", n + 1, rep.count, ok,
                                details={"closed_form": pos, "max_deviation": dev if rep.cusps else None}))
        excellent, t_used = rep.excellent, args.t
    elif cmd == "genericity":
        f = _holo(args)
        if args.auto_ab:
            a, b, seed = _ab(args, f, seed, tol, warn)
        else:
            _need(args, "a", "b")
            a, b = args.a, args.b
        res = genericity_scan(f, a, b, args.radius, tol=tol)
        verdicts.append(Verdict("genericity", 0, len(res.witnesses), res.ok,
                                details={"a": a, "b": b, "heuristic": True,
                                         "points_checked": res.points_checked,
                                         "witnesses": res.witnesses,
                                         "singularities": [[s.point, s.multiplicity]
                                                           for s in singularities(f, tol=tol)]}))
    if rep is not None:
        cusps, spurious = rep.cusps, rep.spurious_G_zeros

    doc = rpt.build(cmd, _echo(args, seed, tol), seed, verdicts, cusps, spurious, excellent, t_used)
    code = EXIT_OK
    if any(not v.passed for v in verdicts):
        code = EXIT_FAIL
    return code, doc, rep


def _summary(doc):
    lines = [f"{doc['command']}: seed={doc['seed']} t_used={doc['t_used']}"]
    for v in doc["verdicts"]:
        exp = v["expected"]
        if isinstance(exp, list):
            exp = f">= {exp[0]}"
        lines.append(f"  {v['claim']}: {v['status']} (expected {exp}, observed {v['observed']})")
    lines.append(f"  cusps: {len(doc['cusps'])}, other G-zeros: {len(doc['spurious'])}, "
                 f"excellent: {doc['excellent']}")
    for r in doc["cusps"]:
        lines.append(f"    {r['re']:.12g} {r['im']:+.12g}i  ms={r['ms']} {r['class']}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        code, doc, rep = run(args)
    except InputError as exc:
        print(f"cuspidal: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"cuspidal: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        if args.json:
            _write(args.json, rpt.dumps(doc))
        if args.csv:
            _write(args.csv, rpt.csv_text(doc["cusps"]))
        if args.svg:
            if rep is None:
                raise InputError(f"--svg is not available for {args.command}")
            _write(args.svg, render_svg(rep, grid=args.grid, title=args.command))
    except InputError as exc:
        print(f"cuspidal: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"cuspidal: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not (args.json == "-" or args.csv == "-" or args.svg == "-"):
        sys.stdout.write(_summary(doc))
    return code
