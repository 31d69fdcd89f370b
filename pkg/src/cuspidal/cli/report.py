"""JSON and CSV serialization of run results."""
import io
import json
from importlib import resources

import numpy as np

SCHEMA_VERSION = "1"


def load_schema():
    with resources.files("cuspidal.schema").joinpath("report.schema.json").open("r") as fh:
        return json.load(fh)


def jsonable(x):
    """Recursively convert to plain JSON types (complex -> [re, im])."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if x is None or isinstance(x, str):
        return x
    return str(x)


def root_row(r):
    return {"re": float(r.center.real), "im": float(r.center.imag),
            "ms": r.degree, "class": r.classification.value}


def verdict_dict(v):
    exp = v.expected
    return {
        "claim": v.claim,
        "expected": list(exp) if isinstance(exp, tuple) else exp,
        "observed": v.observed,
        "pass": bool(v.passed),
        "status": v.status,
        "details": jsonable(v.details),
    }


def build(command, config, seed, verdicts=(), cusps=(), spurious=(), excellent=None, t_used=None):
    return {
        "version": SCHEMA_VERSION,
        "command": command,
        "config_echo": jsonable(config),
        "verdicts": [verdict_dict(v) for v in verdicts],
        "cusps": [root_row(r) for r in cusps],
        "spurious": [root_row(r) for r in spurious],
        "excellent": excellent,
        "t_used": None if t_used is None else float(t_used),
        "seed": int(seed),
    }


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def csv_text(rows):
    """``re,im,ms,class`` with 17 significant digits (lossless doubles)."""
    out = io.StringIO()
    out.write("re,im,ms,class\n")
    for r in rows:
        ms = "" if r["ms"] is None else str(r["ms"])
        out.write(f"{r['re']:.17g},{r['im']:.17g},{ms},{r['class']}\n")
    return out.getvalue()
