"""Recursive-descent parser for mixed polynomial expressions.

Grammar (whitespace-insensitive)::

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff? ('*'? atom)*
    atom  := 'z' ('^' uint)? | 'zbar' ('^' uint)? | 'i' | '(' expr ')' | cplx
    cplx  := '(' signed ',' signed ')'        -- exact complex literal
    coeff := decimal

``cplx`` is what :func:`cuspidal.mixedpoly.to_text` emits, so text output
parses back to the identical polynomial.
"""
import re

from ..errors import ParseError
from ..mixedpoly import MAX_EXPONENT, MixedPolynomial, add, mul, scale

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_]+)
  | (?P<op>[-+*^(),])
    """,
    re.VERBOSE,
)

_ATOM_START = ("z", "zbar", "i", "(")


class _Tok:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind, self.text, self.offset = kind, text, offset

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.offset}"


def _tokenize(src):
    toks = []
    pos = 0
    raw = src.encode("utf-8")
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", _byte(src, pos),
                             ("number", "z", "zbar", "i", "(", "+", "-", "*", "^"))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), _byte(src, pos)))
        pos = m.end()
    toks.append(_Tok("end", "", len(raw)))
    return toks


def _byte(src, pos):
    return len(src[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.k = 0

    @property
    def tok(self):
        return self.toks[self.k]

    def peek(self, n=1):
        return self.toks[min(self.k + n, len(self.toks) - 1)]

    def is_op(self, text, tok=None):
        tok = tok or self.tok
        return tok.kind == "op" and tok.text == text

    def expect_op(self, text):
        if not self.is_op(text):
            self.fail((text,))
        self.k += 1

    def fail(self, expected, message=None):
        t = self.tok
        what = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(message or f"unexpected {what}", t.offset, expected)

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def expr(self):
        sign = 1.0
        if self.is_op("-") or self.is_op("+"):
            sign = -1.0 if self.tok.text == "-" else 1.0
            self.k += 1
        acc = scale(self.term(), sign)
        while self.is_op("+") or self.is_op("-"):
            sign = -1.0 if self.tok.text == "-" else 1.0
            self.k += 1
            acc = add(acc, scale(self.term(), sign))
        return acc

    def _starts_atom(self):
        t = self.tok
        return (t.kind == "ident" and t.text in ("z", "zbar", "i")) or self.is_op("(")

    # term := coeff? ('*'? atom)*
    def term(self):
        acc = MixedPolynomial.constant(1.0)
        got = False
        if self.tok.kind == "num":
            acc = MixedPolynomial.constant(float(self.tok.text))
            self.k += 1
            got = True
        while True:
            if self.is_op("*"):
                self.k += 1
                if not self._starts_atom():
                    self.fail(_ATOM_START)
            elif not self._starts_atom():
                break
            acc = mul(acc, self.atom())
            got = True
        if not got:
            self.fail(("number",) + _ATOM_START)
        return acc

    def atom(self):
        t = self.tok
        if t.kind == "ident":
            if t.text == "i":
                self.k += 1
                return MixedPolynomial.constant(1j)
            if t.text in ("z", "zbar"):
                self.k += 1
                e = self.exponent()
                return MixedPolynomial.monomial(e, 0) if t.text == "z" else MixedPolynomial.monomial(0, e)
            self.fail(_ATOM_START, f"unknown name {t.text!r}")
        if self.is_op("("):
            lit = self.complex_literal()
            if lit is not None:
                return lit
            self.k += 1
            inner = self.expr()
            self.expect_op(")")
            return inner
        self.fail(_ATOM_START)

    def exponent(self):
        if not self.is_op("^"):
            return 1
        self.k += 1
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            self.fail(("uint",))
        self.k += 1
        e = int(t.text)
        if e > MAX_EXPONENT:
            raise ParseError(f"exponent {t.text} too large", t.offset, ("uint",))
        return e

    def complex_literal(self):
        # '(' ['-'|'+'] num ',' ['-'|'+'] num ')'; returns None if not one
        j = self.k + 1
        vals = []
        for closer in (",", ")"):
            sgn = 1.0
            t = self.toks[j]
            if t.kind == "op" and t.text in "+-":
                sgn = -1.0 if t.text == "-" else 1.0
                j += 1
                t = self.toks[j]
            if t.kind != "num":
                return None
            vals.append(sgn * float(t.text))
            j += 1
            if not self.is_op(closer, self.toks[j]):
                return None
            j += 1
        self.k = j
        return MixedPolynomial.constant(complex(vals[0], vals[1]))


def parse_poly(src):
    """Parse an expression into a :class:`MixedPolynomial`."""
    if not isinstance(src, str):
        raise TypeError("expression must be a string")
    if not src.strip():
        raise ParseError("empty expression", 0, ("number",) + _ATOM_START)
    p = _Parser(src)
    out = p.expr()
    if p.tok.kind != "end":
        p.fail(("+", "-", "*") + _ATOM_START)
    return out
