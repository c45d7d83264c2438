"""Canonical text format for polynomials.

Printing uses descending lex order, ``^`` for powers and ``*`` between
factors, e.g. ``12*x0*x2 - 12*x0*q0 + 60*x0``.  The parser accepts the same
syntax plus optional ``*`` (juxtaposition), ``**``, parentheses and division
by constants.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .domains import QQ, ZZ, Domain, DomainError
from .mpoly import MPoly, unpack


class ParseError(ValueError):
    pass


def _fmt_scalar(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
    if isinstance(c, int):
        return str(c)
    s = str(c)
    return s if _is_atomic(s) else f"({s})"


def _is_atomic(s: str) -> bool:
    return re.fullmatch(r"-?\d+(/\d+)?", s) is not None or (s.startswith("(") and _balanced_outer(s))


def _balanced_outer(s: str) -> bool:
    depth = 0
    for i, ch in enumerate(s):
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0 and i < len(s) - 1:
            return False
    return True


def _is_negative(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c < 0
    return False


def format_monomial(exps, vars) -> str:
    parts = []
    for v, e in zip(vars, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_poly(p: MPoly, compact: bool = False) -> str:
    if not p.terms:
        return "0"
    n = len(p.vars)
    plus, minus = ("+", "-") if compact else (" + ", " - ")
    out = []
    for i, m in enumerate(sorted(p.terms, reverse=True)):
        c = p.terms[m]
        if p.domain.modulus is not None:
            # residues print in their least nonnegative form
            c = int(c)
        neg = _is_negative(c)
        if neg:
            c = -c
        mono = format_monomial(unpack(m, n), p.vars)
        if not mono:
            body = _fmt_scalar(c)
        elif c == 1 and not hasattr(c, "coords"):
            body = mono
        else:
            body = f"{_fmt_scalar(c)}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((minus if neg else plus) + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(s: str):
    pos = 0
    toks = []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos}: {s[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif ident is not None:
            toks.append(("id", ident))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, vars: tuple[str, ...]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = vars

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse(self) -> MPoly:
        if not self.toks:
            raise ParseError("empty expression")
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input near token {self.peek()[1]!r}")
        return e

    def expr(self) -> MPoly:
        e = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                e = e + t if val == "+" else e - t
            else:
                return e

    def term(self) -> MPoly:
        e = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                e = e * self.unary()
            elif kind == "op" and val == "/":
                self.take()
                d = self.unary()
                if not d.is_constant() or d.is_zero():
                    raise ParseError("division only by nonzero constants")
                e = e.scale(Fraction(1) / Fraction(d.constant_value()))
            elif kind in ("num", "id") or (kind == "op" and val == "("):
                e = e * self.unary()
            else:
                return e

    def unary(self) -> MPoly:
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            u = self.unary()
            return -u if val == "-" else u
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num":
                raise ParseError("exponent must be a nonnegative integer literal")
            return base**v2
        return base

    def atom(self) -> MPoly:
        kind, val = self.take()
        if kind == "num":
            return MPoly.const(val, self.vars, QQ)
        if kind == "id":
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}")
            return MPoly.gen(val, self.vars, QQ)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected token {val!r}")


def _identifiers(text: str) -> list[str]:
    seen: list[str] = []
    for kind, val in _tokenize(text):
        if kind == "id" and val not in seen:
            seen.append(val)
    return seen


def parse_poly(text: str, vars=None, domain: Domain = ZZ, field=None) -> MPoly:
    """Parse ``text``.

    ``vars`` fixes the variable order (inferred by first appearance when
    omitted).  For number-field coefficients pass ``field``; its generator
    name may appear in ``text`` and is folded into the coefficients.
    """
    if field is not None:
        fv = field.var
        if vars is None:
            vars = tuple(v for v in _identifiers(text) if v != fv)
        vars = tuple(vars)
        raw = _Parser(text, vars + (fv,)).parse()
        groups: dict[tuple, dict[int, object]] = {}
        for exps, c in raw.items():
            groups.setdefault(exps[:-1], {})[exps[-1]] = c
        dom = field.domain
        out = {}
        for exps, zc in groups.items():
            deg = max(zc)
            elem = field.from_poly_coeffs([zc.get(i, 0) for i in range(deg + 1)])
            if elem:
                out[exps] = elem
        return MPoly.from_dict(out, vars, dom)
    if vars is None:
        vars = tuple(_identifiers(text))
    vars = tuple(vars)
    p = _Parser(text, vars).parse()
    if domain is QQ:
        return p
    try:
        return p.change_domain(domain)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
