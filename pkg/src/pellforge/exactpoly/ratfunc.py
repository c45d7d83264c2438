"""Rational functions ``num/den`` kept in lowest terms."""
from __future__ import annotations

from fractions import Fraction

from .algorithms import gcd
from .domains import QQ, ZZ
from .mpoly import MPoly


class RatFunc:
    """Quotient of two polynomials over ZZ/QQ, reduced and sign-normalized.

    Both parts are stored over ZZ; the denominator is primitive up to the
    integer factor needed to keep the numerator integral, with a positive
    leading coefficient.  Other domains are supported without gcd reduction
    (the denominator is only made monic).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = num.one()
        if not isinstance(den, MPoly):
            den = MPoly.const(den, num.vars, num.domain)
        if not isinstance(num, MPoly):
            num = MPoly.const(num, den.vars, den.domain)
        if num.vars != den.vars:
            from .mpoly import unify

            num, den = unify(num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)

    @property
    def vars(self):
        return self.num.vars

    @property
    def domain(self):
        return self.num.domain

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MPoly:
        """The polynomial value; requires a constant denominator."""
        if not self.den.is_constant():
            raise ValueError("not a polynomial")
        d = self.den.constant_value()
        if d == 1:
            return self.num
        return self.num.change_domain(QQ).scale(Fraction(1, d)) if self.num.domain is ZZ else self.num.scale(
            self.num.domain.div(1, d))

    # arithmetic
    def _lift(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc(other)
        if isinstance(other, Fraction):
            return RatFunc(MPoly.const(other.numerator, self.vars, self.domain),
                           MPoly.const(other.denominator, self.vars, self.domain))
        return RatFunc(MPoly.const(other, self.vars, self.domain))

    def __add__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den**-n, self.num**-n)
        return RatFunc(self.num**n, self.den**n)

    def __eq__(self, other):
        o = self._lift(other)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def substitute(self, var: str, value) -> RatFunc:
        """Substitute a polynomial, scalar or RatFunc for ``var``."""
        return RatFunc(*_subst_frac(self.num, var, value)) / RatFunc(*_subst_frac(self.den, var, value))

    def evaluate(self, values):
        n = self.num.evaluate(values)
        d = self.den.evaluate(values)
        if isinstance(n, MPoly) or isinstance(d, MPoly):
            return RatFunc(n if isinstance(n, MPoly) else MPoly.const(n, self.vars, self.domain),
                           d if isinstance(d, MPoly) else MPoly.const(d, self.vars, self.domain))
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        if self.domain is ZZ or self.domain is QQ:
            return QQ.normalize(Fraction(n) / Fraction(d)) if not hasattr(n, "coords") and not hasattr(
                d, "coords") else n / d
        return self.domain.div(n, d)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num)
        d = str(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if not (self.den.is_constant() or d in self.vars):
            d = f"({d})"
        return f"{n}/{d}"

    __repr__ = __str__


def _subst_frac(p: MPoly, var: str, value) -> tuple[MPoly, MPoly]:
    """Return ``(N, D)`` with ``p(var=value) == N/D``."""
    if isinstance(value, RatFunc):
        vn, vd = value.num, value.den
    elif isinstance(value, Fraction):
        vn = MPoly.const(value.numerator, p.vars, p.domain)
        vd = MPoly.const(value.denominator, p.vars, p.domain)
    elif isinstance(value, MPoly):
        vn, vd = value, value.one()
    else:
        vn, vd = MPoly.const(value, p.vars, p.domain), p.one()
    if vn.vars != p.vars:
        from .mpoly import unify

        p, vn, vd = unify(p, vn, vd)
    parts = p.as_univariate(var)
    if not parts:
        return p, p.one()
    d = max(parts)
    # sum c_e * vn^e * vd^(d-e)
    npow = [p.one()]
    dpow = [p.one()]
    for _ in range(d):
        npow.append(npow[-1] * vn)
        dpow.append(dpow[-1] * vd)
    num = p.zero()
    for e, c in parts.items():
        num = num + c * npow[e] * dpow[d - e]
    return num, dpow[d]


def _reduce(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    dom = num.domain
    if dom is QQ or dom is ZZ:
        if dom is QQ:
            dn, num = num.clear_denominators()
            dd, den = den.clear_denominators()
            num, den = num * dd, den * dn
        if num.is_zero():
            return num, den.one()
        g = gcd(num, den)
        if not g.is_constant() or abs(g.constant_value()) != 1:
            num, den = num.exact_div(g), den.exact_div(g)
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return num, den
    if num.is_zero():
        return num, den.one()
    lc = den.leading_coefficient()
    inv = dom.div(1, lc)
    return num.scale(inv), den.scale(inv)


__all__ = ["RatFunc"]
