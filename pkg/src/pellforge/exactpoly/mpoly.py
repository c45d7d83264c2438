"""Sparse multivariate polynomials with packed exponent vectors.

An exponent vector ``(e0, ..., e_{n-1})`` is packed into one Python int with
``e0`` in the most significant 32-bit field, so integer order on packed keys
is lexicographic order with ``vars[0]`` largest.  Monomial multiplication is
then a single integer addition.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Mapping

from .domains import QQ, ZZ, Domain, DomainError, InexactDivision

BITS = 32
MASK = (1 << BITS) - 1
_HALF = 1 << (BITS - 1)


def pack(exps: Iterable[int]) -> int:
    m = 0
    for e in exps:
        if e < 0 or e >= _HALF:
            raise OverflowError(f"exponent {e} out of range")
        m = (m << BITS) | e
    return m


def unpack(m: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = m & MASK
        m >>= BITS
    return tuple(out)


def _guard(n: int) -> int:
    g = 0
    for _ in range(n):
        g = (g << BITS) | _HALF
    return g


class MPoly:
    """Immutable sparse polynomial over ``domain`` in the ordered ``vars``."""

    __slots__ = ("vars", "terms", "domain", "_hash")

    def __init__(self, terms: Mapping[int, object], vars: Iterable[str], domain: Domain = ZZ):
        # trusts that ``terms`` holds normalized nonzero coefficients
        self.vars = tuple(vars)
        self.terms = terms if isinstance(terms, dict) else dict(terms)
        self.domain = domain
        self._hash = None

    # -- construction ------------------------------------------------------
    @classmethod
    def from_dict(cls, d: Mapping[tuple, object], vars, domain: Domain = ZZ) -> MPoly:
        vars = tuple(vars)
        terms: dict[int, object] = {}
        for exps, c in d.items():
            if len(exps) != len(vars):
                raise ValueError("exponent vector length does not match variables")
            c = domain.convert(c)
            if not c:
                continue
            m = pack(exps)
            c = domain.normalize(terms.get(m, 0) + c)
            if c:
                terms[m] = c
            else:
                terms.pop(m, None)
        return cls(terms, vars, domain)

    @classmethod
    def const(cls, c, vars=(), domain: Domain = ZZ) -> MPoly:
        c = domain.convert(c)
        return cls({0: c} if c else {}, vars, domain)

    @classmethod
    def gen(cls, name: str, vars, domain: Domain = ZZ) -> MPoly:
        vars = tuple(vars)
        i = vars.index(name)
        return cls({1 << (BITS * (len(vars) - 1 - i)): domain.convert(1)}, vars, domain)

    @classmethod
    def from_univariate(cls, coeffs, var: str = "t", domain: Domain = ZZ) -> MPoly:
        """Build from a low-to-high coefficient list."""
        return cls.from_dict({(i,): c for i, c in enumerate(coeffs)}, (var,), domain)

    def _new(self, terms) -> MPoly:
        return MPoly(terms, self.vars, self.domain)

    def zero(self) -> MPoly:
        return MPoly({}, self.vars, self.domain)

    def one(self) -> MPoly:
        return MPoly({0: self.domain.convert(1)}, self.vars, self.domain)

    # -- inspection --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """Coefficient of the monomial 1."""
        return self.terms.get(0, self.domain.convert(0))

    def __len__(self):
        return len(self.terms)

    def _shift(self, var: str) -> int:
        try:
            return BITS * (len(self.vars) - 1 - self.vars.index(var))
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree when omitted); -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return self.total_degree()
        s = self._shift(var)
        return max((m >> s) & MASK for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        n = len(self.vars)
        return max(sum(unpack(m, n)) for m in self.terms)

    def degrees(self) -> tuple[int, ...]:
        n = len(self.vars)
        d = [0] * n
        for m in self.terms:
            for i, e in enumerate(unpack(m, n)):
                if e > d[i]:
                    d[i] = e
        return tuple(d)

    def used_vars(self) -> tuple[str, ...]:
        d = self.degrees()
        return tuple(v for v, e in zip(self.vars, d) if e)

    def items(self):
        """Yield ``(exponent tuple, coefficient)`` in descending lex order."""
        n = len(self.vars)
        for m in sorted(self.terms, reverse=True):
            yield unpack(m, n), self.terms[m]

    def as_dict(self) -> dict[tuple, object]:
        return dict(self.items())

    def leading(self) -> tuple[int, object]:
        m = max(self.terms)
        return m, self.terms[m]

    def leading_coefficient(self):
        return self.terms[max(self.terms)] if self.terms else self.domain.convert(0)

    def coefficients(self) -> list:
        return [self.terms[m] for m in sorted(self.terms, reverse=True)]

    # -- equality ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MPoly):
            if self.vars != other.vars:
                if self.is_constant() and other.is_constant():
                    return self.constant_value() == other.constant_value()
                try:
                    a, b = _unify(self, other)
                except ValueError:
                    return False
                return a.terms == b.terms
            return self.terms == other.terms
        try:
            c = self.domain.convert(other)
        except (DomainError, TypeError):
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- coercion ----------------------------------------------------------
    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                if other.is_constant():
                    return MPoly.const(other.constant_value(), self.vars, self.domain)
                raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")
            if other.domain != self.domain:
                raise DomainError(f"domain mismatch: {self.domain} vs {other.domain}")
            return other
        return MPoly.const(other, self.vars, self.domain)

    def with_vars(self, vars: Iterable[str]) -> MPoly:
        """Re-express over another variable list (must contain every used var)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        n = len(self.vars)
        used = self.degrees()
        idx = []
        for v, e in zip(self.vars, used):
            if v in vars:
                idx.append(vars.index(v))
            elif e:
                raise ValueError(f"variable {v!r} is used but not in {vars}")
            else:
                idx.append(None)
        k = len(vars)
        out = {}
        for m, c in self.terms.items():
            new = [0] * k
            for e, j in zip(unpack(m, n), idx):
                if j is not None:
                    new[j] = e
            out[pack(new)] = c
        return MPoly(out, vars, self.domain)

    def drop_unused(self) -> MPoly:
        return self.with_vars(self.used_vars())

    def change_domain(self, domain: Domain) -> MPoly:
        out = {}
        for m, c in self.terms.items():
            if hasattr(c, "coords") and domain is not self.domain and not hasattr(domain, "field"):
                raise DomainError("cannot coerce number-field coefficients")
            c = domain.convert(c)
            if c:
                out[m] = c
        return MPoly(out, self.vars, domain)

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        norm = self.domain.normalize
        return self._new({m: norm(-c) for m, c in self.terms.items()})

    def __pos__(self):
        return self

    def _add(self, other: MPoly, sign: int) -> MPoly:
        out = dict(self.terms)
        norm = self.domain.normalize
        for m, c in other.terms.items():
            s = out.get(m)
            s = norm(c if sign > 0 else -c) if s is None else norm(s + c if sign > 0 else s - c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._new(out)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except DomainError:
            return NotImplemented
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except DomainError:
            return NotImplemented
        return self._add(other, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def scale(self, c) -> MPoly:
        c = self.domain.convert(c)
        if not c:
            return self.zero()
        norm = self.domain.normalize
        out = {}
        for m, a in self.terms.items():
            v = norm(a * c)
            if v:
                out[m] = v
        return self._new(out)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            try:
                return self.scale(other)
            except (DomainError, TypeError):
                return NotImplemented
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (m2, c2), = b.items()
            norm = self.domain.normalize
            out = {}
            for m1, c1 in a.items():
                v = norm(c1 * c2)
                if v:
                    out[m1 + m2] = v
            return self._new(out)
        out: dict[int, object] = {}
        get = out.get
        bi = list(b.items())
        for m1, c1 in a.items():
            for m2, c2 in bi:
                m = m1 + m2
                out[m] = get(m, 0) + c1 * c2
        norm = self.domain.normalize
        if self.domain.modulus is None and self.domain is ZZ:
            return self._new({m: c for m, c in out.items() if c})
        res = {}
        for m, c in out.items():
            c = norm(c)
            if c:
                res[m] = c
        return self._new(res)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> MPoly:
        if n < 0:
            raise ValueError("negative exponent")
        if n == 0:
            return self.one()
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            for e in unpack(m, len(self.vars)):
                if e * n >= _HALF:
                    raise OverflowError("exponent overflow")
            v = self.domain.normalize(c**n)
            return self._new({m * n: v} if v else {})
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other) -> MPoly:
        """Exact quotient; raises :class:`InexactDivision` when it does not exist."""
        if not isinstance(other, MPoly):
            other = self._coerce(other)
        else:
            other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = self.divmod(other)
        if r.terms:
            raise InexactDivision("polynomial is not divisible")
        return q

    def __truediv__(self, other):
        return self.exact_div(other)

    def __floordiv__(self, other):
        return self.exact_div(other)

    def divmod(self, other: MPoly) -> tuple[MPoly, MPoly]:
        """Division by leading terms in lex order.

        The remainder collects terms not divisible by ``lt(other)``; it is zero
        precisely when ``other`` divides ``self``.  Coefficient division must be
        exact in the domain, otherwise the term goes to the remainder.
        """
        other = self._coerce(other)
        dom = self.domain
        n = len(self.vars)
        guard = _guard(n)
        lm, lc = other.leading()
        if len(other.terms) == 1:
            q, r = {}, {}
            for m, c in self.terms.items():
                if (m + guard - lm) & guard == guard:
                    try:
                        q[m - lm] = dom.div(c, lc)
                        continue
                    except InexactDivision:
                        pass
                r[m] = c
            return self._new(q), self._new(r)
        rem = dict(self.terms)
        heap = [-m for m in rem]
        heapq.heapify(heap)
        rest = [(m, c) for m, c in other.terms.items() if m != lm]
        q: dict[int, object] = {}
        r: dict[int, object] = {}
        norm = dom.normalize
        while heap:
            m = -heapq.heappop(heap)
            c = rem.pop(m, None)
            if c is None:
                continue
            while heap and -heap[0] == m:
                heapq.heappop(heap)
            if (m + guard - lm) & guard != guard:
                r[m] = c
                continue
            try:
                qc = dom.div(c, lc)
            except InexactDivision:
                r[m] = c
                continue
            dm = m - lm
            q[dm] = qc
            for m2, c2 in rest:
                k = dm + m2
                v = rem.get(k)
                if v is None:
                    v = norm(-qc * c2)
                    heapq.heappush(heap, -k)
                else:
                    v = norm(v - qc * c2)
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return self._new(q), self._new(r)

    # -- structure ---------------------------------------------------------
    def coeff_in(self, var: str, d: int) -> MPoly:
        """Coefficient of ``var**d`` as a polynomial in the other variables."""
        s = self._shift(var)
        out = {}
        for m, c in self.terms.items():
            if (m >> s) & MASK == d:
                out[m - (d << s)] = c
        return self._new(out)

    def as_univariate(self, var: str) -> dict[int, MPoly]:
        """Split as ``sum coeff[e] * var**e``; coefficients keep the same vars."""
        s = self._shift(var)
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            e = (m >> s) & MASK
            parts.setdefault(e, {})[m - (e << s)] = c
        return {e: self._new(t) for e, t in parts.items()}

    def univariate_coeffs(self, var: str | None = None) -> list:
        """Dense low-to-high scalar coefficients of a polynomial in one variable."""
        if var is None:
            used = self.used_vars()
            if len(used) > 1:
                raise ValueError(f"not univariate: {used}")
            var = used[0] if used else (self.vars[0] if self.vars else None)
        if var is None:
            return [self.constant_value()] if self.terms else []
        s = self._shift(var)
        zero = self.domain.convert(0)
        out = [zero] * (self.degree(var) + 1)
        for m, c in self.terms.items():
            if m - (((m >> s) & MASK) << s):
                raise ValueError(f"not univariate in {var}")
            out[(m >> s) & MASK] = c
        return out

    def diff(self, var: str) -> MPoly:
        s = self._shift(var)
        one = 1 << s
        norm = self.domain.normalize
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & MASK
            if e:
                v = norm(c * e)
                if v:
                    out[m - one] = v
        return self._new(out)

    def substitute(self, var: str, value) -> MPoly:
        """Replace ``var`` by a polynomial (same vars) or a scalar."""
        if hasattr(value, "num") and hasattr(value, "den"):
            from .ratfunc import RatFunc

            return RatFunc(self, self.one()).substitute(var, value)
        parts = self.as_univariate(var)
        if not isinstance(value, MPoly):
            value = MPoly.const(value, self.vars, self.domain)
        else:
            value = self._coerce(value)
        if not parts or (len(parts) == 1 and 0 in parts):
            return self
        res = self.zero()
        power = self.one()
        for e in range(max(parts) + 1):
            if e in parts:
                res = res + parts[e] * power
            if e < max(parts):
                power = power * value
        return res

    def substitute_many(self, values: Mapping[str, object]) -> MPoly:
        res = self
        for v, val in values.items():
            res = res.substitute(v, val)
        return res

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at scalars for the named vars.

        Returns a scalar when every used variable is assigned, otherwise an
        MPoly in the same variable list.
        """
        n = len(self.vars)
        idx = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        dom = self.domain
        if not idx:
            return self
        if dom is ZZ and any(isinstance(v, Fraction) and v.denominator != 1 for _, v in idx):
            return self.change_domain(QQ).evaluate(values)
        powers = {}
        maxdeg = self.degrees()
        for i, val in idx:
            val = dom.convert(val) if not hasattr(val, "coords") else val
            pw = [dom.convert(1)]
            for _ in range(maxdeg[i]):
                pw.append(dom.normalize(pw[-1] * val))
            powers[i] = pw
        full = all(maxdeg[i] == 0 for i in range(n) if i not in powers)
        out: dict[int, object] = {}
        for m, c in self.terms.items():
            exps = unpack(m, n)
            v = c
            rest = m
            for i, pw in powers.items():
                e = exps[i]
                if e:
                    v = v * pw[e]
                    rest -= e << (BITS * (n - 1 - i))
            out[rest] = out.get(rest, 0) + v
        if full:
            return dom.normalize(out.get(0, dom.convert(0)))
        res = {}
        for m, c in out.items():
            c = dom.normalize(c)
            if c:
                res[m] = c
        return self._new(res)

    def __call__(self, *args):
        return self.evaluate(dict(zip(self.vars, args)))

    # -- integer content ---------------------------------------------------
    def content(self):
        """Integer content with the sign of the leading coefficient (ZZ only)."""
        from math import gcd

        if self.domain is not ZZ:
            raise DomainError("content is defined over ZZ")
        if not self.terms:
            return 0
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
            if g == 1:
                break
        return -g if self.leading_coefficient() < 0 else g

    def primitive(self) -> tuple[int, MPoly]:
        c = self.content()
        if c in (0, 1):
            return c, self
        return c, self._new({m: v // c for m, v in self.terms.items()})

    def clear_denominators(self) -> tuple[int, MPoly]:
        """For QQ input return ``(d, P*d)`` with ``P*d`` over ZZ."""
        from math import lcm

        d = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        out = {}
        for m, c in self.terms.items():
            out[m] = int(c * d) if isinstance(c, Fraction) else c * d
        return d, MPoly(out, self.vars, ZZ)

    def to_ZZ_primitive(self) -> MPoly:
        """Clear denominators and strip content; the zero set is unchanged."""
        _, p = self.clear_denominators() if self.domain is QQ else (1, self)
        return p.primitive()[1]

    # -- printing ----------------------------------------------------------
    def __str__(self):
        from .textfmt import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"MPoly({str(self)!r}, vars={self.vars}, domain={self.domain})"


def _unify(a: MPoly, b: MPoly) -> tuple[MPoly, MPoly]:
    vs = list(a.vars)
    for v in b.vars:
        if v not in vs:
            vs.append(v)
    return a.with_vars(vs), b.with_vars(vs)


def unify(*polys: MPoly) -> list[MPoly]:
    vs: list[str] = []
    for p in polys:
        for v in p.vars:
            if v not in vs:
                vs.append(v)
    return [p.with_vars(vs) for p in polys]


def gens(vars, domain: Domain = ZZ) -> list[MPoly]:
    vars = tuple(vars)
    return [MPoly.gen(v, vars, domain) for v in vars]


__all__ = ["MPoly", "pack", "unpack", "gens", "unify", "InexactDivision", "QQ", "ZZ"]
