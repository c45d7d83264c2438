"""Arithmetic in Q[z]/(m(z)) in the power basis, plus p-adic embeddings."""
from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from functools import cached_property
from math import lcm

from .exactpoly import QQ, ZZ, MPoly, NumberFieldDomain, is_prime, resultant, squarefree_part
from .modarith import hensel_lift_univariate, poly_eval_mod, roots_mod_prime, sqrt_mod_prime, sqrt_mod_prime_power

log = logging.getLogger(__name__)


class FieldMismatch(ValueError):
    pass


class NotIrreducible(ValueError):
    pass


def _frac(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    return c


class NumberField:
    """``Q(theta)`` with ``theta`` a root of the monic irreducible ``minpoly``.

    ``minpoly`` is given low-to-high.  Irreducibility is an input contract;
    a cheap check rejects polynomials with a rational root or a repeated
    factor.
    """

    def __init__(self, minpoly, var: str = "z", check: bool = True):
        coeffs = [_frac(Fraction(c)) for c in minpoly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        self.var = var
        self.domain = NumberFieldDomain(self)
        # theta^(n+i) in the power basis, i = 0..n-2
        n = self.degree
        red = []
        cur = [-c for c in coeffs[:-1]]
        for _ in range(max(n - 1, 1)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [_frac(cur[j] - top * coeffs[j]) for j in range(n)]
        self._reduction = red
        if check:
            self._check_irreducible()

    def _check_irreducible(self):
        from .exactpoly import rational_roots

        p = self.minpoly_mpoly()
        if self.degree > 1 and rational_roots(p):
            raise NotIrreducible("minimal polynomial has a rational root")
        sf = squarefree_part(p.to_ZZ_primitive())
        if sf.degree() != self.degree:
            raise NotIrreducible("minimal polynomial is not square-free")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly and self.var == other.var

    def __hash__(self):
        return hash((self.minpoly, self.var))

    def __repr__(self):
        return f"NumberField({self.minpoly_mpoly()})"

    def minpoly_mpoly(self, var: str | None = None) -> MPoly:
        return MPoly.from_univariate(self.minpoly, var or self.var, QQ)

    # -- elements ----------------------------------------------------------
    def __call__(self, value) -> NFElem:
        if isinstance(value, NFElem):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, Fraction)):
            return NFElem(self, (_frac(value),) + (0,) * (self.degree - 1))
        if isinstance(value, str):
            from .exactpoly import parse_poly

            p = parse_poly(value, (self.var,), QQ)
            return self.from_poly_coeffs(p.univariate_coeffs(self.var) if not p.is_zero() else [])
        if isinstance(value, (list, tuple)):
            return self.from_poly_coeffs(value)
        raise TypeError(f"cannot convert {value!r} into {self}")

    def from_poly_coeffs(self, coeffs) -> NFElem:
        """Reduce a low-to-high polynomial in theta into the power basis."""
        n = self.degree
        out = [0] * n
        for i, c in enumerate(coeffs):
            if not c:
                continue
            c = _frac(Fraction(c)) if not isinstance(c, int) else c
            if i < n:
                out[i] = out[i] + c
            else:
                extra = self._power_row(i)
                for j in range(n):
                    if extra[j]:
                        out[j] = out[j] + c * extra[j]
        return NFElem(self, tuple(_frac(Fraction(x)) if not isinstance(x, int) else x for x in out))

    def _power_row(self, i: int):
        n = self.degree
        while i - n >= len(self._reduction):
            last = self._reduction[-1]
            top = last[-1]
            cur = [0] + list(last[:-1])
            cur = [_frac(cur[j] - top * self.minpoly[j]) for j in range(n)]
            self._reduction.append(tuple(cur))
        return self._reduction[i - n]

    @property
    def gen(self) -> NFElem:
        if self.degree == 1:
            return self(-self.minpoly[0])
        return NFElem(self, (0, 1) + (0,) * (self.degree - 2))

    def zero(self) -> NFElem:
        return self(0)

    def one(self) -> NFElem:
        return self(1)

    # -- p-adic structure --------------------------------------------------
    def integral_minpoly(self) -> list[int]:
        d = 1
        for c in self.minpoly:
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        return [int(c * d) for c in self.minpoly]

    @cached_property
    def discriminant(self) -> Fraction:
        """Polynomial discriminant of the minimal polynomial."""
        m = self.minpoly_mpoly().to_ZZ_primitive()
        v = m.used_vars()[0]
        n = self.degree
        r = resultant(m, m.diff(v), v).constant_value() if n > 1 else 1
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return Fraction(sign * r)

    def padic_roots(self, p: int, k: int) -> tuple[list[int], list[str]]:
        """Lifted simple roots of the minimal polynomial modulo ``p**k``.

        Returns ``(roots, diagnostics)``; repeated roots mod ``p`` are excluded
        and reported.
        """
        return nf_padic_roots(self, p, k)

    def split_prime(self, start: int = 3) -> int:
        """Smallest odd prime ``>= start`` at which the minimal polynomial splits into distinct linear factors."""
        f = self.integral_minpoly()
        p = max(3, start | 1)
        while True:
            if is_prime(p) and f[-1] % p:
                roots = roots_mod_prime(f, p)
                if len(roots) == self.degree:
                    return p
            p += 2


def nf_padic_roots(field: NumberField, p: int, k: int) -> tuple[list[int], list[str]]:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    f = field.integral_minpoly()
    if f[-1] % p == 0:
        return [], [f"leading coefficient divisible by {p}"]
    df = [i * c for i, c in enumerate(f)][1:]
    roots, diag = [], []
    for r in roots_mod_prime(f, p):
        if poly_eval_mod(df, r, p) == 0:
            diag.append(f"root {r} mod {p} is repeated (p ramifies or divides the index); excluded")
            continue
        roots.append(hensel_lift_univariate(f, r, p, k))
    return roots, diag


class NFElem:
    """Element of a :class:`NumberField` as power-basis coordinates."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(coords)
        self._hash = None

    # arithmetic
    def _other(self, other) -> NFElem | None:
        if isinstance(other, NFElem):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NFElem(self.field, tuple(_frac(a + b) for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return NFElem(self.field, tuple(_frac(a - b) for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElem(self.field, tuple(_frac(a * other) for a in self.coords))
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self.coords, o.coords
        n = len(a)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self.field.from_poly_coeffs(prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> NFElem:
        if not self:
            raise ZeroDivisionError("inverse of zero in a number field")
        # solve (multiplication matrix) * x = e_0 exactly
        M = self.mult_matrix()
        n = len(M)
        aug = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return NFElem(self.field, tuple(_frac(aug[i][n]) for i in range(n)))

    def mult_matrix(self) -> list[list]:
        """Matrix of ``x -> self*x`` on the power basis (column j = self*theta^j)."""
        n = self.field.degree
        cols = []
        cur = self
        theta = self.field.gen
        for j in range(n):
            cols.append(cur.coords)
            if j < n - 1:
                cur = cur * theta
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def norm(self) -> Fraction:
        return nf_norm(self)

    def trace(self) -> Fraction:
        M = self.mult_matrix()
        return _frac(sum(Fraction(M[i][i]) for i in range(len(M))))

    def minpoly(self) -> MPoly:
        return nf_minpoly(self)

    def sqrt(self) -> NFElem | None:
        return nf_sqrt(self)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coords[0]

    def denominator(self) -> int:
        d = 1
        for c in self.coords:
            if isinstance(c, Fraction):
                d = lcm(d, c.denominator)
        return d

    def residue(self, root: int, modulus: int) -> int:
        """Image under ``theta -> root`` modulo ``modulus``."""
        v = 0
        for c in reversed(self.coords):
            c = Fraction(c)
            v = (v * root + c.numerator * pow(c.denominator, -1, modulus)) % modulus
        return v

    # comparisons
    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coords)) if not self.is_rational() else hash(self.coords[0])
        return self._hash

    def to_mpoly(self) -> MPoly:
        return MPoly.from_univariate(self.coords, self.field.var, QQ)

    def __str__(self):
        from .exactpoly.textfmt import format_poly

        d = self.denominator()
        num = MPoly.from_univariate([int(Fraction(c) * d) for c in self.coords], self.field.var, ZZ)
        s = format_poly(num, compact=True)
        if d == 1:
            return s
        return f"({s})/{d}"

    def __repr__(self):
        return f"NFElem({self})"


def nf_ops(a: NFElem, b, op: str) -> NFElem:
    """Dispatch ``add``, ``sub``, ``mul``, ``inv`` or ``pow`` (``b`` the exponent)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def nf_norm(a: NFElem) -> Fraction:
    """Determinant of multiplication by ``a``."""
    if not a:
        return 0
    M = [[Fraction(x) for x in row] for row in a.mult_matrix()]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        pv = M[col][col]
        det *= pv
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / pv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return _frac(det)


def nf_charpoly(a: NFElem, var: str = "x") -> MPoly:
    """``Res_z(m(z), x - a(z))``, monic of degree n over QQ."""
    field = a.field
    z = field.var if field.var != var else "_z"
    vars = (z, var)
    d = a.denominator()
    m = field.minpoly_mpoly(z).with_vars(vars)
    dm, m = m.clear_denominators()
    # d*x - d*a(z) has integer coefficients
    lin = MPoly.gen(var, vars, ZZ).scale(d) - MPoly.from_dict(
        {(i, 0): int(Fraction(c) * d) for i, c in enumerate(a.coords) if c}, vars, ZZ)
    if m.degree(z) < 1 or lin.degree(z) < 1:
        # a is rational or the field is Q: charpoly = (x - a)^n
        x = MPoly.gen(var, (var,), QQ)
        return (x - a.coords[0]) ** field.degree
    r = resultant(m, lin, z).with_vars((var,)).change_domain(QQ)
    lc = r.leading_coefficient()
    return r.scale(Fraction(1) / Fraction(lc))


def nf_minpoly(a: NFElem, var: str | None = None) -> MPoly:
    """Monic minimal polynomial over QQ of a field element."""
    var = var or a.field.var
    cp = nf_charpoly(a, var)
    sf = squarefree_part(cp.to_ZZ_primitive())
    return sf.change_domain(QQ).scale(Fraction(1) / Fraction(sf.leading_coefficient()))


def nf_sqrt(a: NFElem, max_bits: int = 1 << 16) -> NFElem | None:
    """Square root in the field, or ``None`` when ``a`` is not a square.

    Works p-adically at a prime where the minimal polynomial splits into
    distinct linear factors: each embedding gets a square root, every sign
    pattern is interpolated back to the power basis, rationally
    reconstructed and checked exactly.
    """
    field = a.field
    if not a:
        return field.zero()
    if a.is_rational():
        r = QQ.sqrt(a.coords[0])
        if r is not None:
            return field(r)
    n = field.degree
    if a.norm() < 0 and n % 2 == 1:
        return None
    primes = _usable_split_primes(a, 12)
    # a non-square is a local non-square at about half of the split primes
    for q in primes[1:]:
        roots, _ = nf_padic_roots(field, q, 1)
        if any(sqrt_mod_prime(a.residue(r, q), q) is None for r in roots):
            return None
    p = primes[0]
    k = 8
    from .recog import rational_reconstruct

    while k.bit_length() and (p**k).bit_length() < max_bits:
        mod = p**k
        roots, _ = nf_padic_roots(field, p, k)
        vals = [a.residue(r, mod) for r in roots]
        sq = [sqrt_mod_prime_power(v, p, k) for v in vals]
        if any(s is None for s in sq):
            return None
        for signs in itertools.product((1, -1), repeat=n - 1):
            target = [sq[0]] + [s * e % mod for s, e in zip(sq[1:], signs)]
            coords = _interpolate_mod(roots, target, mod)
            rec = [rational_reconstruct(c, mod) for c in coords]
            if any(r is None for r in rec):
                continue
            cand = NFElem(field, tuple(_frac(r) for r in rec))
            if cand * cand == a:
                return _sqrt_sign(cand)
        k *= 2
    raise ArithmeticError("square root not found within the precision cap")


def _usable_split_primes(a: NFElem, count: int) -> list[int]:
    out, p = [], 2
    while len(out) < count:
        p = a.field.split_prime(start=p + 1)
        if a.denominator() % p and not _has_p_in_norm(a, p):
            out.append(p)
    return out


def _has_p_in_norm(a: NFElem, p: int) -> bool:
    nm = Fraction(a.norm())
    return nm.numerator % p == 0


def _sqrt_sign(b: NFElem) -> NFElem:
    # deterministic branch: first nonzero coordinate positive
    for c in b.coords:
        if c:
            return b if c > 0 else -b
    return b


def _interpolate_mod(xs: list[int], ys: list[int], mod: int) -> list[int]:
    """Coefficients (low-to-high) of the interpolating polynomial modulo ``mod``."""
    n = len(xs)
    coeffs = [0] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (z - x_j) / (x_i - x_j)
        basis = [1]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [(b0 - xs[j] * b1) % mod for b0, b1 in zip([0] + basis, basis + [0])]
            denom = denom * (xs[i] - xs[j]) % mod
        f = ys[i] * pow(denom, -1, mod) % mod
        for t in range(n):
            coeffs[t] = (coeffs[t] + f * basis[t]) % mod
    return coeffs


class RelQuadElem:
    """``u + v*sqrt(c)`` over a number field, ``c`` fixed by context."""

    __slots__ = ("u", "v", "c")

    def __init__(self, u: NFElem, v: NFElem, c: NFElem):
        if not c:
            raise ValueError("c must be nonzero")
        self.u, self.v, self.c = u, v, c

    def __mul__(self, other: RelQuadElem) -> RelQuadElem:
        if other.c != self.c:
            raise FieldMismatch("different relative quadratic extensions")
        return RelQuadElem(self.u * other.u + self.v * other.v * self.c, self.u * other.v + self.v * other.u, self.c)

    def conjugate(self) -> RelQuadElem:
        return RelQuadElem(self.u, -self.v, self.c)

    def rel_norm(self) -> NFElem:
        return self.u * self.u - self.c * self.v * self.v

    def inverse(self) -> RelQuadElem:
        n = self.rel_norm()
        if not n:
            raise ZeroDivisionError("element of relative norm zero")
        inv = n.inverse()
        return RelQuadElem(self.u * inv, -self.v * inv, self.c)

    def __pow__(self, n: int) -> RelQuadElem:
        if n < 0:
            return self.inverse() ** (-n)
        f = self.u.field
        result = RelQuadElem(f.one(), f.zero(), self.c)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, RelQuadElem) and (self.u, self.v, self.c) == (other.u, other.v, other.c)

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"RelQuadElem({self.u} + ({self.v})*sqrt({self.c}))"
