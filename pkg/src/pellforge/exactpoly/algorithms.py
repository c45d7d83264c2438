"""Resultants, gcds, square roots and rational roots for :class:`MPoly`."""
from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd as igcd
from math import lcm

from .domains import QQ, ZZ, DomainError, InexactDivision, ModPrimePower, is_prime
from .mpoly import MPoly

log = logging.getLogger(__name__)


class NotASquare(ValueError):
    """Raised internally by :func:`poly_sqrt`; carries the failing index."""

    def __init__(self, index, msg="polynomial is not a square"):
        super().__init__(f"{msg} (first mismatch at coefficient index {index})")
        self.index = index


# ---------------------------------------------------------------------------
# dense univariate views with MPoly coefficients

def _to_dense(p: MPoly, var: str) -> list[MPoly]:
    parts = p.as_univariate(var)
    if not parts:
        return []
    zero = p.zero()
    return [parts.get(i, zero) for i in range(max(parts) + 1)]


def _from_dense(coeffs: list[MPoly], var: str, like: MPoly) -> MPoly:
    x = MPoly.gen(var, like.vars, like.domain)
    res = like.zero()
    for c in reversed(coeffs):
        res = res * x + c
    return res


def _trim(c: list[MPoly]) -> list[MPoly]:
    while c and c[-1].is_zero():
        c.pop()
    return c


def _prem(a: list[MPoly], b: list[MPoly]) -> list[MPoly]:
    """Pseudo-remainder ``lc(b)**(da-db+1) * a mod b``."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    k = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        s = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, bc in enumerate(b):
            if not bc.is_zero():
                a[i + shift] = a[i + shift] - s * bc
        a.pop()
        _trim(a)
        k -= 1
    if k > 0 and a:
        f = lb**k
        a = [c * f for c in a]
    return a


def _int_content(coeffs: list[MPoly]) -> int:
    g = 0
    for c in coeffs:
        for v in c.terms.values():
            g = igcd(g, v)
            if g == 1:
                return 1
    return g


def resultant(P: MPoly, R: MPoly, var: str) -> MPoly:
    """Resultant with respect to ``var`` by the subresultant algorithm.

    Integer content is stripped from both inputs first; for other domains the
    plain subresultant recurrence is used.
    """
    if P.vars != R.vars:
        raise ValueError("resultant needs a common variable list")
    dp, dr = P.degree(var), R.degree(var)
    if dp <= 0 or dr <= 0:
        raise ValueError(f"both arguments need positive degree in {var}")
    A, B = _to_dense(P, var), _to_dense(R, var)
    one = P.one()
    scale = one
    if P.domain is ZZ:
        a, b = _int_content(A), _int_content(B)
        if a > 1:
            A = [c.exact_div(a) for c in A]
        if b > 1:
            B = [c.exact_div(b) for c in B]
        scale = one * (a ** (len(B) - 1) * b ** (len(A) - 1))
    s = 1
    if len(A) < len(B):
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -1
        A, B = B, A
    g, h = one, one
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        Rm = _prem(A, B)
        A = B
        if not Rm:
            return P.zero()
        div = g * h**delta
        B = [c.exact_div(div) for c in Rm]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).exact_div(h ** (delta - 1))
        if len(B) - 1 <= 0:
            break
    da = len(A) - 1
    lb = B[0]
    if da == 0:
        res = one
    elif da == 1:
        res = lb
    else:
        res = (lb**da).exact_div(h ** (da - 1))
    res = res * scale
    return -res if s < 0 else res


def sylvester_matrix(P: MPoly, R: MPoly, var: str) -> list[list[MPoly]]:
    m, n = P.degree(var), R.degree(var)
    if m <= 0 or n <= 0:
        raise ValueError(f"both arguments need positive degree in {var}")
    a = list(reversed(_to_dense(P, var)))
    b = list(reversed(_to_dense(R, var)))
    zero = P.zero()
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + a + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + b + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(M: list[list[MPoly]]) -> MPoly:
    """Fraction-free Gaussian elimination determinant (exact divisions)."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    M = [list(r) for r in M]
    sign = 1
    prev = M[0][0].one()
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return M[0][0].zero()
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pk - M[i][k] * M[k][j]).exact_div(prev)
            M[i][k] = pk.zero()
        prev = pk
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_resultant(P: MPoly, R: MPoly, var: str) -> MPoly:
    return bareiss_det(sylvester_matrix(P, R, var))


# ---------------------------------------------------------------------------
# gcd over ZZ (recursive, subresultant PRS in the main variable)

def _sign_normal(p: MPoly) -> MPoly:
    return -p if p.terms and p.leading_coefficient() < 0 else p


def gcd(A: MPoly, B: MPoly) -> MPoly:
    """GCD over ZZ (or QQ, returned primitive over ZZ) with positive leading coefficient."""
    if A.vars != B.vars:
        from .mpoly import unify

        A, B = unify(A, B)
    if A.domain is QQ:
        A = A.to_ZZ_primitive()
    if B.domain is QQ:
        B = B.to_ZZ_primitive()
    if A.domain is not ZZ or B.domain is not ZZ:
        if A.domain.is_field and A.domain == B.domain and len(A.vars) <= 1:
            return _field_gcd_univariate(A, B)
        raise DomainError("gcd is implemented over ZZ/QQ and univariate fields")
    return _gcd_zz(A, B)


def _gcd_zz(A: MPoly, B: MPoly) -> MPoly:
    if A.is_zero():
        return _sign_normal(B)
    if B.is_zero():
        return _sign_normal(A)
    if A.is_constant() or B.is_constant():
        g = igcd(_int_content([A]), _int_content([B]))
        return MPoly.const(g, A.vars, ZZ)
    ua, ub = set(A.used_vars()), set(B.used_vars())
    var = next(v for v in A.vars if v in ua or v in ub)
    if var not in ua:
        return _gcd_zz(A, _content_in(B, var))
    if var not in ub:
        return _gcd_zz(_content_in(A, var), B)
    ca, cb = _content_in(A, var), _content_in(B, var)
    pa, pb = A.exact_div(ca), B.exact_div(cb)
    c = _gcd_zz(ca, cb)
    g = _prs_gcd(pa, pb, var)
    if g.degree(var) <= 0:
        return c
    g = g.exact_div(_content_in(g, var))
    return _sign_normal(c * g)


def _content_in(p: MPoly, var: str) -> MPoly:
    """GCD of the coefficients of ``p`` viewed in ``var`` (sign-normalized)."""
    parts = sorted(p.as_univariate(var).values(), key=len)
    g = p.zero()
    for c in parts:
        g = _gcd_zz(g, c)
        if g.is_constant() and abs(g.constant_value()) == 1:
            return g.one()
    return g


def _prs_gcd(P: MPoly, R: MPoly, var: str) -> MPoly:
    A, B = _to_dense(P, var), _to_dense(R, var)
    if len(A) < len(B):
        A, B = B, A
    one = P.one()
    g, h = one, one
    while True:
        delta = len(A) - len(B)
        Rm = _prem(A, B)
        if not Rm:
            return _from_dense(B, var, P)
        if len(Rm) == 1:
            return one
        A = B
        B = [c.exact_div(g * h**delta) for c in Rm]
        g = A[-1]
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g**delta).exact_div(h ** (delta - 1))


def _field_gcd_univariate(A: MPoly, B: MPoly) -> MPoly:
    while not B.is_zero():
        _, r = A.divmod(B)
        A, B = B, r
    if A.is_zero():
        return A
    return A.scale(A.domain.div(1, A.leading_coefficient()))


def squarefree_part(P: MPoly) -> MPoly:
    """Product of the distinct irreducible factors (ZZ, characteristic 0)."""
    if P.is_constant():
        return P
    g = P
    for v in P.used_vars():
        g = gcd(g, P.diff(v))
        if g.is_constant():
            break
    if g.is_constant():
        return P.primitive()[1]
    return P.exact_div(g).primitive()[1]


def squarefree_decomposition(P: MPoly) -> list[tuple[MPoly, int]]:
    """Yun's algorithm for a univariate ZZ/QQ polynomial; factors primitive over ZZ."""
    f = P.to_ZZ_primitive()
    if f.degree() <= 0:
        return []
    var = f.used_vars()[0]
    df = f.diff(var)
    a = gcd(f, df)
    b = f.exact_div(a)
    d = df.exact_div(a) - b.diff(var)
    out = []
    i = 1
    while b.degree(var) > 0:
        a = gcd(b, d)
        if a.degree(var) > 0:
            out.append((a, i))
        b = b.exact_div(a)
        d = d.exact_div(a) - b.diff(var)
        i += 1
    return out


# ---------------------------------------------------------------------------
# content / primitive part

def content_primitive(P: MPoly) -> tuple[int, MPoly]:
    """``(content, primitive)`` over ZZ with the primitive part's leading coefficient positive."""
    if P.domain is not ZZ:
        raise DomainError("content_primitive expects an integer polynomial")
    if P.is_zero():
        return 0, P
    return P.primitive()


# ---------------------------------------------------------------------------
# square roots of univariate polynomials

def poly_sqrt(P: MPoly, strict: bool = False):
    """Square root of a univariate polynomial over a field.

    Returns ``Y`` with ``Y*Y == P`` or ``None``.  With ``strict`` the failure
    raises :class:`NotASquare` naming the first mismatching coefficient.
    """
    try:
        return _poly_sqrt(P)
    except NotASquare:
        if strict:
            raise
        return None


def _poly_sqrt(P: MPoly) -> MPoly:
    dom = P.domain
    if P.is_zero():
        return P
    used = P.used_vars()
    if len(used) > 1:
        raise ValueError("poly_sqrt expects a univariate polynomial")
    var = used[0] if used else P.vars[0]
    c = P.univariate_coeffs(var)
    deg = len(c) - 1
    if deg % 2:
        raise NotASquare(deg, "odd degree")
    n = deg // 2
    top = dom.sqrt(c[-1])
    if top is None:
        raise NotASquare(deg, "leading coefficient is not a square")
    if dom.is_ordered() and top < 0:
        top = -top
    two_top = dom.normalize(top * 2)
    y = [None] * (n + 1)
    y[n] = top
    # top-down: coefficient deg-j of Y^2 equals 2*y_n*y_{n-j} + sum of known pairs
    for j in range(1, n + 1):
        acc = c[deg - j]
        for i in range(1, j):
            acc = acc - y[n - i] * y[n - j + i]
        y[n - j] = dom.div(dom.normalize(acc), two_top)
    Y = MPoly.from_dict({tuple(k if v == var else 0 for v in P.vars): y[k] for k in range(n + 1)}, P.vars, dom)
    diff = P - Y * Y
    if not diff.is_zero():
        dc = diff.univariate_coeffs(var)
        raise NotASquare(max(i for i, v in enumerate(dc) if v))
    return Y


# ---------------------------------------------------------------------------
# rational roots

def rational_roots(P: MPoly) -> list[tuple[Fraction, int]]:
    """All rational roots of a nonzero univariate polynomial, with multiplicities.

    Each square-free factor is made monic over ZZ by ``y = lc * x``; integer
    roots of that polynomial are found by Hensel lifting its simple roots
    modulo a prime past the Cauchy bound and then checked exactly.
    """
    if P.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    out = []
    for factor, mult in squarefree_decomposition(P):
        for r in _roots_squarefree(factor):
            out.append((r, mult))
    out.sort()
    return out


def _roots_squarefree(f: MPoly) -> list[Fraction]:
    coeffs = f.univariate_coeffs()
    n = len(coeffs) - 1
    if n < 1:
        return []
    lc = coeffs[-1]
    # g(y) = lc^(n-1) f(y/lc), monic with integer coefficients
    g = [coeffs[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    zero_roots = []
    while g and g[0] == 0:
        zero_roots.append(Fraction(0))
        g = g[1:]
    m = len(g) - 1
    roots = list(zero_roots)
    if m == 0:
        return roots
    bound = 1 + max(abs(c) for c in g[:-1])
    p = _good_prime(g)
    k = 1
    while p**k <= 2 * bound:
        k += 1
    mod = p**k
    from ..modarith import hensel_lift_univariate

    for r0 in range(p):
        if _eval_mod(g, r0, p):
            continue
        r = hensel_lift_univariate(g, r0, p, k)
        y = r if r <= mod // 2 else r - mod
        if _eval_int(g, y) == 0:
            roots.append(Fraction(y, lc))
    return sorted(set(roots))


def _eval_mod(c, x, m):
    v = 0
    for a in reversed(c):
        v = (v * x + a) % m
    return v


def _eval_int(c, x):
    v = 0
    for a in reversed(c):
        v = v * x + a
    return v


def _good_prime(g: list[int]) -> int:
    """Smallest odd prime with ``g mod p`` square-free of full degree."""
    p = 3
    while True:
        if is_prime(p):
            dom = ModPrimePower(p)
            gp = MPoly.from_univariate(g, "y", dom)
            if gp.degree() == len(g) - 1:
                dg = gp.diff("y")
                if not dg.is_zero() and _field_gcd_univariate(gp, dg).degree() == 0:
                    return p
        p += 2


def lcm_denominators(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, Fraction):
            d = lcm(d, v.denominator)
    return d


__all__ = [
    "resultant",
    "sylvester_resultant",
    "sylvester_matrix",
    "bareiss_det",
    "gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "content_primitive",
    "poly_sqrt",
    "rational_roots",
    "NotASquare",
    "InexactDivision",
]
