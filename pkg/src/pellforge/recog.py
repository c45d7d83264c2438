"""Recognition of p-adic residues as rationals or algebraic numbers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable

from .modarith import valuation

DELTA = Fraction(99, 100)


class DependentRows(ValueError):
    pass


@dataclass
class IntLattice:
    """Row basis of an integer lattice, with the unimodular transform from the input."""

    basis: list[list[int]]
    transform: list[list[int]] | None = None

    def __post_init__(self):
        self.basis = [list(map(int, r)) for r in self.basis]
        if self.transform is None:
            n = len(self.basis)
            self.transform = [[int(i == j) for j in range(n)] for i in range(n)]

    @property
    def rank(self) -> int:
        return len(self.basis)


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(L: IntLattice | list, delta: Fraction = DELTA) -> IntLattice:
    """Integral LLL (all Gram-Schmidt data kept as exact integers).

    Raises :class:`DependentRows` when the rows are linearly dependent.
    """
    if not isinstance(L, IntLattice):
        L = IntLattice(L)
    b = [row[:] for row in L.basis]
    H = [row[:] for row in L.transform]
    n = len(b)
    if n == 0:
        return IntLattice([], [])
    num, den = delta.numerator, delta.denominator
    d = [0] * (n + 1)  # d[i+1] = Gram determinant of the first i+1 rows; d[0] = 1
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = _dot(b[0], b[0])
    if d[1] == 0:
        raise DependentRows("zero row")

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = _dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise DependentRows("rows are linearly dependent")
                    d[k + 1] = u
        red(k, k - 1)
        lm = lam[k][k - 1]
        if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lm * lm:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return IntLattice(b, H)


def gram_schmidt(basis) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Exact Gram-Schmidt vectors and coefficients ``mu``."""
    bstar: list[list[Fraction]] = []
    mu = [[Fraction(0)] * len(basis) for _ in basis]
    for i, row in enumerate(basis):
        v = [Fraction(x) for x in row]
        for j in range(i):
            nj = sum(x * x for x in bstar[j])
            mu[i][j] = sum(Fraction(a) * c for a, c in zip(row, bstar[j])) / nj
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
    return bstar, mu


def is_lll_reduced(basis, delta: Fraction = DELTA) -> bool:
    bstar, mu = gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    norms = [sum(x * x for x in v) for v in bstar]
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


# -- rational reconstruction ------------------------------------------------

def rational_reconstruct(a: int, m: int, bound: int | None = None) -> Fraction | None:
    """``n/d`` with ``|n|, d <= N``, ``gcd(d, m) == 1`` and ``n == a*d (mod m)``.

    The default ``N`` is the largest integer with ``2*N*N < m``, which makes
    the answer unique.
    """
    N = bound if bound is not None else isqrt((m - 1) // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > N:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > N:
        return None
    n, d = (r1, s1) if s1 > 0 else (-r1, -s1)
    if gcd(d, m) != 1 or (n - a * d) % m:
        return None
    return Fraction(n, d)


# -- algdep -----------------------------------------------------------------

@dataclass(order=True)
class MinPolyCandidate:
    """Integer polynomial (low-to-high coefficients), primitive with positive leading coefficient."""

    sort_key: tuple = field(init=False, repr=False)
    coeffs: tuple[int, ...]
    quality: int
    verified: bool = False

    def __post_init__(self):
        self.sort_key = (not self.verified, -self.quality, len(self.coeffs), max(abs(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_mpoly(self, var: str = "z"):
        from .exactpoly import ZZ, MPoly

        return MPoly.from_univariate(self.coeffs, var, ZZ)

    def __str__(self):
        return str(self.as_mpoly())


def _normalize(coeffs: list[int]) -> tuple[int, ...] | None:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return None
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    coeffs = [c // g for c in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def _eval_val(coeffs, a: int, p: int, k: int) -> int:
    m = p**k
    v = 0
    for c in reversed(coeffs):
        v = (v * a + c) % m
    return valuation(v, p, cap=k)


def _divides(g: tuple[int, ...], f: tuple[int, ...]) -> bool:
    """Whether ``g`` divides ``f`` in Q[x] (coefficients constant term first)."""
    r = [Fraction(c) for c in f]
    dg = len(g) - 1
    for i in range(len(r) - 1, dg - 1, -1):
        q = r[i] / g[-1]
        if q:
            for j in range(dg + 1):
                r[i - dg + j] -= q * g[j]
    return not any(r[:dg])


def algdep(a: int, p: int, k: int, dmax: int, relift: Callable[[int], int] | None = None,
           early_exit: bool = True) -> list[MinPolyCandidate]:
    """Small integer polynomials vanishing at the residue ``a`` modulo ``p**k``.

    Degrees ``1..dmax`` are tried in order.  For each the lattice of integer
    relations ``sum c_i a^i == 0 (mod p^k)`` is LLL-reduced and the short
    vectors become candidates.  ``relift(K)`` must return the same p-adic
    number modulo ``p**K``; with it, a candidate whose value at twice the
    precision has valuation ``>= 3k/2`` is marked verified.  Without it
    nothing is verified and the sweep runs through ``dmax``.
    Rule of thumb: ``p**k`` should exceed ``H**(2d)`` for height ``H`` and degree ``d``.
    """
    m = p**k
    a %= m
    hi = relift(2 * k) if relift is not None else None
    if hi is not None and hi % m != a:
        raise ValueError("relift is inconsistent with the given residue")
    out: list[MinPolyCandidate] = []
    seen = set()
    for d in range(1, dmax + 1):
        rows = [[m] + [0] * d]
        pw = 1
        for i in range(1, d + 1):
            pw = pw * a % m
            rows.append([-pw] + [int(j == i) for j in range(1, d + 1)])
        red = lll_reduce(IntLattice(rows))
        bound = None
        for vec in red.basis:
            c = _normalize(list(vec))
            if c is None or c in seen or len(c) - 1 != d:
                continue
            if any(_divides(prev.coeffs, c) for prev in out):
                # a multiple of a relation already found says nothing new
                continue
            height = max(abs(x) for x in c)
            if height * height >= m:
                continue
            if bound is not None and height > bound:
                continue
            seen.add(c)
            if hi is not None:
                q = _eval_val(c, hi, p, 2 * k)
                ok = 2 * q >= 3 * k
            else:
                q, ok = _eval_val(c, a, p, k), False
            out.append(MinPolyCandidate(c, q, ok))
            bound = height if bound is None else bound
        if early_exit and any(c.verified for c in out):
            break
    out.sort()
    return out


__all__ = ["IntLattice", "DependentRows", "lll_reduce", "is_lll_reduced", "gram_schmidt",
           "rational_reconstruct", "MinPolyCandidate", "algdep"]
