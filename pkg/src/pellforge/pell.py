"""Pell orbits of admissible parameters, integral points and their rho, and the quartic-field units."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import mpmath

from .builder import T, EpzFamily
from .modarith import hensel_lift_univariate, valuation

log = logging.getLogger(__name__)


class DegenerateForm(ValueError):
    pass


class NoSeed(ArithmeticError):
    pass


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class ConicForm:
    """``u^2 - D*s^2 = N`` with ``u = M*t + shift`` for ``kappa*Q(t) = s^2``.

    A solution ``u`` is admissible when ``u = r (mod M)``, which is exactly
    when ``t = (u - shift)/M`` is an integer.
    """

    D: int
    N: int
    M: int
    shift: int
    kappa: int

    @property
    def r(self) -> int:
        return self.shift % self.M

    def admissible(self, u: int) -> bool:
        return u % self.M == self.r

    def t_of(self, u: int) -> int:
        if not self.admissible(u):
            raise ValueError(f"u = {u} is not admissible")
        return (u - self.shift) // self.M

    def u_of(self, t: int) -> int:
        return self.M * t + self.shift


def conic_reduce(coeffs, kappa: int = 1) -> ConicForm:
    """Complete the square in ``kappa*Q(t) = s^2`` for ``Q = c2 t^2 + c1 t + c0``.

    ``coeffs`` is ``(c0, c1, c2)`` or a univariate MPoly.
    """
    if hasattr(coeffs, "univariate_coeffs"):
        coeffs = coeffs.univariate_coeffs()
    c0, c1, c2 = (list(coeffs) + [0, 0, 0])[:3]
    if any(Fraction(c).denominator != 1 for c in (c0, c1, c2)):
        raise ValueError("Q must have integer coefficients")
    c0, c1, c2 = int(c0), int(c1), int(c2)
    if kappa < 1:
        raise ValueError("kappa must be positive")
    if kappa * c2 <= 0:
        raise DegenerateForm("kappa*c2 must be positive")
    D = 4 * c2 * kappa
    N = kappa * kappa * (c1 * c1 - 4 * c2 * c0)
    if _is_square(D) or N == 0:
        raise DegenerateForm(f"u^2 - {D} s^2 = {N} is degenerate")
    M, shift = 2 * c2 * kappa, kappa * c1
    cap = gcd(M, shift) if shift else M
    g = 1
    for d in range(isqrt(D), 0, -1):
        if D % (d * d) == 0 and N % (d * d) == 0 and cap % d == 0:
            g = d
            break
    return ConicForm(D // (g * g), N // (g * g), M // g, shift // g, kappa)


def pell_fundamental(D: int) -> tuple[int, int]:
    """Least positive solution of ``U^2 - D V^2 = 1`` from the continued fraction of sqrt(D)."""
    if D <= 0 or _is_square(D):
        raise ValueError(f"D = {D} must be a positive nonsquare")
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    h0, h1 = 1, a0
    k0, k1 = 0, 1
    while h1 * h1 - D * k1 * k1 != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
    return h1, k1


def fundamental_solutions(D: int, N: int, unit: tuple[int, int] | None = None) -> list[tuple[int, int]]:
    """One representative of every class of ``u^2 - D s^2 = N`` under the unit group.

    The classical bounds ``0 <= s <= sqrt(N(U-1)/2D)`` for ``N > 0`` and
    ``0 < s <= sqrt(|N|(U+1)/2D)`` for ``N < 0`` make the list complete.
    """
    U, _ = unit or pell_fundamental(D)
    if N > 0:
        bound = isqrt(N * (U - 1) // (2 * D))
    else:
        bound = isqrt(-N * (U + 1) // (2 * D))
    reps = []
    for s in range(0, bound + 1):
        u2 = N + D * s * s
        if _is_square(u2):
            u = isqrt(u2)
            reps.extend({(u, s), (-u, s)})
    return sorted(reps)


@dataclass
class PellOrbit:
    form: ConicForm
    seeds: list[tuple[int, int]]
    unit: tuple[int, int]

    @classmethod
    def from_form(cls, form: ConicForm) -> PellOrbit:
        unit = pell_fundamental(form.D)
        seeds = fundamental_solutions(form.D, form.N, unit)
        if not seeds:
            raise NoSeed(f"u^2 - {form.D} s^2 = {form.N} has no integer solution")
        return cls(form, seeds, unit)

    def step(self, u: int, s: int, inverse: bool = False) -> tuple[int, int]:
        U, V = self.unit
        D = self.form.D
        if inverse:
            return U * u - D * V * s, U * s - V * u
        return U * u + D * V * s, V * u + U * s


def _has_admissible(orbit: PellOrbit) -> bool:
    """Whether some orbit meets ``u = r (mod M)``; ``(u, s) mod M`` is periodic under the unit."""
    form = orbit.form
    M = form.M
    for u, s in orbit.seeds:
        for start in ((u, s), (-u, -s)):
            cur = (start[0] % M, start[1] % M)
            first = cur
            while True:
                if cur[0] == form.r:
                    return True
                nu, ns = orbit.step(*cur)
                cur = (nu % M, ns % M)
                if cur == first:
                    break
    return False


def orbit_stream(orbit: PellOrbit, count: int) -> list[int]:
    """The ``count`` admissible ``t`` of smallest ``|t|`` (ties: negative first).

    Every orbit is walked in both directions with both signs until all new
    values of ``|u|`` exceed the ``count``-th admissible one.
    """
    form = orbit.form
    if count < 1:
        return []
    if not _has_admissible(orbit):
        raise NoSeed("no solution is admissible: kappa*Q(t) is never a square")
    found: set[int] = set()
    fronts = []
    for u, s in orbit.seeds:
        for su, ss in ((u, s), (-u, -s)):
            fronts.append([(su, ss), (su, ss)])
    for u, s in orbit.seeds:
        for su in (u, -u):
            if form.admissible(su):
                found.add(form.t_of(su))
    calm = 0
    while True:
        fresh = []
        for fr in fronts:
            fr[0] = orbit.step(*fr[0])
            fr[1] = orbit.step(*fr[1], inverse=True)
            fresh.extend((fr[0][0], fr[1][0]))
        for u in fresh:
            if form.admissible(u):
                found.add(form.t_of(u))
        ordered = sorted(found, key=lambda t: (abs(t), t))
        if len(ordered) >= count:
            limit = form.M * abs(ordered[count - 1]) + abs(form.shift)
            # |u| grows geometrically along every orbit; two quiet rounds past the limit suffice
            if min(abs(u) for u in fresh) > limit:
                calm += 1
                if calm >= 2:
                    return ordered[:count]
            else:
                calm = 0


# -- integral points -------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralPointRecord:
    t: int
    x: int
    y: int
    A: int
    B: int
    rho: mpmath.mpf = field(compare=False)

    @property
    def digits_x(self) -> int:
        return len(str(abs(self.x)))

    def to_json(self) -> dict:
        return {"t": str(self.t), "x": str(self.x), "y": str(self.y), "A": str(self.A), "B": str(self.B),
                "rho": mpmath.nstr(self.rho, 12), "digits_x": self.digits_x}


def rho(x: int, A: int, B: int, dps: int = 40) -> mpmath.mpf:
    """``log(x) / log(max(|A|^(1/2), |B|^(1/3)))`` with an interval-width check of 1e-6."""
    if x <= 1:
        raise ValueError("rho needs x > 1")
    if A == 0 and B == 0:
        raise ValueError("rho is undefined for A = B = 0")
    iv = mpmath.iv
    iv.dps = dps
    # |A|^(1/2) >= |B|^(1/3) exactly when |A|^3 >= |B|^2
    if abs(A) ** 3 >= B * B:
        den = iv.log(iv.mpf(abs(A))) / 2
    else:
        den = iv.log(iv.mpf(abs(B))) / 3
    if den.a <= 0:
        raise ValueError("max(|A|^(1/2), |B|^(1/3)) <= 1")
    r = iv.log(iv.mpf(x)) / den
    if r.delta > mpmath.mpf("1e-6"):
        raise ArithmeticError("rho interval too wide; raise dps")
    return mpmath.mpf(r.mid)


def _int(v) -> int:
    v = Fraction(v)
    if v.denominator != 1:
        raise ArithmeticError(f"{v} is not an integer")
    return v.numerator


def integral_points(fam: EpzFamily, kappa: int = 1, count: int = 10,
                    ts: list[int] | None = None) -> list[IntegralPointRecord]:
    """Integral points on ``y^2 = x^3 + kappa^2 A(t) x + kappa^3 B(t)`` for admissible ``t``.

    The point is ``(kappa X(t), kappa Y(t) s)`` where ``kappa Q(t) = s^2``.
    """
    if not fam.is_verified():
        raise ArithmeticError("family fails the EPZ identity")
    if ts is None:
        form = conic_reduce(fam.Q, kappa)
        ts = orbit_stream(PellOrbit.from_form(form), count)
    out = []
    for t in ts:
        v = fam.at(t)
        kq = kappa * _int(v["Q"])
        if not _is_square(kq):
            raise ArithmeticError(f"kappa*Q({t}) = {kq} is not a square")
        s = isqrt(kq)
        x, y = kappa * _int(v["X"]), kappa * _int(v["Y"]) * s
        A, B = kappa**2 * _int(v["A"]), kappa**3 * _int(v["B"])
        if y * y != x**3 + A * x + B:
            raise ArithmeticError(f"point at t = {t} is not on the curve")
        out.append(IntegralPointRecord(t, x, y, A, B, rho(x, A, B)))
    return out


# -- the quartic field apparatus ---------------------------------------------------------

@dataclass
class UnitPoint:
    exponents: tuple[int, int, int]
    u: object
    v: object
    t: object
    w: object
    valuations: dict[str, int]
    denominator: int

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "t": str(self.t), "w": str(self.w),
                "valuations": self.valuations, "denominator": str(self.denominator)}


def _local_root(field, p: int, r0: int, k: int) -> int:
    return hensel_lift_univariate([int(c) for c in field.integral_minpoly()], r0, p, k)


def _val_at_root(a, p: int, root: int, k: int) -> int:
    """Valuation of ``a`` in the completion where the generator maps to ``root``."""
    d = a.denominator()
    num = [int(c * d) for c in a.coords]
    m = p**k
    acc = 0
    for c in reversed(num):
        acc = (acc * root + c) % m
    return valuation(acc, p, k) - valuation(d, p)


def prime_valuations(a, k: int = 200) -> dict[str, int]:
    """Valuations of ``a`` at the primes above 2 and 3 of the quartic field.

    ``p2`` and ``q2`` are the degree-one primes where the generator is
    ``0`` and ``1`` mod 2, ``r2`` is the residue-degree-two prime, and ``p3``
    the ramified prime with ``(3) = p3^2``.
    """
    if not a:
        raise ValueError("valuation of zero")
    f = a.field
    v2 = valuation(Fraction(a.norm()).numerator, 2) - valuation(Fraction(a.norm()).denominator, 2)
    v3 = valuation(Fraction(a.norm()).numerator, 3) - valuation(Fraction(a.norm()).denominator, 3)
    vp = _val_at_root(a, 2, _local_root(f, 2, 0, k), k)
    vq = _val_at_root(a, 2, _local_root(f, 2, 1, k), k)
    return {"p2": vp, "q2": vq, "r2": (v2 - vp - vq) // 2, "p3": v3 // 2}


def nf_unit_point(i: int, j: int, k: int) -> UnitPoint:
    """``t = 2 sqrt(c0) u v + v^2 c1`` and ``w`` with ``w^2 = Q(t)`` from ``f1^i f2^j f3^k = u + v sqrt(c2)``."""
    from .data import case2_elements, case2_f_units, case2_printed
    from .numfield import RelQuadElem

    c0, c1, c2 = case2_printed()["c"]
    r = case2_elements()["sqrt_c0"]
    if r * r != c0:
        raise ArithmeticError("sqrt(c0) is wrong")
    f = [RelQuadElem(u, v, c2) for u, v in case2_f_units()]
    g = f[0] ** i * f[1] ** j * f[2] ** k
    u, v = g.u, g.v
    if g.rel_norm() != 1:
        raise ArithmeticError("unit power has relative norm != 1")
    t = 2 * r * u * v + v * v * c1
    w = r * (2 * c2 * v * v + 1) + c1 * u * v
    if w * w != c2 * t * t + c1 * t + c0:
        raise ArithmeticError("w^2 != Q(t)")
    vals = prime_valuations(t) if t else {}
    return UnitPoint((i, j, k), u, v, t, w, vals, t.denominator())


def norm_ratio_limit(fam: EpzFamily) -> Fraction:
    """``N(lc X) / N(lc A)^6`` for a family over the quartic field with ``deg X = 6``, ``deg A = 1``."""
    if fam.X.degree(T) != 6 or fam.A.degree(T) != 1:
        raise ValueError("needs deg X = 6 and deg A = 1")
    lx = fam.X.as_dict()[(6,)]
    la = fam.A.as_dict()[(1,)]
    return Fraction(lx.norm()) / Fraction(la.norm()) ** 6


__all__ = ["ConicForm", "DegenerateForm", "NoSeed", "conic_reduce", "pell_fundamental", "fundamental_solutions",
           "PellOrbit", "orbit_stream", "IntegralPointRecord", "integral_points", "rho", "UnitPoint",
           "nf_unit_point", "norm_ratio_limit", "prime_valuations"]
