"""Local search: F_p solutions of a reduced system, Jacobian tags, and p-adic Newton lifting."""
from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import kernels
from .exactpoly import MPoly, is_prime
from .modarith import valuation
from .system import PolySystem

log = logging.getLogger(__name__)

MAX_SCAN_PRIME = 1 << 20  # keeps p^3 inside a signed 64-bit accumulator


class PadicError(ArithmeticError):
    pass


class JacobianStatus(enum.Enum):
    INVERTIBLE = "Invertible"
    SINGULAR_NONZERO = "SingularNonzero"
    ZERO_MATRIX = "ZeroMatrix"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PadicPoint:
    """Residues modulo ``p**k``, one per system variable."""

    p: int
    k: int
    coords: tuple[int, ...]
    vars: tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("precision must be at least 1")
        m = self.modulus
        if any(not 0 <= c < m for c in self.coords):
            raise ValueError("coordinates must be reduced modulo p^k")

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def reduce(self, k: int) -> PadicPoint:
        if k > self.k:
            raise ValueError("cannot raise precision by reduction")
        m = self.p**k
        return PadicPoint(self.p, k, tuple(c % m for c in self.coords), self.vars)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.vars, self.coords))

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "vars": list(self.vars), "coords": [str(c) for c in self.coords]}

    @classmethod
    def from_json(cls, d: Mapping) -> PadicPoint:
        return cls(int(d["p"]), int(d["k"]), tuple(int(c) for c in d["coords"]), tuple(d.get("vars", ())))


@dataclass(frozen=True)
class LocalSolution:
    point: tuple[int, ...]
    vars: tuple[str, ...]
    p: int
    status: JacobianStatus
    det: int | None = None

    def as_padic(self) -> PadicPoint:
        return PadicPoint(self.p, 1, self.point, self.vars)

    def to_json(self) -> dict:
        return {"coords": dict(zip(self.vars, self.point)), "status": str(self.status),
                "detJ": self.det}


# -- modular evaluation ------------------------------------------------------------

def _coeff_mod(c, m: int) -> int:
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return c.numerator % m
        return c.numerator * pow(c.denominator, -1, m) % m
    return int(c) % m


def eval_mod(poly: MPoly, point: Sequence[int], m: int) -> int:
    """``poly(point) mod m``; ``point`` follows ``poly.vars``."""
    degs = poly.degrees()
    powers = []
    for x, d in zip(point, degs):
        pw = [1] * (d + 1)
        for i in range(1, d + 1):
            pw[i] = pw[i - 1] * x % m
        powers.append(pw)
    total = 0
    for exps, c in poly.items():
        term = _coeff_mod(c, m)
        for pw, e in zip(powers, exps):
            if e:
                term = term * pw[e] % m
        total += term
    return total % m


def jacobian(sys: PolySystem) -> list[list[MPoly]]:
    """Formal partial derivatives, entry ``(i, j) = d eq_i / d var_j``."""
    return [[e.diff(v) for v in sys.vars] for e in sys.eqs]


def _solve_mod(M: list[list[int]], b: list[int], p: int, m: int) -> list[int]:
    """Solve ``M x = b`` modulo ``m = p^k`` when ``det M`` is a unit."""
    n = len(M)
    A = [[M[i][j] % m for j in range(n)] + [b[i] % m] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] % p), None)
        if piv is None:
            raise PadicError("Jacobian is not invertible modulo p")
        A[col], A[piv] = A[piv], A[col]
        inv = pow(A[col][col], -1, m)
        A[col] = [v * inv % m for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [(vr - f * vc) % m for vr, vc in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def det_mod_p(M: list[list[int]], p: int) -> int:
    """Determinant modulo a prime by Gaussian elimination."""
    n = len(M)
    A = [[v % p for v in row] for row in M]
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col] % p
        inv = pow(A[col][col], -1, p)
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] * inv % p
                A[r] = [(vr - f * vc) % p for vr, vc in zip(A[r], A[col])]
    return det % p


def rank_mod_p(M: list[list[int]], p: int) -> int:
    A = [[v % p for v in row] for row in M]
    rank, ncols = 0, len(A[0]) if A else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        for r in range(len(A)):
            if r != rank and A[r][col]:
                f = A[r][col] * inv % p
                A[r] = [(vr - f * vc) % p for vr, vc in zip(A[r], A[rank])]
        rank += 1
    return rank


def classify_jacobian(J: list[list[int]], p: int) -> tuple[JacobianStatus, int | None]:
    """Tag a Jacobian evaluated mod ``p``; the determinant is reported for square matrices."""
    if all(v % p == 0 for row in J for v in row):
        return JacobianStatus.ZERO_MATRIX, (0 if len(J) == len(J[0]) else None)
    if len(J) == len(J[0]):
        d = det_mod_p(J, p)
        return (JacobianStatus.INVERTIBLE if d else JacobianStatus.SINGULAR_NONZERO), d
    full = rank_mod_p(J, p) == len(J[0])
    return (JacobianStatus.INVERTIBLE if full else JacobianStatus.SINGULAR_NONZERO), None


def _jac_at(J, point, m):
    return [[eval_mod(e, point, m) for e in row] for row in J]


# -- the scan ---------------------------------------------------------------------

def _fold(e: int, p: int) -> int:
    return 0 if e == 0 else (e - 1) % (p - 1) + 1


def _folded(poly: MPoly, p: int) -> tuple[list[int], list[int]]:
    """Flat folded exponents and residues; monomials that collide are merged."""
    acc: dict[tuple, int] = {}
    for exps, c in poly.items():
        key = tuple(_fold(e, p) for e in exps)
        acc[key] = (acc.get(key, 0) + _coeff_mod(c, p)) % p
    flat, coeffs = [], []
    for key in sorted(acc):
        if acc[key]:
            flat.extend(key)
            coeffs.append(acc[key])
    return flat, coeffs


def _specialize_poly(e: MPoly, fixed: Mapping[str, int], free: tuple, p: int) -> MPoly:
    e = e.substitute_many(fixed) if fixed else e
    e = e.with_vars(free)
    acc: dict[tuple, int] = {}
    for exps, c in e.items():
        acc[exps] = (acc.get(exps, 0) + _coeff_mod(c, p)) % p
    return MPoly.from_dict({k: v for k, v in acc.items() if v}, free, e.domain)


def _fiber_point(a: int, idx: int, m: int, p: int) -> tuple[int, ...]:
    rest = []
    for _ in range(m):
        idx, r = divmod(idx, p)
        rest.append(r)
    return (a,) + tuple(reversed(rest))


def _scan_chunk(args) -> list[tuple[tuple[int, ...], str, int | None]]:
    """Solutions over the given outer values, each with its Jacobian tag."""
    folded, jac, nvars, p, outers = args
    out = []
    m = nvars - 1
    for a in outers:
        hits = kernels.scan_fiber(folded, nvars, p, a)
        if not hits:
            continue
        # Jacobian entries are evaluated on the whole fiber only when it has solutions
        vals = [[kernels.transform(kernels.fiber_table(ex, co, nvars, p, a), p, m) if co else None
                 for ex, co in row] for row in jac]
        for idx in hits:
            J = [[v[idx] if v is not None else 0 for v in row] for row in vals]
            status, det = classify_jacobian(J, p)
            out.append((_fiber_point(a, idx, m, p), status.value, det))
    return out


def scan_local(sys: PolySystem, p: int, fixed: Mapping[str, int] | None = None,
               jobs: int = 1) -> list[LocalSolution]:
    """Every F_p point where all equations vanish, in lexicographic order, tagged by Jacobian.

    The outer free variable is partitioned across ``jobs`` worker processes;
    chunks come back sorted and are concatenated in order, so the result does
    not depend on ``jobs``.  The Jacobian is taken in all system variables.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p >= MAX_SCAN_PRIME:
        raise ValueError("prime too large for the dense scan")
    fixed = {v: int(x) % p for v, x in (fixed or {}).items()}
    unknown = set(fixed) - set(sys.vars)
    if unknown:
        raise KeyError(f"fixed variables not in the system: {sorted(unknown)}")
    free = tuple(v for v in sys.vars if v not in fixed)
    eqs = [_specialize_poly(e, fixed, free, p) for e in sys.eqs]
    jac = [[_specialize_poly(d, fixed, free, p) for d in row] for row in jacobian(sys)]
    if not free:
        found = []
        if all(e.is_zero() for e in eqs):
            J = [[d.constant_value() if not d.is_zero() else 0 for d in row] for row in jac]
            status, det = classify_jacobian(J, p)
            found = [((), status.value, det)]
    elif any(e.is_constant() and not e.is_zero() for e in eqs):
        found = []
    else:
        folded = [_folded(e, p) for e in eqs if not e.is_zero()]
        jfold = [[_folded(d, p) for d in row] for row in jac]
        jobs = max(1, min(jobs, p))
        work = [(folded, jfold, len(free), p, list(range(p))[i::jobs]) for i in range(jobs)]
        if jobs == 1:
            parts = [_scan_chunk(w) for w in work]
        else:
            with ProcessPoolExecutor(jobs) as ex:
                parts = list(ex.map(_scan_chunk, work))
        found = sorted(sol for part in parts for sol in part)
    out = []
    for pt, status, det in found:
        values = dict(zip(free, pt))
        values.update(fixed)
        full = tuple(values[v] for v in sys.vars)
        out.append(LocalSolution(full, sys.vars, p, JacobianStatus(status), det))
    log.info("scan mod %d: %d local solutions", p, len(out))
    return out


# -- lifting ----------------------------------------------------------------------

def residual_valuation(sys: PolySystem, point: PadicPoint) -> int:
    """Minimum over the equations of the valuation of ``eq(point)``, capped at ``point.k``."""
    m = point.modulus
    return min((valuation(eval_mod(e, point.coords, m), point.p, point.k) for e in sys.eqs), default=point.k)


def _as_point(seed, sys: PolySystem, p: int | None) -> PadicPoint:
    if isinstance(seed, PadicPoint):
        return seed
    if isinstance(seed, LocalSolution):
        if seed.status is not JacobianStatus.INVERTIBLE:
            raise PadicError(f"seed has {seed.status} Jacobian")
        return seed.as_padic()
    if p is None:
        raise ValueError("a bare seed needs p")
    if isinstance(seed, Mapping):
        seed = [seed[v] for v in sys.vars]
    return PadicPoint(p, 1, tuple(int(c) % p for c in seed), sys.vars)


def newton_step(sys: PolySystem, point: PadicPoint, k_new: int, J=None) -> PadicPoint:
    """``s - J(s)^{-1} f(s)`` computed modulo ``p**k_new``."""
    J = J or jacobian(sys)
    m = point.p**k_new
    s = list(point.coords)
    f = [eval_mod(e, s, m) for e in sys.eqs]
    Js = _jac_at(J, s, m)
    delta = _solve_mod(Js, f, point.p, m)
    return PadicPoint(point.p, k_new, tuple((x - d) % m for x, d in zip(s, delta)), sys.vars)


def newton_lift(sys: PolySystem, seed, p: int | None = None, K: int = 64, J=None) -> PadicPoint:
    """Quadratic lift of a nonsingular seed to precision ``p**K`` (``k -> min(2k, K)``)."""
    if len(sys.eqs) != len(sys.vars):
        raise PadicError(f"system is not square: {len(sys.eqs)} equations in {len(sys.vars)} unknowns")
    pt = _as_point(seed, sys, p)
    J = J or jacobian(sys)
    if det_mod_p(_jac_at(J, pt.coords, pt.p), pt.p) == 0:
        raise PadicError("Jacobian is singular modulo p at the seed")
    k = residual_valuation(sys, pt)
    if k < 1:
        raise PadicError("seed is not a solution modulo p")
    if K <= k:
        return pt.reduce(K)
    pt = pt.reduce(k)
    while k < K:
        k2 = min(2 * k, K)
        pt = newton_step(sys, pt, k2, J)
        if residual_valuation(sys, pt) < k2:
            raise PadicError("Newton step lost quadratic convergence")
        k = k2
    return pt


def recognize(sys: PolySystem, point: PadicPoint, dmax: int = 4, k_max: int = 512, J=None) -> dict:
    """``algdep`` on every coordinate, doubling the lift precision until a candidate verifies.

    Returns ``{var: (candidate or None, precision used)}``.
    """
    from .recog import algdep

    J = J or jacobian(sys)
    cache = {point.k: point}

    def at(K: int) -> PadicPoint:
        if K not in cache:
            base = max(k for k in cache if k <= K)
            cache[K] = newton_lift(sys, cache[base], K=K, J=J)
        return cache[K]

    out = {}
    for i, v in enumerate(sys.vars):
        k = point.k
        while True:
            cands = algdep(at(k).coords[i], point.p, k, dmax, relift=lambda K, i=i: at(K).coords[i])
            good = [c for c in cands if c.verified]
            if good or 2 * k > k_max:
                out[v] = (good[0] if good else None, k)
                break
            k *= 2
    return out


__all__ = ["PadicPoint", "LocalSolution", "JacobianStatus", "PadicError", "jacobian", "scan_local",
           "newton_lift", "newton_step", "recognize", "residual_valuation", "eval_mod", "det_mod_p", "classify_jacobian"]
