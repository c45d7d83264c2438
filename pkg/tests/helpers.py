"""Generators shared by the property suites and the acceptance suite."""
from math import isqrt

from pellforge.exactpoly import ZZ, MPoly
from pellforge.system import PolySystem

ELIM_VARS = ("a", "b", "c")


def planted_square(rng, n, point, deg=3, terms=5):
    """``n`` equations in ``n`` unknowns vanishing at the integer ``point``."""
    vars = tuple(f"v{i}" for i in range(n))
    eqs = []
    for _ in range(n):
        d = {}
        for _ in range(terms):
            e = tuple(rng.randrange(deg + 1) for _ in vars)
            d[e] = rng.randint(-9, 9)
        # a linear part keeps most Jacobians invertible
        for j in range(n):
            e = tuple(int(i == j) for i in range(n))
            d[e] = d.get(e, 0) + rng.randint(-9, 9)
        f = MPoly.from_dict(d, vars, ZZ)
        eqs.append(f - f.evaluate(dict(zip(vars, point))))
    return PolySystem(vars, eqs)


def rand_poly(rng, vars, deg=2, terms=4, coeff=5):
    d = {}
    for _ in range(terms):
        e = tuple(rng.randrange(deg + 1) for _ in vars)
        d[e] = d.get(e, 0) + rng.randint(-coeff, coeff)
    return MPoly.from_dict(d, vars, ZZ)


def planted(rng, point, linear_in=None, permissive=False):
    """Three equations in a, b, c vanishing at ``point``; the first is linear in ``linear_in``."""
    V = ELIM_VARS
    eqs = []
    for i in range(3):
        f = rand_poly(rng, V)
        if i == 0 and linear_in:
            x = MPoly.gen(linear_in, V)
            others = tuple(v for v in V if v != linear_in)
            coef = rand_poly(rng, V, deg=1).with_vars(V) if permissive else MPoly.const(rng.choice([-3, -1, 2, 5]), V)
            coef = MPoly.from_dict({e: c for e, c in coef.items() if not e[V.index(linear_in)]}, V, ZZ)
            if coef.is_zero():
                coef = MPoly.const(1, V)
            f = coef * x + rand_poly(rng, others).with_vars(V)
        f = f - f.evaluate(point)
        if not f.is_zero():
            eqs.append(f)
    return PolySystem(V, eqs)


def brute_admissible(c, kappa, bound=10**5):
    """Every ``|t| <= bound`` with ``kappa*(c2 t^2 + c1 t + c0)`` a square, ordered by ``|t|``."""
    c0, c1, c2 = c
    out = []
    for t in range(-bound, bound + 1):
        v = kappa * (c2 * t * t + c1 * t + c0)
        if v >= 0 and isqrt(v) ** 2 == v:
            out.append(t)
    return sorted(out, key=lambda t: (abs(t), t))
