import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellforge.exactpoly import MPoly
from pellforge.padic import (
    JacobianStatus, LocalSolution, PadicError, PadicPoint, classify_jacobian, det_mod_p, eval_mod, jacobian,
    newton_lift, newton_step, rank_mod_p, residual_valuation, scan_local,
)
from pellforge.system import PolySystem

from helpers import planted_square

PRIMES = [3, 5, 7, 11, 13, 17]




def _jacobian_mod(sys, pt, p):
    return [[eval_mod(d, pt, p) for d in row] for row in jacobian(sys)]


@settings(max_examples=100)
@given(st.integers(0, 2**32), st.integers(1, 3), st.sampled_from(PRIMES), st.integers(2, 40))
def test_lifting_contract(seed, n, p, K):
    rng = random.Random(seed)
    point = [rng.randint(-10**6, 10**6) for _ in range(n)]
    sys = planted_square(rng, n, point)
    pt = PadicPoint(p, 1, tuple(c % p for c in point), sys.vars)
    if det_mod_p(_jacobian_mod(sys, pt.coords, p), p) == 0:
        with pytest.raises(PadicError):
            newton_lift(sys, pt, K=K)
        return
    # one step at a time: the residual valuation doubles (capped at K)
    k, cur = 1, pt
    while k < K:
        k2 = min(2 * k, K)
        cur = newton_step(sys, cur, k2)
        assert residual_valuation(sys, cur) >= k2
        k = k2
    lifted = newton_lift(sys, pt, K=K)
    assert lifted == cur
    assert lifted.reduce(1) == pt
    # Hensel uniqueness: the lift of the planted point's shadow is the planted point
    assert lifted.coords == tuple(c % p**K for c in point)


def brute_force(sys, p):
    out = []
    J = jacobian(sys)
    for pt in itertools.product(range(p), repeat=sys.nvars):
        if all(eval_mod(e, pt, p) == 0 for e in sys.eqs):
            M = [[eval_mod(d, pt, p) for d in row] for row in J]
            status, det = classify_jacobian(M, p)
            out.append((pt, status, det))
    return out


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.integers(1, 3), st.sampled_from([2, 3, 5, 7]), st.integers(0, 1))
def test_scan_matches_brute_force(seed, n, p, square):
    rng = random.Random(seed)
    point = [rng.randrange(p) for _ in range(n)]
    sys = planted_square(rng, n, point, deg=p + 1)
    if not square and n > 1:
        sys = PolySystem(sys.vars, sys.eqs[:-1])
    got = [(s.point, s.status, s.det) for s in scan_local(sys, p)]
    assert got == brute_force(sys, p)
    assert tuple(point) in [g[0] for g in got]


def test_scan_with_fixed_variables():
    rng = random.Random(3)
    sys = planted_square(rng, 3, [1, 2, 3])
    full = scan_local(sys, 7)
    part = scan_local(sys, 7, fixed={"v0": 1})
    assert part == [s for s in full if s.point[0] == 1]
    with pytest.raises(KeyError):
        scan_local(sys, 7, fixed={"w": 0})
    with pytest.raises(ValueError):
        scan_local(sys, 8)


def test_parallel_scan_is_identical():
    rng = random.Random(11)
    sys = planted_square(rng, 3, [4, 5, 6], deg=4, terms=8)
    serial = [s.to_json() for s in scan_local(sys, 13, jobs=1)]
    parallel = [s.to_json() for s in scan_local(sys, 13, jobs=3)]
    assert serial == parallel


def test_jacobian_classification():
    assert classify_jacobian([[1, 0], [0, 1]], 5)[0] is JacobianStatus.INVERTIBLE
    assert classify_jacobian([[1, 2], [2, 4]], 5)[0] is JacobianStatus.SINGULAR_NONZERO
    assert classify_jacobian([[5, 0], [0, 10]], 5)[0] is JacobianStatus.ZERO_MATRIX
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1


def test_lift_errors():
    x, y = (MPoly.gen(v, ("x", "y")) for v in "xy")
    with pytest.raises(PadicError):
        newton_lift(PolySystem(("x", "y"), [x * x - 2]), [3, 0], p=7)  # not square
    sys = PolySystem(("x", "y"), [x * x - 2, y - 1])
    with pytest.raises(PadicError):
        newton_lift(sys, [0, 1], p=7)  # singular Jacobian at 0
    with pytest.raises(PadicError):
        newton_lift(sys, [1, 1], p=7)  # not a root
    root = newton_lift(sys, [3, 1], p=7, K=20)
    assert (root.coords[0] ** 2 - 2) % 7**20 == 0
    bad = LocalSolution((0, 1), sys.vars, 7, JacobianStatus.ZERO_MATRIX)
    with pytest.raises(PadicError):
        newton_lift(sys, bad)


def test_padic_point_json_roundtrip():
    pt = PadicPoint(17, 3, (1, 2, 4912), ("a", "b", "c"))
    assert PadicPoint.from_json(pt.to_json()) == pt
    with pytest.raises(ValueError):
        PadicPoint(17, 1, (17,))
