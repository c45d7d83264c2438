"""Acceptance suite: one group of tests per published milestone.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.  Printed values that the computation does not
reproduce are kept as strict xfails so that a future fix surfaces loudly.
"""
import json
import random
import time
import warnings
from fractions import Fraction
from math import gcd, isqrt

import mpmath
import pytest

from pellforge.builder import T, appendix_case1_derivation, apply_moebius, make_template
from pellforge.cli import main
from pellforge.data import (
    CASE1, CASE1_BACKSUB, CASE1_POINT, CASE1_RESCALE, CASE3, DANILOV, case1_family, case2_elements, case2_f_units,
    case2_family, case2_known_point, case2_printed, case3_mod19, letter_family, quartic_field,
)
from pellforge.elim import (
    PositiveDimensional, back_substitute, eliminate_by_resultant, linear_substitute, reduce_case, solve_case1,
)
from pellforge.exactpoly import QQ, MPoly, PrimeField, RatFunc, parse_poly, poly_sqrt, rational_roots
from pellforge.modarith import hensel_lift_univariate, poly_eval_mod, roots_mod_prime
from pellforge.numfield import RelQuadElem, nf_minpoly
from pellforge.padic import (
    JacobianStatus, PadicPoint, classify_jacobian, det_mod_p, eval_mod, jacobian, newton_lift, newton_step,
    recognize, residual_valuation, scan_local,
)
from pellforge.pell import (
    DegenerateForm, NoSeed, PellOrbit, conic_reduce, integral_points, norm_ratio_limit, orbit_stream,
    pell_fundamental,
)
from pellforge.recog import algdep, rational_reconstruct
from pellforge.verify import (
    case3_mod19_family, classify_degenerate, curve_point_check, lift_case3_model, recover_Y, verify_identity,
)

from helpers import brute_admissible, planted, planted_square


def criterion(n):
    return pytest.mark.criterion(n)


def _mod_jacobian(sys, coords, p):
    return [[eval_mod(d, coords, p) for d in row] for row in jacobian(sys)]


# -- 1. first-case exact pipeline ------------------------------------------------------

@pytest.fixture(scope="module")
def case1_run():
    start = time.perf_counter()
    sol = solve_case1()
    return sol, time.perf_counter() - start


@criterion(1)
def test_c1_isolated_point(case1_run):
    sol, elapsed = case1_run
    assert sol.isolated == [CASE1_POINT]
    assert elapsed < 300


@criterion(1)
def test_c1_back_substitution(case1_run):
    sol, _ = case1_run
    [full] = sol.full_points
    assert {k: full[k] for k in CASE1_BACKSUB} == CASE1_BACKSUB
    assert make_template(CASE1).instantiate(full).is_verified()


def _printed_families():
    # (x0, x1, x2, q0) as functions of the printed parameter
    return [
        ("x2", lambda u: (Fraction(16 * u * u - 200 * u - 239, 192), Fraction(4 * u - 1, 8), u, Fraction(9, 4))),
        ("q0", lambda v: (None, -2 * v + 3, v - 5, v)),  # x0 free
    ]


@criterion(1)
def test_c1_parametric_families_extensionally(case1_run):
    sol, _ = case1_run
    rng = random.Random(11)
    printed = _printed_families()
    matched = set()
    for comp in sol.families:
        hits = set()
        for _ in range(6):
            vals = {p: Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for p in comp.params}
            pt = {}
            for k, v in comp.values.items():
                if isinstance(v, RatFunc):
                    pt[k] = Fraction(v.num.evaluate(vals)) / Fraction(v.den.evaluate(vals))
                else:
                    pt[k] = v.evaluate(vals) if isinstance(v, MPoly) else v
            got = tuple(Fraction(pt[k]) for k in ("x0", "x1", "x2", "q0"))
            assert sol.reduced.is_solution(dict(zip(("x0", "x1", "x2", "q0"), got)))
            for i, (param, fam) in enumerate(printed):
                want = fam(got[("x0", "x1", "x2", "q0").index(param)])
                if all(w is None or w == g for w, g in zip(want, got)):
                    hits.add(i)
        assert len(hits) == 1
        matched |= hits
    assert matched == {0, 1}


@criterion(1)
def test_c1_cli(capsys):
    assert main(["--json", "solve-case1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["isolated"] == [{k: str(v) for k, v in CASE1_POINT.items()}]
    assert data["back_substituted"][0]["a0"] == "216513/4096"


# -- 2. rescaled integral model -----------------------------------------------------------

@criterion(2)
def test_c2_rescaling_reproduces_integral_model(case1_run):
    sol, _ = case1_run
    [full] = sol.full_points
    raw = make_template(CASE1).instantiate(full)
    s = CASE1_RESCALE
    moved = apply_moebius(raw, Fraction(-9, 2), 1, multipliers=(s, -4 * s / 3, 9 * s / 16, s * s, s**3))
    printed = {
        "X": "6*(108*t^4 - 120*t^3 + 72*t^2 - 28*t + 5)",
        "Y": "72*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)",
        "Q": "2*(9*t^2 - 10*t + 3)",
        "A": "132",
        "B": "-144*(8*t - 1)",
    }
    for name, text in printed.items():
        want = parse_poly(text, (T,), QQ)
        got = getattr(moved, name).change_domain(QQ)
        assert got == want, name
    assert verify_identity(moved).passed
    assert verify_identity(case1_family()).passed
    assert not classify_degenerate(moved.A, moved.B).degenerate


# -- 3. the appendix derivation ----------------------------------------------------------------

APPENDIX_VARS = ("b1", "b2", "b3", "b4", "c", "t")


def _rf(num: str, den: str = "1") -> RatFunc:
    return RatFunc(parse_poly(num, APPENDIX_VARS, QQ), parse_poly(den, APPENDIX_VARS, QQ))


def _same(a, b) -> bool:
    a = a if isinstance(a, RatFunc) else RatFunc(a, a.one())
    b = b if isinstance(b, RatFunc) else RatFunc(b, b.one())
    return (a.num.change_domain(QQ) * b.den.change_domain(QQ) - b.num.change_domain(QQ) * a.den.change_domain(QQ)).is_zero()


PRINTED_A = ("3*b3^2*(b3 - b1*b2)^2*3*b3^2 + b2^4*(6*b1*b3^3 + 2*b2^2*b3^2 - 6*b1^2*b2*b3^2 - 2*b1*b2^3*b3"
             " + b1^2*b2^4)", "3*b2^2*b3^2")


@pytest.fixture(scope="module")
def appendix():
    start = time.perf_counter()
    tr = appendix_case1_derivation()
    assert time.perf_counter() - start < 60
    return tr


@criterion(3)
def test_c3_b4_and_c(appendix):
    assert _same(appendix["b4"], _rf("b2^2*(3*b3 - 2*b1*b2)", "6*b3"))
    assert _same(appendix["c"], _rf("(b3 - b1*b2)*(3*b3^2 - 3*b1*b2*b3 + 2*b2^3)", "3*b2^2*b3"))


@criterion(3)
def test_c3_A_up_to_the_printed_sign(appendix):
    # the printed expression is -A; its own specialization A = 528 fixes the sign
    assert _same(appendix["A"], -_rf(*PRINTED_A))


@criterion(3)
@pytest.mark.xfail(strict=True, reason="the printed A carries the opposite overall sign")
def test_c3_A_literal(appendix):
    assert _same(appendix["A"], _rf(*PRINTED_A))


@criterion(3)
def test_c3_coefficient_conditions_share_the_factor(appendix):
    cf = appendix["common_factor"]
    assert cf == parse_poly("b3 - b1*b2", APPENDIX_VARS, QQ) or cf == parse_poly("b1*b2 - b3", APPENDIX_VARS, QQ)
    t3 = _rf("(b3 - b1*b2)*(6*b3^3 - 6*b1*b2*b3^2 + 6*b2^3*b3 - 2*b1*b2^4)", "3*b3")
    t2 = _rf("(b3 - b1*b2)*(18*b3^5 + (15*b2^3 - 18*b1^2*b2^2)*b3^3 + 15*b1*b2^4*b3^2"
             " + (2*b2^6 - 6*b1^2*b2^5)*b3 - 2*b1*b2^7)", "9*b2*b3^2")
    assert _same(appendix["coeff_t3"], t3)
    assert _same(appendix["coeff_t2"], t2)
    for name in ("coeff_t3", "coeff_t2"):
        whole, cof = appendix[name], appendix[name + "_cofactor"]
        assert _same(whole, cof * RatFunc(cf, cf.one()))


@criterion(3)
def test_c3_b1_and_constraint(appendix):
    assert _same(appendix["b1"], _rf("3*b3*(b3^2 + b2^3)", "b2*(3*b3^2 + b2^3)"))
    assert _same(appendix["coeff_t2_at_b1"], _rf("2*b2^6*b3*(3*b3^2 - 2*b2^3)", "3*b3^2 + b2^3"))
    cons = appendix["constraint"]
    want = parse_poly("3*b3^2 - 2*b2^3", APPENDIX_VARS, QQ)
    assert cons == want or cons == -want


@criterion(3)
def test_c3_specialization(appendix):
    sp = appendix["specialization"]
    assert (sp["b2"], sp["b3"]) == (6, 12) and 3 * 12**2 == 2 * 6**3
    assert (sp["b1"], sp["c"], sp["b4"]) == (Fraction(10, 3), Fraction(-8, 9), -2)
    assert appendix["specialized_A"] == 528
    assert appendix["specialized_family"].is_verified()
    assert appendix["specialized_B"] == parse_poly("-128*(12*t + 31)", (T,), QQ)


@criterion(3)
@pytest.mark.xfail(strict=True, reason="the identity forces B = -128(12t+31); the printed sign is +")
def test_c3_B_literal(appendix):
    assert appendix["specialized_B"] == parse_poly("128*(12*t + 31)", (T,), QQ)


@criterion(3)
def test_c3_branches_degenerate(appendix):
    for name in ("branch_b3_eq_b1b2", "branch_b2_zero", "branch_b3_zero_c_zero"):
        br = appendix[name]
        assert classify_degenerate(br["A"], br["B"]).degenerate, name
        # independent check of the discriminant
        disc = br["A"] * br["A"] * br["A"] * 4 + br["B"] * br["B"] * 27
        assert (disc.num.is_zero() if isinstance(disc, RatFunc) else disc.is_zero() if isinstance(disc, MPoly)
                else disc == 0)


# -- 4. Pell milestones -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def letter_records():
    start = time.perf_counter()
    recs = integral_points(letter_family(), 2, count=18)
    assert time.perf_counter() - start < 60
    return recs


def _rho_oracle(x, A, B):
    with mpmath.workdps(60):
        den = max(mpmath.log(abs(A)) / 2, mpmath.log(abs(B)) / 3)
        return mpmath.log(x) / den


@criterion(4)
def test_c4_orbit_begins_and_matches_brute_force(letter_records):
    ts = [r.t for r in letter_records]
    assert ts[:3] == [1, -15, 529]
    c = tuple(int(v) for v in letter_family().Q.univariate_coeffs())
    brute = brute_admissible(c, 2)
    assert brute == [t for t in ts if abs(t) <= 10**5]


@criterion(4)
def test_c4_record_at_minus_15(letter_records):
    rec = letter_records[1]
    assert (rec.t, rec.x, abs(rec.B), rec.A) == (-15, 35334750, 17424, 132)
    assert curve_point_check(rec.x, rec.y, rec.A, rec.B)
    assert abs(rec.rho - mpmath.mpf("5.34")) <= mpmath.mpf("0.01")
    assert abs(rec.rho - _rho_oracle(rec.x, rec.A, rec.B)) < mpmath.mpf("1e-6")


@criterion(4)
def test_c4_ninth_record(letter_records):
    rec = letter_records[8]
    assert rec.t == 812111750209
    assert rec.digits_x == 51 and rec.rho > 10
    assert abs(rec.rho - _rho_oracle(rec.x, rec.A, rec.B)) < mpmath.mpf("1e-6")
    ratio = Fraction(rec.x, rec.B**4) * 2**25 * 3**4
    assert abs(ratio - 1) < Fraction(1, 100)


@criterion(4)
def test_c4_eighteenth_record(letter_records):
    rec = letter_records[17]
    assert rec.t == -48926085100653611109021839
    assert rec.rho > 11
    assert abs(rec.rho - _rho_oracle(rec.x, rec.A, rec.B)) < mpmath.mpf("1e-6")
    assert rec.y**2 == rec.x**3 + rec.A * rec.x + rec.B


@criterion(4)
@pytest.mark.xfail(strict=True, reason="x at the eighteenth value has 106 digits, not the printed 107")
def test_c4_eighteenth_digit_count(letter_records):
    assert letter_records[17].digits_x == 107


# -- 5. second-case field certificates --------------------------------------------------------------

@criterion(5)
def test_c5_field_identities():
    K = quartic_field()
    e = case2_elements()
    assert e["p2"] * e["q2"] * e["r2"] == K(2)
    assert e["p3"] ** 2 == 3 * e["eta1"] ** 2 * e["eta2"] ** -1
    assert e["beta"].norm() == 3271
    assert e["eta1"].norm() in (1, -1) and e["eta2"].norm() in (1, -1)


@criterion(5)
def test_c5_relative_norms_and_c0():
    K = quartic_field()
    e = case2_elements()
    c0, _, c2 = case2_printed()["c"]
    for u, v in case2_f_units():
        assert RelQuadElem(u, v, c2).rel_norm() == K(1)
        assert u * u - v * v * c2 == K(1)  # the same norm written out
    assert (e["q2"] * e["beta"] * e["eta2"]) ** 2 == c0


@criterion(5)
def test_c5_recover_Y_and_norm_ratio():
    d = case2_printed()
    Y = recover_Y(d["X"], d["A"], d["B"], d["Q"])
    assert Y is not None
    fam = case2_family()
    assert fam.is_verified()
    assert norm_ratio_limit(fam) == Fraction(1, 2**56 * 3**20 * 17**6 * 3271**11)


# -- 6. p-adic machinery end-to-end --------------------------------------------------------------------

def _primitive(poly: MPoly) -> tuple[int, ...]:
    coeffs = [Fraction(c) for c in poly.univariate_coeffs()]
    L = 1
    for c in coeffs:
        L = L * c.denominator // gcd(L, c.denominator)
    ints = [int(c * L) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    return tuple(ints) if ints[-1] > 0 else tuple(-c for c in ints)


@pytest.fixture(scope="module")
def case2_lift(r2, case2_shadow):
    seed = next(s for s in case2_shadow)
    pt = PadicPoint(17, 1, seed, r2.vars)
    J = jacobian(r2)
    lifted = newton_lift(r2, pt, K=64, J=J)
    return seed, lifted, J


@criterion(6)
def test_c6_shadow_is_an_invertible_solution(r2, case2_shadow):
    assert case2_shadow
    for seed in case2_shadow:
        assert all(eval_mod(e, seed, 17) == 0 for e in r2.eqs)
        status, det = classify_jacobian(_mod_jacobian(r2, seed, 17), 17)
        assert status is JacobianStatus.INVERTIBLE and det


@criterion(6)
def test_c6_lift_to_17_64(r2, case2_lift):
    seed, lifted, _ = case2_lift
    assert lifted.k == 64 and lifted.reduce(1).coords == seed
    assert residual_valuation(r2, lifted) >= 64


@criterion(6)
def test_c6_recognition_matches_golden_minpolys(r2, case2_lift):
    _, lifted, J = case2_lift
    known = case2_known_point()
    found = recognize(r2, lifted, dmax=4, k_max=256, J=J)
    for v in r2.vars:
        cand, k = found[v]
        assert cand is not None and cand.verified, v
        assert cand.coeffs == _primitive(nf_minpoly(known[v])), v
    q0 = found["q0"][0]
    assert q0.degree == 4


# -- 7. the full mod-17 scan ---------------------------------------------------------------------------

@criterion(7)
def test_c7_full_scan_serial_equals_parallel(r2, case2_shadow):
    start = time.perf_counter()
    serial = scan_local(r2, 17, jobs=1)
    parallel = scan_local(r2, 17, jobs=2)
    assert time.perf_counter() - start < 600
    dump = lambda sols: json.dumps([s.to_json() for s in sols], sort_keys=True)  # noqa: E731
    assert dump(serial) == dump(parallel)
    invertible = {s.point for s in serial if s.status is JacobianStatus.INVERTIBLE}
    assert set(case2_shadow) <= invertible


# -- 8. third-case model modulo 19 --------------------------------------------------------------------------

@criterion(8)
def test_c8_mod19_model_lifts():
    m = case3_mod19()
    assert recover_Y(m["X"], m["A"], m["B"], m["Q"]) is not None
    fam = case3_mod19_family()
    assert fam.is_verified() and fam.Y.coeff_in(T, 10).is_zero()
    lifted, val = lift_case3_model(8)
    assert lifted.p == 19 and lifted.k == 8 and val >= 8


@criterion(8)
def test_c8_case3_scan_at_5_is_consistent():
    # the p = 19 scan is out of reach; the same code path runs at p = 5
    red = reduce_case(CASE3)
    sols = scan_local(red, 5, jobs=2)
    assert sols
    for s in sols[:50]:
        assert all(eval_mod(e, s.point, 5) == 0 for e in red.eqs)
    assert [s.to_json() for s in sols] == [s.to_json() for s in scan_local(red, 5, fixed=None, jobs=1)]


# -- 9. Danilov's identity -------------------------------------------------------------------------------------

@criterion(9)
def test_c9_danilov_identity():
    start = time.perf_counter()
    lhs, rhs = (parse_poly(s, (T,), QQ) for s in DANILOV)
    assert (lhs - rhs).is_zero()
    assert time.perf_counter() - start < 1
    # and pointwise, in plain integers
    for t in range(-20, 21):
        assert (t * t + 10 * t + 5) ** 3 - (t * t + 22 * t + 125) * (t * t + 4 * t - 1) ** 2 == 1728 * t


# -- 10. property suites with fixed seeds --------------------------------------------------------------------

@criterion(10)
def test_c10_lifting_contract_on_100_planted_systems():
    rng = random.Random(20240101)
    done = 0
    while done < 100:
        n, p, K = rng.randint(1, 3), rng.choice([3, 5, 7, 11, 13, 17]), 32
        point = [rng.randint(-10**6, 10**6) for _ in range(n)]
        sys = planted_square(rng, n, point)
        seed = PadicPoint(p, 1, tuple(c % p for c in point), sys.vars)
        if det_mod_p(_mod_jacobian(sys, seed.coords, p), p) == 0:
            continue
        k, cur = 1, seed
        while k < K:
            cur = newton_step(sys, cur, min(2 * k, K))
            k = min(2 * k, K)
            assert residual_valuation(sys, cur) >= k
        assert cur.coords == tuple(c % p**K for c in point)
        assert cur.reduce(1) == seed
        done += 1


@criterion(10)
def test_c10_poly_sqrt_roundtrip():
    rng = random.Random(5)
    for dom in (QQ, PrimeField(17), PrimeField(19)):
        for _ in range(20):
            deg = rng.randint(1, 7)
            coeffs = [rng.randint(-30, 30) for _ in range(deg)] + [rng.choice([-3, -1, 1, 2, 5])]
            Y = MPoly.from_univariate(coeffs, "t", QQ).change_domain(dom)
            if Y.degree("t") < 1:
                continue
            r = poly_sqrt(Y * Y)
            assert r == Y or r == -Y
            t = MPoly.gen("t", ("t",), dom)
            assert poly_sqrt(Y * Y * (t * t + 1)) is None


def _simple_root(f):
    for p in (7, 11, 13, 17, 19, 23, 29, 31):
        if f[-1] % p == 0:
            continue
        df = [i * c for i, c in enumerate(f)][1:]
        for r in roots_mod_prime(list(f), p):
            if poly_eval_mod(df, r, p):
                return p, r
    return None


@criterion(10)
def test_c10_algdep_roundtrip():
    rng = random.Random(77)
    done = 0
    while done < 25:
        deg = rng.randint(2, 3)
        f = [rng.randint(-10**4, 10**4) for _ in range(deg)] + [rng.randint(1, 10**4)]
        g = 0
        for c in f:
            g = gcd(g, c)
        f = tuple(c // g for c in f)
        if f[0] == 0 or rational_roots(MPoly.from_univariate(f, "z", QQ)):
            continue  # degree <= 3 without rational roots is irreducible
        found = _simple_root(f)
        if found is None:
            continue
        p, r = found
        lift = lambda K, f=f, r=r, p=p: hensel_lift_univariate(list(f), r, p, K)  # noqa: E731
        best = algdep(lift(128), p, 128, deg, relift=lift)[0]
        assert best.coeffs == f and best.verified
        done += 1


@criterion(10)
def test_c10_rational_reconstruct_roundtrip():
    rng = random.Random(3)
    for _ in range(200):
        p, k = rng.choice([3, 5, 7, 17]), rng.randint(8, 40)
        m = p**k
        N = isqrt((m - 1) // 2)
        d = rng.randint(1, N)
        if d % p == 0:
            continue
        n = rng.randint(-N, N)
        q = Fraction(n, d)
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruct(a, m) == q


@criterion(10)
def test_c10_orbit_exhaustive_against_brute_force():
    for fam, kappa in ((case1_family(), 1), (letter_family(), 2)):
        c = tuple(int(v) for v in fam.Q.univariate_coeffs())
        brute = brute_admissible(c, kappa, 20000)
        assert orbit_stream(PellOrbit.from_form(conic_reduce(c, kappa)), len(brute)) == brute
    rng = random.Random(9)
    done = 0
    while done < 8:
        c = (rng.randint(-40, 40), rng.randint(-40, 40), rng.randint(1, 12))
        kappa = rng.randint(1, 3)
        try:
            form = conic_reduce(c, kappa)
            orbit = PellOrbit.from_form(form)
        except (DegenerateForm, NoSeed):
            continue
        if pell_fundamental(form.D)[0] > 10**6:
            continue
        brute = brute_admissible(c, kappa, 20000)
        if brute:
            assert orbit_stream(orbit, len(brute)) == brute
        else:
            with pytest.raises(NoSeed):
                orbit_stream(orbit, 3)
        done += 1


@criterion(10)
def test_c10_elimination_soundness_on_planted_solutions():
    rng = random.Random(123)
    for _ in range(60):
        pt = {v: rng.randint(-4, 4) for v in ("a", "b", "c")}
        sys = planted(rng, pt, linear_in="a")
        red = linear_substitute(sys, "a", 0)
        rest = {k: pt[k] for k in red.vars}
        assert red.is_solution(rest)
        assert back_substitute(red, rest)["a"] == pt["a"]
        sys = planted(rng, pt)
        pivots = [i for i, e in enumerate(sys.eqs) if e.degree("a") >= 1]
        if not pivots:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PositiveDimensional)
            red = eliminate_by_resultant(sys, "a", pivots[0])
        assert red.is_solution({k: pt[k] for k in red.vars})
