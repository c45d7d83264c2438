import random
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellforge.data import case1_family, case2_elements, case2_printed, letter_family
from pellforge.exactpoly import MPoly
from pellforge.pell import (
    ConicForm, DegenerateForm, NoSeed, PellOrbit, conic_reduce, fundamental_solutions, integral_points,
    nf_unit_point, orbit_stream, pell_fundamental, rho,
)

from helpers import brute_admissible




def orbit_ts(c, kappa, count):
    return orbit_stream(PellOrbit.from_form(conic_reduce(c, kappa)), count)


def _q_coeffs(fam):
    return tuple(int(x) for x in fam.Q.univariate_coeffs())


@pytest.mark.parametrize("fam,kappa", [(case1_family, 1), (letter_family, 2)], ids=["case1", "letter"])
def test_orbit_matches_brute_force(fam, kappa):
    c = _q_coeffs(fam())
    brute = brute_admissible(c, kappa)
    assert brute
    assert orbit_ts(c, kappa, len(brute)) == brute


def test_orbit_matches_brute_force_on_random_forms():
    rng = random.Random(2024)
    done = 0
    while done < 5:
        c2 = rng.randint(1, 12)
        c = (rng.randint(-40, 40), rng.randint(-40, 40), c2)
        kappa = rng.randint(1, 3)
        try:
            form = conic_reduce(c, kappa)
            orbit = PellOrbit.from_form(form)
        except (DegenerateForm, NoSeed):
            continue
        if pell_fundamental(form.D)[0] > 10**6:
            continue  # keeps the brute-force window meaningful
        brute = brute_admissible(c, kappa, 20000)
        if not brute:
            with pytest.raises(NoSeed):
                orbit_stream(orbit, 3)
            continue
        assert orbit_stream(orbit, len(brute)) == brute
        done += 1


@given(st.integers(2, 500).filter(lambda d: isqrt(d) ** 2 != d))
def test_fundamental_unit(D):
    U, V = pell_fundamental(D)
    assert U * U - D * V * V == 1 and V > 0
    # nothing smaller
    for v in range(1, min(V, 2000)):
        u2 = 1 + D * v * v
        assert isqrt(u2) ** 2 != u2


@settings(max_examples=50)
@given(st.integers(2, 60).filter(lambda d: isqrt(d) ** 2 != d), st.integers(-60, 60).filter(bool))
def test_unit_action_closure(D, N):
    orbit = PellOrbit(ConicForm(D, N, 1, 0, 1), fundamental_solutions(D, N), pell_fundamental(D))
    for u, s in orbit.seeds:
        assert u * u - D * s * s == N
        for inv in (False, True):
            u2, s2 = orbit.step(u, s, inverse=inv)
            assert u2 * u2 - D * s2 * s2 == N
        assert orbit.step(*orbit.step(u, s), inverse=True) == (u, s)


def test_letter_conic_form():
    form = conic_reduce(_q_coeffs(letter_family()), 2)
    assert (form.D, form.N, form.M, form.shift, form.r) == (18, -8, 18, -10, 8)
    orbit = PellOrbit.from_form(form)
    assert orbit.unit == (17, 4) and orbit.seeds == [(-8, 2), (8, 2)]


def test_degenerate_forms():
    with pytest.raises(DegenerateForm):
        conic_reduce((1, 2, 1))  # (t+1)^2: N = 0
    with pytest.raises(DegenerateForm):
        conic_reduce((1, 0, -1))
    with pytest.raises(DegenerateForm):
        conic_reduce((3, 0, 4))  # D = 16 is a square


@pytest.mark.parametrize("fam,kappa", [(case1_family, 1), (letter_family, 2)], ids=["case1", "letter"])
def test_records_are_on_the_curve(fam, kappa):
    for rec in integral_points(fam(), kappa, count=12):
        assert rec.y**2 == rec.x**3 + rec.A * rec.x + rec.B
        q = kappa * fam().Q.evaluate({"t": rec.t})
        assert isqrt(q) ** 2 == q


def test_rho_along_case1_orbit():
    recs = integral_points(case1_family(), 1, count=16)
    by_size = sorted(recs, key=lambda r: abs(r.x))
    rhos = [r.rho for r in by_size]
    assert all(r < 12 for r in rhos)
    tail = rhos[4:]
    assert all(a < b for a, b in zip(tail, tail[1:]))


def test_rho_definition():
    # A dominates: |A|^3 >= B^2
    assert abs(rho(10**6, 100, 10) - 6) < 1e-9
    # B dominates
    assert abs(rho(10**6, 1, 1000) - 6) < 1e-9
    assert abs(rho(35334750, 132, 17424) - mpmath.mpf("5.3392635")) < 1e-6
    with pytest.raises(ValueError):
        rho(1, 5, 5)
    with pytest.raises(ValueError):
        rho(100, 1, 1)


def test_unit_point_identity_symbolic():
    c0, c1, c2 = case2_printed()["c"]
    r = case2_elements()["sqrt_c0"]
    assert r * r == c0
    K = c0.field
    u, v = (MPoly.gen(n, ("u", "v"), K.domain) for n in "uv")
    t = u * v * (2 * r) + v * v * c1
    w = (v * v * (2 * c2) + 1) * r + u * v * c1
    rel = u * u - v * v * c2 - 1
    _, rem = (w * w - (t * t * c2 + t * c1 + c0)).divmod(rel)
    assert rem.is_zero()


@pytest.mark.parametrize("ijk", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 2)])
def test_unit_points(ijk):
    pt = nf_unit_point(*ijk)
    c0, c1, c2 = case2_printed()["c"]
    assert pt.w * pt.w == c2 * pt.t * pt.t + c1 * pt.t + c0
    assert all(isinstance(v, int) for v in pt.valuations.values())
