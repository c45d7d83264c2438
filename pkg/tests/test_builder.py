from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pellforge.builder import (
    BASE_SIGNATURES, EpzFamily, MultiplierError, Signature, SignatureError, T, apply_moebius,
    appendix_case1_derivation, equate_coefficients, make_template, normalize_family, series_sqrt_tail,
    signature_families, template_point,
)
from pellforge.data import case1_family, case2_family, letter_family
from pellforge.exactpoly import QQ, MPoly, parse_poly
from pellforge.verify import classify_degenerate

nonzero = st.builds(Fraction, st.integers(-9, 9).filter(bool), st.integers(1, 5))
shift = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@pytest.fixture(scope="module")
def appendix():
    return appendix_case1_derivation()


@pytest.mark.parametrize("sig", BASE_SIGNATURES, ids=str)
def test_base_signatures_are_square(sig):
    assert sig.is_admissible()
    tpl = make_template(sig)
    system = equate_coefficients(tpl)
    assert sig.unknown_count == len(tpl.unknowns) == len(system.eqs) == 3 * sig.x


def test_signature_parsing_and_rejection():
    assert Signature.parse("1,1,2,6,8") == Signature(1, 1, 2, 6, 8)
    with pytest.raises(SignatureError):
        Signature.parse("1,2,3")
    with pytest.raises(SignatureError):
        make_template(Signature(1, 1, 2, 6, 7))
    with pytest.raises(SignatureError):
        make_template(Signature(9, 9, 9, 9, 9))  # balanced but Q is not quadratic


def test_signature_families_rho():
    rows = signature_families(0)
    assert [r.signature for r in rows[1:]] == list(BASE_SIGNATURES[:3])
    for m in range(1, 6):
        for row in signature_families(m):
            sig = row.signature
            assert sig.is_consistent() and sig.is_admissible()
            assert row.rho == Fraction(sig.x) / max(Fraction(sig.a, 2), Fraction(sig.b, 3))
            assert row.rho <= 12


@pytest.mark.parametrize("make", [case1_family, letter_family, case2_family], ids=["case1", "letter", "case2"])
def test_normalized_family_solves_coefficient_system(make):
    fam = make()
    assert fam.is_verified()
    norm = normalize_family(fam)
    assert norm.is_verified()
    tpl = make_template(norm.signature)
    point = template_point(norm, tpl)
    system = equate_coefficients(tpl)
    assert all(v == 0 for v in system.evaluate(point))


@given(nonzero, shift, nonzero, nonzero)
def test_moebius_preserves_zero_set(alpha, beta, sX, sY):
    mult = (sX, sY, sX**3 / sY**2, sX**2, sX**3)
    good = letter_family()
    assert apply_moebius(good, alpha, beta, multipliers=mult).is_verified()
    bad = EpzFamily(good.X, good.A, good.B + 1, good.Q, good.Y)
    assert not apply_moebius(bad, alpha, beta, multipliers=mult).is_verified()


def test_moebius_inversion_and_bad_multipliers():
    fam = letter_family()
    inv = apply_moebius(fam, invert=True)
    assert inv.is_verified()
    assert apply_moebius(inv, invert=True) == fam.change_domain(QQ)
    with pytest.raises(MultiplierError):
        apply_moebius(fam, multipliers=(2, 1, 1, 1, 1))


@given(nonzero, nonzero)
def test_degeneracy_class_is_gauge_invariant(alpha, sX):
    fam = letter_family()
    base = classify_degenerate(fam.A, fam.B)
    moved = apply_moebius(fam, alpha, 0, multipliers=(sX, 1, sX**3, sX**2, sX**3))
    assert classify_degenerate(moved.A, moved.B).degenerate == base.degenerate


def test_series_sqrt_exact_square():
    t = MPoly.gen(T, (T,), QQ)
    Q = t * t + 3
    X = Q * (t + 2) ** 2
    Y, conds = series_sqrt_tail(X, Q)
    assert Y == Q * (t + 2) ** 3
    assert all(c.is_zero() for c in conds)


def test_series_sqrt_odd_configuration():
    t = MPoly.gen(T, (T,), QQ)
    with pytest.raises(ValueError):
        series_sqrt_tail(t**3, t * t + 1)


def test_appendix_common_factor(appendix):
    cf = appendix["common_factor"]
    b1, b2, b3 = (MPoly.gen(v, cf.vars, QQ) for v in ("b1", "b2", "b3"))
    assert cf == b3 - b1 * b2 or cf == b1 * b2 - b3
    for name in ("coeff_t3", "coeff_t2"):
        whole = appendix[name]
        cof = appendix[name + "_cofactor"]
        assert whole == cof * cf


def test_appendix_specialization(appendix):
    spec = appendix["specialization"]
    assert spec == {"b2": 6, "b3": 12, "b1": Fraction(10, 3), "c": Fraction(-8, 9), "b4": -2}
    assert appendix["specialized_A"] == 528
    assert appendix["specialized_B"] == parse_poly("-128*(12*t + 31)", (T,), QQ)
    assert appendix["specialized_family"].is_verified()
    b2, b3 = 6, 12
    assert 3 * b3**2 == 2 * b2**3


def test_appendix_branches_degenerate(appendix):
    for name in ("branch_b3_eq_b1b2", "branch_b2_zero", "branch_b3_zero_c_zero"):
        br = appendix[name]
        assert classify_degenerate(br["A"], br["B"]).degenerate
