import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pellforge.builder import EpzFamily, T
from pellforge.data import case1_family, letter_family
from pellforge.exactpoly import QQ, MPoly
from pellforge.verify import (
    case3_mod19_family, classify_degenerate, curve_point_check, lift_case3_model, recover_Y, verify_corpus,
    verify_identity,
)


@pytest.fixture(scope="module")
def corpus():
    return verify_corpus()


def small_poly(rng, deg=3):
    return MPoly.from_dict({(i,): rng.randint(-3, 3) for i in range(deg + 1)}, (T,), QQ)


@settings(max_examples=30)
@given(st.integers(0, 2**32), st.sampled_from(["X", "A", "B", "Y", "none"]))
def test_identity_iff_recover_Y(seed, which):
    rng = random.Random(seed)
    fam = letter_family().change_domain(QQ)
    polys = fam.polys()
    if which != "none":
        polys[which] = polys[which] + small_poly(rng)
    fam = EpzFamily(**polys)
    ok = verify_identity(fam).passed
    Y = recover_Y(fam.X, fam.A, fam.B, fam.Q)
    assert ok == (Y is not None and (Y == fam.Y or Y == -fam.Y))


def test_identity_witness():
    fam = case1_family()
    bad = EpzFamily(fam.X, fam.A, fam.B + 5, fam.Q, fam.Y)
    cert = verify_identity(bad)
    assert not cert.passed and "t^0" in cert.checks[0].witness


def test_classify_degenerate():
    assert classify_degenerate(-3, 2).kind == "node"
    assert classify_degenerate(0, 0).kind == "cusp"
    assert not classify_degenerate(132, -144).degenerate
    t = MPoly.gen(T, (T,), QQ)
    assert classify_degenerate(-3 * t**2, 2 * t**3).degenerate


def test_curve_point_check():
    assert curve_point_check(222, 3312, 132, -1008)
    assert not curve_point_check(222, 3313, 132, -1008)


def test_corpus_passes_and_is_deterministic(corpus):
    assert corpus.passed, corpus.failures()
    assert corpus.dumps() == verify_corpus().dumps()
    names = [c.name for c in corpus.checks]
    assert names == sorted(names)
    for group in ("case1.", "appendix.", "danilov.", "case2.", "case3."):
        assert any(n.startswith(group) for n in names)


@pytest.mark.parametrize("name", ["X3", "X5", "B0"])
def test_misprint_is_caught(name):
    cert = verify_corpus({name: "z^3 + 1"})
    assert not cert.passed
    assert cert.failures() == ["case2.identity"]


def test_case3_model():
    fam = case3_mod19_family()
    assert fam is not None and fam.is_verified()
    assert fam.Y.leading_coefficient() == 1
    assert fam.Y.degree(T) == 11 and fam.Y.coeff_in(T, 10).is_zero()
    lifted, val = lift_case3_model(8)
    assert lifted.p == 19 and lifted.k == 8 and val >= 8
