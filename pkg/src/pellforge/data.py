"""Published reference data: the explicit families and field elements checked by the corpus."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .builder import T, EpzFamily, Signature
from .exactpoly import QQ, MPoly, PrimeField, parse_poly
from .numfield import NumberField

CASE1 = Signature(0, 1, 2, 4, 5)
CASE2 = Signature(1, 1, 2, 6, 8)
CASE3 = Signature(1, 2, 2, 8, 11)

# isolated point of the reduced four-variable first-case system
CASE1_POINT = {"x0": Fraction(311, 64), "x1": Fraction(61, 8), "x2": Fraction(9, 2), "q0": Fraction(11, 4)}
CASE1_BACKSUB = {"y0": Fraction(715, 64), "y1": Fraction(165, 16), "y2": Fraction(77, 16), "y3": Fraction(55, 8),
                 "q1": Fraction(3), "a0": Fraction(216513, 4096), "b0": Fraction(-3720087, 131072),
                 "b1": Fraction(531441, 8192)}
CASE1_RESCALE = Fraction(128, 81)


def _fam(**polys) -> EpzFamily:
    return EpzFamily.from_strings(QQ, **polys)


def case1_family() -> EpzFamily:
    """Integral model with A = 132."""
    return _fam(X="6*(108*t^4 - 120*t^3 + 72*t^2 - 28*t + 5)", A="132", B="-144*(8*t - 1)",
                Q="2*(9*t^2 - 10*t + 3)", Y="72*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)")


def letter_family() -> EpzFamily:
    """Model with A = 33."""
    return _fam(X="324*t^4 - 360*t^3 + 216*t^2 - 84*t + 15", A="33", B="-18*(8*t - 1)",
                Q="9*t^2 - 10*t + 3", Y="36*(54*t^5 - 60*t^4 + 45*t^3 - 21*t^2 + 6*t - 1)")


DANILOV = ("(t^2 + 10*t + 5)^3 - (t^2 + 22*t + 125)*(t^2 + 4*t - 1)^2", "1728*t")

# -- the quartic field and the second-case family ------------------------------

K_MINPOLY = (-2, 5, -4, -2, 1)  # z^4 - 2z^3 - 4z^2 + 5z - 2


@lru_cache(maxsize=None)
def quartic_field() -> NumberField:
    return NumberField(K_MINPOLY, "z")


CASE2_RAW = {
    "x2": "(9069984*z^3 + 66428384*z^2 + 19934816*z - 283298787)/2430000",
    "x3": "(20240*z^3 + 70576*z^2 - 121616*z - 441839)/6750",
    "x4": "(-5808*z^3 - 7568*z^2 + 33968*z + 23959)/900",
    "q0": "(2576*z^3 + 3760*z^2 - 8720*z + 10971)/2700",
}

_ELEMENTS = {
    "p2": "z", "q2": "z - 1", "r2": "z^2 - z - 5", "p3": "2*z^2 - 2*z + 1",
    "eta1": "z^3 + z^2 - 2*z + 1", "eta2": "z^3 - 3*z + 1", "beta": "2*z^3 + 2*z^2 - 6*z - 3",
    "sqrt_c0": "49*z^3 + 41*z^2 - 77*z + 33",
}


def case2_raw_point() -> dict:
    K = quartic_field()
    return {k: K(v) for k, v in CASE2_RAW.items()}


def case2_elements() -> dict:
    K = quartic_field()
    return {k: K(v) for k, v in _ELEMENTS.items()}


def _build_case2(overrides: dict | None = None) -> dict:
    K = quartic_field()
    e = case2_elements()
    p2, q2, r2, p3, n1, n2, beta = (e[k] for k in ("p2", "q2", "r2", "p3", "eta1", "eta2", "beta"))
    f = {k: K(v) for k, v in {
        "c1f": "z^3 - z^2 + 11",
        "X5": "17*z^3 + 2*z^2 - 71*z + 33", "X4": "1463*z^3 - 2436*z^2 - 2667*z + 1903",
        "X3": "25901*z^3 + 32060*z^2 - 52457*z + 15455", "X2": "40374*z^3 + 47422*z^2 - 61976*z + 37707",
        "X1": "7081*z^3 - 854*z^2 + 90791*z - 23035", "X0": "190035*z^3 + 199008*z^2 - 174189*z + 50449",
        "Af": "z^3 - z + 1", "A0": "9*z^3 - 2*z^2 + 5*z + 9", "Bf": "2*z - 1", "B0": "4*z^3 + 18*z^2 - 16*z + 1",
    }.items()}
    if overrides:
        f.update({k: K(v) for k, v in overrides.items()})
    c2 = 3 * p2**7 * q2 * beta * n1**2 * n2**-1
    c1 = 2 * q2**3 * n1**2 * beta * f["c1f"]
    c0 = q2**2 * beta**2 * n2**2
    X = [q2 * beta * n1 * n2**2 * f["X0"],
         2 * q2**2 * r2**2 * p3 * beta * n1**3 * n2 * f["X1"],
         12 * q2**2 * p3 * beta * n1**3 * f["X2"],
         24 * q2 * beta * n1**6 * n2**-2 * f["X3"],
         2**2 * 3**3 * q2 * beta * n1**8 * n2**-3 * f["X4"],
         2**3 * 3**4 * q2**5 * r2 * beta * n1**9 * n2**-4 * f["X5"],
         2**4 * 3**4 * p2**5 * q2**7 * beta * n1**8 * n2**-4]
    A = [-q2**2 * p3 * beta**2 * n1**-1 * n2**-2 * f["Af"] * f["A0"],
         -12 * q2**4 * r2 * p3 * beta**2 * n1 * n2**-3 * f["Af"]]
    B = [-q2**4 * r2 * beta**3 * n1**-1 * n2**-3 * f["Bf"]**4 * f["B0"],
         -6 * q2**7 * r2**2 * beta**3 * n1 * n2**-4 * f["Bf"]**4]
    return {"c": (c0, c1, c2), "X": X, "A": A, "B": B}


def _upoly(coeffs, dom) -> MPoly:
    return MPoly.from_dict({(i,): c for i, c in enumerate(coeffs) if c}, (T,), dom)


def case2_printed(overrides: dict | None = None) -> dict:
    """Printed X, A, B, Q over K as univariate polynomials in t.

    ``overrides`` replaces named printed factors (harness sanity checks).
    """
    K = quartic_field()
    d = _build_case2(overrides)
    dom = K.domain
    return {"X": _upoly(d["X"], dom), "A": _upoly(d["A"], dom), "B": _upoly(d["B"], dom),
            "Q": _upoly(d["c"], dom), "c": d["c"]}


CASE2_Y = (  # recover_Y on the printed family, frozen as a regression guard
    "(779885476344366336*z^3+7163124697011070656*z^2-7652673376223670720*z+2957034338076004992)*t^8 + "
    "(5459528021592677040*z^3+3772843937335749600*z^2-7199891642625640992*z+3437039649781616688)*t^7 + "
    "(5606823731723924616*z^3+4951916525289450672*z^2-8471424498831079632*z+3930821794934751816)*t^6 + "
    "(3438299840261479416*z^3+2992470030840630600*z^2-5150755056773925864*z+2394055517252402232)*t^5 + "
    "(1314034620496777020*z^3+1144773741250098360*z^2-1969617814407038184*z+915368430576044076)*t^4 + "
    "(321472960896593208*z^3+280045121616943524*z^2-481839703235747700*z+223933947728380872)*t^3 + "
    "(49154936742610164*z^3+42820600544630604*z^2-73676072391491268*z+34240774729648500)*t^2 + "
    "(4294997434307910*z^3+3741522631721556*z^2-6437572737004596*z+2991846324306150)*t + "
    "(164190248000781*z^3+143031876245376*z^2-246097161650124*z+114373060444113)"
)


def case2_golden_Y() -> MPoly:
    K = quartic_field()
    return parse_poly(CASE2_Y, (T,), K.domain, field=K)


def case2_family(overrides: dict | None = None) -> EpzFamily | None:
    """Printed second-case family with ``Y`` recovered; ``None`` when recovery fails."""
    from .verify import recover_Y

    d = case2_printed(overrides)
    Y = recover_Y(d["X"], d["A"], d["B"], d["Q"])
    return None if Y is None else EpzFamily(d["X"], d["A"], d["B"], d["Q"], Y)


@lru_cache(maxsize=None)
def case2_known_point() -> dict:
    """Template coordinates of the second-case solution.

    Derived by moving the printed family into the template gauge; the printed
    raw coordinates do not satisfy the template system.
    """
    from .builder import normalize_family, template_point

    return template_point(normalize_family(case2_family()))


def case2_shadows(p: int, vars) -> list[tuple[int, ...]]:
    """Reductions of the known point at each degree-one prime above ``p``."""
    from .numfield import nf_padic_roots

    K = quartic_field()
    pt = case2_known_point()
    roots, _ = nf_padic_roots(K, p, 1)
    return sorted(tuple(pt[v].residue(r, p) for v in vars) for r in roots)


def case2_f_units() -> tuple:
    """The three relative-norm-1 units as ``(u, v)`` with ``f = u + v*sqrt(c2)``."""
    K = quartic_field()
    e = case2_elements()
    p2, q2, r2, p3, n1, n2 = (e[k] for k in ("p2", "q2", "r2", "p3", "eta1", "eta2"))
    f1 = (p2**-1 * q2 * p3**-1 * n1**-3 * n2 * K("z^3 + 2*z^2 - z + 1"),
          r2 * n1**-1 * n2 * K("3*z^3 - 19*z^2 + 20*z - 5"))
    f2 = (2**2 * p2**4 * p3**-1 * n1**-1 * n2**-1, n1 * n2**-1 * K("19*z^3 - 51*z^2 + 38*z - 5"))
    f3 = (p2 * q2**2 * n1**-4 * n2**3 * K("6*z^2 - 2*z + 1"), r2 * n1 * n2 * K("19*z^3 - 14*z^2 - 71*z - 41"))
    # printed as (coefficient of sqrt(c2), rational part); return (u, v)
    return tuple((b, a) for a, b in (f1, f2, f3))


NORM_RATIO = Fraction(1, 2**56 * 3**20 * 17**6 * 3271**11)

# -- third case model modulo 19 -------------------------------------------------

CASE3_MOD19 = {"X": "t^8 + t^7 + 6*t^6 + 16*t^5 + 8*t^3 + 4*t^2 + 12", "Q": "t^2 + 3*t + 13",
               "A": "16*t + 15", "B": "17*t^2 + 6*t + 14"}


def case3_mod19() -> dict:
    F19 = PrimeField(19)
    return {k: parse_poly(v, (T,), F19) for k, v in CASE3_MOD19.items()}
