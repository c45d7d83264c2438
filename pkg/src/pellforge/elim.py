"""Variable elimination: linear substitutions, resultants, and an exact small-system solver."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import QQ, ZZ, MPoly, RatFunc, gcd, rational_roots, resultant, squarefree_part
from .system import LinearSubst, PolySystem, ResultantStep

log = logging.getLogger(__name__)


class EliminationError(ValueError):
    pass


class PositiveDimensional(UserWarning):
    pass


def _clean(p: MPoly) -> MPoly:
    """Primitive over ZZ with positive leading coefficient."""
    if p.domain is not ZZ:
        p = p.to_ZZ_primitive()
    elif p:
        p = p.primitive()[1]
    return p


def _strip(p: MPoly, factors) -> MPoly:
    for f in factors:
        if f.is_constant():
            continue
        while p:
            try:
                q = p.exact_div(f)
            except ArithmeticError:
                break
            p = q
    return p


def _normalize_eqs(eqs) -> list[MPoly]:
    out, seen = [], set()
    for e in eqs:
        e = _clean(e)
        if e.is_zero():
            continue
        key = e
        if key in seen or (-e) in seen:
            continue
        seen.add(key)
        out.append(e)
    return out


def _drop_var(sys: PolySystem, var: str) -> tuple[str, ...]:
    return tuple(v for v in sys.vars if v != var)


def linear_candidates(sys: PolySystem, eliminable=None, permissive: bool = False):
    """``(cost, index, var)`` triples for equations linear in an eliminable variable."""
    eliminable = sys.vars if eliminable is None else eliminable
    out = []
    for v in sys.vars:
        if v not in eliminable:
            continue
        maxdeg = max((e.degree(v) for e in sys.eqs), default=0)
        if maxdeg == 0:
            continue
        spread = sum(len(e) for e in sys.eqs if e.degree(v) > 0)
        for i, e in enumerate(sys.eqs):
            if e.degree(v) != 1:
                continue
            c = e.coeff_in(v, 1)
            if not c.is_constant() and not permissive:
                continue
            out.append(((not c.is_constant(), maxdeg, spread, len(e), i), i, v))
    out.sort()
    return out


def linear_substitute(sys: PolySystem, var: str, eq_index: int | None = None,
                      permissive: bool = False) -> PolySystem:
    """Solve one equation for ``var`` (linear there) and substitute everywhere else.

    With a non-constant coefficient ``c`` the substitution requires
    ``permissive``; the other equations are multiplied by powers of ``c``.
    """
    if var not in sys.vars:
        raise EliminationError(f"{var} is not a variable of the system")
    if eq_index is None:
        cands = [(cost, i) for cost, i, v in linear_candidates(sys, (var,), permissive) if v == var]
        if not cands:
            raise EliminationError(f"no equation is linear in {var}")
        eq_index = cands[0][1]
    e = sys.eqs[eq_index]
    if e.degree(var) != 1:
        raise EliminationError(f"equation {eq_index} is not linear in {var}")
    c = e.coeff_in(var, 1)
    r = e.coeff_in(var, 0)
    if not c.is_constant() and not permissive:
        raise EliminationError(f"coefficient of {var} is not constant; use permissive mode")
    newvars = _drop_var(sys, var)
    num, den = -r, c
    if den.is_constant() and den.constant_value() < 0:
        num, den = -num, -den
    if not den.is_constant():
        num, den = _orient(num, den)
    out = []
    for j, f in enumerate(sys.eqs):
        if j == eq_index:
            continue
        if f.degree(var) == 0:
            out.append(f)
            continue
        n, _ = _subst_frac_poly(f, var, num, den)
        out.append(n)
    out = [p.with_vars(newvars) for p in _normalize_eqs(out)]
    step = LinearSubst(var, num.with_vars(newvars), den.with_vars(newvars))
    return PolySystem(newvars, out, sys.trail + [step], sys.original_vars)


def _orient(num: MPoly, den: MPoly):
    if den.leading_coefficient() < 0:
        return -num, -den
    return num, den


def _subst_frac_poly(f: MPoly, var: str, num: MPoly, den: MPoly):
    """``den^d * f(var = num/den)`` with ``d = deg_var f``, as a polynomial."""
    parts = f.as_univariate(var)
    d = max(parts)
    if den.is_constant() and den.constant_value() == 1:
        return f.substitute(var, num), den
    npow = [f.one()]
    dpow = [f.one()]
    for _ in range(d):
        npow.append(npow[-1] * num)
        dpow.append(dpow[-1] * den)
    res = f.zero()
    for k, ck in parts.items():
        res = res + ck * npow[k] * dpow[d - k]
    return res, dpow[d]


def linear_reduce(sys: PolySystem, eliminable=None, permissive: bool = False) -> PolySystem:
    """Repeat constant-coefficient (or, if ``permissive``, any) linear substitutions."""
    while True:
        cands = linear_candidates(sys, eliminable, permissive)
        if not cands:
            return sys
        _, i, v = cands[0]
        log.debug("linear substitution of %s from equation %d", v, i)
        sys = linear_substitute(sys, v, i, permissive=permissive)


def choose_resultant_var(sys: PolySystem, candidates=None) -> tuple[str, int]:
    """Variable and pivot index minimizing (max degree, term count)."""
    best = None
    for v in (candidates or sys.vars):
        degs = [e.degree(v) for e in sys.eqs]
        if max(degs, default=0) == 0:
            continue
        terms = sum(len(e) for e, d in zip(sys.eqs, degs) if d)
        piv = min((d, len(e), i) for i, (e, d) in enumerate(zip(sys.eqs, degs)) if d > 0)
        key = (max(degs), terms, piv)
        if best is None or key < best[0]:
            best = (key, v, piv[2])
    if best is None:
        raise EliminationError("no variable to eliminate")
    return best[1], best[2]


def eliminate_by_resultant(sys: PolySystem, var: str | None = None, pivot: int | None = None,
                           strip=()) -> PolySystem:
    """Replace every other equation containing ``var`` by its resultant with the pivot.

    Zero resultants (a common factor with the pivot) are dropped with a
    warning; ``strip`` lists polynomials removed from the resultants as
    often as they divide exactly.
    """
    if var is None:
        var, pivot = choose_resultant_var(sys)
    if pivot is None:
        pivot = min((e.degree(var), len(e), i) for i, e in enumerate(sys.eqs) if e.degree(var) > 0)[2]
    P = sys.eqs[pivot]
    if P.degree(var) < 1:
        raise EliminationError(f"pivot does not contain {var}")
    newvars = _drop_var(sys, var)
    out, partners = [], []
    strip = [s.with_vars(sys.vars) for s in strip]
    for j, f in enumerate(sys.eqs):
        if j == pivot:
            continue
        if f.degree(var) == 0:
            out.append(f)
            continue
        partners.append(f)
        r = resultant(P, f, var)
        if r.is_zero():
            import warnings

            warnings.warn(f"resultant in {var} vanished: common factor with the pivot", PositiveDimensional)
            continue
        out.append(_strip(_clean(r), strip))
    out = [p.with_vars(newvars) for p in _normalize_eqs(out)]
    step = ResultantStep(var, P, tuple(partners))
    return PolySystem(newvars, out, sys.trail + [step], sys.original_vars)


# -- back-substitution ------------------------------------------------------

def _coerce_point(point: dict) -> dict:
    return {k: (Fraction(v) if isinstance(v, int) else v) for k, v in point.items()}


def _univariate_gcd(polys):
    from .exactpoly import gcd as g

    res = None
    for p in polys:
        if p.is_zero():
            continue
        res = p if res is None else g(res, p)
    return res


def back_substitute(sys: PolySystem, point: dict, field=None) -> dict:
    """Extend a point of ``sys`` to all original variables by replaying the trail backwards.

    Coordinates may be rationals or elements of ``field``.  Resultant steps
    are undone by a univariate gcd of the pivot with its partners at the
    point, which must have degree 1.
    """
    pt = _coerce_point(point)
    for step in reversed(sys.trail):
        if isinstance(step, LinearSubst):
            vals = {k: v for k, v in pt.items() if k in step.num.vars}
            n = step.num.evaluate(vals)
            d = step.den.evaluate(vals)
            if isinstance(n, MPoly) or isinstance(d, MPoly):
                raise EliminationError(f"point does not fix all variables needed for {step.var}")
            if not d:
                raise EliminationError(f"denominator of {step.var} vanishes at the point")
            if hasattr(n, "coords") or hasattr(d, "coords"):
                pt[step.var] = (n if hasattr(n, "coords") else field(n)) / d
            else:
                pt[step.var] = Fraction(n) / Fraction(d)
        else:
            pt[step.var] = _undo_resultant(step, pt, field)
    return pt


def _undo_resultant(step: ResultantStep, pt: dict, field):
    var = step.var
    others = {k: v for k, v in pt.items() if k in step.pivot.vars and k != var}
    dom = field.domain if field is not None else QQ
    polys = []
    for p in (step.pivot,) + step.partners:
        q = p.change_domain(QQ) if dom is QQ else p
        spec = q.evaluate(others) if others else q
        if not isinstance(spec, MPoly):
            continue
        spec = spec.with_vars((var,))
        if dom is not QQ:
            spec = MPoly.from_dict({e: field(c) for e, c in spec.items()}, (var,), dom)
        polys.append(spec)
    g = _univariate_gcd(polys)
    if g is None or g.degree(var) != 1:
        raise EliminationError(f"cannot recover {var}: gcd of degree {None if g is None else g.degree(var)}")
    c1 = g.coeff_in(var, 1).constant_value()
    c0 = g.coeff_in(var, 0).constant_value() if g.coeff_in(var, 0) else 0
    return -c0 / c1 if dom is not QQ else QQ.normalize(Fraction(-c0) / Fraction(c1))


# -- exact solver over QQ with positive-dimensional components -----------------

@dataclass
class Component:
    """Solutions ``var = expr(params)`` for every variable.

    ``values`` maps each variable to a :class:`RatFunc` in the parameters
    (constants for isolated points); ``params`` are the free variables.
    """

    params: tuple[str, ...]
    values: dict
    conditions: list = field(default_factory=list)  # polynomials in params that must vanish

    @property
    def dimension(self) -> int:
        return len(self.params)

    def is_point(self) -> bool:
        return not self.params and not self.conditions

    def point(self) -> dict:
        return {k: v.as_poly().constant_value() if v.as_poly().is_constant() else v
                for k, v in self.values.items()}

    def contains(self, point: dict) -> bool:
        """Whether an explicit point lies on this component (parameters read off the point)."""
        vals = {p: point[p] for p in self.params}
        for k, v in self.values.items():
            try:
                if v.evaluate(vals) != point[k]:
                    return False
            except ZeroDivisionError:
                return False
        return True

    def __str__(self):
        inner = ", ".join(f"{k} = {v}" for k, v in self.values.items())
        return f"[{', '.join(self.params)}] {inner}" if self.params else inner


class SolveLimit(RuntimeError):
    pass


def _rf_const(c, vars) -> RatFunc:
    c = Fraction(c)
    return RatFunc(MPoly.const(c.numerator, vars, ZZ), MPoly.const(c.denominator, vars, ZZ))


def solve_system(eqs, vars, depth: int = 0, max_depth: int = 40) -> tuple[list[Component], list[MPoly]]:
    """All rational components of ``{eqs = 0}`` over QQ in ``vars``.

    Components are parametrized by some of the variables.  Returns
    ``(components, unresolved)``; ``unresolved`` collects univariate factors
    without rational roots and parametric branches this solver cannot
    parametrize.
    """
    if depth > max_depth:
        raise SolveLimit("recursion depth exceeded")
    vars = tuple(vars)
    eqs = [e.with_vars(vars) for e in _normalize_eqs([e.with_vars(vars) for e in eqs])]
    if any(e.is_constant() for e in eqs):
        return [], []
    eqs = _normalize_eqs([squarefree_part(e) if len(e) <= 400 else e for e in eqs])
    if not eqs:
        one = {v: RatFunc(MPoly.gen(v, vars, ZZ)) for v in vars}
        return [Component(vars, one)], []
    # common factor: split
    g = eqs[0]
    for e in eqs[1:]:
        if g.is_constant():
            break
        g = gcd(g, e)
    if len(eqs) == 1 or g.is_constant():
        split = _content_split(eqs)
        if split is not None:
            i, h = split
            others = eqs[:i] + eqs[i + 1:]
            c1, u1 = solve_system(others + [h], vars, depth + 1, max_depth)
            c2, u2 = solve_system(others + [eqs[i].exact_div(h)], vars, depth + 1, max_depth)
            return _merge(c1 + c2), u1 + u2
    if len(eqs) > 1 and not g.is_constant():
        c1, u1 = solve_system([g], vars, depth + 1, max_depth)
        c2, u2 = solve_system([e.exact_div(g) for e in eqs], vars, depth + 1, max_depth)
        return _merge(c1 + c2), u1 + u2
    # linear variable, constant coefficient first
    cands = linear_candidates(PolySystem(vars, eqs), vars, permissive=True)
    if cands:
        _, i, v = cands[0]
        return _solve_linear_branch(eqs, vars, i, v, depth, max_depth)
    # resultant elimination
    sysm = PolySystem(vars, eqs)
    v, piv = choose_resultant_var(sysm)
    P = eqs[piv]
    rest = []
    for j, f in enumerate(eqs):
        if j == piv:
            continue
        if f.degree(v) == 0:
            rest.append(f)
            continue
        r = resultant(P, f, v)
        if r.is_zero():
            h = gcd(P, f)
            others = [e for k, e in enumerate(eqs) if k != piv]
            c1, u1 = solve_system(others + [h], vars, depth + 1, max_depth)
            c2, u2 = solve_system(others + [P.exact_div(h)], vars, depth + 1, max_depth)
            return _merge(c1 + c2), u1 + u2
        rest.append(r)
    sub_vars = tuple(x for x in vars if x != v)
    if not rest:
        if P.used_vars() != (v,):
            # a hypersurface with no linear variable: not parametrized here
            return [], [P]
        up = P.with_vars((v,))
        roots = rational_roots(up)
        free = {x: RatFunc(MPoly.gen(x, sub_vars, ZZ)) for x in sub_vars}
        out = []
        for r, _ in roots:
            vals = dict(free)
            vals[v] = _rf_const(r, sub_vars)
            out.append(Component(sub_vars, {x: vals[x] for x in vars}))
        return out, ([P] if up.degree(v) > sum(m for _, m in roots) else [])
    comps, unresolved = solve_system([r.with_vars(sub_vars) for r in rest], sub_vars, depth + 1, max_depth)
    out = []
    for comp in comps:
        ext, unr = _extend_component(comp, eqs, vars, v)
        out.extend(ext)
        unresolved.extend(unr)
    return _merge(out), unresolved


def _content_split(eqs, max_terms: int = 400):
    """First ``(index, factor)`` where an equation has non-trivial content in some variable."""
    from .exactpoly.algorithms import _content_in

    for i, e in enumerate(eqs):
        if len(e) > max_terms:
            continue
        for v in e.used_vars():
            if len(e.used_vars()) < 2:
                break
            h = _content_in(e, v)
            if not h.is_constant():
                return i, _clean(h)
    return None


def _solve_linear_branch(eqs, vars, i, v, depth, max_depth):
    e = eqs[i]
    c, r = e.coeff_in(v, 1), e.coeff_in(v, 0)
    sub_vars = tuple(x for x in vars if x != v)
    num, den = _orient(-r, c)
    rest = []
    for j, f in enumerate(eqs):
        if j == i:
            continue
        if f.degree(v) == 0:
            rest.append(f.with_vars(sub_vars))
        else:
            rest.append(_subst_frac_poly(f, v, num, den)[0].with_vars(sub_vars))
    comps, unresolved = solve_system(rest, sub_vars, depth + 1, max_depth)
    out = []
    value = RatFunc(num.with_vars(sub_vars), den.with_vars(sub_vars))
    cden = den.with_vars(sub_vars)
    for comp in comps:
        dv = _compose(RatFunc(cden), comp)
        if dv is None or dv.num.is_zero():
            continue  # coefficient vanishes on the component: handled by the other branch
        val = _compose(value, comp)
        vals = dict(comp.values)
        vals[v] = val
        out.append(Component(comp.params, {x: vals[x] for x in vars}, comp.conditions))
    if not c.is_constant():
        c2, u2 = solve_system([f for j, f in enumerate(eqs) if j != i] + [c, r], vars, depth + 1, max_depth)
        out.extend(c2)
        unresolved.extend(u2)
    return _merge(out), unresolved


def _compose(rf: RatFunc, comp: Component) -> RatFunc | None:
    """``rf`` with the component's expressions substituted, as a RatFunc in its params."""
    pvars = comp.params
    res = RatFunc(rf.num, rf.den)
    num = _rf_subst_all(res.num, comp)
    den = _rf_subst_all(res.den, comp)
    if den.num.is_zero():
        return None
    q = num / den
    keep = tuple(pvars)
    return RatFunc(q.num.with_vars(keep) if set(q.num.used_vars()) <= set(keep) else q.num,
                   q.den.with_vars(keep) if set(q.den.used_vars()) <= set(keep) else q.den)


def _rf_subst_all(p: MPoly, comp: Component) -> RatFunc:
    allvars = tuple(dict.fromkeys(p.vars + comp.params))
    acc = RatFunc(p.with_vars(allvars))
    for x in p.used_vars():
        if x in comp.params or x not in comp.values:
            continue
        val = comp.values[x]
        val = RatFunc(val.num.with_vars(allvars), val.den.with_vars(allvars))
        acc = acc.substitute(x, val)
    return acc


def _extend_component(comp: Component, eqs, vars, v):
    """Recover ``v`` on a component of the eliminated system."""
    pvars = comp.params
    specs = []
    for e in eqs:
        s = _rf_subst_all(e, Component(comp.params, {x: y for x, y in comp.values.items()}, comp.conditions))
        n = s.num
        if n.is_zero():
            continue
        specs.append(n)
    if not specs:
        vals = dict(comp.values)
        newp = pvars + (v,)
        vals[v] = RatFunc(MPoly.gen(v, newp, ZZ))
        vals = {x: RatFunc(val.num.with_vars(newp), val.den.with_vars(newp)) for x, val in vals.items()}
        return [Component(newp, {x: vals[x] for x in vars}, comp.conditions)], []
    g = specs[0]
    for s in specs[1:]:
        g = gcd(g, s)
    if g.degree(v) < 1:
        return [], []
    # split off factors free of v (they only constrain parameters, already handled upstream)
    g = _clean(g)
    if g.degree(v) == 1:
        val = RatFunc(-g.coeff_in(v, 0), g.coeff_in(v, 1))
        used = set(val.num.used_vars()) | set(val.den.used_vars())
        if not used <= set(pvars):
            return [], [g]
        vals = dict(comp.values)
        vals[v] = RatFunc(val.num.with_vars(pvars) if pvars else val.num.with_vars(()),
                          val.den.with_vars(pvars) if pvars else val.den.with_vars(()))
        return [Component(pvars, {x: vals[x] for x in vars}, comp.conditions)], []
    if not pvars:
        roots = rational_roots(g.with_vars((v,)))
        out = []
        for r, _ in roots:
            vals = dict(comp.values)
            vals[v] = _rf_const(r, ())
            out.append(Component((), {x: vals[x] for x in vars}, comp.conditions))
        if g.with_vars((v,)).degree(v) > len(roots):
            return out, [g]
        return out, []
    return [], [g]


def _contained(c: Component, o: Component) -> bool:
    """Whether ``c`` lies inside ``o``: ``o``'s expressions hold on ``c``."""
    if c.dimension > o.dimension or c.conditions or o.conditions:
        return False
    sub = Component(c.params, {p: c.values[p] for p in o.params}, [])
    for k, ov in o.values.items():
        if k in o.params:
            continue
        n = _rf_subst_all(ov.num, sub)
        d = _rf_subst_all(ov.den, sub)
        if d.num.is_zero():
            return False
        cv = c.values[k]
        if not (n * RatFunc(cv.den.with_vars(n.vars) if cv.den.vars != n.vars else cv.den)
                - d * RatFunc(cv.num.with_vars(n.vars) if cv.num.vars != n.vars else cv.num)).num.is_zero():
            return False
    return True


def _merge(comps: list[Component]) -> list[Component]:
    """Drop duplicates and components lying on a larger one."""
    out: list[Component] = []
    for c in sorted(comps, key=lambda c: -c.dimension):
        if any(_contained(c, o) for o in out):
            continue
        out.append(c)
    return out


def _point_of(c: Component) -> dict:
    return {k: Fraction(v.num.constant_value(), v.den.constant_value()) if v.num else Fraction(0)
            for k, v in c.values.items()}


# -- first-case pipeline ----------------------------------------------------------

@dataclass
class Case1Solution:
    reduced: PolySystem
    components: list[Component]
    unresolved: list
    isolated: list[dict]
    families: list[Component]
    full_points: list[dict]


def reduce_case(sig) -> PolySystem:
    """Constant-coefficient linear reduction keeping the X coefficients and ``q0``."""
    from .builder import equate_coefficients, make_template

    tpl = make_template(sig)
    sys = equate_coefficients(tpl)
    keep = {u for u in tpl.unknowns if u.startswith("x")} | {"q0"}
    return linear_reduce(sys, [u for u in tpl.unknowns if u not in keep])


def solve_case1() -> Case1Solution:
    """Reduce the ``(0,1,2,4,5)`` system and solve it exactly over QQ."""
    from .data import CASE1

    red = reduce_case(CASE1)
    comps, unresolved = solve_system(red.eqs, red.vars)
    comps = [c for c in comps if _verify_component(c, red)]
    isolated = [_point_of(c) for c in comps if c.is_point()]
    families = [c for c in comps if c.dimension > 0]
    full = [back_substitute(red, p) for p in isolated]
    return Case1Solution(red, comps, unresolved, isolated, families, full)


def _verify_component(comp: Component, sys: PolySystem) -> bool:
    for e in sys.eqs:
        if not _rf_subst_all(e, comp).num.is_zero():
            return False
    return True


def verify_component(comp: Component, sys: PolySystem) -> bool:
    """Every equation vanishes identically on the component."""
    return _verify_component(comp, sys)


# -- second-case reduction ---------------------------------------------------------

def reduce_case2(permissive_var: str = "x0", resultant_var: str = "x1") -> PolySystem:
    """Linear reduction to six equations, a permissive substitution, then one resultant step."""
    from .data import CASE2

    sys = reduce_case(CASE2)
    sys = linear_substitute(sys, permissive_var, permissive=True)
    den = sys.trail[-1].den
    sys = eliminate_by_resultant(sys, resultant_var, strip=[den])
    return sys


def reduce_to(sys: PolySystem, target_vars: int, keep=("q0",)) -> PolySystem:
    """Continue a reduction (such as :func:`reduce_case`) until ``target_vars`` remain.

    Constant-coefficient substitutions are exhausted first, then one
    permissive substitution, then resultant steps; ``keep`` is never
    eliminated.  The permissive denominator is stripped from the resultants.
    """
    if target_vars < 1:
        raise ValueError("target_vars must be positive")
    free = [v for v in sys.vars if v not in keep]
    sys = linear_reduce(sys, free)
    dens = []
    while sys.nvars > target_vars:
        free = [v for v in sys.vars if v not in keep]
        cands = linear_candidates(sys, free, permissive=True)
        if cands and not dens:
            _, i, v = cands[0]
            sys = linear_substitute(sys, v, i, permissive=True)
            dens.append(sys.trail[-1].den)
            continue
        var, pivot = choose_resultant_var(sys, free)
        sys = eliminate_by_resultant(sys, var, pivot, strip=[d.with_vars(sys.vars) for d in dens
                                                            if set(d.used_vars()) <= set(sys.vars)])
    return sys


__all__ = ["EliminationError", "reduce_to", "PositiveDimensional", "linear_candidates", "linear_substitute", "linear_reduce",
           "choose_resultant_var", "eliminate_by_resultant", "back_substitute", "Component", "solve_system",
           "solve_case1", "Case1Solution", "reduce_case", "reduce_case2", "verify_component"]
