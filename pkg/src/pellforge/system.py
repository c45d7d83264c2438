"""Polynomial systems and the elimination trail that produced them."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactpoly import QQ, ZZ, MPoly, RatFunc, parse_poly


@dataclass(frozen=True)
class LinearSubst:
    """``var = num/den`` with ``num``, ``den`` free of ``var``."""

    var: str
    num: MPoly
    den: MPoly

    kind = "linear"

    def value(self) -> RatFunc:
        return RatFunc(self.num, self.den)

    def to_json(self) -> dict:
        return {"kind": self.kind, "var": self.var, "vars": list(self.num.vars),
                "num": str(self.num), "den": str(self.den)}


@dataclass(frozen=True)
class ResultantStep:
    """``var`` eliminated by resultants against ``pivot``; ``partners`` are the equations it met."""

    var: str
    pivot: MPoly
    partners: tuple[MPoly, ...]

    kind = "resultant"

    def to_json(self) -> dict:
        return {"kind": self.kind, "var": self.var, "vars": list(self.pivot.vars),
                "pivot": str(self.pivot), "partners": [str(p) for p in self.partners]}


EliminationStep = LinearSubst | ResultantStep


@dataclass
class PolySystem:
    """Equations over ZZ in ``vars`` together with the trail that produced them."""

    vars: tuple[str, ...]
    eqs: list[MPoly]
    trail: list = field(default_factory=list)
    original_vars: tuple[str, ...] | None = None

    def __post_init__(self):
        self.vars = tuple(self.vars)
        if self.original_vars is None:
            self.original_vars = self.vars
        self.eqs = [e if e.vars == self.vars else e.with_vars(self.vars) for e in self.eqs]

    def __len__(self):
        return len(self.eqs)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_square(self) -> bool:
        return len(self.eqs) == len(self.vars)

    def evaluate(self, point) -> list:
        """Values of the equations at ``point`` (mapping or sequence in ``vars`` order)."""
        if not isinstance(point, dict):
            point = dict(zip(self.vars, point))
        return [e.evaluate(point) for e in self.eqs]

    def is_solution(self, point) -> bool:
        return all(v == 0 for v in self.evaluate(point))

    def term_counts(self) -> list[int]:
        return [len(e) for e in self.eqs]

    def summary(self) -> dict:
        return {"vars": list(self.vars), "equations": len(self.eqs), "terms": self.term_counts(),
                "degrees": [list(e.degrees()) for e in self.eqs]}

    # serialization
    def to_json(self) -> dict:
        return {"vars": list(self.vars), "original_vars": list(self.original_vars),
                "eqs": [str(e) for e in self.eqs], "trail": [s.to_json() for s in self.trail]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> PolySystem:
        vars = tuple(data["vars"])
        eqs = [parse_poly(s, vars, ZZ) for s in data["eqs"]]
        trail = []
        for st in data.get("trail", []):
            sv = tuple(st["vars"])
            if st["kind"] == "linear":
                trail.append(LinearSubst(st["var"], parse_poly(st["num"], sv, ZZ), parse_poly(st["den"], sv, ZZ)))
            else:
                trail.append(ResultantStep(st["var"], parse_poly(st["pivot"], sv, ZZ),
                                           tuple(parse_poly(p, sv, ZZ) for p in st["partners"])))
        return cls(vars, eqs, trail, tuple(data.get("original_vars", vars)))

    @classmethod
    def loads(cls, text: str) -> PolySystem:
        return cls.from_json(json.loads(text))


def as_fraction_point(point: dict) -> dict:
    return {k: (Fraction(v) if isinstance(v, (int, str)) else v) for k, v in point.items()}


__all__ = ["PolySystem", "LinearSubst", "ResultantStep", "EliminationStep", "QQ"]
