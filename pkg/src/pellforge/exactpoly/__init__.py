"""Exact sparse polynomial arithmetic over exchangeable coefficient domains."""
from .algorithms import (
    NotASquare,
    bareiss_det,
    content_primitive,
    gcd,
    poly_sqrt,
    rational_roots,
    resultant,
    squarefree_decomposition,
    squarefree_part,
    sylvester_matrix,
    sylvester_resultant,
)
from .domains import (
    QQ,
    ZZ,
    Domain,
    DomainError,
    InexactDivision,
    ModPrimePower,
    NumberFieldDomain,
    PrimeField,
    is_prime,
)
from .mpoly import MPoly, gens, unify
from .ratfunc import RatFunc
from .textfmt import ParseError, format_poly, parse_poly

__all__ = [
    "MPoly", "RatFunc", "gens", "unify",
    "ZZ", "QQ", "Domain", "DomainError", "InexactDivision", "ModPrimePower", "PrimeField",
    "NumberFieldDomain", "is_prime",
    "resultant", "sylvester_resultant", "sylvester_matrix", "bareiss_det", "gcd",
    "squarefree_part", "squarefree_decomposition", "content_primitive", "poly_sqrt",
    "rational_roots", "NotASquare", "parse_poly", "format_poly", "ParseError",
]
