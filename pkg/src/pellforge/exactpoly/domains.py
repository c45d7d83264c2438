"""Coefficient domains for exact polynomial arithmetic.

A domain tells :class:`MPoly` how to coerce scalars, how to normalize the
result of ``+``/``*`` and how to divide.  Scalars themselves are plain Python
objects (``int``, ``Fraction``, or :class:`~pellforge.numfield.NFElem`) so
ordinary operators work on them directly.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

import gmpy2


class DomainError(ValueError):
    pass


class InexactDivision(ArithmeticError):
    pass


class Domain:
    name = "?"
    is_field = False
    modulus: int | None = None
    characteristic = 0

    def convert(self, c):
        raise NotImplementedError

    def normalize(self, c):
        return c

    def div(self, a, b):
        raise NotImplementedError

    def sqrt(self, a):
        """Return some square root of ``a`` in the domain, or ``None``."""
        return None

    def is_ordered(self) -> bool:
        return False

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return self.name


class IntegerRing(Domain):
    name = "ZZ"

    def convert(self, c):
        if isinstance(c, bool):
            return int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        raise DomainError(f"{c!r} is not an integer")

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in ZZ")
        q, r = divmod(a, b)
        if r:
            raise InexactDivision(f"{a} is not divisible by {b}")
        return q

    def sqrt(self, a):
        if a < 0:
            return None
        r = isqrt(a)
        return r if r * r == a else None

    def is_ordered(self):
        return True

    def __reduce__(self):
        return (_singleton, ("ZZ",))


class RationalField(Domain):
    name = "QQ"
    is_field = True

    def convert(self, c):
        if isinstance(c, bool):
            return int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, str):
            return self.convert(Fraction(c))
        raise DomainError(f"{c!r} is not rational")

    def normalize(self, c):
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return self.normalize(Fraction(a) / b)

    def sqrt(self, a):
        a = Fraction(a)
        if a < 0:
            return None
        n, d = isqrt(a.numerator), isqrt(a.denominator)
        if n * n != a.numerator or d * d != a.denominator:
            return None
        return self.normalize(Fraction(n, d))

    def is_ordered(self):
        return True

    def __reduce__(self):
        return (_singleton, ("QQ",))


def _singleton(name: str) -> Domain:
    return ZZ if name == "ZZ" else QQ


class ModPrimePower(Domain):
    """Residues modulo ``p**k``; a field exactly when ``k == 1``."""

    def __init__(self, p: int, k: int = 1):
        if k < 1:
            raise DomainError("precision must be >= 1")
        if p < 2 or not _is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.k = k
        self.modulus = p**k
        self.characteristic = self.modulus
        self.is_field = k == 1

    @property
    def name(self):
        return f"GF({self.p})" if self.k == 1 else f"Z/{self.p}^{self.k}"

    def _key(self):
        return (self.p, self.k)

    def convert(self, c):
        if isinstance(c, bool):
            c = int(c)
        if isinstance(c, int):
            return c % self.modulus
        if isinstance(c, Fraction):
            if c.denominator % self.p == 0:
                raise DomainError(f"{c} has a denominator divisible by {self.p}")
            return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus
        raise DomainError(f"cannot map {c!r} into {self.name}")

    def normalize(self, c):
        return c % self.modulus

    def div(self, a, b):
        b %= self.modulus
        if b % self.p == 0:
            raise InexactDivision(f"{b} is not a unit mod {self.p}^{self.k}")
        return a * pow(b, -1, self.modulus) % self.modulus

    def sqrt(self, a):
        from ..modarith import sqrt_mod_prime_power

        return sqrt_mod_prime_power(a, self.p, self.k)


def PrimeField(p: int) -> ModPrimePower:
    return ModPrimePower(p, 1)


class NumberFieldDomain(Domain):
    """Wraps a :class:`~pellforge.numfield.NumberField` as a coefficient domain."""

    is_field = True

    def __init__(self, field):
        self.field = field

    @property
    def name(self):
        return f"NF({self.field.var})"

    def _key(self):
        return (self.field,)

    def convert(self, c):
        return self.field(c)

    def normalize(self, c):
        if isinstance(c, (int, Fraction)):
            return self.field(c)
        return c

    def div(self, a, b):
        return self.field(a) / b

    def sqrt(self, a):
        return self.field(a).sqrt()


ZZ = IntegerRing()
QQ = RationalField()


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n, 40))


is_prime = _is_prime
