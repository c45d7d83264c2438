"""Elkies-Pell-Zagier integral point families: construction, reduction, p-adic search, Pell orbits."""

__version__ = "0.1.0"
