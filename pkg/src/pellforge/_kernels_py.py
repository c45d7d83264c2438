"""Pure-Python fiber scan; same interface as the compiled ``_kernels`` module.

A polynomial is passed as ``(exps, coeffs)`` where ``exps`` is a flat list of
``nterms * nvars`` exponents already folded into ``0..p-1`` (``x^p == x`` on
F_p) and ``coeffs`` are residues mod ``p``.  The first variable is the outer
one; fibers are indexed with the second variable most significant.
"""
from __future__ import annotations


def vandermonde(p: int) -> list[list[int]]:
    """``V[a][e] = a^e mod p`` with ``0^0 = 1``."""
    return [[pow(a, e, p) for e in range(p)] for a in range(p)]


def fiber_table(exps, coeffs, nvars: int, p: int, outer: int) -> list[int]:
    """Dense coefficient table of the polynomial with the outer variable set to ``outer``."""
    m = nvars - 1
    table = [0] * (p**m)
    opow = [pow(outer, e, p) for e in range(p)]
    for t, c in enumerate(coeffs):
        base = t * nvars
        idx = 0
        for j in range(1, nvars):
            idx = idx * p + exps[base + j]
        table[idx] = (table[idx] + c * opow[exps[base]]) % p
    return table


def transform(table: list[int], p: int, m: int, V=None) -> list[int]:
    """Values on all of ``F_p^m`` from a dense coefficient table (axis by axis)."""
    V = V or vandermonde(p)
    size = p**m
    vals = list(table)
    stride = 1
    for _ in range(m):
        block = stride * p
        out = [0] * size
        for start in range(0, size, block):
            for off in range(stride):
                col = [vals[start + off + e * stride] for e in range(p)]
                for a in range(p):
                    row = V[a]
                    s = 0
                    for e in range(p):
                        if col[e]:
                            s += row[e] * col[e]
                    out[start + off + a * stride] = s % p
        vals = out
        stride = block
    return vals


def scan_fiber(polys, nvars: int, p: int, outer: int) -> list[int]:
    """Flat indices of the fiber points where every polynomial vanishes.

    Equations are tried in order and the scan stops as soon as no candidate
    survives.
    """
    m = nvars - 1
    V = vandermonde(p)
    alive = None
    for exps, coeffs in polys:
        vals = transform(fiber_table(exps, coeffs, nvars, p, outer), p, m, V)
        if alive is None:
            alive = [i for i, v in enumerate(vals) if v == 0]
        else:
            alive = [i for i in alive if vals[i] == 0]
        if not alive:
            return []
    return alive or []
