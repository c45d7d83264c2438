"""Small modular-arithmetic helpers: square roots and univariate Hensel lifts."""
from __future__ import annotations


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks; returns the root in ``[0, p/2]`` or ``None``."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int | None:
    """Square root of a unit (or zero) modulo ``p**k`` for odd ``p``."""
    mod = p**k
    a %= mod
    if a == 0:
        return 0
    if a % p == 0:
        return None
    if p == 2:
        for r in range(mod):
            if r * r % mod == a:
                return r
        return None
    r = sqrt_mod_prime(a, p)
    if r is None:
        return None
    m = p
    while m < mod:
        m = min(m * m, mod)
        # Newton step for x^2 - a
        r = (r - (r * r - a) * pow(2 * r, -1, m)) % m
    return min(r, mod - r)


def poly_eval_mod(coeffs, x: int, m: int) -> int:
    """Evaluate a low-to-high coefficient list at ``x`` modulo ``m``."""
    v = 0
    for c in reversed(coeffs):
        v = (v * x + c) % m
    return v


def hensel_lift_univariate(coeffs, r0: int, p: int, k: int) -> int:
    """Lift a simple root ``r0`` of ``f mod p`` to a root modulo ``p**k``."""
    df = [i * c for i, c in enumerate(coeffs)][1:]
    if poly_eval_mod(df, r0, p) == 0:
        raise ValueError(f"{r0} is not a simple root mod {p}")
    r, prec = r0 % p, 1
    while prec < k:
        prec = min(2 * prec, k)
        m = p**prec
        r = (r - poly_eval_mod(coeffs, r, m) * pow(poly_eval_mod(df, r, m), -1, m)) % m
    return r


def roots_mod_prime(coeffs, p: int) -> list[int]:
    """All roots in ``range(p)`` by direct evaluation."""
    return [x for x in range(p) if poly_eval_mod(coeffs, x, p) == 0]


def valuation(n: int, p: int, cap: int | None = None) -> int:
    """``p``-adic valuation of an integer; ``cap`` (or infinity) for zero."""
    if n == 0:
        return cap if cap is not None else 1 << 62
    v = 0
    while n % p == 0:
        n //= p
        v += 1
        if cap is not None and v >= cap:
            return cap
    return v
