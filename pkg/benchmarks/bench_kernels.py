"""Compare the compiled and pure-Python fiber-scan kernels.

Runs one fiber of a random dense system in three variables over F_p with
both backends, checks that they agree, and prints the timings.

    python benchmarks/bench_kernels.py --p 17 --terms 400 --repeat 3
"""
from __future__ import annotations

import argparse
import random
import time

from pellforge import _kernels_py

try:
    from pellforge import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def random_system(p: int, nvars: int, neqs: int, terms: int, seed: int):
    rng = random.Random(seed)
    polys = []
    for _ in range(neqs):
        exps = [rng.randrange(p) for _ in range(terms * nvars)]
        coeffs = [rng.randrange(p) for _ in range(terms)]
        polys.append((exps, coeffs))
    return polys


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=17)
    ap.add_argument("--nvars", type=int, default=4)
    ap.add_argument("--eqs", type=int, default=2)
    ap.add_argument("--terms", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    polys = random_system(args.p, args.nvars, args.eqs, args.terms, args.seed)
    # the first equation alone, so there is always work for both backends
    single = polys[:1]
    ref = _kernels_py.scan_fiber(single, args.nvars, args.p, 3)
    t_py = best_of(lambda: _kernels_py.scan_fiber(single, args.nvars, args.p, 3), args.repeat)
    print(f"fiber size        {args.p ** (args.nvars - 1)}")
    print(f"zeros found       {len(ref)}")
    print(f"pure python       {t_py * 1e3:10.2f} ms")
    if _compiled is None:
        print("compiled          not built (run: python setup.py build_ext --inplace)")
        return
    got = _compiled.scan_fiber(single, args.nvars, args.p, 3)
    if got != ref:
        raise SystemExit("backends disagree")
    t_cy = best_of(lambda: _compiled.scan_fiber(single, args.nvars, args.p, 3), args.repeat)
    print(f"cython            {t_cy * 1e3:10.2f} ms")
    print(f"speedup           {t_py / t_cy:10.1f}x")


if __name__ == "__main__":
    main()
