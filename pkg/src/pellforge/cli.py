"""``pellforge`` command line: build, reduce, solve, search, lift, recognize, and verify.

Exit codes: 0 success, 1 mathematical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__

log = logging.getLogger("pellforge")

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class MathFailure(Exception):
    def __init__(self, message: str, payload=None):
        super().__init__(message)
        self.payload = payload


@dataclass
class RunConfig:
    command: str
    json: bool = False
    jobs: int = 1
    output: str | None = None


def default_jobs() -> int:
    """Available parallelism, capped by ``PELLFORGE_MAX_JOBS`` when set."""
    n = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    cap = os.environ.get("PELLFORGE_MAX_JOBS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


# -- serialization -----------------------------------------------------------------

def to_jsonable(obj):
    """JSON-ready form; big integers and rationals become decimal strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return str(obj)


def serialize(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=1, sort_keys=True)


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in obj)
    return f"{pad}{obj}"


def _emit(cfg: RunConfig, payload) -> None:
    data = to_jsonable(payload)
    text = json.dumps(data, indent=1, sort_keys=True) if cfg.json else _text(data)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# -- helpers -----------------------------------------------------------------------

def _signature(text: str):
    from .builder import Signature, SignatureError

    try:
        sig = Signature.parse(text)
    except SignatureError as exc:
        raise UsageError(str(exc)) from exc
    if not sig.is_consistent():
        raise UsageError(f"signature {sig}: 3x != q + 2y")
    return sig


def _load_system(path: str):
    from .system import PolySystem

    try:
        return PolySystem.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{path} is not a polynomial system: {exc}") from exc


def _assignments(items, what: str) -> dict[str, int]:
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"{what} expects var=value, got {item!r}")
        try:
            out[name.strip()] = int(val)
        except ValueError as exc:
            raise UsageError(f"{what}: {val!r} is not an integer") from exc
    return out


_CASES = {"I": "CASE1", "II": "CASE2", "III": "CASE3"}


# -- subcommands -------------------------------------------------------------------

def cmd_build(args, cfg):
    from .builder import SignatureError, equate_coefficients, make_template

    sig = _signature(args.sig)
    try:
        tpl = make_template(sig, x_subleading=0 if args.degenerate else 1)
    except SignatureError as exc:
        raise UsageError(str(exc)) from exc
    sys_ = equate_coefficients(tpl)
    return {"signature": str(sig), "admissible": sig.is_admissible(), "unknowns": list(tpl.unknowns),
            "unknown_count": sig.unknown_count, "equation_count": len(sys_.eqs),
            "rho": str(sig.rho) if sig.rho is not None else None,
            "template": {k: str(p) for k, p in tpl.polys().items()}, "system": sys_.to_json()}


def cmd_reduce(args, cfg):
    from . import data
    from .elim import reduce_case, reduce_case2, reduce_to

    if (args.case is None) == (args.sig is None):
        raise UsageError("give exactly one of --case and --sig")
    if args.target_vars is not None and args.target_vars < 1:
        raise UsageError("--target-vars must be positive")
    if args.case == "II" and not args.linear_only and args.target_vars is None:
        sys_ = reduce_case2()
    else:
        sig = getattr(data, _CASES[args.case]) if args.case else _signature(args.sig)
        sys_ = reduce_case(sig)
        if args.target_vars is not None and not args.linear_only:
            sys_ = reduce_to(sys_, args.target_vars)
    if cfg.output and cfg.json is False:
        # a saved system is always JSON so that scan and lift can read it back
        cfg.json = True
    return sys_.to_json() if cfg.output else {"summary": sys_.summary(), "system": sys_.to_json()}


def cmd_solve_case1(args, cfg):
    from .elim import solve_case1

    sol = solve_case1()
    return {"reduced": sol.reduced.summary(),
            "isolated": [{k: str(v) for k, v in p.items()} for p in sol.isolated],
            "families": [{"params": list(c.params), "values": {k: str(v) for k, v in c.values.items()}}
                         for c in sol.families],
            "back_substituted": [{k: str(v) for k, v in p.items()} for p in sol.full_points],
            "unresolved": [str(p) for p in sol.unresolved]}


def cmd_appendix(args, cfg):
    from .builder import appendix_case1_derivation

    return appendix_case1_derivation().to_json()


def cmd_scan(args, cfg):
    from .padic import scan_local

    sys_ = _load_system(args.system)
    fixed = _assignments(args.fix, "--fix")
    try:
        sols = scan_local(sys_, args.p, fixed, jobs=cfg.jobs)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if args.status:
        sols = [s for s in sols if str(s.status) == args.status]
    return [s.to_json() for s in sols]


def cmd_lift(args, cfg):
    from .padic import PadicError, newton_lift, recognize, residual_valuation

    sys_ = _load_system(args.system)
    try:
        seed = [int(v) for v in args.seed.split(",")]
    except ValueError as exc:
        raise UsageError("--seed expects comma-separated integers") from exc
    if len(seed) != len(sys_.vars):
        raise UsageError(f"--seed needs {len(sys_.vars)} values for {', '.join(sys_.vars)}")
    try:
        pt = newton_lift(sys_, seed, p=args.p, K=args.K)
    except PadicError as exc:
        raise MathFailure(str(exc)) from exc
    out = {"point": pt.to_json(), "residual_valuation": residual_valuation(sys_, pt)}
    if args.recognize:
        rec = recognize(sys_, pt, dmax=args.recognize)
        out["recognized"] = {v: {"minpoly": list(c.coeffs) if c else None, "precision": k}
                             for v, (c, k) in rec.items()}
    return out


def cmd_algdep(args, cfg):
    from .recog import algdep

    m = args.p**args.K
    try:
        num, _, den = args.value.partition("/")
        num, den = int(num), int(den or 1)
    except ValueError as exc:
        raise UsageError(f"--value {args.value!r} is not an integer or fraction") from exc
    if den % args.p == 0:
        raise UsageError("denominator divisible by p")
    a = num * pow(den, -1, m) % m
    cands = algdep(a, args.p, args.K, args.dmax, early_exit=False)
    return [{"coeffs": list(c.coeffs), "quality": c.quality, "verified": c.verified} for c in cands]


_FAMILIES = {"caseI": ("case1_family", 1), "letter": ("letter_family", 2)}


def cmd_pell(args, cfg):
    from . import data
    from .pell import NoSeed, integral_points

    name, kappa = _FAMILIES[args.family]
    kappa = args.kappa or kappa
    fam = getattr(data, name)()
    try:
        recs = integral_points(fam, kappa, args.count)
    except NoSeed as exc:
        raise MathFailure(str(exc)) from exc
    return [r.to_json() for r in recs]


def cmd_verify(args, cfg):
    from .verify import verify_corpus

    overrides = {}
    for item in args.misprint or []:
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError("--misprint expects name=value")
        overrides[k] = v
    cert = verify_corpus(overrides or None)
    if not cert.passed:
        raise MathFailure("corpus checks failed: " + ", ".join(cert.failures()), cert.to_json())
    return cert.to_json()


def cmd_rho(args, cfg):
    import mpmath

    from .pell import rho

    try:
        val = rho(args.x, args.A, args.B)
    except ValueError as exc:
        raise MathFailure(str(exc)) from exc
    return {"x": args.x, "A": args.A, "B": args.B, "rho": mpmath.nstr(val, 12)}


# -- parser ----------------------------------------------------------------------------

def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--json", action="store_true", help="machine-readable output", **kw)
    parser.add_argument("--jobs", type=int, metavar="N", help="worker processes (default: available cores)", **kw)
    parser.add_argument("-o", "--output", metavar="FILE", help="write output to FILE", **kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pellforge", description="Elkies-Pell-Zagier families of large integral points.")
    ap.add_argument("--version", action="version", version=f"pellforge {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    _globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        _globals(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = add("build", cmd_build, "template and coefficient system for a signature")
    p.add_argument("--sig", required=True, help="a,b,q,x,y")
    p.add_argument("--degenerate", action="store_true", help="fix the t^(x-1) coefficient of X to 0")

    p = add("reduce", cmd_reduce, "reduce a coefficient system by linear substitutions and resultants")
    p.add_argument("--case", choices=sorted(_CASES))
    p.add_argument("--sig", help="a,b,q,x,y (instead of --case)")
    p.add_argument("--target-vars", type=int, metavar="N", help="keep eliminating until N variables remain")
    p.add_argument("--linear-only", action="store_true", help="stop after the constant-coefficient substitutions")

    add("solve-case1", cmd_solve_case1, "solve the (0,1,2,4,5) system exactly")
    add("appendix", cmd_appendix, "symbolic derivation of the first case by series square roots")

    p = add("scan", cmd_scan, "all F_p solutions of a saved system, with Jacobian tags")
    p.add_argument("system", help="system JSON written by 'reduce -o'")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--fix", action="append", metavar="VAR=VAL")
    p.add_argument("--status", choices=["Invertible", "SingularNonzero", "ZeroMatrix"])

    p = add("lift", cmd_lift, "Newton-lift a nonsingular seed")
    p.add_argument("system")
    p.add_argument("--seed", required=True, help="comma-separated residues in variable order")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-K", type=int, default=64, help="target precision exponent (default 64)")
    p.add_argument("--recognize", type=int, metavar="DMAX", help="run algdep on every coordinate")

    p = add("algdep", cmd_algdep, "small integer polynomials vanishing at a p-adic residue")
    p.add_argument("--value", required=True, help="residue mod p^K, or a fraction n/d")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-K", type=int, default=64)
    p.add_argument("--dmax", type=int, default=8)

    p = add("pell", cmd_pell, "admissible parameters and integral points along the Pell orbit")
    p.add_argument("--family", choices=sorted(_FAMILIES), default="letter")
    p.add_argument("--kappa", type=int, help="multiplier making kappa*Q(t) a square (default per family)")
    p.add_argument("--count", type=int, default=10)

    p = add("verify", cmd_verify, "certificate for the published artifacts")
    p.add_argument("--corpus", action="store_true", default=True)
    p.add_argument("--misprint", action="append", metavar="NAME=VALUE",
                   help="replace a printed second-case factor (sanity check of the harness)")

    p = add("rho", cmd_rho, "impressiveness of an integral point")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    jobs = args.jobs if args.jobs is not None else default_jobs()
    if jobs < 1:
        return _fail(args, EXIT_USAGE, "--jobs must be positive")
    cfg = RunConfig(args.command, bool(args.json), jobs, args.output)
    try:
        payload = args.func(args, cfg)
    except UsageError as exc:
        return _fail(args, EXIT_USAGE, str(exc))
    except MathFailure as exc:
        if exc.payload is not None:
            _emit(cfg, exc.payload)
        return _fail(args, EXIT_MATH, str(exc))
    except (ArithmeticError, ValueError) as exc:
        return _fail(args, EXIT_MATH, str(exc))
    try:
        _emit(cfg, payload)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return EXIT_OK


def _fail(args, code: int, message: str) -> int:
    kind = "usage" if code == EXIT_USAGE else "math"
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
