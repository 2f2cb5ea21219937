"""Command-line front end.

Every subcommand prints one self-contained JSON record per result:

    {"command": ..., "params": {...}, "result": {...},
     "tool_version": ..., "elapsed_ms": ...}

Field order is fixed.  elapsed_ms is 0 unless --timing is given, so that
identical invocations produce byte-identical output; --format csv emits a
flattened RFC-4180 table instead.  Exit codes: 0 success, 1 usage or parse
error, 2 verification failure, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import acceptance as ac
from . import constants as cn
from . import experiments as ex
from . import expsum as es
from .errors import (
    IntegerExponent,
    NoCrossing,
    NotAFraction,
    OutOfRange,
    Overflow,
    PCLabError,
    PrecisionExhausted,
    RangeTooLarge,
    caps_from_env,
)
from .exactpow import floor_pow, parse_exponent

_USAGE_ERRORS = (NotAFraction, IntegerExponent, OutOfRange, NoCrossing, ValueError)
_CAP_ERRORS = (RangeTooLarge, Overflow, PrecisionExhausted)


def _int_arg(text: str) -> int:
    """Exact integer, accepting scientific notation like 1e6."""
    s = text.strip().lower()
    try:
        if "e" in s or "." in s:
            f = Fraction(s)
            if f.denominator != 1:
                raise ValueError
            return f.numerator
        return int(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact integer: {text!r}")


def _frac_arg(text: str) -> Fraction:
    try:
        s = text.strip()
        if "/" in s:
            a, _, b = s.partition("/")
            return Fraction(int(a), int(b))
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact ratio: {text!r}")


_GLOBAL_FLAGS = (
    ("--format", dict(choices=("jsonl", "csv"), default="jsonl")),
    ("--jobs", dict(type=int, default=os.cpu_count() or 1)),
    ("--seed", dict(type=int, default=0)),
    ("--tol", dict(type=float, default=None)),
    ("--config", dict(type=str, default=None, help="flat key=value defaults file")),
    ("--timing", dict(action="store_true", default=False,
                      help="report real elapsed_ms (breaks byte-identity)")),
    ("--fixtures", dict(type=str, default="fixtures/fixtures.jsonl")),
)


def _add_globals(parser: argparse.ArgumentParser, suppress: bool):
    # subparsers get SUPPRESS defaults so they never clobber root values
    for flag, kw in _GLOBAL_FLAGS:
        kw = dict(kw)
        if suppress:
            kw["default"] = argparse.SUPPRESS
        parser.add_argument(flag, **kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pclab",
        description="computational laboratory for the arithmetic of floor(p^c)",
        allow_abbrev=False,
    )
    _add_globals(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    def new(parent, name, **kw):
        p = parent.add_parser(name, allow_abbrev=False, **kw)
        _add_globals(p, suppress=True)
        return p

    p = new(sub, "floor", help="exact floor(n^c)")
    p.add_argument("-n", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)

    for name in ("census", "squarefree", "psprimes"):
        p = new(sub, name)
        p.add_argument("--x", type=_int_arg, required=True)
        p.add_argument("-c", type=str, required=True)
        if name == "census":
            p.add_argument("-R", type=int, required=True)

    p = new(sub, "histogram", help="residues of floor(p^c) mod d")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--d", type=_int_arg, required=True)

    p = new(sub, "leveldist", help="level-of-distribution error sum")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--D", type=_int_arg, required=True)
    p.add_argument("--f-model", default="unit")
    p.add_argument("--all-residues", action="store_true")

    p = new(sub, "discrepancy", help="star discrepancy of {h p^c / d}")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--h", type=_int_arg, required=True)
    p.add_argument("--d", type=_int_arg, required=True)

    pe = new(sub, "expsum", help="exponential-sum evaluators")
    se = pe.add_subparsers(dest="expsum_kind", required=True)
    p = new(se, "weyl")
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--Theta", type=_frac_arg, required=True)
    p.add_argument("--Delta", type=_frac_arg, required=True)
    p.add_argument("--N", type=_int_arg, required=True)
    p.add_argument("--eps", type=_frac_arg, default=Fraction(0))
    p = new(se, "prime")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--h", type=_int_arg, required=True)
    p.add_argument("--d", type=_int_arg, required=True)
    p = new(se, "trilinear")
    p.add_argument("--D", type=_int_arg, required=True)
    p.add_argument("--M", type=_int_arg, required=True)
    p.add_argument("--L", type=_int_arg, required=True)
    p.add_argument("--h", type=_int_arg, required=True)
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--weights", choices=("unit", "interval", "pm1"), default="unit")
    p = new(se, "triple")
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("--D", type=_int_arg, required=True)
    p.add_argument("--H", type=_int_arg, default=None)
    p.add_argument("-c", type=str, required=True)

    pc = new(sub, "constants", help="exact constants and inequality systems")
    sc = pc.add_subparsers(dest="constants_kind", required=True)
    p = new(sc, "delta")
    p.add_argument("-R", type=int, required=True)
    new(sc, "table")
    p = new(sc, "lemma23")
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--theta", type=_frac_arg, required=True)
    p.add_argument("--kappa", type=_frac_arg, default=Fraction(1, 10**6))
    p = new(sc, "maxc")
    p.add_argument("-R", type=int, required=True)
    p.add_argument("--kappa", type=_frac_arg, default=Fraction(1, 10**9))
    p.add_argument("--greaves-degree", action="store_true")
    p = new(sc, "sigma")
    p.add_argument("-c", type=str, required=True)
    p = new(sc, "rbound")
    p.add_argument("-c", type=str, required=True)
    p = new(sc, "regime")
    p.add_argument("-c", type=str, required=True)
    p = new(sc, "threshold")
    p.add_argument("--ineq", choices=("3.2", "3.3", "3.4", "beta-cap"), required=True)
    p.add_argument("--lo", type=_frac_arg, required=True)
    p.add_argument("--hi", type=_frac_arg, required=True)
    p = new(sc, "margins")
    p.add_argument("-c", type=str, required=True)
    p.add_argument("--eps", type=_frac_arg, default=Fraction(1, 1000))

    p = new(sub, "verify", help="run the acceptance suite")
    p.add_argument("--record", action="store_true", help="write regression fixtures")

    return ap


def _apply_config(ap: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Load --config key=value pairs as parser defaults (flags override)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    defaults = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            defaults[key.strip()] = val.strip()
    known = {"format": str, "jobs": int, "seed": int, "tol": float, "fixtures": str}
    ap.set_defaults(**{k: known[k](v) for k, v in defaults.items() if k in known})
    return argv


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _jsonable(x):
    if isinstance(x, Fraction):
        return _frac_str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalar
        return x.item()
    return x


def _flatten(prefix: str, obj, out: dict):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list):
        out[prefix] = json.dumps(obj)
    else:
        out[prefix] = obj
    return out


class Emitter:
    def __init__(self, fmt: str, timing: bool, stream=None):
        self.fmt = fmt
        self.timing = timing
        self.stream = stream or sys.stdout
        self._writer = None

    def emit(self, command: str, params: dict, result: dict, elapsed_ms: int):
        record = {
            "command": command,
            "params": _jsonable(params),
            "result": _jsonable(result),
            "tool_version": __version__,
            "elapsed_ms": elapsed_ms if self.timing else 0,
        }
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(record, separators=(",", ":")) + "\n")
            return record
        flat = _flatten("", record, {})
        if self._writer is None:
            self._writer = csv.DictWriter(self.stream, fieldnames=list(flat.keys()))
            self._writer.writeheader()
        self._writer.writerow(flat)
        return record


def _params_key(command: str, params: dict) -> str:
    canon = json.dumps({"command": command, "params": _jsonable(params)}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


# fixture workloads: deterministic, modest scale
_FIXTURE_RUNS = (
    ("expsum.weyl", {"c": "5/2", "Theta": "1/1", "Delta": "3/10", "N": 100}),
    ("expsum.prime", {"x": 10**5, "c": "11/5", "h": 3, "d": 7}),
    ("expsum.trilinear", {"D": 8, "M": 32, "L": 32, "h": 1, "c": "10521/10000", "weights": "pm1", "seed": 42}),
    ("expsum.triple", {"x": 100, "D": 2, "H": 2, "c": "3/2"}),
    ("census", {"x": 10**5, "c": "10521/10000", "R": 8}),
    ("squarefree", {"x": 10**5, "c": "7/5"}),
    ("psprimes", {"x": 10**5, "c": "3/2"}),
    ("leveldist", {"x": 10**5, "c": "10521/10000", "D": 50}),
    ("discrepancy", {"x": 10**5, "c": "10521/10000", "h": 1, "d": 7}),
)


def _run_fixture(name: str, params: dict, caps) -> dict:
    if name == "expsum.weyl":
        return es.weyl_sum(params["c"], _frac_arg(params["Theta"]),
                           _frac_arg(params["Delta"]), params["N"], caps=caps).to_json()
    if name == "expsum.prime":
        return es.prime_expsum(params["x"], params["c"], params["h"], params["d"], caps=caps).to_json()
    if name == "expsum.trilinear":
        return es.trilinear_sum(params["D"], params["M"], params["L"], params["h"], params["c"],
                                params["weights"], seed=params["seed"], caps=caps).to_json()
    if name == "expsum.triple":
        return es.triple_sum(params["x"], params["D"], params["H"], params["c"], caps=caps).to_json()
    if name == "census":
        return ex.almost_prime_census(params["x"], params["c"], params["R"], caps=caps).to_json()
    if name == "squarefree":
        return ex.squarefree_census(params["x"], params["c"], caps=caps).to_json()
    if name == "psprimes":
        return ex.ps_prime_count(params["x"], params["c"], caps=caps).to_json()
    if name == "leveldist":
        return ex.level_error(params["x"], params["c"], params["D"], caps=caps).to_json()
    if name == "discrepancy":
        return ex.star_discrepancy(params["x"], params["c"], params["h"], params["d"], caps=caps).to_json()
    raise OutOfRange(f"unknown fixture command {name!r}")


def _results_match(a, b, rel=1e-9) -> bool:
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_results_match(a[k], b[k], rel) for k in a)
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        return len(a) == len(b) and all(_results_match(x, y, rel) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        if a is None or b is None:
            return a == b
        return abs(float(a) - float(b)) <= rel * max(abs(float(b)), 1.0)
    return a == b


def _verify(args, caps, emit: Emitter) -> int:
    if args.record:
        os.makedirs(os.path.dirname(args.fixtures) or ".", exist_ok=True)
        with open(args.fixtures, "w", encoding="utf-8") as fh:
            for name, params in _FIXTURE_RUNS:
                result = _run_fixture(name, params, caps)
                entry = {
                    "key": _params_key(name, params),
                    "command": name,
                    "params": _jsonable(params),
                    "result": _jsonable(result),
                }
                fh.write(json.dumps(entry, separators=(",", ":")) + "\n")
        emit.emit("verify", {"record": True}, {"fixtures": len(_FIXTURE_RUNS), "path": args.fixtures}, 0)
        return 0

    jobs = args.jobs
    other = 4 if jobs == 1 else 1
    results = ac.run_criteria(jobs=jobs, caps=caps)
    results_other = ac.run_criteria(jobs=other, caps=caps)
    det_ok = ac.payload_text(results) == ac.payload_text(results_other)
    failed = 0
    for r in results:
        emit.emit("verify", {"criterion": r.cid, "title": r.title}, {"pass": r.passed, **r.values},
                  int(r.elapsed_s * 1000))
        failed += 0 if r.passed else 1
    emit.emit("verify", {"criterion": 14, "title": "determinism across worker counts"},
              {"pass": det_ok, "jobs_pair": sorted((jobs, other))}, 0)
    failed += 0 if det_ok else 1

    fixture_fail = 0
    if os.path.exists(args.fixtures):
        with open(args.fixtures, "r", encoding="utf-8") as fh:
            entries = [json.loads(line) for line in fh if line.strip()]
        for entry in entries:
            got = _jsonable(_run_fixture(entry["command"], entry["params"], caps))
            ok = _results_match(got, entry["result"])
            emit.emit("verify", {"fixture": entry["command"], "key": entry["key"][:16]},
                      {"pass": ok}, 0)
            fixture_fail += 0 if ok else 1

    total_fail = failed + fixture_fail
    emit.emit("verify", {"summary": True},
              {"criteria_failed": failed, "fixtures_failed": fixture_fail,
               "determinism_ok": det_ok, "ok": total_fail == 0}, 0)
    return 2 if total_fail else 0


def _dispatch(args, caps, emit: Emitter) -> int:
    cmd = args.command
    t0 = time.perf_counter()

    def done(params, result):
        emit.emit(full_cmd, params, result, int((time.perf_counter() - t0) * 1000))
        return 0

    full_cmd = cmd
    if cmd == "floor":
        c = parse_exponent(args.c)
        return done({"n": args.n, "c": str(c)}, {"floor": floor_pow(args.n, c, caps)})
    if cmd == "census":
        r = ex.almost_prime_census(args.x, args.c, args.R, jobs=args.jobs, caps=caps)
        return done({"x": args.x, "c": args.c, "R": args.R}, r.to_json())
    if cmd == "squarefree":
        r = ex.squarefree_census(args.x, args.c, jobs=args.jobs, caps=caps)
        return done({"x": args.x, "c": args.c}, r.to_json())
    if cmd == "psprimes":
        r = ex.ps_prime_count(args.x, args.c, jobs=args.jobs, caps=caps)
        return done({"x": args.x, "c": args.c}, r.to_json())
    if cmd == "histogram":
        r = ex.residue_histogram(args.x, args.c, args.d, caps=caps)
        return done({"x": args.x, "c": args.c, "d": args.d}, r.to_json())
    if cmd == "leveldist":
        r = ex.level_error(args.x, args.c, args.D, args.f_model,
                           all_residues=args.all_residues, caps=caps)
        return done({"x": args.x, "c": args.c, "D": args.D, "f_model": args.f_model}, r.to_json())
    if cmd == "discrepancy":
        tol = args.tol if args.tol else 1e-12
        r = ex.star_discrepancy(args.x, args.c, args.h, args.d, tol=tol, caps=caps)
        return done({"x": args.x, "c": args.c, "h": args.h, "d": args.d}, r.to_json())
    if cmd == "expsum":
        full_cmd = f"expsum.{args.expsum_kind}"
        if args.expsum_kind == "weyl":
            r = es.weyl_sum(args.c, args.Theta, args.Delta, args.N, epsilon=args.eps, caps=caps)
        elif args.expsum_kind == "prime":
            r = es.prime_expsum(args.x, args.c, args.h, args.d, caps=caps)
        elif args.expsum_kind == "trilinear":
            r = es.trilinear_sum(args.D, args.M, args.L, args.h, args.c,
                                 args.weights, seed=args.seed, caps=caps)
        else:
            r = es.triple_sum(args.x, args.D, args.H, args.c, caps=caps)
        return done(dict(r.params), r.to_json())
    if cmd == "constants":
        full_cmd = f"constants.{args.constants_kind}"
        kind = args.constants_kind
        if kind == "delta":
            return done({"R": args.R}, {"delta": cn.greaves_delta(args.R)})
        if kind == "table":
            return done({}, {"pairs": [[p.R, p.c_R] for p in cn.admissible_pairs()]})
        if kind == "lemma23":
            params = cn.feasibility_params(args.c, args.theta, args.kappa)
            reps = cn.feasibility_check(params)
            return done(
                {"c": args.c, "theta": _frac_str(params.theta), "kappa": _frac_str(params.kappa)},
                {"alpha": float(params.alpha), "all_hold": all(r.holds for r in reps),
                 "inequalities": [r.to_json() for r in reps]},
            )
        if kind == "maxc":
            tol = args.tol if args.tol else 1e-6
            v = cn.max_c_feasible(args.R, tol, kappa=args.kappa, greaves_degree=args.greaves_degree)
            return done({"R": args.R, "tol": tol, "greaves_degree": args.greaves_degree}, {"max_c": v})
        if kind == "sigma":
            return done({"c": args.c}, cn.regime_constants(cn._frac(args.c)).to_json())
        if kind == "rbound":
            return done({"c": args.c}, cn.r_bound(cn._frac(args.c)).to_json())
        if kind == "regime":
            reps = cn.regime_inequalities(cn._frac(args.c))
            return done({"c": args.c}, {"all_hold": all(r.holds for r in reps),
                                        "inequalities": [r.to_json() for r in reps]})
        if kind == "threshold":
            tol = args.tol if args.tol else 1e-3
            r = cn.threshold(args.ineq, args.lo, args.hi, tol)
            return done({"ineq": args.ineq, "lo": _frac_str(args.lo), "hi": _frac_str(args.hi), "tol": tol},
                        r.to_json())
        if kind == "margins":
            r = cn.margin_verify(cn._frac(args.c), args.eps)
            return done({"c": args.c, "eps": _frac_str(args.eps)}, r.to_json())
    if cmd == "verify":
        return _verify(args, caps, emit)
    raise OutOfRange(f"unknown command {cmd!r}")


def run(argv: list[str]) -> int:
    ap = build_parser()
    try:
        argv = _apply_config(ap, list(argv))
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help, 2 for usage errors (mapped to 1)
        return 0 if e.code == 0 else 1
    except OSError as e:
        print(f"pclab: {e}", file=sys.stderr)
        return 1
    caps = caps_from_env()
    emit = Emitter(args.format, args.timing)
    try:
        return _dispatch(args, caps, emit)
    except _CAP_ERRORS as e:
        print(f"pclab: resource cap: {e}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as e:
        print(f"pclab: {e}", file=sys.stderr)
        return 1
    except PCLabError as e:
        print(f"pclab: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
