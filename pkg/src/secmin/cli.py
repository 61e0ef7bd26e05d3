"""Command-line frontend.

Line-oriented key=value output with a fixed key order, or JSON with --json.
Exit codes: 0 for pass/report, 1 for a falsified check, 2 for usage or
precondition errors.  Payload lines are byte-stable across runs; the trailing
elapsed_ms line is excluded from the stable section.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import arith, bands, bounds, lattice, secant, suite
from .errors import ParameterError, ResourceLimitError, VerificationError


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (tuple, list)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def _emit(record: dict) -> str:
    return " ".join(f"{k}={_fmt(v)}" for k, v in record.items())


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--field", choices=["Q"], default=None, help="shortcut for the rationals")
    parser.add_argument("--degK", type=int, default=None, help="field degree over the rationals")
    parser.add_argument("--r1", type=int, default=None, help="number of real places")
    parser.add_argument("--r2", type=int, default=None, help="number of complex places")
    parser.add_argument("--log-disc", type=float, default=None, help="log |discriminant|")


def _field_from_args(args) -> bounds.NumberFieldData:
    explicit = [args.degK, args.r1, args.r2, args.log_disc]
    if args.field == "Q" or all(v is None for v in explicit):
        return bounds.RATIONAL_FIELD
    if any(v is None for v in explicit):
        raise ParameterError("specify --field Q or all of --degK --r1 --r2 --log-disc")
    return bounds.NumberFieldData(args.degK, args.r1, args.r2, args.log_disc)


def _field_echo(field: bounds.NumberFieldData) -> dict:
    return {
        "degK": field.degree,
        "r1": field.real_places,
        "r2": field.complex_places,
        "log_disc": field.log_disc,
    }


def cmd_bands(args) -> tuple[list[dict], str]:
    if args.mode == "single":
        if args.n is None:
            raise ParameterError("mode single needs --n")
        sieve = arith.build_sieve(max(args.n, 2))
        rec = bands.prime_power_gap(args.n, sieve)
        b = bands.min_band(args.n)
        return [
            {"n": args.n, "band": b, "gap": rec.gap, "witness": rec.witness_prime_power}
        ], "pass" if b == rec.gap else "fail"
    if args.mode == "verify":
        hi = args.max if args.max is not None else 3000
        records = bands.verify_band_gap_identity(hi)
        worst = max(records, key=lambda r: r.gap)
        return [
            {"max": hi, "checked": len(records), "largest_gap": worst.gap, "at": worst.n}
        ], "pass"
    hi = args.max if args.max is not None else 10**6
    sieve = arith.build_sieve(hi)
    out = []
    for exponent in args.exponent or [0.535, 23 / 18]:
        r = bands.asymptotic_report(hi, exponent, sieve)
        out.append(
            {
                "max": r.n,
                "exponent": r.exponent,
                "partial_sum": r.partial_sum,
                "ratio": r.ratio,
                "max_ratio": r.max_ratio,
                "argmax": r.argmax,
            }
        )
    return out, "report"


def cmd_secant(args) -> tuple[list[dict], str]:
    p = secant.SecantParams(args.g, args.m, args.d)
    p.require_valid()
    record: dict = {"g": args.g, "m": args.m, "d": args.d}
    status = "pass"
    if args.mode in ("closed", "both"):
        record["closed"] = secant.degree_closed_form(p)
    if args.mode in ("oracle", "both"):
        record["oracle"] = secant.degree_oracle(p)
    if args.mode == "both":
        agree = record["closed"] == record["oracle"]
        record["agree"] = agree
        if not agree:
            status = "fail"
    return [record], status


_BOUNDS_REQUIRED = {
    "constant": ["N"],
    "height": ["g", "m", "L2"],
    "lambda": ["g", "m", "k", "L2"],
    "mu": ["g", "m", "k", "L2"],
    "top": ["g", "m", "L2"],
    "omega-lambda": ["g", "n", "k"],
    "omega-mu": ["g", "n", "k"],
}


def cmd_bounds(args) -> tuple[list[dict], str]:
    missing = [name for name in _BOUNDS_REQUIRED[args.which] if getattr(args, name) is None]
    if missing:
        raise ParameterError(f"bounds {args.which} needs --" + " --".join(missing))
    field = _field_from_args(args)
    echo = _field_echo(field)
    which = args.which
    if which == "constant":
        inputs = {"N": args.N, "rank_shift": args.rank_shift, **echo}
    elif which == "height":
        inputs = {"g": args.g, "m": args.m, "L2": args.L2, "Lw": args.Lw, "w2": args.w2, **echo}
    elif which in ("lambda", "mu"):
        inputs = {"g": args.g, "m": args.m, "k": args.k, "L2": args.L2, "Lw": args.Lw, "w2": args.w2, **echo}
        if args.e_val is not None:
            inputs["e_val"] = args.e_val
    elif which == "top":
        inputs = {"g": args.g, "m": args.m, "L2": args.L2, "Lw": args.Lw, "w2": args.w2, **echo}
        which = "top-odd" if args.m % 2 == 1 else "top-even"
    else:  # omega-lambda, omega-mu
        inputs = {"g": args.g, "n": args.n, "k": args.k, "w2": args.w2, **echo}
    report = bounds.make_report(which, **inputs)
    record = {"kind": report.kind, **dict(report.inputs), "value": report.value}
    if which in ("top-odd", "top-even"):
        s = bounds.SurfaceData(args.g, args.m, args.L2, args.Lw, args.w2, field)
        record["index"] = bounds.top_lambda_floor(s)[0]
    return [record], "report"


def cmd_lattice(args) -> tuple[list[dict], str]:
    lat = lattice.read_gram(Path(args.gram).read_text())
    if args.action == "minima":
        prof = lattice.successive_minima(lat)
        return [
            {
                "rank": lat.rank,
                "sq_minima": prof.sq_minima,
                "log_minima": prof.log_minima,
                "witnesses": ";".join(_fmt(w) for w in prof.witnesses),
            }
        ], "report"
    if args.action == "dual":
        dual = lattice.dual_lattice(lat)
        return [
            {"row": i, "entries": row} for i, row in enumerate(dual.entries)
        ], "report"
    if args.action == "heights":
        table = lattice.sublattice_heights(lat)
        return [
            {"p": p, "covol2": c, "log_height": h}
            for p, (c, h) in enumerate(zip(table.covol2, table.log_heights), start=1)
        ], "report"
    if args.action == "transference":
        report = lattice.verify_transference(lat)
        out = [
            {
                "p": r.p,
                "lower": r.lower,
                "minima_sum": r.minima_sum,
                "upper": r.upper,
                "printed_upper": r.printed_upper,
                "ok": r.ok,
                "printed_ok": r.printed_ok,
            }
            for r in report.rows
        ]
        out.append({"constant": report.constant})
        return out, "pass"
    # avoid
    if not args.form:
        raise ParameterError("action avoid needs --form FILE")
    form = lattice.read_form(Path(args.form).read_text())
    prof = lattice.successive_minima(lat)
    res = lattice.avoid_hypersurface(form, prof)
    return [
        {
            "grid": res.grid_vector,
            "vector": res.lattice_vector,
            "value": res.value,
            "log_norm": res.log_norm,
            "log_bound": res.log_bound,
            "within": res.within_bound,
        }
    ], "pass" if res.within_bound else "fail"


def cmd_verify_all(args) -> tuple[list[dict], str]:
    results = suite.run_all(quick=args.quick)
    records = [
        {"check": r.name, "status": "pass" if r.ok else "fail", "detail": r.detail}
        for r in results
    ]
    return records, "pass" if all(r.ok for r in results) else "fail"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secmin", description=__doc__)
    parser.add_argument("--json", action="store_true", help="emit a single JSON object")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bands", help="band function, prime-power gap, growth reports")
    p.add_argument("mode", choices=["single", "verify", "asymptotic"])
    p.add_argument("--n", type=int, help="row for mode single")
    p.add_argument("--max", type=int, help="range bound for verify/asymptotic")
    p.add_argument("--exponent", type=float, action="append", help="scaling exponent (repeatable)")
    p.set_defaults(fn=cmd_bands)

    p = sub.add_parser("secant", help="secant-variety degree, closed form and series oracle")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=["closed", "oracle", "both"], default="both")
    p.set_defaults(fn=cmd_secant)

    p = sub.add_parser("bounds", help="explicit bound evaluators")
    p.add_argument("which", choices=["constant", "height", "lambda", "mu", "top", "omega-lambda", "omega-mu"])
    p.add_argument("--N", type=int, help="dimension parameter for the transference constant")
    p.add_argument("--rank-shift", action="store_true", dest="rank_shift")
    p.add_argument("--g", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int, help="power of the dualizing sheaf")
    p.add_argument("--L2", type=float)
    p.add_argument("--Lw", type=float, default=0.0)
    p.add_argument("--w2", type=float, default=0.0)
    p.add_argument("--e-val", type=float, default=None, dest="e_val")
    _field_args(p)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("lattice", help="Gram-lattice computations")
    p.add_argument("action", choices=["minima", "dual", "heights", "transference", "avoid"])
    p.add_argument("--gram", required=True, help="Gram matrix file")
    p.add_argument("--form", help="form file for action avoid")
    p.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("verify-all", help="run the pinned verification suite")
    p.add_argument("--quick", action="store_true", help="reduced desk-scale ranges")
    p.set_defaults(fn=cmd_verify_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        records, status = args.fn(args)
    except (ParameterError, ResourceLimitError, FileNotFoundError) as exc:
        print(f"error={exc}", file=sys.stderr)
        print("status=fail")
        return 2
    except VerificationError as exc:
        print(f"error={exc}", file=sys.stderr)
        print("status=fail")
        return 1
    elapsed = int(1000 * (time.perf_counter() - t0))
    if args.json:
        print(json.dumps({"command": args.command, "status": status,
                          "records": [_jsonable(r) for r in records]}))
    else:
        for record in records:
            print(_emit(record))
        print(f"status={status}")
        print(f"elapsed_ms={elapsed}")
    return 1 if status == "fail" else 0


def console_main() -> None:
    sys.exit(main())
