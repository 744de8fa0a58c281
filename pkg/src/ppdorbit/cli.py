"""Command line interface.

    ppdorbit orbit --c 1 --d 2 --n 5
    ppdorbit classify --c -1 --d 4
    ppdorbit decompose --c 1 --d 2 --n-max 6 --format csv
    ppdorbit verify --c-min -10 --c-max 10 --d-min 2 --d-max 3 --n-max 8

Exit codes: 0 ok, 1 usage or infeasible request, 2 theorem or invariant
violation, 3 preperiodic-only input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .cache import CacheRecord, DecompositionCache
from .errors import DigitCapExceeded, PreperiodicOrbit, RigidityViolation
from .factor import FactorBudget
from .orbit import DEFAULT_DIGIT_CAP, MapParams, classify, digits_of, iterate
from .primitive import DecompositionTable, primitive_primes
from .sweep import SweepSpec, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_PREPERIODIC = 0, 1, 2, 3

CSV_COLUMNS = ["c", "d", "n", "b", "P", "N", "primes", "status"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad input, which is the violation code here
    def error(self, message):
        raise UsageError(message)


def _abbrev(s: str, width: int = 40) -> str:
    digits = s.lstrip("-")
    if len(digits) <= width:
        return s
    sign = "-" if s.startswith("-") else ""
    return f"{sign}{digits[:12]}...{digits[-12:]} [{len(digits)} digits]"


def _primes_field(rec: CacheRecord) -> str:
    probable = set(rec.probable_primes)
    parts = []
    for p, e in rec.primes:
        tag = "(PRP)" if p in probable else ""
        parts.append(f"{p}{tag}" + (f"^{e}" if e > 1 else ""))
    if rec.cofactor != "1":
        parts.append(f"[{rec.cofactor}]")
    return "*".join(parts)


def _add_budget(p: argparse.ArgumentParser):
    p.add_argument("--budget-trial", type=int, default=10**6, help="largest trial divisor")
    p.add_argument("--budget-rho", type=int, default=10**6, help="rho iterations per cofactor")
    p.add_argument("--budget-ms", type=int, default=None, help="wall time cap per factorization")


def _budget(args) -> FactorBudget:
    try:
        return FactorBudget(args.budget_trial, args.budget_rho, args.budget_ms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ppdorbit", description="Primitive prime divisors in zero orbits of z^d + c.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fmt = dict(choices=["text", "csv", "json"], default="text")

    p = sub.add_parser("orbit", help="print the first n iterates")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("classify", help="wandering or preperiodic zero orbit")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("decompose", help="primitive / non-primitive parts of b_1..b_n")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)
    p.add_argument("--no-factor", action="store_true", help="skip listing the primitive primes")
    p.add_argument("--cache", default=None, help="JSON lines cache to append to")
    p.add_argument("--format", **fmt)
    _add_budget(p)

    p = sub.add_parser("verify", help="check the theorem and invariants over a sweep")
    p.add_argument("--c-min", type=int, required=True)
    p.add_argument("--c-max", type=int, required=True)
    p.add_argument("--d-min", type=int, default=2)
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--digit-cap", type=int, default=DEFAULT_DIGIT_CAP)
    p.add_argument("--factor", action="store_true", help="also list primitive primes")
    p.add_argument("--rds-depth", type=int, default=8)
    p.add_argument("--rds-prime-limit", type=int, default=10**4)
    p.add_argument("--cache", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", **fmt)
    _add_budget(p)
    return ap


def cmd_orbit(args, out) -> int:
    params = MapParams(args.c, args.d)
    orbit = iterate(params, args.seed, args.n, args.digit_cap)
    terms = [digits_of(t) for t in orbit.terms]
    if args.format == "json":
        json.dump({"c": args.c, "d": args.d, "seed": args.seed, "terms": terms}, out)
        out.write("\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "b"])
        w.writerows((i, t) for i, t in enumerate(terms, 1))
    else:
        out.write(", ".join(terms) + "\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    cls = classify(MapParams(args.c, args.d))
    if args.format == "json":
        json.dump(
            {
                "c": args.c,
                "d": args.d,
                "verdict": cls.verdict.value,
                "case": cls.case.value if cls.case else None,
            },
            out,
        )
        out.write("\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["c", "d", "verdict", "case"])
        w.writerow([args.c, args.d, cls.verdict.value, cls.case.value if cls.case else ""])
    else:
        out.write(f"{cls}\n")
    return EXIT_OK


def _write_records(records, fmt, out, params=None):
    if fmt == "json":
        json.dump({"params": params or {}, "records": [r.to_json() for r in records]}, out)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r.c, r.d, r.n, r.b, r.P, r.N, _primes_field(r), r.status])
    else:
        out.write(f"{'n':>3}  {'|b_n|':>40}  {'N_n':>40}  {'P_n':>40}  primes / status\n")
        for r in records:
            out.write(
                f"{r.n:>3}  {_abbrev(r.b.lstrip('-')):>40}  {_abbrev(r.N):>40}  "
                f"{_abbrev(r.P):>40}  {_primes_field(r) or '-'} {r.status}\n"
            )


def cmd_decompose(args, out) -> int:
    params = MapParams(args.c, args.d)
    budget = _budget(args)
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    table = DecompositionTable(params, args.digit_cap)
    table.extend(args.n_max)
    records = []
    for n in range(1, args.n_max + 1):
        dec = table.decomposition(n) if args.no_factor else primitive_primes(params, n, budget, table)
        records.append(CacheRecord.from_decomposition(args.c, args.d, table.term(n), dec))
    if args.cache:
        DecompositionCache(args.cache).append(records)
    _write_records(records, args.format, out, {"c": args.c, "d": args.d, "n_max": args.n_max})
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        spec = SweepSpec(
            c_min=args.c_min,
            c_max=args.c_max,
            d_min=args.d_min,
            d_max=args.d_max,
            n_max=args.n_max,
            budget=_budget(args),
            digit_cap=args.digit_cap,
            factor_primes=args.factor,
            rds_depth=args.rds_depth,
            rds_prime_limit=args.rds_prime_limit,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")

    cache = DecompositionCache(args.cache) if args.cache else None
    report = run_sweep(spec, cache, args.jobs)

    dest = open(args.output, "w", encoding="utf-8") if args.output else out
    try:
        if args.format == "json":
            report.write_json(dest)
        elif args.format == "csv":
            w = csv.writer(dest, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in report.records():
                w.writerow([r.c, r.d, r.n, r.b, r.P, r.N, _primes_field(r), r.status])
        else:
            for p in report.points:
                flag = lambda ok: "pass" if ok else "FAIL"  # noqa: E731
                note = " (digit cap)" if p.truncated else ""
                dest.write(
                    f"c={p.c:>4} d={p.d}  terms={p.terms}{note}  theorem={flag(p.theorem_ok)}  "
                    f"growth={flag(p.growth_ok)}  rds={flag(p.rds_ok)} [{p.rds_instances}]\n"
                )
            for v in report.violations:
                dest.write("VIOLATION " + json.dumps(v) + "\n")
            dest.write(
                f"checked {len(report.points)} wandering (c,d), skipped "
                f"{len(report.skipped_preperiodic)} preperiodic, "
                f"{len(report.violations)} violations\n"
            )
    finally:
        if args.output:
            dest.close()
    if report.exit_code == EXIT_PREPERIODIC:
        print("error: every (c,d) in the sweep is preperiodic", file=sys.stderr)
    return report.exit_code


COMMANDS = {
    "orbit": cmd_orbit,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreperiodicOrbit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PREPERIODIC
    except DigitCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RigidityViolation as exc:
        print(f"VIOLATION: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
