"""Command-line front end.

Subcommands
-----------
failprob   exact and float failure probabilities for (eps, M, R) grids
critical   numeric critical-polarization solves (plus the --refit diagnostic)
curve      critical polarization vs ensemble size for several methods at once
bahadur    closed-form tail bounds against the exact tail
simulate   Monte Carlo failure rates against the analytic value
classical  classical competitor failure probabilities
verify     run the built-in identity checks; nonzero exit on any failure

Output is CSV (default) or JSON, to stdout or to a file written atomically.
Floats are rendered as the shortest decimal that round-trips to the same
double, exact rationals as ``num/den``.  M ranges accept ``a``, ``a:b``
(inclusive) and ``a:b:logK`` (K log-spaced integers, default 20), joined by
commas.  The environment variable ENSEMBLE_QCRIT_THREADS caps internal
parallelism (0 = one worker per CPU; unset = serial).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

from . import verification
from .bahadur import bahadur_bounds
from .classical import (DeutschJozsaApprox, DeutschJozsaExact,
                        ExponentialModel, cf_dj_approx, cf_dj_exact,
                        cf_exponential)
from .errors import DomainError
from .failure import EnsembleSpec, pfail_general
from .probabilities import BinomialTailQuery, binom_tail
from .simulator import analytic_failure, consistency_z, estimate_failure_rate
from .solver import (ALL_METHODS, METHOD_ASYMPTOTIC, METHOD_BESTRES,
                     METHOD_LIMIT, METHOD_MODERATE, METHOD_NUMERIC,
                     ResolutionScaling, curve, refit_moderate_constant)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2

_METHOD_ALIASES = {
    "numeric": METHOD_NUMERIC,
    "asymptotic": METHOD_ASYMPTOTIC,
    "asymptotic_general": METHOD_ASYMPTOTIC,
    "bestres": METHOD_BESTRES,
    "dj_bestres": METHOD_BESTRES,
    "moderate": METHOD_MODERATE,
    "dj_moderate": METHOD_MODERATE,
    "limit": METHOD_LIMIT,
}


def parse_rational(text: str) -> Fraction:
    """Parse '1/2', '0.5' or '3' into an exact Fraction."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def parse_int_grid(text: str) -> list[int]:
    """Parse comma-joined tokens: 'a', 'a:b' (inclusive) or 'a:b:logK'."""
    values: set[int] = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        parts = token.split(":")
        if len(parts) == 1:
            values.add(int(parts[0]))
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {token!r}")
            values.update(range(lo, hi + 1))
        elif len(parts) == 3 and parts[2].startswith("log"):
            lo, hi = int(parts[0]), int(parts[1])
            if lo < 1 or lo > hi:
                raise argparse.ArgumentTypeError(f"bad log range {token!r}")
            count = int(parts[2][3:]) if len(parts[2]) > 3 else 20
            if count < 2:
                raise argparse.ArgumentTypeError("log ranges need at least 2 points")
            la, lb = math.log(lo), math.log(hi)
            for i in range(count):
                values.add(round(math.exp(la + (lb - la) * i / (count - 1))))
            values.update((lo, hi))
        else:
            raise argparse.ArgumentTypeError(f"bad range token {token!r}")
    if not values:
        raise argparse.ArgumentTypeError(f"no values in {text!r}")
    return sorted(values)


def parse_resolution(text: str) -> ResolutionScaling:
    """'best', 'sqrt', a number R, or 'R0:alpha'."""
    t = text.strip().lower()
    if t == "best":
        return ResolutionScaling(2.0, 0.0)
    if t == "sqrt":
        return ResolutionScaling(1.0, 0.5)
    parts = t.split(":")
    try:
        if len(parts) == 1:
            return ResolutionScaling(float(parts[0]), 0.0)
        if len(parts) == 2:
            return ResolutionScaling(float(parts[0]), float(parts[1]))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"bad resolution {text!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(f"bad resolution {text!r}")


def render_value(value) -> str:
    """Shortest round-trip text for a cell value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(header: Sequence[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([render_value(row.get(col)) for col in header])
    return buf.getvalue()


def rows_to_json(header: Sequence[str], rows: list[dict]) -> str:
    out = []
    for row in rows:
        item = {}
        for col in header:
            value = row.get(col)
            if isinstance(value, Fraction):
                value = f"{value.numerator}/{value.denominator}"
            if isinstance(value, float) and not math.isfinite(value):
                value = repr(value)
            item[col] = value
        out.append(item)
    return json.dumps(out, indent=2) + "\n"


def read_csv(text: str) -> list[dict]:
    """Parse CSV produced by this tool; floats and ints are restored."""
    rows = []
    reader = csv.DictReader(io.StringIO(text))
    for raw in reader:
        row = {}
        for key, cell in raw.items():
            if cell == "" or cell is None:
                row[key] = None
            elif cell in ("true", "false"):
                row[key] = cell == "true"
            elif "/" in cell:
                row[key] = Fraction(cell)
            else:
                try:
                    row[key] = int(cell)
                except ValueError:
                    try:
                        row[key] = float(cell)
                    except ValueError:
                        row[key] = cell
        rows.append(row)
    return rows


def write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qcrit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, header: Sequence[str], rows: list[dict]) -> None:
    if args.format == "json":
        write_output(rows_to_json(header, rows), args.output)
    else:
        write_output(rows_to_csv(header, rows), args.output)


def _max_workers() -> int | None:
    raw = os.environ.get("ENSEMBLE_QCRIT_THREADS")
    if raw is None:
        return None
    count = int(raw)
    if count == 0:
        return os.cpu_count() or 1
    return count


def _model_from_args(args) -> object:
    if args.model == "exp":
        return ExponentialModel(c=args.c)
    if args.model == "dj-exact":
        if args.n is None:
            raise DomainError("--model dj-exact requires --n")
        return DeutschJozsaExact(n=args.n)
    return DeutschJozsaApprox()


def cmd_failprob(args) -> int:
    header = ("eps", "M", "R", "m_min", "pfail_exact", "pfail_float")
    rows = []
    scaling = args.r
    for M in args.m:
        R = scaling.resolution(M)
        spec = EnsembleSpec(M, R)
        value = pfail_general(args.eps, spec)
        rows.append({"eps": args.eps, "M": M, "R": float(R), "m_min": spec.m_min,
                     "pfail_exact": value.exact, "pfail_float": value.value})
    _emit(args, header, rows)
    return EXIT_OK


_POINT_HEADER = ("M", "method", "resolution", "eps", "residual")


def _point_rows(points) -> list[dict]:
    return [{"M": pt.M, "method": pt.method, "resolution": pt.resolution,
             "eps": pt.eps, "residual": pt.residual} for pt in points]


def cmd_critical(args) -> int:
    model = _model_from_args(args)
    if args.refit:
        pairs = refit_moderate_constant(args.m, model=model)
        _emit(args, ("M", "K"), [{"M": m, "K": k} for m, k in pairs])
        return EXIT_OK
    points = curve(model, args.q, args.m, scaling=args.r,
                   methods=(METHOD_NUMERIC,), max_workers=_max_workers())
    _emit(args, _POINT_HEADER, _point_rows(points))
    return EXIT_OK


def cmd_curve(args) -> int:
    model = _model_from_args(args)
    methods = []
    for name in args.method.split(","):
        name = name.strip().lower()
        if name not in _METHOD_ALIASES:
            raise DomainError(f"unknown method {name!r}; choose from "
                              f"{sorted(set(_METHOD_ALIASES))}")
        canonical = _METHOD_ALIASES[name]
        if canonical not in methods:
            methods.append(canonical)
    points = curve(model, args.q, args.m, scaling=args.r, methods=methods,
                   max_workers=_max_workers())
    _emit(args, _POINT_HEADER, _point_rows(points))
    return EXIT_OK


def cmd_bahadur(args) -> int:
    header = ("n", "m", "p", "lower", "exact", "upper", "correction", "applicable")
    rows = []
    for n in args.n:
        ms = args.m if args.m is not None else list(range(0, n + 1))
        for m in ms:
            if not (0 <= m <= n + 1):
                continue
            bounds = bahadur_bounds(BinomialTailQuery(n, m, args.p))
            exact = binom_tail(n, m, args.p)
            rows.append({
                "n": n, "m": m, "p": args.p,
                "lower": bounds.lower, "exact": exact.exact if exact.exact is not None
                else exact.value,
                "upper": bounds.upper, "correction": bounds.correction,
                "applicable": bounds.applicable,
            })
    _emit(args, header, rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    header = ("eps", "M", "R", "trials", "seed", "rate", "stderr", "analytic", "z_score")
    rows = []
    eps = float(args.eps)
    for M in args.m:
        R = args.r.resolution(M)
        spec = EnsembleSpec(M, R)
        rate, stderr = estimate_failure_rate(eps, spec, args.trials, args.seed)
        analytic = analytic_failure(eps, spec)
        rows.append({"eps": eps, "M": M, "R": R, "trials": args.trials,
                     "seed": args.seed, "rate": rate, "stderr": stderr,
                     "analytic": analytic,
                     "z_score": consistency_z(rate, analytic, args.trials)})
    _emit(args, header, rows)
    return EXIT_OK


def cmd_classical(args) -> int:
    header = ("model", "n", "c", "q", "M", "Q", "value_exact", "value_float")
    rows = []
    for M in args.m:
        Q = M * args.q
        if args.model == "exp":
            value = cf_exponential(args.c, Q)
            rows.append({"model": "exp", "n": None, "c": args.c, "q": args.q,
                         "M": M, "Q": Q, "value_exact": value.exact,
                         "value_float": value.value})
        elif args.model == "dj-exact":
            if args.n is None:
                raise DomainError("--model dj-exact requires --n")
            value = cf_dj_exact(args.n, Q)
            rows.append({"model": "dj-exact", "n": args.n, "c": None, "q": args.q,
                         "M": M, "Q": Q, "value_exact": value.exact,
                         "value_float": value.value})
        else:
            value = cf_dj_approx(Q)
            rows.append({"model": "dj", "n": None, "c": None, "q": args.q,
                         "M": M, "Q": Q, "value_exact": value.exact,
                         "value_float": value.value})
    _emit(args, header, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verification.run_all()
    failed = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name}: {result.detail}")
        failed += not result.passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_DOMAIN_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ensemble-qcrit",
        description="Failure probabilities and critical polarization for "
                    "ensemble quantum algorithms with a single-bit output.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", default=None,
                       help="destination path ('-' or omitted for stdout)")

    p = sub.add_parser("failprob", help="failure probability for (eps, M, R)")
    p.add_argument("--eps", type=parse_rational, required=True)
    p.add_argument("--m", type=parse_int_grid, required=True)
    p.add_argument("--r", type=parse_resolution, default=ResolutionScaling(2.0, 0.0))
    add_output(p)
    p.set_defaults(func=cmd_failprob)

    for name, help_text in (("critical", "solve for the critical polarization"),
                            ("curve", "critical polarization vs ensemble size")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", choices=("dj", "dj-exact", "exp"), default="dj")
        p.add_argument("--c", type=float, default=2.0, help="base for --model exp")
        p.add_argument("--n", type=int, default=None, help="domain bits for dj-exact")
        p.add_argument("--q", type=int, default=1, help="oracle queries per member")
        p.add_argument("--m", type=parse_int_grid, required=True)
        p.add_argument("--r", type=parse_resolution,
                       default=ResolutionScaling(2.0, 0.0),
                       help="best | sqrt | R | R0:alpha")
        add_output(p)
        if name == "critical":
            p.add_argument("--refit", action="store_true",
                           help="emit the 2.44-constant refit diagnostic instead")
            p.set_defaults(func=cmd_critical)
        else:
            p.add_argument("--method", default="numeric",
                           help="comma list: numeric,asymptotic,bestres,moderate,limit")
            p.set_defaults(func=cmd_curve)

    p = sub.add_parser("bahadur", help="closed-form tail bounds vs exact tails")
    p.add_argument("--n", type=parse_int_grid, required=True)
    p.add_argument("--m", type=parse_int_grid, default=None,
                   help="tail start; defaults to all m in [0, n]")
    p.add_argument("--p", type=parse_rational, required=True)
    add_output(p)
    p.set_defaults(func=cmd_bahadur)

    p = sub.add_parser("simulate", help="Monte Carlo failure rate vs analytic")
    p.add_argument("--eps", type=parse_rational, required=True)
    p.add_argument("--m", type=parse_int_grid, required=True)
    p.add_argument("--r", type=parse_resolution, default=ResolutionScaling(2.0, 0.0))
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classical", help="classical competitor failure probability")
    p.add_argument("--model", choices=("dj", "dj-exact", "exp"), default="dj")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--m", type=parse_int_grid, required=True)
    add_output(p)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("verify", help="run the built-in identity checks")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
