"""Command-line front end.

    invmoments exact  --binomial -n 2 -p 0.5 -r 1
    invmoments expand --poisson -m 10 -r 1 --order 1
    invmoments coeffs --binomial -r 1 -K 5 --check-paper
    invmoments sweep  --binomial -n 128,256,512 -p 0.5 -r 1 --order 4

Exit status: 0 success, 1 invalid input, 2 tolerance or convergence failure
(including a failed ``--check-paper`` comparison).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from .distributions import BinomialSpec, MomentQuery, PoissonSpec
from .errors import ConvergenceError, ValidationError
from .expansion import (auto_truncate, binomial_descriptor, binomial_expansion, general_expansion,
                        poisson_descriptor, poisson_expansion)
from .oracle import (binomial_inverse_moment_exact, binomial_inverse_moment_quadrature,
                     poisson_inverse_moment_exact)
from .symbolic import PolyError, binomial_np_series, check_against_golden, poisson_m_series

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# number handling ----------------------------------------------------------------

def _number(text: str, exact: bool):
    text = text.strip()
    try:
        if exact or "/" in text:
            return Fraction(text)
        value = float(text)
        return int(value) if value.is_integer() and "." not in text and "e" not in text.lower() else value
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"not a number: {text!r}") from None


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"not an integer: {text!r}") from None


def _list(text: str | None, conv) -> list:
    if text is None:
        return []
    return [conv(part) for part in text.split(",") if part.strip()]


def _num_out(x):
    """Exact float for json/csv (repr round-trips bit for bit)."""
    if x is None:
        return None
    if isinstance(x, Fraction):
        x = float(x)
    return float(x)


def _fmt_text(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x} ({float(x):.12g})"
    if isinstance(x, (float, Fraction)):
        return f"{float(x):.12g}"
    return str(x)


# output -----------------------------------------------------------------------

def _emit(args, config: dict, rows: list[dict], warnings: Sequence[str], text: str | None = None):
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "json":
        clean = [{k: (_num_out(v) if isinstance(v, (float, Fraction)) else v) for k, v in row.items()}
                 for row in rows]
        out = json.dumps({"config": config, "results": clean, "warnings": list(warnings)},
                         indent=2, sort_keys=False) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        fields = list(rows[0].keys()) if rows else []
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow(["" if row[f] is None else
                             repr(_num_out(row[f])) if isinstance(row[f], (float, Fraction)) else row[f]
                             for f in fields])
        out = buf.getvalue()
    else:
        if text is None:
            lines = []
            for row in rows:
                lines += [f"{k}: {_fmt_text(v)}" for k, v in row.items()]
                lines.append("")
            text = "\n".join(lines).rstrip("\n") + "\n"
        out = text
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _config(args) -> dict:
    skip = {"func", "output", "format"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or k.startswith("_"):
            continue
        out[k] = str(v) if isinstance(v, Fraction) else v
    return out


# parameter assembly -------------------------------------------------------------

def _spec(args, exact: bool):
    if args.binomial:
        if args.n is None or args.p is None:
            raise ValidationError("--binomial needs -n and -p")
        if args.m is not None:
            raise ValidationError("-m applies to --poisson only")
        return BinomialSpec(_int(args.n), _number(args.p, exact))
    if args.m is None:
        raise ValidationError("--poisson needs -m")
    if args.n is not None or args.p is not None:
        raise ValidationError("-n/-p apply to --binomial only")
    return PoissonSpec(_number(args.m, exact))


def _query(args) -> MomentQuery:
    if args.r is None:
        raise ValidationError("-r is required")
    exact = args.mode == "rational"
    return MomentQuery(_number(args.r, exact), mode=args.mode, tol=args.tol)


def _spec_fields(spec) -> dict:
    if isinstance(spec, BinomialSpec):
        return {"distribution": "binomial", "n": spec.n, "p": spec.p, "m": None}
    return {"distribution": "poisson", "n": None, "p": None, "m": spec.m}


def _oracle(spec, query):
    if isinstance(spec, BinomialSpec):
        return binomial_inverse_moment_exact(spec, query)
    return poisson_inverse_moment_exact(spec, query)


# subcommands --------------------------------------------------------------------

def cmd_exact(args) -> int:
    query = _query(args)
    spec = _spec(args, query.mode == "rational")
    if args.quadrature:
        if not isinstance(spec, BinomialSpec):
            raise ValidationError("--quadrature is available for --binomial only")
        result = binomial_inverse_moment_quadrature(spec, query)
    else:
        result = _oracle(spec, query)
    row = {**_spec_fields(spec), "r": query.r, "value": result.value, "method": result.method,
           "bound": result.bound, "terms_or_nodes": result.terms_or_nodes}
    if isinstance(result.value, Fraction):
        row["exact"] = str(result.value)
    _emit(args, _config(args), [row], [])
    return EXIT_OK


def _expand(spec, query, order, auto, general):
    if general:
        desc = binomial_descriptor(spec) if isinstance(spec, BinomialSpec) else poisson_descriptor(spec)
        if auto:
            return auto_truncate(desc, query, order)
        return general_expansion(desc, query, order)
    if auto:
        return auto_truncate(spec, query, order)
    if isinstance(spec, BinomialSpec):
        return binomial_expansion(spec, query, order)
    return poisson_expansion(spec, query, order)


def cmd_expand(args) -> int:
    query = _query(args)
    spec = _spec(args, query.mode == "rational")
    order = args.max_order if args.auto else args.order
    if order is None:
        raise ValidationError("--order (or --auto --max-order) is required")
    report = _expand(spec, query, order, args.auto, args.general)
    row = {**_spec_fields(spec), "r": query.r, "method": report.method, "value": report.value,
           "prefactor": report.prefactor, "expansion_parameter": report.expansion_parameter,
           "order_used": report.order_used, "error_estimate": report.error_estimate}
    if args.compare_exact:
        oracle = _oracle(spec, MomentQuery(query.r_float, tol=args.tol))
        diff = abs(float(report.value) - oracle.value)
        row.update(oracle=oracle.value, oracle_bound=oracle.bound, abs_difference=diff,
                   within_2x_estimate=bool(diff <= 2 * report.error_estimate))
    term_rows = [{"k": k, "term": t, "contribution": report.prefactor * t} for k, t in report.terms]
    if args.format == "text":
        lines = [f"{k}: {_fmt_text(v)}" for k, v in row.items()]
        lines.append("terms (k, term, prefactor*term):")
        lines += [f"  {r['k']:3d}  {_fmt_text(r['term'])}  {_fmt_text(r['contribution'])}"
                  for r in term_rows]
        _emit(args, _config(args), [row], report.warnings, "\n".join(lines) + "\n")
    elif args.format == "json":
        row["terms"] = [{"k": r["k"], "term": _num_out(r["term"]),
                         "contribution": _num_out(r["contribution"])} for r in term_rows]
        _emit(args, _config(args), [row], report.warnings)
    else:
        _emit(args, _config(args), [row], report.warnings)
    return EXIT_OK


def _r_symbolic(text: str | None):
    if text is None:
        return None
    r = _number(text, exact=True)
    if r <= 0:
        raise ValidationError("r must be positive")
    return int(r) if r.denominator == 1 else r


def cmd_coeffs(args) -> int:
    r = _r_symbolic(args.r)
    if args.poisson and r is not None and args.check_paper:
        raise ValidationError("golden Poisson coefficients exist for symbolic r only")
    K = args.K
    if K is None:
        K = {1: 5, 2: 4, 3: 4}.get(r, 2) if args.binomial else 2
    if K < 0:
        raise ValidationError("-K must be >= 0")
    dist = "binomial" if args.binomial else "poisson"
    if args.check_paper:
        try:
            rows = check_against_golden(dist, r, K)
        except KeyError as exc:
            raise ValidationError(f"--check-paper: {exc.args[0]}") from None
    else:
        series = binomial_np_series(r, K) if args.binomial else poisson_m_series(r, K)
        rows = [(k, c, None, None) for k, c in enumerate(series.coefficients)]
    symbol = "1/(np)" if args.binomial else "1/m"
    table = [{"k": k, "coefficient": str(c), "golden": None if g is None else str(g),
              "status": None if ok is None else ("PASS" if ok else "FAIL")}
             for k, c, g, ok in rows]
    if args.format == "text":
        lines = [f"# {dist} r={'r' if r is None else r}: coefficients of {symbol}^k"]
        for row in table:
            tag = f"{row['status']} " if row["status"] else ""
            lines.append(f"{tag}{row['k']}: {row['coefficient']}")
        if args.check_paper:
            checked = [row for row in table if row["status"]]
            passed = sum(row["status"] == "PASS" for row in checked)
            lines.append(f"# golden check: {passed}/{len(checked)} PASS")
        _emit(args, _config(args), table, [], "\n".join(lines) + "\n")
    else:
        _emit(args, _config(args), table, [])
    failed = any(row["status"] == "FAIL" for row in table)
    return EXIT_FAILED if failed else EXIT_OK


def _sweep_point(point, args, oracle_cache):
    spec, query, order = point
    report = _expand(spec, query, order, args.auto, args.general)
    key = (spec, query.r)
    oracle = oracle_cache[key]
    value = float(report.value)
    abs_err = abs(value - oracle.value)
    return {**_spec_fields(spec), "r": query.r, "order": order, "value": value,
            "oracle": oracle.value, "abs_error": abs_err, "rel_error": abs_err / abs(oracle.value),
            "error_estimate": report.error_estimate, "order_used": report.order_used}, report.warnings


def cmd_sweep(args) -> int:
    rs = sorted(_list(args.r, lambda t: _number(t, False)))
    orders = sorted(_list(args.max_order if args.auto else args.order, _int))
    if args.binomial:
        if args.m is not None:
            raise ValidationError("-m applies to --poisson only")
        ns = sorted(_list(args.n, _int))
        ps = sorted(_list(args.p, lambda t: _number(t, False)))
        axes = [ns, ps, rs, orders]
        make = lambda n, p, r, o: (BinomialSpec(n, p), MomentQuery(r, tol=args.tol), o)
    else:
        if args.n is not None or args.p is not None:
            raise ValidationError("-n/-p apply to --binomial only")
        ms = sorted(_list(args.m, lambda t: _number(t, False)))
        axes = [ms, rs, orders]
        make = lambda m, r, o: (PoissonSpec(m), MomentQuery(r, tol=args.tol), o)
    if any(not axis for axis in axes):
        raise UsageError("sweep: empty grid; every axis needs at least one value\n"
                         + args._parser.format_usage())
    points = [make(*coords) for coords in itertools.product(*axes)]

    oracle_keys = sorted({(pt[0], pt[1].r) for pt in points}, key=repr)
    jobs = max(1, args.jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        oracles = list(pool.map(lambda key: _oracle(key[0], MomentQuery(key[1], tol=args.tol)),
                                oracle_keys))
        cache = dict(zip(oracle_keys, oracles))
        results = list(pool.map(lambda pt: _sweep_point(pt, args, cache), points))
    rows = [row for row, _ in results]
    warns = []
    for row, ws in results:
        where = (f"n={row['n']}, p={row['p']}" if row["distribution"] == "binomial"
                 else f"m={row['m']}")
        warns += [f"[{where}, r={row['r']}, order={row['order']}] {w}" for w in ws]
    _emit(args, _config(args), rows, warns)
    return EXIT_OK


# parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invmoments",
                     description="Inverse moments of positive binomial and Poisson distributions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, grid=False):
        dist = p.add_mutually_exclusive_group(required=True)
        dist.add_argument("--binomial", action="store_true")
        dist.add_argument("--poisson", action="store_true")
        suffix = " (comma-separated list)" if grid else ""
        p.add_argument("-n", help="number of trials" + suffix)
        p.add_argument("-p", help="success probability, decimal or a/b" + suffix)
        p.add_argument("-m", help="Poisson rate" + suffix)
        p.add_argument("--format", choices=("text", "json", "csv"),
                       default="csv" if grid else "text")
        p.add_argument("--output", "-o", help="write to this file instead of standard output")

    def moment(p, grid=False):
        p.add_argument("-r", help="inverse moment order r > 0" + (" (list)" if grid else ""))
        p.add_argument("--tol", type=float, default=1e-15,
                       help="relative tolerance for truncated sums (default 1e-15)")

    p = sub.add_parser("exact", help="direct-sum or quadrature reference value")
    common(p)
    moment(p)
    p.add_argument("--mode", choices=("float", "rational"), default="float")
    p.add_argument("--quadrature", action="store_true", help="use the integral representation")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("expand", help="truncated asymptotic series with term ledger")
    common(p)
    moment(p)
    p.add_argument("--mode", choices=("float", "rational"), default="float")
    p.add_argument("--order", type=int, help="number of retained terms")
    p.add_argument("--auto", action="store_true", help="truncate where the terms start growing")
    p.add_argument("--max-order", type=int, default=20)
    p.add_argument("--general", action="store_true",
                   help="use the cumulant-derivative series with quadrature")
    p.add_argument("--compare-exact", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("coeffs", help="exact series coefficients in 1/(np) or 1/m")
    dist = p.add_mutually_exclusive_group(required=True)
    dist.add_argument("--binomial", action="store_true")
    dist.add_argument("--poisson", action="store_true")
    p.add_argument("-r", help="integer or a/b; omit for symbolic r")
    p.add_argument("-K", type=int, help="truncation order")
    p.add_argument("--check-paper", action="store_true",
                   help="compare with the embedded golden coefficient tables")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("sweep", help="expansion vs reference over a parameter grid")
    common(p, grid=True)
    moment(p, grid=True)
    p.add_argument("--order", help="retained-term counts (list)")
    p.add_argument("--auto", action="store_true")
    p.add_argument("--max-order", help="max orders for --auto (list)")
    p.add_argument("--general", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="grid points evaluated concurrently")
    p.set_defaults(func=cmd_sweep, _parser=p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "_parser", None) is None:
            args._parser = parser
        return args.func(args)
    except UsageError as exc:
        print(str(exc).rstrip("\n"), file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, PolyError) as exc:
        print(f"invmoments: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"invmoments: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
