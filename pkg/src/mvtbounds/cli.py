"""Command-line entry point: ``mvtbounds <command> ...``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import cache
from .exponents import ceil_decimal, parse_parity_mode
from .oracle import BudgetExceeded, count_J, growth_series_csv, profile_estimate
from .verify import FAIL, run_suite
from .waring import BoundReport, asymptotic_constants, gtilde_bounds, gtilde_plus, hua_exponents, s1, tarry_bound, u1
from .weyl import sigma_bw, weyl_direct, weyl_large_k

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
K_MIN, K_MAX = 3, 10**4


class UsageError(Exception):
    pass


def parse_k_range(text: str) -> list[int]:
    """'5', '5..8' or '5,7,9' (parts may be mixed: '3..5,8')."""
    ks: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if hi < lo:
                    raise UsageError(f"empty range {part!r}")
                ks.extend(range(lo, hi + 1))
            else:
                ks.append(int(part))
    except ValueError:
        raise UsageError(f"bad k range {text!r}")
    for k in ks:
        if not K_MIN <= k <= K_MAX:
            raise UsageError(f"k={k} outside [{K_MIN}, {K_MAX}]")
    return ks


# ---------------------------------------------------------------------------
# output


def _cell(v: Any, places: int) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else ceil_decimal(v, places)
    return "" if v is None else str(v)


def emit(rows: list[dict[str, Any]], fmt: str, places: int, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        json.dump(rows, out, indent=2, default=_json_default)
        out.write("\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [c for c in r if c not in cols]
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c), places) for c in cols])
        return
    out.write("| " + " | ".join(cols) + " |\n")
    out.write("|" + "|".join("---" for _ in cols) + "|\n")
    for r in rows:
        out.write("| " + " | ".join(_cell(r.get(c), places) for c in cols) + " |\n")


def _json_default(o: Any):
    if isinstance(o, Fraction):
        return {"num": o.numerator, "den": o.denominator}
    raise TypeError(f"cannot serialise {type(o).__name__}")


def emit_wide(rows: list[dict[str, Any]], out=None) -> None:
    """k across the top, one row per named quantity underneath."""
    out = out or sys.stdout
    ks = sorted({r["k"] for r in rows})
    names: list[str] = []
    cells: dict[tuple[str, int], str] = {}
    for r in rows:
        if r["name"] not in names:
            names.append(r["name"])
        cells[(r["name"], r["k"])] = str(r["value"])
    out.write("| k | " + " | ".join(str(k) for k in ks) + " |\n")
    out.write("|" + "|".join("---" for _ in range(len(ks) + 1)) + "|\n")
    for n in names:
        out.write(f"| {n} | " + " | ".join(cells.get((n, k), "") for k in ks) + " |\n")


# ---------------------------------------------------------------------------
# per-k workers (top level so they can be sent to worker processes)


def _loader(args) -> Callable[[int], Any]:
    cache_dir = None if args.no_cache else Path(args.cache_dir) if args.cache_dir else cache.default_cache_dir()
    mode = parse_parity_mode(args.parity)
    return lambda k: cache.load_or_build(k, mode, cache_dir)


def _report_obj(r: BoundReport, places: int) -> dict[str, Any]:
    return r.to_json_obj(places)


def _waring_one(k: int, args) -> list[dict[str, Any]]:
    load = _loader(args)
    tk = load(k)
    tkm1 = load(k - 1) if k >= 4 else None
    reports = [s1(k, tk)]
    if k >= 4:
        reports.append(u1(k, tk, tkm1))
    reports.append(gtilde_bounds(k, table_k=tk, table_km1=tkm1))
    reports.append(gtilde_plus(k, table_k=tk, table_km1=tkm1))
    return [_report_obj(r, args.places) for r in reports]


def _weyl_one(k: int, args) -> list[dict[str, Any]]:
    rows = []
    if k <= 40 and not args.large:
        rows.append(sigma_bw(k, _loader(args)(k - 1)).to_json_obj(args.places))
    if k >= 9 and (args.large or k > 40):
        rows.append(weyl_large_k(k).to_json_obj(args.places))
    if not rows:
        sig, tau = weyl_direct(k)
        rows.append({"k": k, "method": "direct", "sigma_inverse_direct": sig, "tau_inverse": tau})
    return rows


def _hua_one(k: int, args) -> list[dict[str, Any]]:
    return [_report_obj(r, args.places) for r in hua_exponents(k, table=_loader(args)(k)).values()]


def _tarry_one(k: int, args) -> list[dict[str, Any]]:
    return [_report_obj(tarry_bound(k, table_kp1=_loader(args)(k + 1)), args.places)]


def _map_ks(fn, ks: Sequence[int], args) -> list[dict[str, Any]]:
    """Run fn for each k, optionally in worker processes; output stays in k order."""
    if args.jobs > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            parts = list(ex.map(fn, ks, [args] * len(ks)))
    else:
        parts = [fn(k, args) for k in ks]
    return [row for part in parts for row in part]


def _flatten(rows: list[dict[str, Any]], places: int) -> list[dict[str, Any]]:
    flat = []
    for r in rows:
        if "value" in r:
            value = r["value"] if isinstance(r["value"], int) else r[f"decimal_ceil{places}"]
            flat.append({"k": r["k"], "name": r["name"], "value": value,
                         "witness": _witness_text(r["witness"])})
            if r["name"] == "gtilde":
                for route in ("s_route", "u_route"):
                    if route in r["witness"]:
                        flat.append({"k": r["k"], "name": f"gtilde_{route}", "value": r["witness"][route], "witness": ""})
        elif r.get("method") == "direct":
            flat.append({"k": r["k"], "name": "sigma_inverse_direct", "value": r["sigma_inverse_direct"], "witness": ""})
        else:
            flat.append({"k": r["k"], "name": r["method"], "value": r[f"sigma_inverse_decimal_ceil{places}"],
                         "witness": _witness_text(r["witness"])})
            flat.append({"k": r["k"], "name": "sigma_inverse_direct", "value": r["sigma_inverse_direct"], "witness": ""})
    return flat


def _witness_text(w: dict[str, Any]) -> str:
    parts = []
    for key, v in w.items():
        if isinstance(v, dict) and set(v) == {"num", "den"}:
            v = f"{v['num']}/{v['den']}" if v["den"] != 1 else str(v["num"])
        elif isinstance(v, (dict, list)):
            continue
        parts.append(f"{key}={v}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# commands


def cmd_catalog(args) -> int:
    ks = parse_k_range(args.k)
    if len(ks) != 1:
        raise UsageError("catalog takes a single k")
    table = _loader(args)(ks[0])
    if args.format == "json":
        sys.stdout.write(table.to_json() + "\n")
        return EXIT_OK
    rows = [{"s": p.s, "delta": p.delta, "exact": str(p.delta), "source": str(p.source)} for p in table.entries]
    emit(rows, args.format, args.places)
    return EXIT_OK


def _emit_reports(rows, args) -> None:
    if args.format == "json":
        emit(rows, "json", args.places)
    elif args.format == "csv":
        emit(_flatten(rows, args.places), "csv", args.places)
    else:
        emit_wide(_flatten(rows, args.places))


def cmd_waring(args) -> int:
    _emit_reports(_map_ks(_waring_one, parse_k_range(args.k), args), args)
    return EXIT_OK


def cmd_weyl(args) -> int:
    ks = parse_k_range(args.k)
    if any(k < 4 for k in ks):
        raise UsageError("weyl needs k >= 4")
    _emit_reports(_map_ks(_weyl_one, ks, args), args)
    return EXIT_OK


def cmd_hua(args) -> int:
    _emit_reports(_map_ks(_hua_one, parse_k_range(args.k), args), args)
    return EXIT_OK


def cmd_tarry(args) -> int:
    _emit_reports(_map_ks(_tarry_one, parse_k_range(args.k), args), args)
    return EXIT_OK


def cmd_constants(args) -> int:
    if not 0 <= args.precision <= 50:
        raise UsageError("precision must be between 0 and 50")
    xi, C = asymptotic_constants(args.precision)
    emit([{"name": "xi", "value": str(xi)}, {"name": "C", "value": str(C)}], args.format, args.places)
    return EXIT_OK


def cmd_verify(args) -> int:
    ks = parse_k_range(args.k) if args.k else None
    rows = run_suite(args.suite, _loader(args), ks)
    emit([r.__dict__ for r in rows], args.format, args.places)
    fails = sum(r.verdict == FAIL for r in rows)
    if args.format == "markdown":
        print(f"\n{len(rows) - fails} ok, {fails} FAIL")
    return EXIT_FAIL if fails else EXIT_OK


def cmd_count(args) -> int:
    if args.X_list:
        Xs = [int(x) for x in args.X_list.split(",")]
        for X in Xs:
            _budget_check(args.s, args.k, X, args.budget)
        sys.stdout.write(growth_series_csv(args.s, args.k, Xs, budget=args.budget))
        return EXIT_OK
    if args.X is None:
        raise UsageError("count needs --X or --X-list")
    _budget_check(args.s, args.k, args.X, args.budget)
    print(count_J(args.s, args.k, args.X, shift=args.shift, budget=args.budget))
    return EXIT_OK


def _budget_check(s: int, k: int, X: int, budget: int) -> None:
    est = profile_estimate(s, k, X)
    if est > budget:
        raise BudgetExceeded(est, budget)


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    common.add_argument("--places", type=int, default=3, help="decimal places, rounded up")
    common.add_argument("--parity", default="all", help="all, closed-form-only, no-square-rule (comma list)")
    common.add_argument("--cache-dir", default=None, help=f"catalog cache (default ${cache.ENV_VAR} or ~/.cache/mvtbounds)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for k ranges")

    p = _Parser(prog="mvtbounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", parents=[common], help="exponent table for one degree")
    c.add_argument("--k", required=True)
    c.set_defaults(func=cmd_catalog)

    for name, func, help_ in (
        ("waring", cmd_waring, "s1, u1 and G~ bounds"),
        ("hua", cmd_hua, "C_k, S_k and t*"),
        ("tarry", cmd_tarry, "bound for Tarry's problem"),
    ):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("--k", required=True, help="k, a..b or a,b,c")
        c.set_defaults(func=func)

    c = sub.add_parser("weyl", parents=[common], help="Weyl-sum exponents")
    c.add_argument("--k", required=True)
    c.add_argument("--large", action="store_true", help="use the large-k two-parameter scan")
    c.set_defaults(func=cmd_weyl)

    c = sub.add_parser("constants", parents=[common], help="large-k constants xi and C")
    c.add_argument("--precision", type=int, default=6)
    c.set_defaults(func=cmd_constants)

    c = sub.add_parser("verify", parents=[common], help="reconcile against the reference tables")
    c.add_argument("suite", choices=["tables", "oracle", "identities", "all"])
    c.add_argument("--k", default=None, help="restrict the tables suite")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("count", parents=[common], help="exhaustive solution count J_{s,k}(X)")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--X", type=int)
    c.add_argument("--X-list", help="comma list of X for a growth series (CSV)")
    c.add_argument("--shift", type=int, default=0)
    c.add_argument("--budget", type=int, default=10**7)
    c.set_defaults(func=cmd_count)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1 or getattr(args, "places", 3) < 0:
            raise UsageError("--jobs must be positive and --places non-negative")
        if hasattr(args, "parity"):
            try:
                parse_parity_mode(args.parity)
            except ValueError as e:
                raise UsageError(str(e))
        return args.func(args)
    except UsageError as e:
        print(f"mvtbounds: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"mvtbounds: budget refused: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
