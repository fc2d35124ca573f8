"""Reconciliation of computed values against the published reference tables."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterable

from . import tables
from .exponents import (
    ExponentTable,
    build_catalog,
    delta_star0,
    delta_theorem11,
    is_convex,
    least_s_with_delta_at_most,
    nu_star,
    r_max,
    s_max,
    theorem11_threshold,
    diagonal_limit,
)
from .expsums import grid_mean_moment
from .oracle import congruence_class_extremum, count_J, empirical_growth
from .waring import asymptotic_constants, gtilde_bounds, gtilde_plus, hua_exponents, s1
from .weyl import sigma_bw

MATCH = "match"
DOMINATES = "dominates"
WITHIN = "within-tolerance"
FAIL = "FAIL"

TableLoader = Callable[[int], ExponentTable]


@dataclass(frozen=True)
class Row:
    suite: str
    item: str
    k: int | None
    ours: str
    reference: str
    diff: str
    verdict: str


def _verdict(ours: Fraction, ref: Fraction, tol: Fraction = Fraction(0), rel: bool = False) -> str:
    if ours == ref:
        return MATCH
    if ours < ref:
        return DOMINATES
    slack = tol * ref if rel else tol
    return WITHIN if ours - ref <= slack else FAIL


def _row(suite, item, k, ours, ref, verdict, places=3) -> Row:
    ours_f, ref_f = Fraction(ours), Fraction(ref)
    fmt = (lambda x: str(x)) if ours_f.denominator == ref_f.denominator == 1 else (lambda x: f"{float(x):.{places}f}")
    return Row(suite, item, k, fmt(ours_f), fmt(ref_f), f"{float(ours_f - ref_f):+.{places}f}", verdict)


def verify_tables(ks: Iterable[int] = range(3, 21), loader: TableLoader | None = None) -> list[Row]:
    loader = loader or build_catalog
    rows: list[Row] = []
    for k in ks:
        tk = loader(k)
        tkm1 = loader(k - 1) if k >= 4 else None
        if k in tables.S1:
            v = s1(k, tk).value
            ref = Fraction(tables.S1[k])
            # the published value is rounded up in the third place
            tol = Fraction(1, 1000) if k in (5, 6) else Fraction(1)
            verdict = MATCH if v <= ref and ref - v < Fraction(1, 1000) else _verdict(v, ref, tol)
            rows.append(_row("tables", "s1", k, v, ref, verdict))
        if k in tables.GTILDE:
            g = gtilde_bounds(k, table_k=tk, table_km1=tkm1)
            rows.append(_row("tables", "gtilde_s_route", k, g.witness["s_route"], tables.GTILDE[k],
                             _verdict(Fraction(g.witness["s_route"]), Fraction(tables.GTILDE[k]))))
            rows.append(_row("tables", "gtilde", k, g.value, tables.GTILDE[k],
                             _verdict(Fraction(g.value), Fraction(tables.GTILDE[k]))))
        if k in tables.GTILDE_PLUS:
            g = gtilde_plus(k, table_k=tk, table_km1=tkm1)
            rows.append(_row("tables", "gtilde_plus", k, g.value, tables.GTILDE_PLUS[k],
                             _verdict(Fraction(g.value), Fraction(tables.GTILDE_PLUS[k]))))
        if k in tables.SIGMA1:
            w = sigma_bw(k, tkm1)
            ref = Fraction(tables.SIGMA1[k])
            rows.append(_row("tables", "sigma1", k, w.sigma_inverse, ref,
                             _verdict(w.sigma_inverse, ref, Fraction(3, 100), rel=True)))
        if k in tables.T_STAR or k in tables.HUA_S:
            h = hua_exponents(k, table=tk)
            if k in tables.T_STAR:
                rows.append(_row("tables", "t_star", k, h["t_star"].value, tables.T_STAR[k],
                                 _verdict(Fraction(h["t_star"].value), Fraction(tables.T_STAR[k]))))
            if k in tables.HUA_S:
                rows.append(_row("tables", "hua_S", k, h["hua_S"].value, tables.HUA_S[k],
                                 _verdict(Fraction(h["hua_S"].value), Fraction(tables.HUA_S[k]))))
    xi, C = asymptotic_constants(6)
    for name, ours, ref in (("xi", xi, tables.XI), ("C", C, tables.C_LARGE_K)):
        ok = abs(ours - ref) <= Decimal("1e-6")
        rows.append(Row("tables", name, None, str(ours), str(ref), str(ours - ref), MATCH if ok else FAIL))
    return rows


def _check(suite: str, item: str, ok: bool, ours="", ref="", k=None) -> Row:
    return Row(suite, item, k, str(ours), str(ref), "", MATCH if ok else FAIL)


def verify_oracle() -> list[Row]:
    rows = []
    for args, want in (((1, 1, 5), 5), ((2, 1, 2), 6), ((2, 2, 3), 15), ((3, 2, 2), 20)):
        got = count_J(*args)
        rows.append(_check("oracle", f"count_J{args}", got == want, got, want))
    base = count_J(3, 2, 6)
    for shift in (1, 17, -5):
        got = count_J(3, 2, 6, shift)
        rows.append(_check("oracle", f"shift {shift}", got == base, got, base))
    for args, want in (((2, 2, 3, (13, 37)), 15), ((1, 1, 5, (11,)), 5), ((3, 2, 2, (7, 13)), 20)):
        got = grid_mean_moment(*args)
        rows.append(_check("oracle", f"grid_mean_moment{args[:3]}", got == want, got, want))
    slope = empirical_growth(4, 2, [10, 20, 40, 80])
    rows.append(_check("oracle", "growth(4,2)", 4.7 <= slope <= 5.3, f"{slope:.4f}", "[4.7, 5.3]"))
    for p in (5, 7, 11):
        got, bound, ok = congruence_class_extremum(p, 3, 2, 2)
        rows.append(_check("oracle", f"classes p={p}", ok, got, bound))
    return rows


def verify_identities(kmax: int = 40, catalog_kmax: int = 20) -> list[Row]:
    rows = []
    bad = 0
    for k in range(3, kmax + 1):
        for r in range(1, r_max(k) + 1):
            lhs = sum((m - 1) * (k - m - 1) for m in range(1, r + 1))
            if 6 * lhs != r * (r - 1) * (3 * k - 2 * r - 5):
                bad += 1
            s = theorem11_threshold(k, r)
            if delta_theorem11(k, r, s) * 6 * (s - k + 1) != r * (r - 1) * (3 * k - 2 * r - 5):
                bad += 1
    rows.append(_check("identities", f"closed-form sum, k<={kmax}", bad == 0, bad, 0))

    bad = 0
    for k in range(4, 16):
        for r in range(2, r_max(k) + 1):
            for s in range(k + r, s_max(k) + 1, 3):
                top = nu_star(k, r, s)
                vals = [delta_star0(k, r, s, nu) for nu in range(0, int(top) + 1)]
                bad += sum(1 for a, b in zip(vals, vals[1:]) if not a < b)
    rows.append(_check("identities", "exponent increasing in nu", bad == 0, bad, 0))

    for k in range(3, catalog_kmax + 1):
        t = build_catalog(k)
        d = t.deltas()
        half = k * (k + 1) // 2
        ok = (
            all(x >= max(0, half - s) for s, x in enumerate(d, start=1))
            and all(a >= b for a, b in zip(d, d[1:]))
            and is_convex(d)
            and d[-1] == 0
            and all(d[s - 1] == half - s for s in range(1, diagonal_limit(k) + 1))
        )
        rows.append(_check("identities", "catalog floor/shape", ok, k=k))
    return rows


SUITES = {"tables": verify_tables, "oracle": verify_oracle, "identities": verify_identities}


def run_suite(name: str, loader: TableLoader | None = None, ks: Iterable[int] | None = None) -> list[Row]:
    if name == "all":
        return run_suite("identities") + run_suite("oracle") + run_suite("tables", loader, ks)
    if name == "tables":
        return verify_tables(ks if ks is not None else range(3, 21), loader)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name]()
