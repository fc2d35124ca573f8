"""Permissible exponents for Vinogradov's mean value theorem.

An exponent ``delta`` is permissible for the pair ``(s, k)`` when

    J_{s,k}(X) << X^(2s - k(k+1)/2 + delta + eps).

This module evaluates the individual families of permissible exponents and
assembles them into an :class:`ExponentTable` for a fixed degree ``k``: the
pointwise best value over all sources, its lower convex envelope over the
integer grid ``1 .. k^2 - k + 1`` (Hoelder interpolation between moments), and a
monotone closure.  All values are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

ExactScalar = Fraction

CATALOG_SCHEMA_VERSION = 1

# parity-mode flags; the empty set admits every source family
CLOSED_FORM_ONLY = "closed-form-only"
NO_SQUARE_RULE = "no-square-rule"
PARITY_FLAGS = frozenset({CLOSED_FORM_ONLY, NO_SQUARE_RULE})

# relative slack used when float screening decides which candidates get an
# exact evaluation; float error here is ~1e-13 relative
_SCREEN_RTOL = 1e-9


class InadmissibleParameters(ValueError):
    """Raised when a theorem does not apply to the requested parameters.

    ``reason`` is one of ``"r-range"``, ``"s-threshold"``, ``"nu-excess"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class NotFound(LookupError):
    pass


@dataclass(frozen=True, order=True)
class Source:
    """Provenance tag of an exponent value, e.g. ``MultigradeNu(3,0)``."""

    kind: str
    params: tuple[int, ...] = ()

    KINDS = (
        "Trivial",
        "Diagonal",
        "FordWooleySquare",
        "MultigradeClosed",
        "MultigradeNu",
        "Interpolated",
        "ZeroTail",
    )

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}({','.join(str(p) for p in self.params)})"

    @classmethod
    def parse(cls, text: str) -> "Source":
        m = re.fullmatch(r"([A-Za-z]+)(?:\(([-0-9, ]*)\))?", text.strip())
        if m is None or m.group(1) not in cls.KINDS:
            raise ValueError(f"unrecognised source tag {text!r}")
        params = tuple(int(p) for p in m.group(2).split(",")) if m.group(2) else ()
        return cls(m.group(1), params)


TRIVIAL = Source("Trivial")
DIAGONAL = Source("Diagonal")
ZERO_TAIL = Source("ZeroTail")


@dataclass(frozen=True)
class ExponentPoint:
    s: int
    delta: Fraction
    source: Source


def parse_parity_mode(spec: str | Iterable[str] | None) -> frozenset[str]:
    """Normalise a parity mode given as ``"all"``, a comma list, or a set."""
    if spec is None:
        return frozenset()
    if isinstance(spec, str):
        items = [p.strip() for p in spec.split(",") if p.strip()]
    else:
        items = list(spec)
    flags = frozenset(p for p in items if p != "all")
    unknown = flags - PARITY_FLAGS
    if unknown:
        raise ValueError(f"unknown parity flag(s): {sorted(unknown)}")
    return flags


def parity_label(mode: frozenset[str]) -> str:
    return ",".join(sorted(mode)) if mode else "all"


def _check_degree(k: int) -> None:
    if k < 3:
        raise ValueError(f"degree k must be at least 3, got {k}")


def s_max(k: int) -> int:
    """Least moment at which the main-conjecture bound is available."""
    return k * k - k + 1


def r_max(k: int) -> int:
    return min(k - 2, (k + 1) // 2)


def theorem11_threshold(k: int, r: int) -> int:
    # k^2 - rk + r(r+3)/2 - 1; r(r+3) is always even
    return k * k - r * k + r * (r + 3) // 2 - 1


def diagonal_limit(k: int) -> int:
    return (k + 1) ** 2 // 4


# ---------------------------------------------------------------------------
# individual families


def delta_theorem11(k: int, r: int, s: int) -> Fraction:
    """Closed-form multigrade exponent r(r-1)(3k-2r-5) / (6(s-k+1))."""
    _check_degree(k)
    if not 1 <= r <= r_max(k):
        raise InadmissibleParameters("r-range", f"r={r} outside 1..{r_max(k)} for k={k}")
    if s < theorem11_threshold(k, r):
        raise InadmissibleParameters(
            "s-threshold", f"s={s} below {theorem11_threshold(k, r)} for k={k}, r={r}"
        )
    return Fraction(r * (r - 1) * (3 * k - 2 * r - 5), 6 * (s - k + 1))


def _ratio_sum(terms: Iterable[tuple[int, int]]) -> Fraction:
    """sum of c/d over (c, d) pairs, normalised once at the end."""
    num, den = 0, 1
    for c, d in terms:
        num, den = num * d + c * den, den * d
    return Fraction(num, den)


def nu_star(k: int, r: int, s: int, iota: int = 0) -> Fraction:
    """Shifted auxiliary sum: sum_{m<=r} m(k-m-1)/(s-k-m+1) for iota=0, zero for iota=1."""
    if iota not in (0, 1):
        raise ValueError("iota must be 0 or 1")
    if s < k + r:
        raise ValueError(f"s={s} must be at least k+r={k + r}")
    if iota == 1:
        return Fraction(0)
    return _ratio_sum((m * (k - m - 1), s - k - m + 1) for m in range(1, r + 1))


def nu_required(k: int, r: int, s: int) -> int:
    """Slack nu = max(k^2 - rk + r(r+3)/2 - 1 - s, 0)."""
    return max(theorem11_threshold(k, r) - s, 0)


def delta_star0(k: int, r: int, s: int, nu: int) -> Fraction:
    """Shifted refined exponent for an explicit integer nu (no admissibility check)."""
    return _delta_star0(k, r, s, nu, nu_star(k, r, s))


def _delta_star0(k: int, r: int, s: int, nu: int, ns: Fraction) -> Fraction:
    lead = _ratio_sum(((m - 1) * (k - m - 1), s - k - m + 1) for m in range(1, r + 1))
    return lead - (ns - nu) * Fraction(r - 1, s - k + 1)


def delta_star1(k: int, r: int, s: int) -> Fraction:
    """The closed-form exponent written as sum_{m<=r} (m-1)(k-m-1)/(s-k+1)."""
    return Fraction(sum((m - 1) * (k - m - 1) for m in range(1, r + 1)), s - k + 1)


def delta_theorem92(k: int, r: int, s: int) -> tuple[Fraction, int]:
    """Refined multigrade exponent and the nu it was evaluated at.

    nu is the least admissible slack; the exponent is available iff
    nu <= nu_star(k, r, s).
    """
    _check_degree(k)
    if not 1 <= r <= r_max(k):
        raise InadmissibleParameters("r-range", f"r={r} outside 1..{r_max(k)} for k={k}")
    if s < k + r:
        raise InadmissibleParameters("s-threshold", f"s={s} below k+r={k + r}")
    nu = nu_required(k, r, s)
    ns = nu_star(k, r, s)
    if nu > ns:
        raise InadmissibleParameters("nu-excess", f"nu={nu} exceeds nu*={ns}")
    return _delta_star0(k, r, s, nu, ns), nu


def largest_nu_by_search(k: int, r: int) -> int | None:
    """Largest nu in 0..k with nu_star(r, s0 - nu) >= nu, s0 the closed-form threshold.

    This is the successive search over nu; ``None`` if even nu = 0 fails.
    """
    s0 = theorem11_threshold(k, r)
    best = None
    for nu in range(0, k + 1):
        s = s0 - nu
        if s < k + r:
            break
        if nu_star(k, r, s) >= nu:
            best = nu
    return best


def square_rule_thresholds(k: int) -> list[tuple[int, int]]:
    """(m, least s) pairs for the exponent m^2 valid when 2m <= k and s >= (k-m)^2 + (k-m)."""
    return [(m, (k - m) ** 2 + (k - m)) for m in range(1, k // 2 + 1)]


def delta_known(k: int, s: int, *, square_rule: bool = True) -> Fraction:
    """Best of the trivial, diagonal and square-rule exponents."""
    return _known_with_source(k, s, square_rule=square_rule)[0]


def _known_with_source(k: int, s: int, *, square_rule: bool = True) -> tuple[Fraction, Source]:
    half = k * (k + 1) // 2
    best, src = Fraction(half), TRIVIAL
    if s <= diagonal_limit(k) and half - s < best:
        best, src = Fraction(half - s), DIAGONAL
    if square_rule:
        for m, thr in square_rule_thresholds(k):
            if s >= thr and m * m < best:
                best, src = Fraction(m * m), Source("FordWooleySquare", (m,))
    return best, src


# ---------------------------------------------------------------------------
# table


@dataclass(frozen=True)
class ExponentTable:
    k: int
    entries: tuple[ExponentPoint, ...]
    parity_mode: frozenset[str] = field(default_factory=frozenset)

    @property
    def s_max(self) -> int:
        return len(self.entries)

    def point(self, s: int) -> ExponentPoint:
        if s < 1:
            raise ValueError(f"moment index must be positive, got {s}")
        if s > self.s_max:
            return ExponentPoint(s, Fraction(0), ZERO_TAIL)
        return self.entries[s - 1]

    def delta(self, s: int) -> Fraction:
        return self.point(s).delta

    def deltas(self) -> list[Fraction]:
        return [p.delta for p in self.entries]

    def to_json_obj(self) -> dict:
        return {
            "version": CATALOG_SCHEMA_VERSION,
            "k": self.k,
            "parity_mode": sorted(self.parity_mode) or ["all"],
            "entries": [
                {
                    "s": p.s,
                    "delta": {"num": p.delta.numerator, "den": p.delta.denominator},
                    "source": str(p.source),
                }
                for p in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExponentTable":
        if obj.get("version") != CATALOG_SCHEMA_VERSION:
            raise ValueError(f"unsupported catalog version {obj.get('version')!r}")
        entries = tuple(
            ExponentPoint(
                int(e["s"]),
                Fraction(int(e["delta"]["num"]), int(e["delta"]["den"])),
                Source.parse(e["source"]),
            )
            for e in obj["entries"]
        )
        for i, p in enumerate(entries, start=1):
            if p.s != i:
                raise ValueError("catalog entries must be contiguous from s=1")
        return cls(int(obj["k"]), entries, parse_parity_mode(obj["parity_mode"]))

    @classmethod
    def from_json(cls, text: str) -> "ExponentTable":
        return cls.from_json_obj(json.loads(text))


def least_s_with_delta_at_most(table: ExponentTable, bound: Fraction | int) -> int:
    bound = Fraction(bound)
    if bound < 0:
        raise NotFound(f"no moment has a negative exponent (bound={bound})")
    for p in table.entries:
        if p.delta <= bound:
            return p.s
    raise NotFound(f"no s <= {table.s_max} with delta <= {bound}")


# ---------------------------------------------------------------------------
# catalog construction


def _pointwise_best(k: int, mode: frozenset[str]) -> list[tuple[Fraction, Source]]:
    n = s_max(k)
    half = k * (k + 1) // 2
    best = [
        (Fraction(half - s), DIAGONAL) if s <= diagonal_limit(k) else (Fraction(half), TRIVIAL)
        for s in range(1, n + 1)
    ]
    if NO_SQUARE_RULE not in mode:
        # thresholds fall as m grows while m^2 rises: the smallest admissible m wins
        least_m: list[int | None] = [None] * (n + 1)
        for m, thr in reversed(square_rule_thresholds(k)):
            if thr <= n:
                least_m[thr:] = [m] * (n + 1 - thr)
        for s in range(1, n + 1):
            m = least_m[s]
            if m is not None and m * m < best[s - 1][0]:
                best[s - 1] = (Fraction(m * m), Source("FordWooleySquare", (m,)))

    # closed-form family: at fixed s every admissible r shares the denominator
    # 6(s-k+1), so the smallest numerator wins; ties keep the smaller r
    num11 = [None] * (n + 1)
    for r in range(1, r_max(k) + 1):
        numer = r * (r - 1) * (3 * k - 2 * r - 5)
        for s in range(max(theorem11_threshold(k, r), 1), n + 1):
            cur = num11[s]
            if cur is None or numer < cur[0]:
                num11[s] = (numer, r)
    for s in range(1, n + 1):
        if num11[s] is None:
            continue
        numer, r = num11[s]
        val = Fraction(numer, 6 * (s - k + 1))
        if val < best[s - 1][0]:
            best[s - 1] = (val, Source("MultigradeClosed", (r,)))

    if CLOSED_FORM_ONLY not in mode:
        _merge_refined_family(k, best)
    return best


def _merge_refined_family(k: int, best: list[tuple[Fraction, Source]]) -> None:
    """Fold the refined (nu-shifted) family into ``best`` in place.

    Every (r, s) is evaluated in floating point first; only candidates within a
    small relative margin of the running minimum, or whose admissibility is too
    close to call, are evaluated exactly.
    """
    n = s_max(k)
    cur = np.array([float(v) for v, _ in best])
    for r in range(1, r_max(k) + 1):
        lo = k + r
        if lo > n:
            continue
        S = np.arange(lo, n + 1, dtype=np.float64)
        lead = np.zeros_like(S)
        nstar = np.zeros_like(S)
        for m in range(1, r + 1):
            den = S - k - m + 1
            lead += (m - 1) * (k - m - 1) / den
            nstar += m * (k - m - 1) / den
        nu = np.maximum(theorem11_threshold(k, r) - S, 0.0)
        vals = lead - (nstar - nu) * (r - 1) / (S - k + 1)
        # keep anything not clearly inadmissible; the exact call decides
        maybe_ok = nstar - nu >= -_SCREEN_RTOL * np.maximum(1.0, nstar)
        ref = cur[lo - 1 :]
        near = vals <= ref + _SCREEN_RTOL * np.maximum(1.0, np.abs(ref))
        for off in np.nonzero(near & maybe_ok)[0]:
            s = lo + int(off)
            try:
                val, nu_s = delta_theorem92(k, r, s)
            except InadmissibleParameters:
                continue
            if val < best[s - 1][0]:
                best[s - 1] = (val, Source("MultigradeNu", (r, nu_s)))
                cur[s - 1] = float(val)


def _lower_hull(points: Sequence[tuple[int, Fraction]]) -> list[int]:
    """Indices of the lower convex envelope vertices (collinear points dropped)."""
    # y = a/b with b > 0; the turn test is cleared of denominators so it runs
    # on plain integers
    xs = [x for x, _ in points]
    ab = [(y.numerator, y.denominator) for _, y in points]
    hull: list[int] = []
    for i in range(len(points)):
        x, (a, b) = xs[i], ab[i]
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            x0, (a0, b0) = xs[i0], ab[i0]
            x1, (a1, b1) = xs[i1], ab[i1]
            turn = (x1 - x0) * (a * b0 - a0 * b) * b1 - (a1 * b0 - a0 * b1) * b * (x - x0)
            if turn <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _envelope(best: list[tuple[Fraction, Source]]) -> list[tuple[Fraction, Source]]:
    pts = [(s, v) for s, (v, _) in enumerate(best, start=1)]
    hull = _lower_hull(pts)
    out = list(best)
    for a, b in zip(hull, hull[1:]):
        s1, d1 = pts[a]
        s2, d2 = pts[b]
        if s2 == s1 + 1:
            continue
        n1, e1, n2, e2 = d1.numerator, d1.denominator, d2.numerator, d2.denominator
        for s in range(s1 + 1, s2):
            # chord = ((s-s1) d2 + (s2-s) d1) / (s2-s1)
            cn = (s - s1) * n2 * e1 + (s2 - s) * n1 * e2
            cd = e1 * e2 * (s2 - s1)
            cur = out[s - 1][0]
            if cn * cur.denominator < cur.numerator * cd:
                out[s - 1] = (Fraction(cn, cd), Source("Interpolated", (s1, s2)))
    return out


def _monotone_closure(vals: list[tuple[Fraction, Source]]) -> list[tuple[Fraction, Source]]:
    # J_s <= X^{2(s-s')} J_{s'} lets any exponent at s' < s carry over to s
    out = list(vals)
    for i in range(1, len(out)):
        if out[i - 1][0] < out[i][0]:
            out[i] = out[i - 1]
    return out


@lru_cache(maxsize=64)
def _build_cached(k: int, mode: frozenset[str]) -> ExponentTable:
    best = _pointwise_best(k, mode)
    closed = _monotone_closure(_envelope(best))
    entries = tuple(ExponentPoint(s, v, src) for s, (v, src) in enumerate(closed, start=1))
    return ExponentTable(k, entries, mode)


def build_catalog(k: int, parity_mode: str | Iterable[str] | None = None) -> ExponentTable:
    """Exponent table for degree ``k`` over s = 1 .. k^2 - k + 1."""
    _check_degree(k)
    return _build_cached(k, parse_parity_mode(parity_mode))


def source_values(k: int, s: int, mode: frozenset[str] = frozenset()) -> list[tuple[Fraction, Source]]:
    """Every individual source value at ``s`` (exact, unscreened); used for audits."""
    _check_degree(k)
    square = NO_SQUARE_RULE not in mode
    half = k * (k + 1) // 2
    out = [(Fraction(half), TRIVIAL)]
    if s <= diagonal_limit(k):
        out.append((Fraction(half - s), DIAGONAL))
    if square:
        out += [
            (Fraction(m * m), Source("FordWooleySquare", (m,)))
            for m, thr in square_rule_thresholds(k)
            if s >= thr
        ]
    for r in range(1, r_max(k) + 1):
        try:
            out.append((delta_theorem11(k, r, s), Source("MultigradeClosed", (r,))))
        except InadmissibleParameters:
            pass
        if CLOSED_FORM_ONLY in mode:
            continue
        try:
            val, nu = delta_theorem92(k, r, s)
            out.append((val, Source("MultigradeNu", (r, nu))))
        except InadmissibleParameters:
            pass
    return out


def is_convex(values: Sequence[Fraction]) -> bool:
    return all(values[i - 1] + values[i + 1] >= 2 * values[i] for i in range(1, len(values) - 1))


def ceil_decimal(x: Fraction, places: int = 3) -> str:
    """Decimal string of ``x`` rounded up in the last place."""
    scale = 10**places
    q = math.ceil(x * scale)
    sign = "-" if q < 0 else ""
    q = abs(q)
    if places == 0:
        return f"{sign}{q}"
    return f"{sign}{q // scale}.{q % scale:0{places}d}"
