"""Waring-problem bounds derived from exponent tables.

Everything here is exact rational arithmetic over :class:`ExponentTable`
lookups.  The two minor-arc routes are

* ``s1``: Hoelder between a mean value at 2t and Hua's lemma at 2^(j+1),
* ``u1``: Hoelder between a mean value at 2t and a mean value of order
  2v + w(w-1) carrying the exponent ``delta_plus(v)/w``,

and the thresholds for G~(k), G~+(k), Hua's C_k, S_k and Tarry's problem are
read off from those and from the tables directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

import numpy as np

from .exponents import (
    ExponentTable,
    NotFound,
    build_catalog,
    ceil_decimal,
    least_s_with_delta_at_most,
    s_max,
)

_SCREEN_RTOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    k: int
    name: str
    value: Fraction | int
    witness: dict[str, Any] = field(default_factory=dict)
    anchor: str = ""
    search: dict[str, Any] = field(default_factory=dict)

    def decimal(self, places: int = 3) -> str:
        return ceil_decimal(Fraction(self.value), places)

    def to_json_obj(self, places: int = 3) -> dict[str, Any]:
        if isinstance(self.value, Fraction) and self.value.denominator != 1:
            value: Any = {"num": self.value.numerator, "den": self.value.denominator}
        else:
            value = int(self.value)
        return {
            "k": self.k,
            "name": self.name,
            "value": value,
            f"decimal_ceil{places}": self.decimal(places),
            "witness": _jsonable(self.witness),
            "anchor": self.anchor,
            "search": _jsonable(self.search),
        }


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# Hua-lemma route


def s0_hua(k: int, t: int, j: int, delta_t: Fraction) -> Fraction:
    """2t - (1 - D)(2t - 2^(j+1)) / (k - j - D) with D the exponent at t."""
    delta_t = Fraction(delta_t)
    if delta_t >= 1:
        raise ValueError(f"exponent at t must be below 1, got {delta_t}")
    if not 0 <= j <= k - 2:
        raise ValueError(f"j={j} outside 0..{k - 2}")
    if 2**j >= t:
        raise ValueError(f"need 2^j < t, got j={j}, t={t}")
    return 2 * t - (1 - delta_t) * (2 * t - 2 ** (j + 1)) / (k - j - delta_t)


def s1(k: int, table: ExponentTable | None = None) -> BoundReport:
    """Exact minimum of :func:`s0_hua` over admissible (t, j); ties go to the smallest (t, j)."""
    if k < 3:
        raise ValueError("k must be at least 3")
    table = table if table is not None else build_catalog(k)
    tmax = s_max(k)
    best: tuple[Fraction, int, int] | None = None
    for t in range(1, tmax + 1):
        d = table.delta(t)
        if d >= 1:
            continue
        j = 0
        while j <= k - 2 and 2**j < t:
            val = s0_hua(k, t, j, d)
            if best is None or val < best[0]:
                best = (val, t, j)
            j += 1
    if best is None:
        raise NotFound(f"no t <= {tmax} with exponent below 1")
    val, t, j = best
    return BoundReport(
        k,
        "s1",
        val,
        {"t": t, "j": j, "delta_t": table.delta(t)},
        "min over t, j of s0(k,t,j)",
        {"t_range": [1, tmax], "j_range": [0, k - 2]},
    )


# ---------------------------------------------------------------------------
# two-mean-value route


def delta_plus(v: int, table_k: ExponentTable, table_km1: ExponentTable) -> Fraction:
    """min(D_{v,k} - 1, D_{v,k-1}), clamped below at zero."""
    if v < 1:
        raise ValueError("v must be positive")
    return max(Fraction(0), min(table_k.delta(v) - 1, table_km1.delta(v)))


def u0(
    k: int, t: int, v: int, w: int, delta_t: Fraction, delta_plus_v: Fraction
) -> Fraction:
    """2t - (1 - D_t)(2t - 2v - w(w-1)) / (1 - D_t + D+_v / w)."""
    delta_t, delta_plus_v = Fraction(delta_t), Fraction(delta_plus_v)
    if delta_t >= 1:
        raise ValueError(f"exponent at t must be below 1, got {delta_t}")
    if not 1 <= w <= k - 1:
        raise ValueError(f"w={w} outside 1..{k - 1}")
    if v < 1:
        raise ValueError("v must be positive")
    low = 2 * v + w * (w - 1)
    if low >= 2 * t:
        raise ValueError(f"need 2v + w(w-1) < 2t, got {low} >= {2 * t}")
    if delta_plus_v < 0:
        raise ValueError("delta_plus must be non-negative")
    a = 1 - delta_t
    return 2 * t - a * (2 * t - low) / (a + delta_plus_v / w)


def _first_nondecreasing(lo: int, hi: int, h) -> int:
    """Smallest t in [lo, hi) with h(t+1) >= h(t), or hi if there is none."""
    while lo < hi:
        mid = (lo + hi) // 2
        if h(mid + 1) >= h(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def u1(k: int, table_k: ExponentTable | None = None, table_km1: ExponentTable | None = None) -> BoundReport:
    """Exact minimum of :func:`u0` over 1 <= w <= k-1, v >= 1, t with D_t < 1.

    For fixed (v, w) with B = D+_v / w > 0 and A_t = 1 - D_t,

        u0 = L + B (2t - L) / (A_t + B),     L = 2v + w(w-1),

    and because A is concave in t the ratio (2t - L)/(A_t + B) has forward
    differences whose signs run -,...,-,0,...,0,+,...,+ over t > L/2.  So the
    optimal t is found by bisection on the sign of the forward difference.
    The bisection is run for every (v, w) in floating point; the pairs whose
    float optimum lies within a relative 1e-9 of the best are redone exactly.
    Ties go to the lexicographically smallest (t, v, w).
    """
    if k < 4:
        raise ValueError("u1 needs a degree k-1 >= 3 table, so k >= 4")
    table_k = table_k if table_k is not None else build_catalog(k)
    table_km1 = table_km1 if table_km1 is not None else build_catalog(k - 1)
    tmax = s_max(k)
    dk = [Fraction(0)] + [table_k.delta(t) for t in range(1, tmax + 1)]
    try:
        t_first = next(t for t in range(1, tmax + 1) if dk[t] < 1)
    except StopIteration:  # pragma: no cover - D_{tmax} = 0 always
        raise NotFound("no t with exponent below 1")
    A = [1 - d for d in dk]
    Af = np.array([float(a) for a in A])
    vcap = tmax - 1
    dplus = [Fraction(0)] + [delta_plus(v, table_k, table_km1) for v in range(1, vcap + 1)]
    dplus_f = np.array([float(d) for d in dplus])

    best_f = math.inf
    per_w: list[tuple[int, np.ndarray, np.ndarray]] = []
    for w in range(1, k):
        c = w * (w - 1)
        vhi = tmax - 1 - c // 2
        if vhi < 1:
            continue
        v = np.arange(1, vhi + 1)
        L = 2 * v + c
        keep = L < best_f
        v, L = v[keep], L[keep]
        if v.size == 0:
            continue
        B = dplus_f[v] / w
        lo = np.maximum(t_first, L // 2 + 1)
        hi = np.full_like(lo, tmax)
        ok = lo <= hi
        v, L, B, lo, hi = v[ok], L[ok], B[ok], lo[ok], hi[ok]
        flat = B == 0
        hi = np.where(flat, lo, hi)
        while True:
            active = lo < hi
            if not active.any():
                break
            mid = (lo + hi) // 2
            h0 = (2 * mid - L) / (Af[mid] + B)
            h1 = (2 * mid + 2 - L) / (Af[np.minimum(mid + 1, tmax)] + B)
            up = h1 >= h0
            hi = np.where(active & up, mid, hi)
            lo = np.where(active & ~up, mid + 1, lo)
        vals = L + B * (2 * lo - L) / (Af[lo] + B)
        vals = np.where(flat, L.astype(np.float64), vals)
        if vals.size:
            best_f = min(best_f, float(vals.min()))
        per_w.append((w, v, vals))

    cutoff = best_f + _SCREEN_RTOL * max(1.0, abs(best_f))
    best: tuple[Fraction, int, int, int] | None = None
    for w, v, vals in per_w:
        for vv in v[vals <= cutoff]:
            vv = int(vv)
            L = 2 * vv + w * (w - 1)
            Bx = dplus[vv] / w
            lo = max(t_first, L // 2 + 1)
            if Bx == 0:
                t = lo
            else:
                t = _first_nondecreasing(lo, tmax, lambda tt: (2 * tt - L) / (A[tt] + Bx))
            val = u0(k, t, vv, w, dk[t], dplus[vv])
            if best is None or (val, t, vv, w) < best:
                best = (val, t, vv, w)
    assert best is not None
    val, t, v, w = best
    return BoundReport(
        k,
        "u1",
        val,
        {"t": t, "v": v, "w": w, "delta_t": dk[t], "delta_plus": dplus[v]},
        "min over t, v, w of u0(k,t,v,w)",
        {"t_range": [t_first, tmax], "v_range": [1, vcap], "w_range": [1, k - 1]},
    )


# ---------------------------------------------------------------------------
# thresholds


def _floor_plus_one(x: Fraction) -> int:
    return math.floor(x) + 1


def _tables(k, parity_mode, table_k, table_km1, need_km1=True):
    tk = table_k if table_k is not None else build_catalog(k, parity_mode)
    if need_km1 and k >= 4 and table_km1 is None:
        table_km1 = build_catalog(k - 1, parity_mode)
    return tk, table_km1


def gtilde_bounds(k: int, parity_mode=None, table_k=None, table_km1=None) -> BoundReport:
    """Best of floor(s1)+1 and floor(u1)+1; the u-route is skipped for k = 3."""
    tk, tkm1 = _tables(k, parity_mode, table_k, table_km1)
    rs = s1(k, tk)
    witness: dict[str, Any] = {"s1": rs.value, "s_route": _floor_plus_one(rs.value), "s1_witness": rs.witness}
    best = witness["s_route"]
    if k >= 4:
        ru = u1(k, tk, tkm1)
        witness.update(u1=ru.value, u_route=_floor_plus_one(ru.value), u1_witness=ru.witness)
        best = min(best, witness["u_route"])
    return BoundReport(k, "gtilde", best, witness, "G~(k) <= floor(min(s1, u1)) + 1")


def gtilde_plus(k: int, parity_mode=None, table_k=None, table_km1=None) -> BoundReport:
    """1 + min(floor(s1/2), floor(u1/2))."""
    tk, tkm1 = _tables(k, parity_mode, table_k, table_km1)
    rs = s1(k, tk)
    halves = {"s_route": math.floor(rs.value / 2)}
    witness: dict[str, Any] = {"s1": rs.value}
    if k >= 4:
        ru = u1(k, tk, tkm1)
        halves["u_route"] = math.floor(ru.value / 2)
        witness["u1"] = ru.value
    witness.update(halves)
    return BoundReport(k, "gtilde_plus", 1 + min(halves.values()), witness, "G~+(k) <= 1 + min(floor(s1/2), floor(u1/2))")


def hua_exponents(k: int, parity_mode=None, table: ExponentTable | None = None) -> dict[str, BoundReport]:
    """C_k, t*(k) and (for k >= 4) S_k from the degree-k table."""
    table = table if table is not None else build_catalog(k, parity_mode)
    zero_at = least_s_with_delta_at_most(table, 0)
    t_star = least_s_with_delta_at_most(table, 1)
    out = {
        "hua_C": BoundReport(k, "hua_C", 2 * zero_at, {"s": zero_at}, "C_k <= 2 * least s with D_{s,k} = 0"),
        "t_star": BoundReport(k, "t_star", t_star, {"delta": table.delta(t_star)}, "least t with D_{t,k} <= 1"),
    }
    if k >= 4:
        floor_t = k * k - 3 * k + 3
        out["hua_S"] = BoundReport(
            k,
            "hua_S",
            2 * max(t_star, floor_t),
            {"t_star": t_star, "degree_k_minus_1_threshold": floor_t},
            "S_k <= 2 max(t*(k), k^2 - 3k + 3)",
        )
    return out


def tarry_bound(k: int, parity_mode=None, table_kp1: ExponentTable | None = None) -> BoundReport:
    """Least s with D_{s,k+1} < k+1, an upper bound for W(k, h)."""
    if k < 3:
        raise ValueError("k must be at least 3")
    table = table_kp1 if table_kp1 is not None else build_catalog(k + 1, parity_mode)
    s = next(p.s for p in table.entries if p.delta < k + 1)
    cap = math.ceil(Fraction(5, 8) * (k + 1) ** 2)
    return BoundReport(
        k,
        "tarry",
        s,
        {"delta": table.delta(s), "source": str(table.point(s).source), "five_eighths_cap": cap},
        "W(k,h) <= least s with D_{s,k+1} < k+1",
    )


# ---------------------------------------------------------------------------
# large-k constants


def cubic(x: Fraction) -> Fraction:
    return 20 * x**3 + 4 * x**2 - 1


def xi_bracket(bits: int) -> tuple[Fraction, Fraction]:
    """Bisection bracket of width 2^-bits around the real root of 20x^3 + 4x^2 - 1."""
    lo, hi = Fraction(0), Fraction(1)
    assert cubic(lo) < 0 < cubic(hi)
    for _ in range(bits):
        mid = (lo + hi) / 2
        if cubic(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def constant_C(xi: Fraction) -> Fraction:
    return (19 + 75 * xi - 12 * xi**2) / (8 + 60 * xi)


def asymptotic_constants(precision: int = 6) -> tuple[Decimal, Decimal]:
    """(xi, C) truncated to ``precision`` decimal places."""
    if not 0 <= precision <= 50:
        raise ValueError("precision must be between 0 and 50")
    bits = math.ceil((precision + 12) * math.log2(10))
    lo, hi = xi_bracket(bits)
    xi = (lo + hi) / 2
    return _truncate(xi, precision), _truncate(constant_C(xi), precision)


def _truncate(x: Fraction, places: int) -> Decimal:
    scale = 10**places
    q = math.floor(x * scale)
    with localcontext() as ctx:
        ctx.prec = places + 20
        return Decimal(q) / Decimal(scale)
