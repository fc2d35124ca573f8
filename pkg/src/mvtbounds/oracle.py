"""Exhaustive counting of Vinogradov-system solutions.

The reference path builds the histogram of power-sum profiles
(sum x_i, sum x_i^2, ..., sum x_i^k) one variable at a time in a sparse dict with
Python integers; J is the sum of squared multiplicities.  A numpy path does the
same convolution on mixed-radix encoded profiles and is used by :func:`count_J`
whenever the encoding and the multiplicities fit in int64.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_BUDGET = 10**7
_INT64_SAFE = 2**62


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"estimated {estimate} states exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


def _check(s: int, k: int, X: int) -> None:
    if s < 1 or k < 1 or X < 1:
        raise ValueError("s, k and X must be positive")


def profile_estimate(s: int, k: int, X: int, moduli: Sequence[int] | None = None) -> int:
    """Upper bound for the number of distinct profiles of s variables."""
    prod = 1
    for j in range(1, k + 1):
        span = s * X**j - s + 1
        if moduli is not None:
            span = min(span, moduli[j - 1])
        prod *= span
    return min(prod, math.comb(X + s - 1, s))


def _enforce(estimate: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)


@dataclass
class ProfileCounter:
    k: int
    s: int
    X: int
    shift: int = 0
    counts: dict[tuple[int, ...], int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def J(self) -> int:
        return sum(c * c for c in self.counts.values())

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "s": self.s,
            "X": self.X,
            "shift": self.shift,
            "profiles": [{"profile": list(p), "count": str(c)} for p, c in sorted(self.counts.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _power_rows(k: int, values: Iterable[int], moduli: Sequence[int] | None) -> list[tuple[int, ...]]:
    if moduli is None:
        return [tuple(x**j for j in range(1, k + 1)) for x in values]
    return [tuple(pow(x, j, moduli[j - 1]) for j in range(1, k + 1)) for x in values]


def _convolve_dict(
    s: int, rows: list[tuple[int, ...]], moduli: Sequence[int] | None
) -> dict[tuple[int, ...], int]:
    cur: dict[tuple[int, ...], int] = {tuple(0 for _ in rows[0]): 1}
    for _ in range(s):
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for prof, c in cur.items():
            for row in rows:
                if moduli is None:
                    key = tuple(a + b for a, b in zip(prof, row))
                else:
                    key = tuple((a + b) % q for a, b, q in zip(prof, row, moduli))
                nxt[key] += c
        cur = dict(nxt)
    return cur


def profile_counts(
    s: int, k: int, X: int, shift: int = 0, budget: int | None = None
) -> ProfileCounter:
    """Exact multiplicities of every power-sum profile with x_i in [shift+1, shift+X]."""
    _check(s, k, X)
    _enforce(profile_estimate(s, k, X), budget)
    rows = _power_rows(k, range(shift + 1, shift + X + 1), None)
    return ProfileCounter(k, s, X, shift, _convolve_dict(s, rows, None))


def _convolve_np(s: int, rows: np.ndarray, radix: np.ndarray) -> np.ndarray | None:
    """Counts of encoded profiles, or None when int64 would not be safe.

    ``rows`` holds non-negative per-variable contributions; ``radix[j]`` exceeds
    every attainable value of coordinate j, so the encoding is exact.
    """
    span = 1
    for r in radix:
        span *= int(r)
    if span >= _INT64_SAFE or rows.shape[0] ** s >= _INT64_SAFE:
        return None
    weights = np.ones(len(radix), dtype=np.int64)
    for j in range(1, len(radix)):
        weights[j] = weights[j - 1] * radix[j - 1]
    step = rows.astype(np.int64) @ weights
    keys = np.zeros(1, dtype=np.int64)
    counts = np.ones(1, dtype=np.int64)
    for _ in range(s):
        allk = (keys[:, None] + step[None, :]).ravel()
        allc = np.repeat(counts, step.size)
        keys, counts, _ = _group_sum(allk, allc)
    return counts


def _group_sum(keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct keys, exact int64 sums of vals per key, and one source index per key."""
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    return sk[starts], np.add.reduceat(vals[order], starts), order[starts]


def _convolve_np_mod(s: int, rows: np.ndarray, moduli: Sequence[int]) -> np.ndarray | None:
    span = 1
    for q in moduli:
        span *= q
    if span >= _INT64_SAFE or rows.shape[0] ** s >= _INT64_SAFE:
        return None
    mods = np.array(moduli, dtype=np.int64)
    state = np.zeros((1, len(moduli)), dtype=np.int64)
    counts = np.ones(1, dtype=np.int64)
    weights = np.ones(len(moduli), dtype=np.int64)
    for j in range(1, len(moduli)):
        weights[j] = weights[j - 1] * mods[j - 1]
    for _ in range(s):
        allr = (state[:, None, :] + rows[None, :, :]) % mods
        allr = allr.reshape(-1, len(moduli))
        allc = np.repeat(counts, rows.shape[0])
        _, counts, first = _group_sum(allr @ weights, allc)
        state = allr[first]
    return counts


def _sum_squares(counts: np.ndarray) -> int:
    return sum(int(c) * int(c) for c in counts.tolist())


def count_J(
    s: int, k: int, X: int, shift: int = 0, budget: int | None = None, method: str = "auto"
) -> int:
    """Number of solutions of sum x_i^j = sum y_i^j (1 <= j <= k) with all variables in range.

    ``method`` is "auto", "reference" (sparse dict) or "numpy".
    """
    _check(s, k, X)
    _enforce(profile_estimate(s, k, X), budget)
    if method not in ("auto", "reference", "numpy"):
        raise ValueError(f"unknown method {method!r}")
    if method != "reference":
        vals = np.arange(shift + 1, shift + X + 1, dtype=object)
        rows_obj = [[int(x) ** j for j in range(1, k + 1)] for x in vals]
        lows = [min(r[j] for r in rows_obj) for j in range(k)]
        highs = [max(r[j] for r in rows_obj) for j in range(k)]
        radix = [s * (hi - lo) + 1 for lo, hi in zip(lows, highs)]
        fits = math.prod(radix) < _INT64_SAFE
        if fits:
            rows = np.array([[r[j] - lows[j] for j in range(k)] for r in rows_obj], dtype=np.int64)
            counts = _convolve_np(s, rows, np.array(radix, dtype=np.int64))
            if counts is not None:
                return _sum_squares(counts)
        if method == "numpy":
            raise ValueError("profile encoding does not fit in int64")
    return profile_counts(s, k, X, shift, budget=math.inf).J()


def count_J_congruential(
    s: int, k: int, X: int, moduli: Sequence[int], budget: int | None = None, method: str = "auto"
) -> int:
    """Pairs (x, y) in [1, X]^2s with sum x_i^j = sum y_i^j mod Q_j for every j."""
    _check(s, k, X)
    moduli = tuple(int(q) for q in moduli)
    if len(moduli) != k or any(q < 1 for q in moduli):
        raise ValueError("need k moduli, each at least 1")
    _enforce(profile_estimate(s, k, X, moduli), budget)
    rows = _power_rows(k, range(1, X + 1), moduli)
    if method != "reference":
        counts = _convolve_np_mod(s, np.array(rows, dtype=np.int64), moduli)
        if counts is not None:
            return _sum_squares(counts)
        if method == "numpy":
            raise ValueError("residue encoding does not fit in int64")
    return sum(c * c for c in _convolve_dict(s, rows, moduli).values())


def empirical_growth(s: int, k: int, Xs: Sequence[int], budget: int | None = None) -> float:
    """Least-squares slope of log J against log X."""
    Xs = list(Xs)
    if len(Xs) < 3 or any(b <= a for a, b in zip(Xs, Xs[1:])):
        raise ValueError("need at least three increasing X values")
    js = [count_J(s, k, X, budget=budget) for X in Xs]
    slope, _ = np.polyfit(np.log(Xs), np.log([float(j) for j in js]), 1)
    return float(slope)


def growth_series_csv(s: int, k: int, Xs: Sequence[int], budget: int | None = None) -> str:
    """CSV rows (X, J, slope from the previous row)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["X", "J", "slope"])
    prev = None
    for X in Xs:
        J = count_J(s, k, X, budget=budget)
        slope = "" if prev is None else f"{math.log(J / prev[1]) / math.log(X / prev[0]):.6f}"
        w.writerow([X, J, slope])
        prev = (X, J)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# congruence classes with a = 0, b = 1

CONGRUENCE_BUDGET = 2 * 10**7


def _admissible_r(k: int, r: int) -> bool:
    return 1 <= r <= min(k - 2, (k + 1) // 2)


def congruence_class_bound(p: int, k: int, h: int) -> int:
    """k! p^mu with mu = (k-r-1)(k-r-2)/2 and r = k - h."""
    r = k - h
    mu = (k - r - 1) * (k - r - 2) // 2
    return math.factorial(k) * p**mu


def congruence_class_extremum(p: int, k: int, n: int, h: int) -> tuple[int, int, bool]:
    """Largest number of classes mod p^h in one congruence bucket, the bound, and whether it holds.

    Tuples z in [1, p^k]^n with pairwise distinct non-zero residues relative to
    eta are bucketed by (eta, m) where m_j = sum (z_i - eta)^j mod p^j.
    """
    if p > 13 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)) or p < 2:
        raise ValueError("p must be a prime at most 13")
    if not (3 <= k <= 4 and 1 <= n <= k - 1 and 1 <= h <= k):
        raise ValueError("need 3 <= k <= 4, 1 <= n <= k-1, 1 <= h <= k")
    if not _admissible_r(k, k - h):
        raise ValueError(f"r = k - h = {k - h} outside 1..min(k-2, (k+1)/2)")
    N = p**k
    if N**n > CONGRUENCE_BUDGET:
        raise BudgetExceeded(N**n, CONGRUENCE_BUDGET)

    grids = np.meshgrid(*([np.arange(1, N + 1, dtype=np.int64)] * n), indexing="ij")
    z = np.stack([g.ravel() for g in grids], axis=1)
    res = z % p
    distinct = np.ones(z.shape[0], dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            distinct &= res[:, a] != res[:, b]
    z, res = z[distinct], res[distinct]

    ph = p**h
    cls_w = np.array([ph**i for i in range(n)], dtype=np.int64)
    cls_key_all = (z % ph) @ cls_w
    mods = [p**j for j in range(1, k + 1)]
    m_w = [1]
    for q in mods[:-1]:
        m_w.append(m_w[-1] * q)
    m_span = m_w[-1] * mods[-1]
    cls_span = ph**n

    best = 0
    for eta in range(p):
        ok = np.all(res != eta, axis=1)
        zz = z[ok] - eta
        key = np.zeros(zz.shape[0], dtype=np.int64)
        for j, q in enumerate(mods, start=1):
            term = np.zeros(zz.shape[0], dtype=np.int64)
            for i in range(n):
                v = zz[:, i] % q
                acc = np.ones_like(v)
                for _ in range(j):
                    acc = (acc * v) % q
                term = (term + acc) % q
            key += term * m_w[j - 1]
        if key.size == 0:
            continue
        if m_span * cls_span < _INT64_SAFE:
            pair = np.unique(key * cls_span + cls_key_all[ok])
            buckets = pair // cls_span
        else:
            buckets = np.unique(np.stack([key, cls_key_all[ok]], axis=1), axis=0)[:, 0]
        _, per_bucket = np.unique(buckets, return_counts=True)
        best = max(best, int(per_bucket.max()))
    bound = congruence_class_bound(p, k, h)
    return best, bound, best <= bound
