"""Weyl-sum exponent bounds computed from exponent tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Protocol

import numpy as np

from .exponents import (
    ExponentTable,
    build_catalog,
    ceil_decimal,
    delta_theorem11,
    r_max,
    s_max,
    theorem11_threshold,
)
from .waring import _jsonable

_SCREEN_RTOL = 1e-9


class DeltaLookup(Protocol):
    def delta(self, s: int) -> Fraction: ...


@dataclass(frozen=True)
class WeylReport:
    k: int
    sigma_inverse_direct: int
    tau_inverse: int
    sigma: Fraction
    sigma_argmax: int | None = None
    mu: Fraction | None = None
    nu: Fraction | None = None
    witness: dict[str, Any] = field(default_factory=dict)
    method: str = ""

    @property
    def sigma_inverse(self) -> Fraction:
        return 1 / self.sigma

    def to_json_obj(self, places: int = 3) -> dict[str, Any]:
        return {
            "k": self.k,
            "method": self.method,
            "sigma_inverse_direct": self.sigma_inverse_direct,
            "tau_inverse": self.tau_inverse,
            "sigma": _jsonable(self.sigma),
            f"sigma_inverse_decimal_ceil{places}": ceil_decimal(self.sigma_inverse, places),
            "sigma_argmax": self.sigma_argmax,
            "mu": _jsonable(self.mu),
            "nu": _jsonable(self.nu),
            "witness": _jsonable(self.witness),
        }


def weyl_direct(k: int) -> tuple[int, int]:
    """(1/sigma, 1/tau) = (2(k^2-3k+3), 4(k^2-3k+3))."""
    if k < 4:
        raise ValueError("k must be at least 4")
    base = k * k - 3 * k + 3
    return 2 * base, 4 * base


def sigma_bw(k: int, table_km1: ExponentTable | None = None) -> WeylReport:
    """max over s >= k of (3 - D_{s,k-1}) / (6s + 2), searched on [k, 2k^2]."""
    sig_inv, tau_inv = weyl_direct(k)
    table_km1 = table_km1 if table_km1 is not None else build_catalog(k - 1)
    hi = 2 * k * k
    # past the zero tail of the degree k-1 table the objective only decreases
    assert s_max(k - 1) <= hi
    best: tuple[Fraction, int] | None = None
    for s in range(k, hi + 1):
        d = table_km1.delta(s)
        if d >= 3:
            continue
        val = (3 - d) / (6 * s + 2)
        if best is None or val > best[0]:
            best = (val, s)
    assert best is not None
    val, s = best
    return WeylReport(
        k, sig_inv, tau_inv, val, s, witness={"s": s, "delta": table_km1.delta(s)}, method="sigma_bw"
    )


def mu_nu_exponents(
    k: int, R: int, s: int, t: int, table_km1: DeltaLookup, table_k: DeltaLookup
) -> tuple[Fraction, Fraction]:
    """mu = (R - D_{s,k-1}) / (2Rs) and nu = (k - R(1 + D_{t,k})) / (2tk).

    A non-positive nu (or mu) means the pair gives nothing; it is returned as is.
    """
    if not (1 <= R and 2 * R <= k):
        raise ValueError(f"R={R} outside 1..k/2")
    if 2 * s < k * (k - 1):
        raise ValueError(f"s={s} below k(k-1)/2")
    if t < 1:
        raise ValueError("t must be positive")
    return _mu(R, s, table_km1.delta(s)), _nu(k, R, t, table_k.delta(t))


def _mu(R: int, s: int, d: Fraction) -> Fraction:
    return (R - d) / (2 * R * s)


def _nu(k: int, R: int, t: int, d: Fraction) -> Fraction:
    return (k - R * (1 + d)) / (2 * t * k)


class ClosedFormDeltas:
    """Exponents at degree k from the closed-form family alone, ZeroTail past k^2-k+1.

    Cheap enough for very large k where a full table is out of reach.
    """

    def __init__(self, k: int):
        self.k = k
        self._pts = {}
        for r in range(1, r_max(k) + 1):
            s = theorem11_threshold(k, r)
            d = delta_theorem11(k, r, s)
            if s not in self._pts or d < self._pts[s]:
                self._pts[s] = d

    def delta(self, s: int) -> Fraction:
        if s >= s_max(self.k):
            return Fraction(0)
        if s in self._pts:
            return self._pts[s]
        k = self.k
        return min(
            [Fraction(k * (k + 1), 2)]
            + [delta_theorem11(k, r, s) for r in range(1, r_max(k) + 1) if s >= theorem11_threshold(k, r)]
        )


def _family(k: int, min_s: int) -> tuple[list[int], list[int], list[Fraction]]:
    rs, ss, ds = [], [], []
    for r in range(1, r_max(k) + 1):
        s = theorem11_threshold(k, r)
        if s < min_s:
            continue
        rs.append(r)
        ss.append(s)
        ds.append(delta_theorem11(k, r, s))
    return rs, ss, ds


def weyl_large_k(k: int, chunk: int = 256) -> WeylReport:
    """Maximise min(mu, nu) over R and the closed-form parameter families.

    s runs over (k-1)^2 - r(k-1) + r(r+3)/2 - 1 and t over k^2 - uk + u(u+3)/2 - 1
    for all admissible r, u.  For each R the best r and u are independent, so the
    scan is a float screen over R followed by exact evaluation of the near-optimal
    cells.
    """
    if k < 9:
        raise ValueError("k must be at least 9")
    sig_inv, tau_inv = weyl_direct(k)
    min_s = -(-k * (k - 1) // 2)
    rs, ss, ds = _family(k - 1, min_s)
    us, ts, es = _family(k, 1)
    s_f = np.array(ss, dtype=np.float64)
    d_f = np.array([float(d) for d in ds])
    t_f = np.array(ts, dtype=np.float64)
    e_f = np.array([float(e) for e in es])
    Rs = np.arange(1, k // 2 + 1)
    mu_best = np.empty(Rs.size)
    nu_best = np.empty(Rs.size)
    for lo in range(0, Rs.size, chunk):
        R = Rs[lo : lo + chunk, None].astype(np.float64)
        mu_best[lo : lo + chunk] = ((R - d_f) / (2 * R * s_f)).max(axis=1)
        nu_best[lo : lo + chunk] = ((k - R * (1 + e_f)) / (2 * t_f * k)).max(axis=1)
    obj = np.minimum(mu_best, nu_best)
    top = obj.max()
    cands = Rs[obj >= top - _SCREEN_RTOL * abs(top)]

    best = None
    for R in cands:
        R = int(R)
        mu_f = (R - d_f) / (2 * R * s_f)
        nu_f = (k - R * (1 + e_f)) / (2 * t_f * k)
        mu_x = max(
            (_mu(R, ss[i], ds[i]), -i) for i in np.nonzero(mu_f >= mu_f.max() - _SCREEN_RTOL * abs(mu_f.max()))[0]
        )
        nu_x = max(
            (_nu(k, R, ts[i], es[i]), -i) for i in np.nonzero(nu_f >= nu_f.max() - _SCREEN_RTOL * abs(nu_f.max()))[0]
        )
        val = min(mu_x[0], nu_x[0])
        if best is None or val > best[0]:
            best = (val, R, -mu_x[1], -nu_x[1], mu_x[0], nu_x[0])
    val, R, i, j, mu, nu = best
    witness = {
        "R": R,
        "r": rs[i],
        "s": ss[i],
        "delta_s": ds[i],
        "u": us[j],
        "t": ts[j],
        "delta_t": es[j],
        "grid": {"R": [1, k // 2], "r": [rs[0], rs[-1]], "u": [us[0], us[-1]]},
    }
    return WeylReport(k, sig_inv, tau_inv, val, None, mu, nu, witness, "large_k")


def large_k_correction(report: WeylReport) -> float:
    """(2k^2 - 1/sigma) / k^(3/2), the normalised second-order gain."""
    k = report.k
    return float(2 * k * k - report.sigma_inverse) / k**1.5
