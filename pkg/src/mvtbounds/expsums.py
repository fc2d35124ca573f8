"""Exponential sums f_k(alpha; X) = sum_{x <= X} e(alpha_1 x + ... + alpha_k x^k).

Coefficients are converted to exact rationals (floats and Decimals convert
exactly), phases are reduced mod 1 in integer arithmetic, and only the final
unit vectors are formed in floating point and summed with ``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Sequence, Union

import numpy as np

from .oracle import count_J_congruential
from .weyl import weyl_direct

Number = Union[int, Fraction, Decimal, float]


def _exact(x: Number) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class PhasePoint:
    coefficients: tuple[Fraction, ...]
    X: int

    def __init__(self, coefficients: Sequence[Number], X: int):
        if X < 1:
            raise ValueError("X must be positive")
        object.__setattr__(self, "coefficients", tuple(_exact(c) % 1 for c in coefficients))
        object.__setattr__(self, "X", int(X))

    @classmethod
    def monomial(cls, alpha: Number, k: int, X: int) -> "PhasePoint":
        """The single-coefficient sum g_k(alpha; X)."""
        return cls([0] * (k - 1) + [alpha], X)

    @classmethod
    def without_penultimate(cls, coefficients: Sequence[Number], X: int) -> "PhasePoint":
        """Pin the degree k-1 coefficient to zero."""
        c = list(coefficients)
        if len(c) >= 2:
            c[-2] = 0
        return cls(c, X)


def _phase_residues(point: PhasePoint) -> tuple[np.ndarray | list[int], int]:
    coeffs = point.coefficients
    D = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    nums = [int(c * D) for c in coeffs]
    X = point.X
    if D < 2**31:
        x = np.arange(1, X + 1, dtype=np.int64) % D
        r = np.zeros(X, dtype=np.int64)
        for n in reversed(nums):
            r = ((r + n) * x) % D
        return r, D
    out = []
    for x in range(1, X + 1):
        r = 0
        for n in reversed(nums):
            r = ((r + n) * x) % D
        out.append(r)
    return out, D


def eval_f(point: PhasePoint) -> complex:
    """Sum of e(alpha_1 x + ... + alpha_k x^k) over 1 <= x <= X."""
    if not point.coefficients:
        return complex(point.X, 0)
    r, D = _phase_residues(point)
    theta = 2 * np.pi * (np.asarray(r, dtype=np.float64) / D)
    z = complex(math.fsum(np.cos(theta)), math.fsum(np.sin(theta)))
    mag = abs(z)
    if mag > point.X:  # rounding can only push this past X by a few ulps
        z *= point.X / mag
    return z


def complex_to_json(z: complex) -> list[str]:
    return [repr(z.real), repr(z.imag)]


# ---------------------------------------------------------------------------
# minor arcs


@dataclass(frozen=True)
class ArcDecision:
    minor: bool
    witness: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.minor


def convergents(alpha: Fraction):
    """Continued-fraction convergents (p, q) of a rational alpha, in order."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = alpha
    while True:
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def _pow_le(lhs: Fraction, X: int, theta: Fraction, shift: int) -> bool:
    """lhs <= X^(theta - shift), exactly, for rational theta and lhs >= 0."""
    e = theta - shift
    return lhs ** e.denominator <= Fraction(X) ** e.numerator


def is_minor_arc(
    alpha: Number, k: int, X: int, theta: Number = 1, scaled: bool | None = None
) -> ArcDecision:
    """Decide whether alpha avoids every major arc.

    alpha is major when some reduced a/q has q <= Q and |q alpha - a| <= T.  With
    ``scaled`` (the default for theta = 1) Q = X/(2k) and T = X^(1-k)/(2k);
    otherwise Q = X^theta and T = X^(theta-k).

    Only convergents need checking: for q below the next convergent denominator,
    |q alpha - a| is at least the error of the current convergent, so if any
    q <= Q works then the last convergent with denominator <= Q works too.
    """
    if X < 2 * k:
        raise ValueError("need X >= 2k")
    alpha = _exact(alpha)
    theta = _exact(theta)
    if scaled is None:
        scaled = theta == 1
    for a, q in convergents(alpha):
        if scaled:
            q_ok = 2 * k * q <= X
        else:
            q_ok = _pow_le(Fraction(q), X, theta, 0)
        if not q_ok:
            break
        err = abs(q * alpha - a)
        if scaled:
            close = err * 2 * k * Fraction(X) ** (k - 1) <= 1
        else:
            close = _pow_le(err, X, theta, k)
        if close:
            return ArcDecision(False, (a, q))
    return ArcDecision(True, None)


# ---------------------------------------------------------------------------
# orthogonality on a finite grid


def _check_moduli(s: int, k: int, X: int, moduli: Sequence[int]) -> tuple[int, ...]:
    moduli = tuple(int(q) for q in moduli)
    if len(moduli) != k:
        raise ValueError("need one modulus per degree")
    for j, q in enumerate(moduli, start=1):
        if q < s * (X**j - 1) + 1:
            raise ValueError(f"Q_{j}={q} below s(X^{j}-1)+1")
    return moduli


def grid_mean_moment(s: int, k: int, X: int, moduli: Sequence[int], budget: int | None = None) -> int:
    """Exact mean of |f_k(a/Q; X)|^(2s) over the product grid, via residue counting."""
    moduli = _check_moduli(s, k, X, moduli)
    return count_J_congruential(s, k, X, moduli, budget=budget)


def grid_mean_moment_float(s: int, k: int, X: int, moduli: Sequence[int], max_points: int = 10**6) -> float:
    """The same mean evaluated numerically point by point."""
    moduli = _check_moduli(s, k, X, moduli)
    if math.prod(moduli) > max_points:
        raise ValueError("grid too large for the floating evaluation")
    vals = []
    for a in product(*(range(q) for q in moduli)):
        z = eval_f(PhasePoint([Fraction(ai, q) for ai, q in zip(a, moduli)], X))
        vals.append(abs(z) ** (2 * s))
    return math.fsum(vals) / math.prod(moduli)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeReport:
    k: int
    j: int
    a: int
    q: int
    X: int
    sigma_inverse: int
    envelope: float
    actual: float

    @property
    def ratio(self) -> float:
        return self.actual / self.envelope

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "j": self.j,
            "a": self.a,
            "q": self.q,
            "X": self.X,
            "sigma_inverse": self.sigma_inverse,
            "envelope": repr(self.envelope),
            "actual": repr(self.actual),
            "ratio": repr(self.ratio),
        }


def weyl_envelope_report(k: int, q: int, a: int, j: int, X: int) -> EnvelopeReport:
    """X (1/q + 1/X + q/X^j)^sigma next to |f_k| with alpha_j = a/q and other coefficients zero.

    Illustrative only: the implied constant is unknown, so no inequality is asserted.
    """
    sig_inv, _ = weyl_direct(k)
    if math.gcd(a, q) != 1:
        raise ValueError("a and q must be coprime")
    if not 2 <= j <= k:
        raise ValueError("need 2 <= j <= k")
    if q < 1 or q > X**j:
        raise ValueError("need 1 <= q <= X^j")
    bracket = 1 / q + 1 / X + q / X**j
    envelope = X * bracket ** (1 / sig_inv)
    coeffs = [Fraction(0)] * k
    coeffs[j - 1] = Fraction(a, q)
    actual = abs(eval_f(PhasePoint(coeffs, X)))
    return EnvelopeReport(k, j, a, q, X, sig_inv, envelope, actual)
