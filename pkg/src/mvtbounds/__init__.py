"""Exact bounds derived from permissible exponents in Vinogradov's mean value theorem."""

__version__ = "0.1.0"

from .exponents import (  # noqa: E402
    ExponentPoint,
    ExponentTable,
    InadmissibleParameters,
    NotFound,
    Source,
    build_catalog,
    delta_theorem11,
    delta_theorem92,
    least_s_with_delta_at_most,
)
from .oracle import BudgetExceeded, count_J, count_J_congruential  # noqa: E402
from .waring import BoundReport, gtilde_bounds, gtilde_plus, s1, u1  # noqa: E402
from .weyl import WeylReport, sigma_bw, weyl_direct, weyl_large_k  # noqa: E402

__all__ = [
    "BoundReport",
    "BudgetExceeded",
    "ExponentPoint",
    "ExponentTable",
    "InadmissibleParameters",
    "NotFound",
    "Source",
    "WeylReport",
    "build_catalog",
    "count_J",
    "count_J_congruential",
    "delta_theorem11",
    "delta_theorem92",
    "gtilde_bounds",
    "gtilde_plus",
    "least_s_with_delta_at_most",
    "s1",
    "sigma_bw",
    "u1",
    "weyl_direct",
    "weyl_large_k",
]
