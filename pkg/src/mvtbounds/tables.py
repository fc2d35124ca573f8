"""Published reference values, kept verbatim as decimal strings or integers.

Keys are degrees k.  Used only for reconciliation, never as inputs.
"""

from __future__ import annotations

from decimal import Decimal
from types import MappingProxyType


def _freeze(d: dict) -> MappingProxyType:
    return MappingProxyType(dict(d))


def _decimals(start: int, values: str) -> MappingProxyType:
    return _freeze({start + i: Decimal(v) for i, v in enumerate(values.split())})


def _ints(start: int, values: str) -> MappingProxyType:
    return _freeze({start + i: int(v) for i, v in enumerate(values.split())})


# upper bounds for G~(k)
GTILDE = _ints(5, "28 43 61 83 107 134 165 199 236 276 320 368 418 473 530 592")

# upper bounds for s1(k), rounded up in the last place
S1 = _decimals(
    3,
    "9.000 16.311 27.413 42.710 60.799 82.023 106.492 133.724 164.453 198.448 "
    "235.389 275.661 319.462 367.221 417.870 472.973 529.938 591.528",
)

# upper bounds for G~+(k)
GTILDE_PLUS = _ints(5, "14 22 31 42 54 67 83 100 118 138 160 184 209 237 265 296")

# upper bounds for the reciprocal minor-arc Weyl exponent
SIGMA1 = _decimals(
    6,
    "39.023 58.093 80.867 107.396 137.763 172.027 210.222 252.370 298.487 348.580 "
    "402.655 460.718 522.771 588.815 658.854",
)

# prior bounds for G~(k) that the values above improve on
GTILDE_PRIOR = _ints(5, "32 52 75 103 135 171 211 253 299 349 403 460 521 587 656 729")

T_STAR = _freeze({4: 11, 5: 17, 6: 26, 7: 33, 8: 44})
HUA_S = _freeze({4: 22, 5: 34, 6: 52, 7: 66, 8: 88})

XI = Decimal("0.312383")
C_LARGE_K = Decimal("1.542749")

TABLES = _freeze(
    {
        "gtilde": GTILDE,
        "s1": S1,
        "gtilde_plus": GTILDE_PLUS,
        "sigma1": SIGMA1,
        "gtilde_prior": GTILDE_PRIOR,
        "t_star": T_STAR,
        "hua_S": HUA_S,
    }
)
