"""Quantile calculus on equal atoms.

The quantile function of a payoff is its sorted value vector, read as a step
function on (0,1].  Maximal-correlation products, comonotone rearrangements,
and the convex-order test all reduce to exact arithmetic on sorted vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import ValidationError
from .spaces import Payoff, require_same_space

__all__ = [
    "QuantileFn",
    "quantile",
    "hl_product",
    "max_correlation_oracle",
    "comonotone_rearrangement",
    "convex_order_geq",
    "convex_order_oracle",
]

MAX_ORACLE_ATOMS = 8


@dataclass(frozen=True, eq=False)
class QuantileFn:
    """Left-continuous (lower) quantile step function of an atomic law.

    ``sorted_values[i]`` is the value taken on the level interval
    ``(i/n, (i+1)/n]``.  All quantile conventions agree on the sorted vector;
    the convention only pins down evaluation at a given level.
    """

    sorted_values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.sorted_values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValidationError("quantile function needs a nonempty 1-d vector")
        if np.any(np.diff(vals) < 0):
            raise ValidationError("quantile values must be nondecreasing")
        vals.flags.writeable = False
        object.__setattr__(self, "sorted_values", vals)

    def __call__(self, alpha: float) -> float:
        if not 0.0 < alpha < 1.0:
            raise ValidationError(f"quantile level must lie in (0,1), got {alpha}")
        n = self.sorted_values.size
        return float(self.sorted_values[math.ceil(alpha * n) - 1])

    def to_json(self) -> list[float]:
        return [float(v) for v in self.sorted_values]


def quantile(x: Payoff) -> QuantileFn:
    return QuantileFn(np.sort(x.values))


def hl_product(x: Payoff, y: Payoff) -> float:
    """Maximal-correlation product: mean of the jointly sorted value products.

    Equals the maximum of E[X'Y] over all rearrangements X' of X
    (rearrangement inequality); ``max_correlation_oracle`` recomputes it by
    brute force for cross-checks.
    """
    require_same_space(x, y)
    return float(np.sort(x.values) @ np.sort(y.values) / x.space.n)


@lru_cache(maxsize=None)
def _permutation_matrix(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.intp)


def max_correlation_oracle(x: Payoff, y: Payoff) -> float:
    """Brute-force maximum of the mean product over all pairings of atoms.

    Factorial enumeration; refuses spaces larger than 8 atoms.
    """
    require_same_space(x, y)
    n = x.space.n
    if n > MAX_ORACLE_ATOMS:
        raise ValidationError(f"oracle enumerates n! pairings; n={n} exceeds {MAX_ORACLE_ATOMS}")
    dots = y.values[_permutation_matrix(n)] @ x.values
    return float(dots.max() / n)


def comonotone_rearrangement(x: Payoff, y: Payoff) -> tuple[Payoff, Payoff]:
    """Jointly sorted copies of x and y: same laws, comonotone, and their
    mean product attains ``hl_product``."""
    require_same_space(x, y)
    return (
        Payoff(x.space, np.sort(x.values)),
        Payoff(y.space, np.sort(y.values)),
    )


def convex_order_geq(x: Payoff, y: Payoff, tol: float = 0.0) -> bool:
    """True when x dominates y in the convex order, up to tol.

    Discrete test: means agree within tol and every upper-tail partial sum of
    the sorted values of x dominates that of y within tol.  The tolerance
    enters both tests symmetrically so the predicate is monotone in tol.
    """
    require_same_space(x, y)
    if abs(float(x.values.mean()) - float(y.values.mean())) > tol:
        return False
    tails_x = np.cumsum(np.sort(x.values)[::-1])
    tails_y = np.cumsum(np.sort(y.values)[::-1])
    return bool(np.all(tails_x >= tails_y - tol))


def convex_order_oracle(x: Payoff, y: Payoff) -> bool:
    """Independent convex-order check through the call-function family.

    Tests sum (x - t)+ >= sum (y - t)+ at every t in the merged support plus
    exact mean equality; on finite supports this family generates all convex
    functions.  Comparisons are exact, so the oracle is intended for payoffs
    with exactly representable values (integers in the cross-validation runs).
    """
    require_same_space(x, y)
    if float(x.values.sum()) != float(y.values.sum()):
        return False
    for t in np.union1d(x.values, y.values):
        if np.maximum(x.values - t, 0.0).sum() < np.maximum(y.values - t, 0.0).sum():
            return False
    return True
