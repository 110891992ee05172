"""Closed-form upper bounds on missed target plays and cumulative design cost.

Both bounds plug the EXP3.P expected-regret bound
``(U - L) * (5.15 sqrt(T K ln K) + sqrt(T K / ln K))`` into the
interior/boundary analyses. Natural logarithms throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class BoundReport:
    T: int
    miss_bound: float
    cost_bound: float


def _regret_core(T: float, k: int) -> float:
    if k < 2:
        raise ValueError(f"need at least 2 actions (ln K appears in a denominator), got {k}")
    ln_k = math.log(k)
    return 5.15 * math.sqrt(T * k * ln_k) + math.sqrt(T * k / ln_k)


def exp3p_regret_bound(T: float, k: int, loss_range: float) -> float:
    if T < 1:
        raise ValueError("T must be >= 1")
    if loss_range < 0:
        raise ValueError("loss range must be nonnegative")
    return loss_range * _regret_core(T, k)


def _norm_scale(num_players: int, p: float) -> float:
    return 1.0 if math.isinf(p) else num_players ** (1.0 / p)


def _interior_miss(T: float, action_counts: Sequence[int], rho: float, loss_range: float) -> float:
    m = len(action_counts)
    if m < 2:
        raise ValueError("need at least 2 players (M - 1 appears in a denominator)")
    if not rho > 0:
        raise ValueError("rho must be positive")
    total = sum(_regret_core(T, k) for k in action_counts)
    return m * loss_range / ((m - 1) * rho) * total


def interior_bounds(
    T: float,
    action_counts: Sequence[int],
    rho: float,
    loss_range: float,
    lipschitz: float = 1.0,
    p: float = 1.0,
) -> BoundReport:
    miss = _interior_miss(T, action_counts, rho, loss_range)
    m = len(action_counts)
    cost = lipschitz * _norm_scale(m, p) * loss_range * miss
    return BoundReport(int(T), miss, cost)


def boundary_bounds(
    T: float,
    action_counts: Sequence[int],
    rho: float,
    loss_range: float,
    lipschitz: float = 1.0,
    p: float = 1.0,
    alpha: float = 0.5,
    epsilon: float = 0.25,
) -> BoundReport:
    if not 0 < epsilon <= 1 - alpha + 1e-12:
        raise ValueError(f"epsilon must lie in (0, 1 - alpha], got {epsilon}")
    m = len(action_counts)
    rate = alpha + epsilon
    miss = (_interior_miss(T, action_counts, rho, loss_range) + m / rate) * T ** (1.0 - rate)
    scale = lipschitz * loss_range * _norm_scale(m, p)
    cost = scale * miss + scale / rate * T**rate
    return BoundReport(int(T), miss, cost)
