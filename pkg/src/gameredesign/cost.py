"""Designer cost: a Lipschitz multiple of the p-norm change on the played cell."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class CostModel:
    lipschitz: float = 1.0
    p: float = 1.0

    def __post_init__(self) -> None:
        if not self.lipschitz > 0:
            raise ValueError("lipschitz constant must be positive")
        if not self.p >= 1:
            raise ValueError("norm p must be >= 1 (math.inf for the max-norm)")


def norm_diff(x: Sequence[float], y: Sequence[float], p: float) -> float:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if math.isinf(p):
        total = 0.0
        for a, b in zip(x, y):
            d = abs(float(a) - float(b))
            if d > total:
                total = d
        return total
    total = 0.0
    if p == 1.0:
        for a, b in zip(x, y):
            total += abs(float(a) - float(b))
        return total
    for a, b in zip(x, y):
        total += abs(float(a) - float(b)) ** p
    return total ** (1.0 / p)


def round_cost(model: CostModel, original_loss: Sequence[float], designed_loss: Sequence[float]) -> float:
    return model.lipschitz * norm_diff(original_loss, designed_loss, model.p)


def max_round_cost(model: CostModel, num_players: int, loss_range: float) -> float:
    """Largest cost a single round can incur when both vectors lie in [L, U]."""
    scale = 1.0 if math.isinf(model.p) else num_players ** (1.0 / model.p)
    return model.lipschitz * loss_range * scale
