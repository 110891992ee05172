"""EXP3.P bandit learner and best-in-hindsight regret.

Weights live in the log domain: ``log_weights[j]`` is the learning rate
times the cumulative importance-weighted gain estimate of action ``j``.
Losses in ``[L, U]`` are mapped to gains ``(U - loss) / (U - L)`` in
``[0, 1]`` before the update.

All arithmetic is scalar and sequential so the compiled round loop in
:mod:`gameredesign._kernel` reproduces it bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

RENORM_EVERY = 10_000
LOSS_TOL = 1e-9


class HorizonExhausted(RuntimeError):
    """Raised when a learner is asked to act past its horizon."""


def exp3p_parameters(k: int, horizon: int) -> tuple[float, float, float]:
    """``(gamma, beta, eta)`` for a known horizon.

    gamma = 1.05 sqrt(K ln K / T), beta = sqrt(ln K / (T K)),
    eta = 0.95 sqrt(ln K / (T K)); gamma is clamped to [0, 1].
    """
    ln_k = math.log(k)
    gamma = min(1.0, 1.05 * math.sqrt(k * ln_k / horizon))
    beta = math.sqrt(ln_k / (horizon * k))
    eta = 0.95 * math.sqrt(ln_k / (horizon * k))
    return gamma, beta, eta


@dataclass
class Exp3PState:
    num_actions: int
    horizon: int
    loss_lower: float
    loss_upper: float
    gamma: float
    beta: float
    eta: float
    log_weights: list[float] = field(default_factory=list)
    t: int = 0

    def probabilities(self) -> list[float]:
        k = self.num_actions
        lw = self.log_weights
        m = lw[0]
        for j in range(1, k):
            if lw[j] > m:
                m = lw[j]
        e = [0.0] * k
        s = 0.0
        for j in range(k):
            e[j] = math.exp(lw[j] - m)
            s += e[j]
        g = self.gamma
        return [(1.0 - g) * e[j] / s + g / k for j in range(k)]


def exp3p_init(num_actions: int, horizon: int, loss_lower: float, loss_upper: float) -> Exp3PState:
    if num_actions < 2:
        raise ValueError(f"EXP3.P needs at least 2 actions, got {num_actions}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if not loss_upper > loss_lower:
        raise ValueError("need loss_upper > loss_lower")
    gamma, beta, eta = exp3p_parameters(num_actions, horizon)
    return Exp3PState(
        num_actions=num_actions,
        horizon=horizon,
        loss_lower=float(loss_lower),
        loss_upper=float(loss_upper),
        gamma=gamma,
        beta=beta,
        eta=eta,
        log_weights=[0.0] * num_actions,
    )


def draw_from(probs: Sequence[float], u: float) -> int:
    """Inverse-CDF draw with a uniform ``u`` in [0, 1)."""
    c = 0.0
    last = len(probs) - 1
    for j in range(last):
        c += probs[j]
        if u < c:
            return j
    return last


def sample_action(state: Exp3PState, rng: np.random.Generator) -> int:
    """Draw an action from the current policy. Consumes one uniform from ``rng``."""
    if state.t >= state.horizon:
        raise HorizonExhausted(f"horizon {state.horizon} already reached")
    return draw_from(state.probabilities(), float(rng.random()))


def update(state: Exp3PState, action: int, observed_loss: float) -> Exp3PState:
    """Importance-weighted EXP3.P update in place; returns ``state``."""
    lo, hi = state.loss_lower, state.loss_upper
    if not lo - LOSS_TOL <= observed_loss <= hi + LOSS_TOL:
        raise ValueError(f"loss {observed_loss} outside [{lo}, {hi}]")
    if not 0 <= action < state.num_actions:
        raise ValueError(f"action {action} out of range")
    if state.t >= state.horizon:
        raise HorizonExhausted(f"horizon {state.horizon} already reached")
    probs = state.probabilities()
    gain = (hi - observed_loss) / (hi - lo)
    beta, eta = state.beta, state.eta
    lw = state.log_weights
    for j in range(state.num_actions):
        if j == action:
            lw[j] += eta * ((gain + beta) / probs[j])
        else:
            lw[j] += eta * (beta / probs[j])
    state.t += 1
    if state.t % RENORM_EVERY == 0:
        renormalize(lw)
    return state


def renormalize(log_weights: list[float]) -> None:
    m = max(log_weights)
    for j in range(len(log_weights)):
        log_weights[j] -= m


@dataclass
class PlayerTrace:
    """What one player did and what every alternative would have cost.

    ``rows[t][b]`` is the round-t loss the player would have got from action
    ``b`` against the opponents' realized actions.
    """

    actions: list[int] = field(default_factory=list)
    rows: list[np.ndarray] = field(default_factory=list)

    def append(self, action: int, row: Sequence[float]) -> None:
        self.actions.append(int(action))
        self.rows.append(np.asarray(row, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.actions)


def regret(trace: PlayerTrace) -> float:
    """Best-in-hindsight regret; an empty trace has regret 0."""
    if len(trace) == 0:
        return 0.0
    k = len(trace.rows[0])
    realized = 0.0
    totals = [0.0] * k
    for a, row in zip(trace.actions, trace.rows):
        realized += float(row[a])
        for b in range(k):
            totals[b] += float(row[b])
    return realized - min(totals)
