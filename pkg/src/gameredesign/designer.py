"""Redesign algorithms: map (original game, target, round t) to the round-t game.

Four kinds are supported:

``interior``
    Time-invariant design. Every player's target action beats each
    alternative by exactly ``(1 - 1/M) * rho`` and the target cell keeps its
    original losses. Requires the target losses to sit ``rho`` inside [L, U].
``boundary``
    Blend of an interior design built around an interior vector ``v``
    (the source) and a constant game equal to the original target losses
    (the destination), with source weight ``t ** (alpha + epsilon - 1)``.
``discrete``
    Boundary design followed by per-cell randomized rounding to {L, U}.
``none``
    The original game, untouched.

Any kind can be thresholded against the original losses (min on target
actions, max elsewhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np

from .game import NormalFormGame, check_profile, loss_at, target_mask

Kind = Literal["interior", "boundary", "discrete", "none"]
KINDS = ("interior", "boundary", "discrete", "none")
VChoice = Union[Literal["midpoint", "mean"], tuple[float, ...]]


class DesignPreconditionError(ValueError):
    """The requested design is not applicable to this game/target."""


@dataclass(frozen=True)
class DesignerSpec:
    kind: Kind
    target: tuple[int, ...]
    rho: float = 1.0
    v: VChoice = "midpoint"
    alpha: float = 0.5
    epsilon: float = 0.25
    thresholded: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown designer kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "target", tuple(int(x) for x in self.target))
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not 0 <= self.alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")
        if not 0 < self.epsilon <= 1 - self.alpha + 1e-12:
            raise ValueError(f"epsilon must lie in (0, 1 - alpha] = (0, {1 - self.alpha}]")
        if not isinstance(self.v, str):
            object.__setattr__(self, "v", tuple(float(x) for x in self.v))
        elif self.v not in ("midpoint", "mean"):
            raise ValueError("v must be 'midpoint', 'mean' or a vector")


@dataclass(frozen=True, eq=False)
class RedesignedRound:
    t: int
    game: NormalFormGame
    weight: float


def _check_interior(values: np.ndarray, lo: float, hi: float, rho: float, what: str) -> None:
    for i, x in enumerate(values):
        if not lo + rho - 1e-12 <= x <= hi - rho + 1e-12:
            raise DesignPreconditionError(
                f"player {i}: {what} {x:g} is not within [L + rho, U - rho] = "
                f"[{lo + rho:g}, {hi - rho:g}]"
            )


def interior_design(
    original: NormalFormGame,
    target: Sequence[int],
    rho: float,
    anchor: Sequence[float] | None = None,
) -> NormalFormGame:
    """Time-invariant design around ``anchor`` (default: the original target losses).

    With ``d(a)`` the number of players on their target action, player ``i``
    gets ``anchor_i - (1 - d/M) rho`` when on target and ``anchor_i + (d/M) rho``
    otherwise.
    """
    target = check_profile(original, target)
    if not rho > 0:
        raise ValueError("rho must be positive")
    lo, hi = original.loss_lower, original.loss_upper
    if anchor is None:
        base = np.array(loss_at(original, target), dtype=np.float64)
        _check_interior(base, lo, hi, rho, "target loss")
    else:
        base = np.asarray(anchor, dtype=np.float64)
        if base.shape != (original.num_players,):
            raise ValueError("anchor needs one value per player")
        _check_interior(base, lo, hi, rho, "anchor value")
    m = original.num_players
    mask = target_mask(original, target)
    d = mask.sum(axis=-1, keepdims=True)
    on = base - (1.0 - d / m) * rho
    off = base + (d / m) * rho
    designed = np.clip(np.where(mask, on, off), lo, hi)
    return original.with_losses(designed)


def threshold(designed: NormalFormGame, original: NormalFormGame, target: Sequence[int]) -> NormalFormGame:
    """Cellwise min (target action) / max (other actions) against the original."""
    if designed.losses.shape != original.losses.shape:
        raise ValueError(
            f"shape mismatch: {designed.losses.shape} vs {original.losses.shape}"
        )
    mask = target_mask(original, target)
    out = np.where(
        mask,
        np.minimum(designed.losses, original.losses),
        np.maximum(designed.losses, original.losses),
    )
    return designed.with_losses(out)


def boundary_weight(t: int, alpha: float, epsilon: float) -> float:
    if t < 1:
        raise ValueError("rounds are numbered from 1")
    return float(t) ** (alpha + epsilon - 1.0)


def boundary_design(
    original: NormalFormGame,
    target: Sequence[int],
    v: Sequence[float],
    rho: float,
    alpha: float,
    epsilon: float,
    t: int,
) -> RedesignedRound:
    if not 0 < epsilon <= 1 - alpha + 1e-12:
        raise ValueError(f"epsilon must lie in (0, 1 - alpha], got {epsilon}")
    source = interior_design(original, target, rho, anchor=v)
    dest = np.array(loss_at(original, target), dtype=np.float64)
    w = boundary_weight(t, alpha, epsilon)
    return RedesignedRound(t, original.with_losses(w * source.losses + (1.0 - w) * dest), w)


def round_to_extremes(values: np.ndarray, lo: float, hi: float, u: np.ndarray) -> np.ndarray:
    """``hi`` where ``u < (x - lo) / (hi - lo)``, else ``lo``."""
    return np.where(u < (values - lo) / (hi - lo), hi, lo)


def discrete_design(
    continuous_round: RedesignedRound | NormalFormGame,
    loss_lower: float,
    loss_upper: float,
    rng: np.random.Generator,
) -> NormalFormGame:
    """Unbiased randomized rounding of every cell and player to {L, U}.

    Draws one uniform per (cell, player) in cell-index order.
    """
    game = continuous_round.game if isinstance(continuous_round, RedesignedRound) else continuous_round
    x = game.losses
    if x.min() < loss_lower - 1e-9 or x.max() > loss_upper + 1e-9:
        raise ValueError(f"losses must lie in [{loss_lower}, {loss_upper}]")
    u = rng.random(x.shape)
    return game.with_losses(round_to_extremes(x, loss_lower, loss_upper, u))


def resolve_v(spec: DesignerSpec, original: NormalFormGame) -> np.ndarray:
    lo, hi = original.loss_lower, original.loss_upper
    m = original.num_players
    if spec.v == "midpoint":
        return np.full(m, (lo + hi) / 2.0)
    if spec.v == "mean":
        mean = float(np.mean(loss_at(original, spec.target)))
        if not lo < mean < hi:
            raise DesignPreconditionError(
                f"mean target loss {mean:g} hits the boundary of [{lo:g}, {hi:g}]; use v='midpoint'"
            )
        return np.full(m, mean)
    v = np.asarray(spec.v, dtype=np.float64)
    if v.shape != (m,):
        raise ValueError(f"v needs {m} entries")
    return v


@dataclass(frozen=True, eq=False)
class KernelPlan:
    """Flat arrays the round loop needs to evaluate any cell of the round-t game."""

    blend: bool
    table: np.ndarray
    dest: np.ndarray
    original: np.ndarray
    on_target: np.ndarray
    thresholded: bool
    exponent: float
    discrete: bool
    loss_lower: float
    loss_upper: float


class RoundDesigner:
    """Per-trial designer with the time-invariant parts computed once."""

    def __init__(self, spec: DesignerSpec, original: NormalFormGame) -> None:
        self.spec = spec
        self.original = original
        self.target = check_profile(original, spec.target)
        lo, hi = original.loss_lower, original.loss_upper
        self.rho = spec.rho
        self.v: np.ndarray | None = None
        self._static: NormalFormGame | None = None
        self._source: NormalFormGame | None = None
        if spec.kind == "none":
            self._static = original
        elif spec.kind == "interior":
            game = interior_design(original, self.target, spec.rho)
            self._static = threshold(game, original, self.target) if spec.thresholded else game
        else:
            v = resolve_v(spec, original)
            room = float(min(np.min(v - lo), np.min(hi - v)))
            if not room > 0:
                raise DesignPreconditionError(f"v = {v.tolist()} is not inside (L, U)")
            self.rho = min(spec.rho, room)
            self.v = v
            self._source = interior_design(original, self.target, self.rho, anchor=v)
        self._dest = np.array(loss_at(original, self.target), dtype=np.float64)

    @property
    def time_varying(self) -> bool:
        return self._static is None

    def weight(self, t: int) -> float:
        if not self.time_varying:
            return 1.0
        return boundary_weight(t, self.spec.alpha, self.spec.epsilon)

    def continuous_at(self, t: int) -> NormalFormGame:
        if self._static is not None:
            return self._static
        w = self.weight(t)
        game = self.original.with_losses(w * self._source.losses + (1.0 - w) * self._dest)
        if self.spec.thresholded:
            game = threshold(game, self.original, self.target)
        return game

    def game_at(self, t: int, rng: np.random.Generator | None = None) -> NormalFormGame:
        game = self.continuous_at(t)
        if self.spec.kind == "discrete":
            if rng is None:
                raise ValueError("discrete design needs a random stream")
            game = discrete_design(game, self.original.loss_lower, self.original.loss_upper, rng)
        return game

    def kernel_plan(self) -> KernelPlan:
        orig = self.original
        m = orig.num_players
        ncell = orig.num_cells
        table = self._static if self._static is not None else self._source
        spec = self.spec
        return KernelPlan(
            blend=self.time_varying,
            table=np.ascontiguousarray(table.flat(), dtype=np.float64),
            dest=np.ascontiguousarray(self._dest),
            original=np.ascontiguousarray(orig.flat(), dtype=np.float64),
            on_target=np.ascontiguousarray(
                target_mask(orig, self.target).reshape(ncell, m), dtype=np.uint8
            ),
            thresholded=self.time_varying and spec.thresholded,
            exponent=spec.alpha + spec.epsilon - 1.0,
            discrete=spec.kind == "discrete",
            loss_lower=orig.loss_lower,
            loss_upper=orig.loss_upper,
        )


def make_round(
    spec: DesignerSpec,
    original: NormalFormGame,
    t: int,
    rng: np.random.Generator | None = None,
) -> NormalFormGame:
    """One-off round-t game. Use :class:`RoundDesigner` to reuse cached parts."""
    if t < 1:
        raise ValueError("rounds are numbered from 1")
    return RoundDesigner(spec, original).game_at(t, rng)


def dominance_floor(num_players: int, rho: float, weight: float = 1.0) -> float:
    """Guaranteed dominance margin ``(1 - 1/M) * rho * w``."""
    return (1.0 - 1.0 / num_players) * rho * weight


def max_target_deviation(loss_range: float, num_players: int, p: float, weight: float) -> float:
    scale = 1.0 if math.isinf(p) else num_players ** (1.0 / p)
    return loss_range * scale * weight
