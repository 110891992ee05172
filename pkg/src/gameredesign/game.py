"""Finite normal-form games with vector-valued losses."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

DEFAULT_TOL = 1e-9

ActionProfile = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class NormalFormGame:
    """Dense joint-loss tensor of shape ``(*action_counts, M)``.

    ``losses[a][i]`` is player ``i``'s loss at profile ``a``. Profiles are
    enumerated row-major (last player varies fastest), so the flat cell index
    of ``a`` is the mixed-radix number ``sum(a_i * stride_i)``.
    """

    losses: np.ndarray
    loss_lower: float
    loss_upper: float
    natural_values: tuple[float, ...] | None = None
    action_names: tuple[tuple[str, ...], ...] | None = None
    _strides: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        losses = np.array(self.losses, dtype=np.float64)
        if losses.ndim < 2:
            raise ValueError("losses must have shape (*action_counts, num_players)")
        m = losses.ndim - 1
        if losses.shape[-1] != m:
            raise ValueError(
                f"last axis has length {losses.shape[-1]}, expected one loss per player ({m})"
            )
        if any(n < 1 for n in losses.shape[:-1]):
            raise ValueError("every player needs at least one action")
        lo, hi = float(self.loss_lower), float(self.loss_upper)
        if not hi > lo:
            raise ValueError(f"need U > L, got L={lo}, U={hi}")
        if not np.all(np.isfinite(losses)):
            raise ValueError("losses must be finite")
        if losses.min() < lo - DEFAULT_TOL or losses.max() > hi + DEFAULT_TOL:
            raise ValueError(
                f"losses span [{losses.min()}, {losses.max()}], outside [L, U] = [{lo}, {hi}]"
            )
        nat = self.natural_values
        if nat is not None:
            nat = tuple(sorted(float(x) for x in set(nat)))
            if nat[0] != lo or nat[-1] != hi:
                raise ValueError("natural_values must have min L and max U")
        names = self.action_names
        if names is not None:
            names = tuple(tuple(str(s) for s in row) for row in names)
            if tuple(len(r) for r in names) != losses.shape[:-1]:
                raise ValueError("action_names must match action_counts")
        losses.setflags(write=False)
        strides = [1] * m
        for i in range(m - 2, -1, -1):
            strides[i] = strides[i + 1] * losses.shape[i + 1]
        object.__setattr__(self, "losses", losses)
        object.__setattr__(self, "loss_lower", lo)
        object.__setattr__(self, "loss_upper", hi)
        object.__setattr__(self, "natural_values", nat)
        object.__setattr__(self, "action_names", names)
        object.__setattr__(self, "_strides", tuple(strides))

    @property
    def num_players(self) -> int:
        return self.losses.ndim - 1

    @property
    def action_counts(self) -> tuple[int, ...]:
        return tuple(int(n) for n in self.losses.shape[:-1])

    @property
    def num_cells(self) -> int:
        return math.prod(self.action_counts)

    @property
    def loss_range(self) -> float:
        return self.loss_upper - self.loss_lower

    @property
    def strides(self) -> tuple[int, ...]:
        return self._strides

    def flat(self) -> np.ndarray:
        """Losses as a ``(num_cells, M)`` view in profile-index order."""
        return self.losses.reshape(self.num_cells, self.num_players)

    def cell_index(self, a: Sequence[int]) -> int:
        a = check_profile(self, a)
        return sum(x * s for x, s in zip(a, self._strides))

    def profile(self, index: int) -> ActionProfile:
        if not 0 <= index < self.num_cells:
            raise ValueError(f"cell index {index} out of range")
        return tuple(int(x) for x in np.unravel_index(index, self.action_counts))

    def profiles(self):
        """Iterate all action profiles in cell-index order."""
        return np.ndindex(*self.action_counts)

    def with_losses(self, losses: np.ndarray) -> "NormalFormGame":
        """Same shape, range and labels with a new loss tensor."""
        return NormalFormGame(
            losses,
            self.loss_lower,
            self.loss_upper,
            natural_values=self.natural_values,
            action_names=self.action_names,
        )


def check_profile(game: NormalFormGame, a: Sequence[int]) -> ActionProfile:
    a = tuple(int(x) for x in a)
    if len(a) != game.num_players:
        raise ValueError(f"profile {a} has {len(a)} entries, game has {game.num_players} players")
    for i, (x, n) in enumerate(zip(a, game.action_counts)):
        if not 0 <= x < n:
            raise ValueError(f"action {x} of player {i} out of range [0, {n})")
    return a


def loss_at(game: NormalFormGame, a: Sequence[int]) -> np.ndarray:
    """Loss vector of profile ``a`` (a read-only view)."""
    return game.losses[check_profile(game, a)]


def match_count(a: Sequence[int], target: Sequence[int]) -> int:
    """Number of coordinates where ``a`` agrees with ``target``."""
    if len(a) != len(target):
        raise ValueError(f"length mismatch: {len(a)} vs {len(target)}")
    return sum(1 for x, y in zip(a, target) if int(x) == int(y))


def target_mask(game: NormalFormGame, target: Sequence[int]) -> np.ndarray:
    """Boolean ``(*action_counts, M)`` array: does player i play its target action?"""
    target = check_profile(game, target)
    mask = np.empty(game.losses.shape, dtype=bool)
    for i, ti in enumerate(target):
        shape = [1] * game.num_players
        shape[i] = game.action_counts[i]
        hit = (np.arange(game.action_counts[i]) == ti).reshape(shape)
        mask[..., i] = np.broadcast_to(hit, game.action_counts)
    return mask


def is_zero_sum(game: NormalFormGame, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(np.all(np.abs(game.losses.sum(axis=-1)) <= tol))


def dominance_gap(game: NormalFormGame, player: int, target_action: int) -> float:
    """Smallest margin by which ``target_action`` beats every alternative.

    Minimum over opponent profiles and alternatives ``b != target_action`` of
    ``loss_i(b, a_-i) - loss_i(target_action, a_-i)``. Positive means strict
    dominance. A player with a single action has no alternative to beat and
    gets ``math.inf``.
    """
    if not 0 <= player < game.num_players:
        raise ValueError(f"player {player} out of range")
    k = game.action_counts[player]
    if not 0 <= target_action < k:
        raise ValueError(f"action {target_action} out of range for player {player}")
    if k == 1:
        return math.inf
    own = np.moveaxis(game.losses[..., player], player, 0)
    diff = own - own[target_action]
    others = np.delete(diff, target_action, axis=0)
    return float(others.min())


def to_document(game: NormalFormGame) -> dict[str, Any]:
    """Plain-data form of a game (the serialization used by configs and the CLI)."""
    doc: dict[str, Any] = {
        "players": game.num_players,
        "action_counts": list(game.action_counts),
        "loss_table": game.losses.tolist(),
        "L": game.loss_lower,
        "U": game.loss_upper,
    }
    if game.natural_values is not None:
        doc["natural_values"] = list(game.natural_values)
    if game.action_names is not None:
        doc["action_names"] = [list(r) for r in game.action_names]
    return doc


def from_document(doc: dict[str, Any]) -> NormalFormGame:
    allowed = {"players", "action_counts", "loss_table", "L", "U", "natural_values", "action_names"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown game fields: {sorted(unknown)}")
    missing = {"players", "action_counts", "loss_table", "L", "U"} - set(doc)
    if missing:
        raise ValueError(f"missing game fields: {sorted(missing)}")
    counts = tuple(int(n) for n in doc["action_counts"])
    m = int(doc["players"])
    if len(counts) != m:
        raise ValueError("action_counts length must equal players")
    table = np.asarray(doc["loss_table"], dtype=np.float64)
    if table.shape != (*counts, m):
        raise ValueError(f"loss_table has shape {table.shape}, expected {(*counts, m)}")
    nat = doc.get("natural_values")
    names = doc.get("action_names")
    return NormalFormGame(
        table,
        doc["L"],
        doc["U"],
        natural_values=None if nat is None else tuple(nat),
        action_names=None if names is None else tuple(tuple(r) for r in names),
    )
