"""The four experiment games and their default designers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .designer import DesignerSpec
from .game import NormalFormGame, check_profile

VOLUNTEER, ABSTAIN = 0, 1
MUM, FINK = 0, 1
ROCK, PAPER, SCISSORS = 0, 1, 2


@dataclass(frozen=True, eq=False)
class GamePreset:
    id: str
    game: NormalFormGame
    target: tuple[int, ...]
    designer: DesignerSpec

    def __post_init__(self) -> None:
        check_profile(self.game, self.target)


def make_vd(num_players: int = 3) -> GamePreset:
    """Volunteer's dilemma: free-riding pays -1 unless nobody volunteers (10 each)."""
    if num_players < 2:
        raise ValueError("volunteer's dilemma needs at least 2 players")
    shape = (2,) * num_players
    losses = np.zeros((*shape, num_players))
    for a in np.ndindex(*shape):
        anyone = VOLUNTEER in a
        for i, ai in enumerate(a):
            if ai == ABSTAIN:
                losses[a + (i,)] = -1.0 if anyone else 10.0
    game = NormalFormGame(
        losses, -1.0, 10.0, action_names=(("volunteer", "abstain"),) * num_players
    )
    target = (VOLUNTEER,) * num_players
    spec = DesignerSpec("interior", target, rho=1.0, thresholded=True)
    return GamePreset("vd", game, target, spec)


def make_tc() -> GamePreset:
    """Tragedy of the commons: two farmers graze 0..15 sheep; price sqrt(30 - total)."""
    n = 16
    losses = np.zeros((n, n, 2))
    for a1 in range(n):
        for a2 in range(n):
            price = math.sqrt(30 - a1 - a2)
            losses[a1, a2, 0] = -a1 * price
            losses[a1, a2, 1] = -a2 * price
    game = NormalFormGame(losses, -15.0 * math.sqrt(15.0), 0.0)
    target = (10, 10)
    spec = DesignerSpec("interior", target, rho=1.0, thresholded=True)
    return GamePreset("tc", game, target, spec)


def make_pd() -> GamePreset:
    losses = np.array(
        [
            [[2.0, 2.0], [5.0, 1.0]],
            [[1.0, 5.0], [4.0, 4.0]],
        ]
    )
    game = NormalFormGame(losses, 1.0, 5.0, action_names=(("mum", "fink"),) * 2)
    target = (MUM, MUM)
    spec = DesignerSpec("interior", target, rho=1.0, thresholded=True)
    return GamePreset("pd", game, target, spec)


def rps_game() -> NormalFormGame:
    # row beats column -> row loss -1
    beats = {(ROCK, SCISSORS), (PAPER, ROCK), (SCISSORS, PAPER)}
    losses = np.zeros((3, 3, 2))
    for r in range(3):
        for c in range(3):
            if (r, c) in beats:
                losses[r, c] = (-1.0, 1.0)
            elif (c, r) in beats:
                losses[r, c] = (1.0, -1.0)
    return NormalFormGame(
        losses, -1.0, 1.0, natural_values=(-1.0, 0.0, 1.0), action_names=(("R", "P", "S"),) * 2
    )


def make_rps(epsilon: float = 0.3, kind: str = "boundary") -> GamePreset:
    if kind not in ("boundary", "discrete"):
        raise ValueError("RPS presets use the boundary or discrete design")
    target = (ROCK, PAPER)
    spec = DesignerSpec(kind, target, rho=1.0, v=(0.0, 0.0), alpha=0.5, epsilon=epsilon)
    return GamePreset("rps", rps_game(), target, spec)


PRESETS: dict[str, Callable[..., GamePreset]] = {
    "vd": make_vd,
    "tc": make_tc,
    "pd": make_pd,
    "rps": make_rps,
}


def get_preset(preset_id: str, **params) -> GamePreset:
    try:
        factory = PRESETS[preset_id.lower()]
    except KeyError:
        raise ValueError(f"unknown preset {preset_id!r}; choose from {sorted(PRESETS)}") from None
    return factory(**params)
