"""Experiment config files (YAML) and their translation into library objects."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .catalog import GamePreset, get_preset
from .cost import CostModel
from .designer import DesignerSpec
from .game import NormalFormGame, from_document

OUT_ENV = "GAMEREDESIGN_OUT"
OUTPUT_FORMATS = ("trace", "summary", "loglog")


class ConfigError(ValueError):
    """Invalid experiment config; ``field`` is the dotted path of the culprit."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PresetRef(_Strict):
    preset: Literal["vd", "tc", "pd", "rps"]
    players: int | None = Field(default=None, ge=2)


class GameDocument(_Strict):
    players: int = Field(ge=1)
    action_counts: list[int]
    loss_table: list
    L: float
    U: float
    natural_values: list[float] | None = None
    action_names: list[list[str]] | None = None


class DesignerSection(_Strict):
    kind: Literal["interior", "boundary", "discrete", "none"]
    rho: float | None = Field(default=None, gt=0)
    target: list[int] | None = None
    v: Union[Literal["midpoint", "mean"], list[float], None] = None
    alpha: float | None = Field(default=None, ge=0, lt=1)
    epsilon: float | None = Field(default=None, gt=0)
    thresholded: bool | None = None


class CostSection(_Strict):
    eta: float = Field(default=1.0, gt=0)
    p: Union[float, Literal["inf"]] = 1.0


class RunSection(_Strict):
    T_list: list[int] = Field(min_length=1)
    trials: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    checkpoints: list[int] | None = None
    workers: int = Field(default=1, ge=1)
    policy_average: Literal["probability", "empirical"] = "probability"


class OutputSection(_Strict):
    directory: str = "out"
    formats: list[Literal["trace", "summary", "loglog"]] = Field(
        default_factory=lambda: list(OUTPUT_FORMATS)
    )


class ExperimentConfig(_Strict):
    game: Union[Literal["vd", "tc", "pd", "rps"], PresetRef, GameDocument]
    designer: DesignerSection | None = None
    cost: CostSection = Field(default_factory=CostSection)
    run: RunSection
    output: OutputSection = Field(default_factory=OutputSection)


def _loc(loc: tuple) -> str:
    # drop union-member tags such as "PresetRef" or "literal['vd',...]"
    parts = [str(p) for p in loc if not (isinstance(p, str) and (p[:1].isupper() or "[" in p))]
    return ".".join(parts)


def parse_config(data: Any) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("", "config must be a mapping")
    try:
        cfg = ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise ConfigError(_loc(err["loc"]), err["msg"]) from None
    d = cfg.designer
    if d is not None and d.kind != "none" and d.rho is None:
        raise ConfigError("designer.rho", "required for designer kind " + repr(d.kind))
    if any(t < 1 for t in cfg.run.T_list):
        raise ConfigError("run.T_list", "every horizon must be >= 1")
    if isinstance(cfg.game, GameDocument) and (d is None or d.target is None):
        raise ConfigError("designer.target", "required with an inline game")
    cps = cfg.run.checkpoints
    if cps is not None and any(b <= a for a, b in zip(cps, cps[1:])):
        raise ConfigError("run.checkpoints", "must be strictly increasing")
    return cfg


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("", f"not valid YAML: {exc}") from None
    return parse_config(data)


@dataclass(frozen=True, eq=False)
class Experiment:
    """A config resolved into a game, a designer and run settings."""

    config: ExperimentConfig
    game: NormalFormGame
    designer: DesignerSpec
    cost: CostModel

    @property
    def run(self) -> RunSection:
        return self.config.run


def _resolve_game(cfg: ExperimentConfig) -> tuple[NormalFormGame, DesignerSpec | None]:
    g = cfg.game
    if isinstance(g, str):
        preset: GamePreset = get_preset(g)
    elif isinstance(g, PresetRef):
        params = {}
        if g.players is not None:
            if g.preset != "vd":
                raise ConfigError("game.players", "only the vd preset takes a player count")
            params["num_players"] = g.players
        preset = get_preset(g.preset, **params)
    else:
        try:
            return from_document(g.model_dump(exclude_none=True)), None
        except ValueError as exc:
            raise ConfigError("game", str(exc)) from None
    return preset.game, preset.designer


def resolve(cfg: ExperimentConfig) -> Experiment:
    game, base = _resolve_game(cfg)
    d = cfg.designer
    if d is None:
        spec = base
    else:
        given = {f.name: getattr(d, f.name) for f in fields(DesignerSpec) if getattr(d, f.name, None) is not None}
        if "v" in given and not isinstance(given["v"], str):
            given["v"] = tuple(given["v"])
        if "target" in given:
            given["target"] = tuple(given["target"])
        try:
            spec = replace(base, **given) if base is not None else DesignerSpec(**given)
        except (TypeError, ValueError) as exc:
            raise ConfigError("designer", str(exc)) from None
    p = math.inf if cfg.cost.p == "inf" else float(cfg.cost.p)
    try:
        cost = CostModel(cfg.cost.eta, p)
    except ValueError as exc:
        raise ConfigError("cost.p", str(exc)) from None
    return Experiment(cfg, game, spec, cost)


def output_dir(cfg: ExperimentConfig, override: str | None = None) -> Path:
    """``--out`` beats the environment variable, which beats the config."""
    return Path(override or os.environ.get(OUT_ENV) or cfg.output.directory)
