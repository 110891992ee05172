"""Run the redesign protocol: design the round, sample, feed back, charge cost.

Randomness: trial ``k`` of a run with ``base_seed`` owns the seed sequence
``SeedSequence(base_seed, spawn_key=(k,))``, split into one Philox stream per
player (action sampling, one uniform per round) and one for the designer
(``num_cells * M`` uniforms per round, discrete design only). Uniforms are
drawn in blocks, and a block of ``n`` draws yields the same numbers as ``n``
single draws, so results do not depend on the chunk size or the backend.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .cost import CostModel
from .designer import DesignerSpec, RoundDesigner
from .game import NormalFormGame
from .kernel import get_backend
from .learner import RENORM_EVERY, PlayerTrace, exp3p_init

DEFAULT_CHECKPOINTS = (10**4, 10**5, 10**6, 10**7)
METRICS = ("target_count", "miss_count", "target_fraction", "cost", "cost_per_round")


def default_checkpoints(horizon: int) -> tuple[int, ...]:
    grid = [c for c in DEFAULT_CHECKPOINTS if c <= horizon]
    if not grid or grid[-1] != horizon:
        grid.append(horizon)
    return tuple(grid)


@dataclass(frozen=True, eq=False)
class SimulationConfig:
    game: NormalFormGame
    designer: DesignerSpec
    horizon: int
    cost: CostModel = field(default_factory=CostModel)
    num_trials: int = 5
    base_seed: int = 0
    checkpoints: tuple[int, ...] | None = None
    record_rows: bool = False
    keep_trace: bool = False
    policy_average: Literal["probability", "empirical"] = "probability"
    chunk_size: int = 1 << 16
    backend: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.num_trials < 1:
            raise ValueError("num_trials must be >= 1")
        if self.base_seed < 0:
            raise ValueError("base_seed must be a nonnegative integer")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if self.policy_average not in ("probability", "empirical"):
            raise ValueError("policy_average must be 'probability' or 'empirical'")
        if self.checkpoints is not None:
            cps = tuple(int(c) for c in self.checkpoints)
            if not cps or any(b <= a for a, b in zip(cps, cps[1:])):
                raise ValueError("checkpoints must be strictly increasing")
            if cps[0] < 1 or cps[-1] > self.horizon:
                raise ValueError("checkpoints must lie in [1, horizon]")
            object.__setattr__(self, "checkpoints", cps)

    def checkpoint_grid(self) -> tuple[int, ...]:
        return self.checkpoints if self.checkpoints is not None else default_checkpoints(self.horizon)


@dataclass(frozen=True, eq=False)
class Checkpoint:
    t: int
    target_count: int
    cost: float
    regret: tuple[float, ...]
    probability_policy: tuple[np.ndarray, ...]
    profile_counts: np.ndarray

    @property
    def miss_count(self) -> int:
        return self.t - self.target_count

    @property
    def target_fraction(self) -> float:
        return self.target_count / self.t

    @property
    def cost_per_round(self) -> float:
        return self.cost / self.t

    def empirical_policy(self, action_counts: Sequence[int]) -> tuple[np.ndarray, ...]:
        joint = self.profile_counts.reshape(tuple(action_counts))
        m = len(action_counts)
        out = []
        for i in range(m):
            axes = tuple(j for j in range(m) if j != i)
            out.append(joint.sum(axis=axes) / self.t)
        return tuple(out)


@dataclass(eq=False)
class TrialResult:
    trial_index: int
    target_index: int
    checkpoints: list[Checkpoint]
    actions: np.ndarray | None = None
    costs: np.ndarray | None = None
    rows: list[np.ndarray] | None = None

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    def target_hits(self, target: Sequence[int]) -> np.ndarray:
        if self.actions is None:
            raise ValueError("trial was run without keep_trace")
        return np.all(self.actions == np.asarray(target, dtype=np.int32), axis=1)

    def player_trace(self, player: int) -> PlayerTrace:
        if self.rows is None or self.actions is None:
            raise ValueError("trial was run without record_rows")
        trace = PlayerTrace()
        for a, row in zip(self.actions[:, player], self.rows[player]):
            trace.append(int(a), row)
        return trace


@dataclass(eq=False)
class SimulationResult:
    config: SimulationConfig
    trials: list[TrialResult]

    @property
    def checkpoint_times(self) -> tuple[int, ...]:
        return tuple(c.t for c in self.trials[0].checkpoints)

    def series(self, metric: str) -> np.ndarray:
        """``(num_trials, num_checkpoints)`` array of one scalar metric."""
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
        return np.array(
            [[float(getattr(c, metric)) for c in tr.checkpoints] for tr in self.trials]
        )

    def mean(self, metric: str) -> np.ndarray:
        return self.series(metric).mean(axis=0)

    def std(self, metric: str) -> np.ndarray:
        s = self.series(metric)
        if s.shape[0] < 2:
            return np.zeros(s.shape[1])
        return s.std(axis=0, ddof=1)

    def regret(self) -> np.ndarray:
        """``(num_trials, num_checkpoints, M)`` per-player regret."""
        return np.array([[c.regret for c in tr.checkpoints] for tr in self.trials])

    def mean_policy(self, mode: str | None = None) -> list[list[np.ndarray]]:
        """Per checkpoint, per player: averaged policy, mean over trials."""
        mode = mode or self.config.policy_average
        counts = self.config.game.action_counts
        out = []
        for j in range(len(self.checkpoint_times)):
            per_trial = []
            for tr in self.trials:
                cp = tr.checkpoints[j]
                per_trial.append(
                    cp.probability_policy if mode == "probability" else cp.empirical_policy(counts)
                )
            out.append([np.mean([p[i] for p in per_trial], axis=0) for i in range(len(counts))])
        return out

    def summary(self) -> list[dict]:
        regret = self.regret()
        policy = self.mean_policy()
        rows = []
        for j, t in enumerate(self.checkpoint_times):
            row: dict = {"t": t}
            for metric in METRICS:
                row[metric] = {
                    "mean": float(self.mean(metric)[j]),
                    "std": float(self.std(metric)[j]),
                }
            reg = regret[:, j, :]
            row["regret"] = {
                "mean": reg.mean(axis=0).tolist(),
                "std": (reg.std(axis=0, ddof=1) if len(self.trials) > 1 else np.zeros(reg.shape[1])).tolist(),
            }
            row["average_policy"] = [p.tolist() for p in policy[j]]
            rows.append(row)
        return rows


def trial_streams(base_seed: int, trial_index: int, num_players: int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(base_seed, spawn_key=(trial_index,))
    return [np.random.Generator(np.random.Philox(c)) for c in ss.spawn(num_players + 1)]


def run_trial(config: SimulationConfig, trial_index: int) -> TrialResult:
    game = config.game
    designer = RoundDesigner(config.designer, game)
    plan = designer.kernel_plan()
    backend = get_backend(config.backend)

    m = game.num_players
    counts = game.action_counts
    kmax = max(counts)
    ncell = game.num_cells
    T = config.horizon
    learners = [exp3p_init(k, T, game.loss_lower, game.loss_upper) for k in counts]
    gamma = np.array([s.gamma for s in learners])
    beta = np.array([s.beta for s in learners])
    eta_lr = np.array([s.eta for s in learners])
    logw = np.zeros((m, kmax))
    cum_probs = np.zeros((m, kmax))
    cf_sums = np.zeros((m, kmax))
    realized = np.zeros(m)
    profile_counts = np.zeros(ncell, dtype=np.int64)
    cum_cost = np.zeros(1)
    counts_arr = np.array(counts, dtype=np.int64)
    strides_arr = np.array(game.strides, dtype=np.int64)
    streams = trial_streams(config.base_seed, trial_index, m)
    target_index = game.cell_index(designer.target)

    keep = config.keep_trace or config.record_rows
    all_actions = np.empty((T, m), dtype=np.int32) if keep else None
    all_costs = np.empty(T) if keep else None
    rows = np.zeros((T, m, kmax)) if config.record_rows else np.zeros((1, 1, 1))
    no_design_u = np.zeros((1, 1, 1))

    checkpoints: list[Checkpoint] = []
    done = 0
    for cp in config.checkpoint_grid():
        while done < cp:
            n = min(config.chunk_size, cp - done)
            u_play = np.empty((n, m))
            for i in range(m):
                u_play[:, i] = streams[i].random(n)
            u_design = streams[m].random((n, ncell, m)) if plan.discrete else no_design_u
            out_actions = all_actions[done : done + n] if keep else np.empty((n, m), dtype=np.int32)
            out_cost = all_costs[done : done + n] if keep else np.empty(n)
            out_rows = rows[done : done + n] if config.record_rows else rows
            backend.run_chunk(
                plan.table,
                plan.dest,
                plan.original,
                plan.on_target,
                plan.blend,
                plan.thresholded,
                plan.exponent,
                plan.discrete,
                plan.loss_lower,
                plan.loss_upper,
                counts_arr,
                strides_arr,
                gamma,
                beta,
                eta_lr,
                logw,
                cum_probs,
                cf_sums,
                realized,
                profile_counts,
                cum_cost,
                config.cost.lipschitz,
                float(config.cost.p),
                done,
                RENORM_EVERY,
                u_play,
                u_design,
                out_actions,
                out_cost,
                config.record_rows,
                out_rows,
            )
            done += n
        regret = tuple(
            float(realized[i] - cf_sums[i, : counts[i]].min()) for i in range(m)
        )
        checkpoints.append(
            Checkpoint(
                t=cp,
                target_count=int(profile_counts[target_index]),
                cost=float(cum_cost[0]),
                regret=regret,
                probability_policy=tuple(cum_probs[i, : counts[i]] / cp for i in range(m)),
                profile_counts=profile_counts.copy(),
            )
        )
    per_player_rows = (
        [rows[:, i, : counts[i]].copy() for i in range(m)] if config.record_rows else None
    )
    return TrialResult(
        trial_index=trial_index,
        target_index=target_index,
        checkpoints=checkpoints,
        actions=all_actions,
        costs=all_costs,
        rows=per_player_rows,
    )


def _run_one(args: tuple[SimulationConfig, int]) -> TrialResult:
    return run_trial(*args)


def run(config: SimulationConfig) -> SimulationResult:
    """All trials of a config; trials are independent and may run in worker processes."""
    # fail on a bad designer before spawning anything
    RoundDesigner(config.designer, config.game)
    jobs = [(config, k) for k in range(config.num_trials)]
    if config.workers > 1 and config.num_trials > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            trials = list(pool.map(_run_one, jobs))
    else:
        trials = [_run_one(j) for j in jobs]
    trials.sort(key=lambda tr: tr.trial_index)
    return SimulationResult(config, trials)


def sublinearity_slope(horizons: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(value) against log(T); nonpositive values are dropped."""
    if len(horizons) != len(values):
        raise ValueError("horizons and values differ in length")
    if len(horizons) < 3:
        raise ValueError("need at least 3 grid points")
    pts = [(math.log(t), math.log(v)) for t, v in zip(horizons, values) if v > 0 and t > 0]
    if len(pts) < 2:
        raise ValueError("fewer than 2 positive points remain")
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
