"""Command-line front end: ``simulate``, ``design``, ``bounds`` and ``sweep-epsilon``.

Output files written by ``simulate`` into the output directory:

``trace_T<T>_trial<k>.csv``
    columns ``t,target_hit,round_cost,cumulative_cost`` (floats with 17
    significant digits).
``summary.json``
    per-horizon checkpoints (mean/std of every metric), bound values, slopes.
``loglog.csv``
    columns ``T,log10_T,log10_miss,log10_cost,log10_miss_bound,log10_cost_bound``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import BoundReport, boundary_bounds, interior_bounds
from .config import ConfigError, Experiment, load_config, output_dir, resolve
from .designer import DesignPreconditionError, RoundDesigner
from .game import NormalFormGame, to_document
from .harness import SimulationConfig, SimulationResult, run, sublinearity_slope, trial_streams

EXIT_OK = 0
EXIT_USAGE = 2
DEFAULT_EPS = (0.1, 0.2, 0.25, 0.3, 0.4)
TRACE_HEADER = "t,target_hit,round_cost,cumulative_cost"


def _fmt(x: float) -> str:
    return format(x, ".17g")


def bound_report(exp: Experiment, t: int, rho: float | None = None) -> BoundReport | None:
    """Bound for the experiment's designer at horizon ``t`` (None for kind 'none')."""
    spec = exp.designer
    game = exp.game
    if spec.kind == "none":
        return None
    if rho is None:
        rho = RoundDesigner(spec, game).rho
    args = (t, game.action_counts, rho, game.loss_range, exp.cost.lipschitz, exp.cost.p)
    if spec.kind == "interior":
        return interior_bounds(*args)
    return boundary_bounds(*args, alpha=spec.alpha, epsilon=spec.epsilon)


def simulation_config(exp: Experiment, horizon: int, keep_trace: bool = False) -> SimulationConfig:
    r = exp.run
    cps = None
    if r.checkpoints is not None:
        cps = tuple(c for c in r.checkpoints if c < horizon) + (horizon,)
    return SimulationConfig(
        game=exp.game,
        designer=exp.designer,
        horizon=horizon,
        cost=exp.cost,
        num_trials=r.trials,
        base_seed=r.seed,
        checkpoints=cps,
        keep_trace=keep_trace,
        policy_average=r.policy_average,
        workers=r.workers,
    )


def write_trace(path: Path, result_trial, target_index: int, game: NormalFormGame) -> None:
    strides = np.array(game.strides, dtype=np.int64)
    cells = result_trial.actions.astype(np.int64) @ strides
    hits = (cells == target_index).astype(np.int64)
    costs = result_trial.costs
    cumulative = np.cumsum(costs)
    with open(path, "w", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        fh.writelines(
            f"{t},{h},{_fmt(c)},{_fmt(cc)}\n"
            for t, h, c, cc in zip(range(1, len(costs) + 1), hits.tolist(), costs.tolist(), cumulative.tolist())
        )


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else float("nan")


def _run_entry(exp: Experiment, result: SimulationResult, rho: float) -> dict:
    checkpoints = result.summary()
    for row in checkpoints:
        rep = bound_report(exp, row["t"], rho)
        row["bounds"] = None if rep is None else {"miss": rep.miss_bound, "cost": rep.cost_bound}
    return {"T": result.config.horizon, "checkpoints": checkpoints}


def _slope_or_none(ts: list[int], ys: list[float]) -> float | None:
    try:
        return sublinearity_slope(ts, ys)
    except ValueError:
        return None


def cmd_simulate(args: argparse.Namespace) -> int:
    exp = _load(args)
    rho = RoundDesigner(exp.designer, exp.game).rho
    out = output_dir(exp.config, args.out)
    out.mkdir(parents=True, exist_ok=True)
    formats = set(exp.config.output.formats)
    runs = []
    finals = []
    for T in exp.run.T_list:
        result = run(simulation_config(exp, T, keep_trace="trace" in formats))
        if "trace" in formats:
            for tr in result.trials:
                write_trace(out / f"trace_T{T}_trial{tr.trial_index}.csv", tr, tr.target_index, exp.game)
        runs.append(_run_entry(exp, result, rho))
        final = runs[-1]["checkpoints"][-1]
        finals.append((T, final["miss_count"]["mean"], final["cost"]["mean"], final["bounds"]))
        print(
            f"T={T}: target fraction {final['target_fraction']['mean']:.4f}, "
            f"cost per round {final['cost_per_round']['mean']:.4f}"
        )
    ts = [f[0] for f in finals]
    summary = {
        "version": __version__,
        "designer": {**asdict(exp.designer), "rho_effective": rho},
        "cost": {"eta": exp.cost.lipschitz, "p": "inf" if math.isinf(exp.cost.p) else exp.cost.p},
        "seed": exp.run.seed,
        "trials": exp.run.trials,
        "runs": runs,
        "slopes": {
            "miss": _slope_or_none(ts, [f[1] for f in finals]),
            "cost": _slope_or_none(ts, [f[2] for f in finals]),
        },
    }
    if "summary" in formats:
        (out / "summary.json").write_text(json.dumps(summary, indent=2, allow_nan=False) + "\n")
    if "loglog" in formats:
        lines = ["T,log10_T,log10_miss,log10_cost,log10_miss_bound,log10_cost_bound"]
        for T, miss, cost, b in finals:
            mb = _log10(b["miss"]) if b else float("nan")
            cb = _log10(b["cost"]) if b else float("nan")
            lines.append(",".join([str(T)] + [_fmt(x) for x in (_log10(T), _log10(miss), _log10(cost), mb, cb)]))
        (out / "loglog.csv").write_text("\n".join(lines) + "\n")
    return EXIT_OK


def designed_game(exp: Experiment, t: int) -> NormalFormGame:
    """Round-t game as trial 0 of a simulation with the config's seed would see it."""
    designer = RoundDesigner(exp.designer, exp.game)
    rng = None
    if exp.designer.kind == "discrete":
        rng = trial_streams(exp.run.seed, 0, exp.game.num_players)[-1]
        skip = (t - 1) * exp.game.num_cells * exp.game.num_players
        while skip:
            n = min(skip, 1 << 20)
            rng.random(n)
            skip -= n
    return designer.game_at(t, rng)


def format_table(game: NormalFormGame) -> str:
    """Human-readable table, 4 decimals; two-player games as a matrix."""
    names = game.action_names or tuple(tuple(str(j) for j in range(k)) for k in game.action_counts)
    lines = []
    if game.num_players == 2:
        width = 8 * 2 + 4
        lines.append(" " * 10 + "".join(f"{n:>{width}}" for n in names[1]))
        for r, rn in enumerate(names[0]):
            cells = [", ".join(f"{x:.4f}" for x in game.losses[r, c]) for c in range(game.action_counts[1])]
            lines.append(f"{rn:>10}" + "".join(f"{s:>{width}}" for s in cells))
    else:
        for a in game.profiles():
            label = ",".join(names[i][x] for i, x in enumerate(a))
            lines.append(f"({label}): " + ", ".join(f"{x:.4f}" for x in game.losses[a]))
    return "\n".join(lines)


def cmd_design(args: argparse.Namespace) -> int:
    exp = _load(args)
    if args.t < 1:
        raise ConfigError("--t", "rounds are numbered from 1")
    game = designed_game(exp, args.t)
    if args.format == "table":
        print(format_table(game))
    else:
        print(json.dumps(to_document(game), indent=2))
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    exp = _load(args)
    if exp.designer.kind == "none":
        raise ConfigError("designer.kind", "no bound exists for kind 'none'")
    print(f"{'T':>12} {'miss_bound':>20} {'cost_bound':>20}")
    for T in exp.run.T_list:
        rep = bound_report(exp, T)
        print(f"{T:>12} {rep.miss_bound:>20.4f} {rep.cost_bound:>20.4f}")
    return EXIT_OK


def parse_eps(text: str | None) -> list[float]:
    if text is None:
        return list(DEFAULT_EPS)
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ConfigError("--eps", f"not a comma-separated list of numbers: {text!r}") from None


def sweep_epsilon(exp: Experiment, eps_list: Sequence[float]) -> list[dict]:
    """Final-checkpoint means for each valid epsilon and horizon; invalid entries warn and skip."""
    if exp.designer.kind not in ("boundary", "discrete"):
        raise ConfigError("designer.kind", "epsilon sweeps need the boundary or discrete design")
    rows = []
    for eps in eps_list:
        if not 0 < eps <= 1 - exp.designer.alpha + 1e-12:
            print(f"warning: skipping epsilon={eps}: outside (0, 1 - alpha]", file=sys.stderr)
            continue
        sub = replace(exp, designer=replace(exp.designer, epsilon=eps))
        for T in exp.run.T_list:
            final = _run_entry(sub, run(simulation_config(sub, T)), RoundDesigner(sub.designer, sub.game).rho)
            cp = final["checkpoints"][-1]
            rows.append(
                {
                    "epsilon": eps,
                    "T": T,
                    "miss": cp["miss_count"]["mean"],
                    "cost": cp["cost"]["mean"],
                    "log10_miss": _log10(cp["miss_count"]["mean"]),
                    "log10_cost": _log10(cp["cost"]["mean"]),
                }
            )
    return rows


def cmd_sweep_epsilon(args: argparse.Namespace) -> int:
    exp = _load(args)
    rows = sweep_epsilon(exp, parse_eps(args.eps))
    if not rows:
        raise ConfigError("--eps", "no valid epsilon values")
    out = output_dir(exp.config, args.out)
    out.mkdir(parents=True, exist_ok=True)
    keys = ["epsilon", "T", "miss", "cost", "log10_miss", "log10_cost"]
    with open(out / "sweep.csv", "w") as fh:
        fh.write(",".join(keys) + "\n")
        for r in rows:
            fh.write(",".join(str(r["T"]) if k == "T" else _fmt(r[k]) for k in keys) + "\n")
    print(f"{'epsilon':>8} {'T':>10} {'log10_miss':>12} {'log10_cost':>12}")
    for r in rows:
        print(f"{r['epsilon']:>8.4f} {r['T']:>10} {r['log10_miss']:>12.4f} {r['log10_cost']:>12.4f}")
    return EXIT_OK


def _load(args: argparse.Namespace) -> Experiment:
    cfg = load_config(args.config)
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed", "must be an unsigned 64-bit integer")
        cfg = cfg.model_copy(update={"run": cfg.run.model_copy(update={"seed": args.seed})})
    return resolve(cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gameredesign", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="YAML experiment config")
        p.add_argument("--seed", type=int, default=None, help="override run.seed")
        p.add_argument("--out", default=None, help="output directory override")

    p = sub.add_parser("simulate", help="run the experiment and write traces/summary")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("design", help="print the round-t redesigned game")
    common(p)
    p.add_argument("--t", type=int, default=1, help="round index (1-based)")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("bounds", help="print theoretical bounds for each T in run.T_list")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep-epsilon", help="miss count and cost across epsilon values")
    common(p)
    p.add_argument("--eps", default=None, help="comma-separated epsilons (default 0.1,0.2,0.25,0.3,0.4)")
    p.set_defaults(func=cmd_sweep_epsilon)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DesignPreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
