"""Time the compiled and pure-Python round loops on the same trials and check they agree.

    python3 benchmarks/bench_kernel.py [--rounds 20000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from gameredesign.catalog import make_pd, make_rps, make_tc, make_vd
from gameredesign.harness import SimulationConfig, run_trial
from gameredesign.kernel import BACKENDS


def cases():
    rps_d = make_rps(kind="discrete")
    yield "vd (M=3, interior)", make_vd(3)
    yield "pd (interior)", make_pd()
    yield "tc (16x16, interior)", make_tc()
    yield "rps (boundary)", make_rps()
    yield "rps (discrete)", rps_d


def best_time(cfg, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = run_trial(cfg, 0)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = sorted(BACKENDS)
    print(f"backends: {backends}; {args.rounds} rounds per trial, best of {args.repeat}")
    print(f"{'game':<22}" + "".join(f"{b + ' rounds/s':>20}" for b in backends) + f"{'speedup':>10}{'identical':>11}")
    for name, preset in cases():
        times, results = {}, {}
        for b in backends:
            cfg = SimulationConfig(
                preset.game, preset.designer, args.rounds, num_trials=1, keep_trace=True, backend=b
            )
            times[b], results[b] = best_time(cfg, args.repeat)
        same = all(
            np.array_equal(results[b].actions, results[backends[0]].actions)
            and np.array_equal(results[b].costs, results[backends[0]].costs)
            for b in backends
        )
        speed = f"{times['python'] / times['cython']:.0f}x" if "cython" in times else "n/a"
        print(
            f"{name:<22}"
            + "".join(f"{args.rounds / times[b]:>20,.0f}" for b in backends)
            + f"{speed:>10}{str(same):>11}"
        )


if __name__ == "__main__":
    main()
