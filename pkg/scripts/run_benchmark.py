#!/usr/bin/env python3
"""Run the full benchmark protocol: train every algorithm, then compare.

Trains ardns, dqn, and ppo with a shared seed (identical obstacle layouts),
writes each run's outputs under --out, and emits comparison.json plus the
metric table. Defaults mirror the full protocol (20000 episodes); pass
--episodes for a desk-scale pass.

Example:
    python scripts/run_benchmark.py --episodes 2000 --seed 42 --out runs/desk
"""

import argparse
import sys
from pathlib import Path

from qrlbench.config import ALGORITHMS, RunConfig
from qrlbench.harness import compare_runs, run_experiment


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--episodes", type=int, default=20000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", default="runs/benchmark")
    parser.add_argument(
        "--algos", nargs="+", default=list(ALGORITHMS), choices=ALGORITHMS
    )
    args = parser.parse_args(argv)

    base = Path(args.out)
    run_dirs = []
    for algo in args.algos:
        config = RunConfig(
            algo=algo,
            episodes=args.episodes,
            seed=args.seed,
            output_dir=str(base / algo),
        )
        result = run_experiment(config)
        run_dirs.append(result.out_dir)
        summary = result.summary
        print(
            f"{algo}: success rate {summary.success_rate:.4f}, "
            f"mean reward {summary.mean_reward_all:.4f}, "
            f"variance {summary.reward_variance_all:.3f}, "
            f"{summary.wall_clock_seconds:.1f}s"
        )

    if len(run_dirs) >= 2:
        report = compare_runs(run_dirs, out_path=base / "comparison.json")
        print()
        print(report["table"])
        print(f"\nreport written to {base / 'comparison.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
