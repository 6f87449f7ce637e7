"""Command-line interface.

``run`` trains one algorithm and writes its outputs; ``compare``
cross-evaluates finished run directories. Exit codes: 0 success, 1 usage or
configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .config import ALGORITHMS, ConfigError, RunConfig, load_config


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qrlbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="train one algorithm and write run files")
    run_p.add_argument("--algo", choices=ALGORITHMS, help="algorithm to train")
    run_p.add_argument("--episodes", type=int, help="number of training episodes")
    run_p.add_argument("--seed", type=int, help="run seed")
    run_p.add_argument("--grid", type=int, dest="grid_size", help="grid side length")
    run_p.add_argument("--obstacle-rate", type=float, help="fraction of cells that are obstacles")
    run_p.add_argument("--max-steps", type=int, help="step cap per episode")
    run_p.add_argument("--config", help="config file (key = value lines); flags override it")
    run_p.add_argument("--out", dest="output_dir", help="output directory")
    run_p.add_argument(
        "--use-attention-memory",
        action="store_const",
        const=True,
        default=None,
        help="feed the gated attention memory to the quantum agent",
    )

    cmp_p = sub.add_parser("compare", help="compare finished run directories")
    cmp_p.add_argument("run_dirs", nargs="+", help="directories containing episodes.csv")
    cmp_p.add_argument("--out", default="comparison.json", help="report path")
    return parser


_RUN_FLAGS = (
    "algo",
    "episodes",
    "seed",
    "grid_size",
    "obstacle_rate",
    "max_steps",
    "output_dir",
    "use_attention_memory",
)


def _resolve_run_config(args) -> RunConfig:
    overrides = {
        name: getattr(args, name)
        for name in _RUN_FLAGS
        if getattr(args, name) is not None
    }
    if args.config is not None:
        return load_config(args.config, overrides)
    config = RunConfig(**overrides)
    config.validate()
    return config


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            config = _resolve_run_config(args)
            result = harness.run_experiment(config)
            summary = result.summary
            print(
                f"{config.algo}: {summary.total_episodes} episodes, "
                f"success rate {summary.success_rate:.4f}, "
                f"mean reward {summary.mean_reward_all:.4f}, "
                f"{summary.wall_clock_seconds:.1f}s"
            )
            print(f"outputs written to {result.out_dir}")
        else:
            report = harness.compare_runs(args.run_dirs, out_path=args.out)
            print(report["table"])
            print(f"report written to {args.out}")
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except harness.DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
