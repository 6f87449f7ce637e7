#!/usr/bin/env python3
"""Plot learning curves and reward histograms from finished run directories.

Reads learning_curve.csv and reward_hist.csv from each run directory and
writes learning_curves.png and reward_hist.png. Requires matplotlib.

Example:
    python scripts/plot_curves.py runs/benchmark/ardns runs/benchmark/dqn \
        runs/benchmark/ppo --out runs/benchmark
"""

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv_columns(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        columns = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                columns[name].append(float(value))
    return columns


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("run_dirs", nargs="+")
    parser.add_argument("--out", default=".")
    args = parser.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for run_dir in args.run_dirs:
        run_dir = Path(run_dir)
        curve = read_csv_columns(run_dir / "learning_curve.csv")
        ax.plot(curve["episode"], curve["smoothed_reward"], label=run_dir.name)
    ax.set_xlabel("episode")
    ax.set_ylabel("smoothed reward")
    ax.legend()
    ax.set_title("Learning curves")
    fig.tight_layout()
    fig.savefig(out / "learning_curves.png", dpi=150)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = 1.0 / (len(args.run_dirs) + 1)
    for i, run_dir in enumerate(args.run_dirs):
        run_dir = Path(run_dir)
        hist = read_csv_columns(run_dir / "reward_hist.csv")
        centers = [
            (low + high) / 2 for low, high in zip(hist["bin_low"], hist["bin_high"])
        ]
        ax.bar(
            [c + i * width for c in centers],
            hist["count"],
            width=width,
            label=run_dir.name,
        )
    ax.set_xlabel("episode reward")
    ax.set_ylabel("episodes")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("Reward distribution")
    fig.tight_layout()
    fig.savefig(out / "reward_hist.png", dpi=150)
    print(f"wrote {out / 'learning_curves.png'} and {out / 'reward_hist.png'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
