"""Experiment orchestration: train one algorithm, persist its outputs, and
compare finished runs with rank statistics.

Run outputs (all under the run directory):
  episodes.csv        header ``episode,reward,steps,success``; reward with 6
                      decimals, success as 0/1
  summary.json        aggregate metrics plus algo and seed
  learning_curve.csv  header ``episode,smoothed_reward`` (Savitzky-Golay)
  reward_hist.csv     unit-width reward bins over [-20, 11]; out-of-range
                      rewards are clipped into the edge bins

Every output byte except summary.json's wall_clock_seconds is determined by
(seed, config).
"""

from __future__ import annotations

import csv
import json
from itertools import combinations
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .config import RunConfig
from .stats import EpisodeRecord, RunSummary, mann_whitney_u, savitzky_golay, summarize

EPISODES_CSV = "episodes.csv"
SUMMARY_JSON = "summary.json"
LEARNING_CURVE_CSV = "learning_curve.csv"
REWARD_HIST_CSV = "reward_hist.csv"
EPISODES_HEADER = ("episode", "reward", "steps", "success")

REWARD_HIST_LOW = -20.0
REWARD_HIST_HIGH = 11.0


class DataError(Exception):
    """Missing or malformed run data on disk."""


class RunResult(NamedTuple):
    records: list[EpisodeRecord]
    summary: RunSummary
    out_dir: Path


def _trainer(algo: str) -> Callable:
    from .agent import train as train_ardns
    from .baselines.dqn import train_dqn
    from .baselines.ppo import train_ppo

    return {"ardns": train_ardns, "dqn": train_dqn, "ppo": train_ppo}[algo]


def run_experiment(config: RunConfig, on_obstacle_refresh=None) -> RunResult:
    """Train per the config and write the four run files to its output dir."""
    config.validate()
    out_dir = config.resolved_output_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    records, summary = _trainer(config.algo)(config, on_obstacle_refresh=on_obstacle_refresh)
    write_episodes_csv(out_dir / EPISODES_CSV, records)
    write_summary_json(out_dir / SUMMARY_JSON, config, summary)
    write_learning_curve_csv(out_dir / LEARNING_CURVE_CSV, records)
    write_reward_hist_csv(out_dir / REWARD_HIST_CSV, records)
    return RunResult(records, summary, out_dir)


def write_episodes_csv(path: Path, records: Sequence[EpisodeRecord]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EPISODES_HEADER)
        for r in records:
            writer.writerow([r.episode, f"{r.total_reward:.6f}", r.steps, int(r.success)])


def read_episodes_csv(path: Path) -> list[EpisodeRecord]:
    """Parse a run's episodes.csv, reporting the file and line on any problem."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"{path}: no such file")
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(EPISODES_HEADER):
            raise DataError(f"{path}:1: expected header {','.join(EPISODES_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise DataError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                records.append(
                    EpisodeRecord(
                        episode=int(row[0]),
                        total_reward=float(row[1]),
                        steps=int(row[2]),
                        success=bool(int(row[3])),
                    )
                )
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    if not records:
        raise DataError(f"{path}: contains no episodes")
    return records


def write_summary_json(path: Path, config: RunConfig, summary: RunSummary) -> None:
    payload = {"algo": config.algo, "seed": config.seed, **summary.to_dict()}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_learning_curve_csv(path: Path, records: Sequence[EpisodeRecord]) -> None:
    smoothed = savitzky_golay([r.total_reward for r in records])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("episode", "smoothed_reward"))
        for r, value in zip(records, smoothed):
            writer.writerow([r.episode, f"{value:.6f}"])


def write_reward_hist_csv(path: Path, records: Sequence[EpisodeRecord]) -> None:
    rewards = np.clip(
        [r.total_reward for r in records], REWARD_HIST_LOW, REWARD_HIST_HIGH
    )
    edges = np.arange(REWARD_HIST_LOW, REWARD_HIST_HIGH + 0.5, 1.0)
    counts, _ = np.histogram(rewards, bins=edges)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("bin_low", "bin_high", "count"))
        for low, high, count in zip(edges[:-1], edges[1:], counts):
            writer.writerow([f"{low:.1f}", f"{high:.1f}", int(count)])


def _run_metadata(run_dir: Path) -> tuple[str, float | None]:
    """Run name and recorded wall clock, taken from summary.json when present."""
    summary_path = run_dir / SUMMARY_JSON
    if summary_path.is_file():
        try:
            with open(summary_path) as fh:
                payload = json.load(fh)
            name = payload.get("algo") or run_dir.name or str(run_dir)
            return str(name), payload.get("wall_clock_seconds")
        except (OSError, json.JSONDecodeError):
            pass
    return run_dir.name or str(run_dir), None


def compare_runs(run_dirs: Sequence[str | Path], out_path: str | Path | None = None) -> dict:
    """Cross-evaluate finished runs on their per-episode rewards.

    Loads each run's episodes.csv, recomputes summary metrics, and runs the
    rank test on every pair. Writes the report as JSON when out_path is
    given; the report also carries a formatted text table.
    """
    if len(run_dirs) < 2:
        raise DataError("need at least two run directories to compare")
    loaded = []
    seen: dict[str, int] = {}
    for run_dir in run_dirs:
        run_dir = Path(run_dir)
        records = read_episodes_csv(run_dir / EPISODES_CSV)
        name, wall_clock = _run_metadata(run_dir)
        if name in seen:
            seen[name] += 1
            name = f"{name}#{seen[name]}"
        else:
            seen[name] = 1
        loaded.append((name, records, wall_clock))

    runs = {
        name: summarize(records, wall_clock_seconds=wall_clock).to_dict()
        for name, records, wall_clock in loaded
    }
    pairs = []
    for (name_a, recs_a, _), (name_b, recs_b, _) in combinations(loaded, 2):
        result = mann_whitney_u(
            [r.total_reward for r in recs_a], [r.total_reward for r in recs_b]
        )
        pairs.append(
            {
                "a": name_a,
                "b": name_b,
                "u": result.u,
                "p_two_sided": result.p_two_sided,
                "effect_r": result.effect_r,
            }
        )
    report = {"runs": runs, "pairs": pairs}
    report["table"] = comparison_table(report)
    if out_path is not None:
        with open(out_path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return report


def _fmt(value, spec: str = ".4f") -> str:
    return "-" if value is None else format(value, spec)


def comparison_table(report: dict) -> str:
    """Plain-text metric table, one column per run."""
    names = list(report["runs"].keys())
    rows = [
        ("Goals Reached", lambda s: f"{s['goals_reached']}/{s['total_episodes']}"
                                    f" ({100.0 * s['success_rate']:.1f}%)"),
        ("Mean Reward (all episodes)", lambda s: f"{s['mean_reward_all']:.4f} "
                                                 f"+- {s['std_reward_all']:.4f}"),
        ("Mean Reward (last 100 episodes)", lambda s: f"{s['mean_reward_last100']:.4f} "
                                                      f"+- {s['std_reward_last100']:.4f}"),
        ("Steps to Goal (all episodes)", lambda s: f"{s['mean_steps_all']:.1f} "
                                                   f"+- {s['std_steps_all']:.1f}"),
        ("Steps to Goal (last 100, successful)",
         lambda s: "-" if s["mean_steps_last100_successful"] is None
         else f"{s['mean_steps_last100_successful']:.1f} "
              f"+- {s['std_steps_last100_successful']:.1f}"),
        ("Reward Variance (all episodes)", lambda s: f"{s['reward_variance_all']:.3f}"),
        ("Simulation Time (seconds)", lambda s: _fmt(s.get("wall_clock_seconds"), ".1f")),
    ]
    header = ["Metric"] + names
    table_rows = [[label] + [fmt(report["runs"][n]) for n in names] for label, fmt in rows]
    widths = [max(len(r[i]) for r in [header] + table_rows) for i in range(len(header))]
    lines = [
        " | ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in [header] + table_rows
    ]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    stat_lines = [
        f"{p['a']} vs {p['b']}: U={p['u']:.1f}, p={p['p_two_sided']:.6f}, "
        f"r={p['effect_r']:.4f}"
        for p in report["pairs"]
    ]
    return "\n".join(lines + [""] + stat_lines)
