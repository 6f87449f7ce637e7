"""Run configuration, config-file parsing, and seed-stream derivation."""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from pathlib import Path

ALGORITHMS = ("ardns", "dqn", "ppo")

_SEED_MASK = 0xFFFF_FFFF_FFFF_FFFF


class ConfigError(Exception):
    """Invalid configuration or command-line usage."""


def derive_stream_seed(seed: int, tag: str) -> int:
    """Per-stream seed: the run seed XORed with a CRC32 hash of the stream tag.

    The obstacle stream uses the tag "env" for every algorithm, so runs that
    share a seed face identical obstacle layouts; each algorithm's own draws
    (weight init, shot sampling, exploration) come from a stream tagged with
    the algorithm name.
    """
    return (seed ^ zlib.crc32(tag.encode("ascii"))) & _SEED_MASK


@dataclass
class RunConfig:
    algo: str = "ardns"
    episodes: int = 20000
    seed: int = 42
    grid_size: int = 10
    obstacle_rate: float = 0.05
    max_steps: int = 400
    use_attention_memory: bool = False
    stage_schedule: bool = True
    output_dir: str | None = None

    def validate(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm '{self.algo}' (choose from {', '.join(ALGORITHMS)})"
            )
        if self.episodes < 1:
            raise ConfigError("episodes must be >= 1")
        if self.grid_size < 2:
            raise ConfigError("grid_size must be >= 2")
        if not 0.0 <= self.obstacle_rate <= 0.9:
            raise ConfigError("obstacle_rate must be in [0, 0.9]")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")

    def resolved_output_dir(self) -> Path:
        if self.output_dir is not None:
            return Path(self.output_dir)
        return Path("runs") / f"{self.algo}-seed{self.seed}"


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got '{raw}'")


_FIELD_PARSERS = {
    "algo": str,
    "episodes": int,
    "seed": int,
    "grid_size": int,
    "obstacle_rate": float,
    "max_steps": int,
    "use_attention_memory": _parse_bool,
    "stage_schedule": _parse_bool,
    "output_dir": str,
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse line-oriented ``key = value`` text into typed config values.

    Blank lines and '#' comments are ignored. Unknown keys and malformed
    lines raise ConfigError naming the source and line number.
    """
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{stripped}'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown config key '{key}'")
        try:
            values[key] = _FIELD_PARSERS[key](raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for '{key}': {exc}") from None
    return values


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from a config file, with optional overriding values."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values = parse_config_text(text, source=str(path))
    if overrides:
        values.update(overrides)
    config = RunConfig(**values)
    config.validate()
    return config
