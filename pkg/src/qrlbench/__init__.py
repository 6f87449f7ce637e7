"""Grid-world navigation benchmark.

A quantum-rotation action-selection agent with dual-memory state encoding and
curiosity-shaped plasticity, DQN and PPO baselines on tiny hand-differentiated
MLPs, a shared obstacle grid-world, nonparametric run statistics, and a
reproducible experiment harness with a CLI.
"""

from .config import ALGORITHMS, ConfigError, RunConfig, derive_stream_seed, load_config
from .gridworld import GridWorld, StepOutcome, manhattan_dist
from .memory import (
    CombinedMemory,
    DualMemory,
    MemoryWeights,
    attention,
    combine,
    update_long,
    update_short,
)
from .quantum import (
    RotationAngles,
    ShotCounts,
    TwoQubitState,
    action_probabilities,
    outcome_probabilities,
    prepare_circuit,
    ry_apply,
    sample_shots,
)
from .stats import (
    EpisodeRecord,
    MannWhitneyResult,
    RunSummary,
    mann_whitney_u,
    savitzky_golay,
    success_rate,
    summarize,
)

__all__ = [
    "ALGORITHMS",
    "CombinedMemory",
    "ConfigError",
    "DualMemory",
    "EpisodeRecord",
    "GridWorld",
    "MannWhitneyResult",
    "MemoryWeights",
    "RotationAngles",
    "RunConfig",
    "RunSummary",
    "ShotCounts",
    "StepOutcome",
    "TwoQubitState",
    "action_probabilities",
    "attention",
    "combine",
    "derive_stream_seed",
    "load_config",
    "mann_whitney_u",
    "manhattan_dist",
    "outcome_probabilities",
    "prepare_circuit",
    "ry_apply",
    "sample_shots",
    "savitzky_golay",
    "success_rate",
    "summarize",
    "update_long",
    "update_short",
]
