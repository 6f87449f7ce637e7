"""Reward-driven navigator with quantum-rotation action selection.

This is the benchmark's "ardns" algorithm. Each step, the agent folds the
current grid state into its dual memory, maps the 24-dim memory through a
2x24 action-weight matrix to two RY angles, samples the resulting 2-qubit
circuit for 16 shots, and picks an action epsilon-greedily over the shot
frequencies. Weight updates are scaled by reward plus a count-based curiosity
bonus, damped by recent reward variance and by how far the agent just moved,
and hard-clipped. Hyperparameters follow a four-stage episode schedule.

Per-step rng draw order is fixed (shot uniforms first, then the exploration
draws), so a seeded run is fully reproducible.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import RunConfig, derive_stream_seed
from .gridworld import GridWorld, manhattan_dist
from .memory import (
    COMBINED_DIM,
    DualMemory,
    MemoryWeights,
    attention,
    combine,
    update_long,
    update_short,
)
from .quantum import RotationAngles, action_probabilities, prepare_circuit, sample_shots
from .stats import EpisodeRecord, RunSummary, summarize

NUM_ACTIONS = 4
EPSILON_DECAY = 0.995
REWARD_WINDOW_CAPACITY = 100
OBSTACLE_REFRESH_PERIOD = 100
WEIGHT_INIT_RANGE = 0.1

RefreshHook = Callable[[int, GridWorld], None]


@dataclass(frozen=True)
class StageParams:
    eta: float
    eps_min: float
    alpha_s: float
    alpha_l: float
    curiosity_factor: float
    exploration_boost: float
    beta: float = 0.1
    gamma_penalty: float = 0.01
    weight_clip: float = 5.0
    shots: int = 16

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not 0.0 <= self.eps_min <= 1.0:
            raise ValueError("eps_min must be in [0, 1]")
        if self.weight_clip <= 0:
            raise ValueError("weight_clip must be positive")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


# Episode-indexed schedule: ranges 0-100, 101-200, 201-300, 301+.
_STAGE_BOUNDS = (100, 200, 300)
_STAGES = (
    StageParams(eta=1.4, eps_min=0.9, alpha_s=0.7, alpha_l=0.8,
                curiosity_factor=2.0, exploration_boost=2.0),
    StageParams(eta=1.05, eps_min=0.6, alpha_s=0.8, alpha_l=0.9,
                curiosity_factor=1.5, exploration_boost=1.5),
    StageParams(eta=0.84, eps_min=0.3, alpha_s=0.85, alpha_l=0.95,
                curiosity_factor=1.0, exploration_boost=1.0),
    StageParams(eta=0.7, eps_min=0.2, alpha_s=0.9, alpha_l=0.98,
                curiosity_factor=1.0, exploration_boost=0.5),
)

# Flat parameters when the stage schedule is disabled (boost 1.0 is neutral).
DEFAULT_PARAMS = StageParams(
    eta=0.7, eps_min=0.2, alpha_s=0.85, alpha_l=0.95,
    curiosity_factor=0.75, exploration_boost=1.0,
)


def stage_for_episode(episode: int) -> StageParams:
    for bound, params in zip(_STAGE_BOUNDS, _STAGES):
        if episode <= bound:
            return params
    return _STAGES[-1]


@dataclass
class AgentState:
    w_a: np.ndarray  # (2, 24): one row of action weights per qubit angle
    epsilon: float = 1.0
    visit_counts: dict = field(default_factory=dict)
    reward_window: deque = field(
        default_factory=lambda: deque(maxlen=REWARD_WINDOW_CAPACITY)
    )
    prev_state: np.ndarray | None = None
    episode_index: int = 0

    @classmethod
    def initialize(cls, rng: np.random.Generator) -> AgentState:
        w_a = rng.uniform(-WEIGHT_INIT_RANGE, WEIGHT_INIT_RANGE, (2, COMBINED_DIM))
        return cls(w_a=w_a)


@dataclass(frozen=True)
class CuriosityInputs:
    visits: int
    dist_to_goal: int
    curiosity_factor: float
    exploration_boost: float

    def __post_init__(self):
        if self.visits < 0 or self.dist_to_goal < 0:
            raise ValueError("visits and dist_to_goal must be non-negative")


def compute_angles(w_a: np.ndarray, m: np.ndarray) -> RotationAngles:
    """RY angles as dot products of the action-weight rows with the memory."""
    return RotationAngles(float(w_a[0] @ m), float(w_a[1] @ m))


def select_action(probs: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Uniform random action with probability epsilon, else argmax (ties: lowest index)."""
    if rng.random() < epsilon:
        return int(rng.integers(NUM_ACTIONS))
    return int(np.argmax(probs))


def curiosity_bonus(inputs: CuriosityInputs) -> float:
    """Intrinsic reward: boost * c * novelty * 10/(1 + distance).

    Novelty is 1/(1 + visits), so an unvisited state scores 1 and repeated
    visits decay the bonus toward zero.
    """
    novelty = 1.0 / (1.0 + inputs.visits)
    return (
        inputs.exploration_boost
        * inputs.curiosity_factor
        * novelty
        * 10.0
        / (1.0 + inputs.dist_to_goal)
    )


def reward_stats(window) -> tuple[float, float]:
    """Population mean and variance of the recent episode rewards; (0, 0) when empty."""
    if len(window) == 0:
        return 0.0, 0.0
    arr = np.asarray(window, dtype=float)
    return float(arr.mean()), float(arr.var())


def state_change(s_t: np.ndarray, s_prev: np.ndarray | None) -> float:
    """Squared Euclidean distance moved; 0 on the first step of an episode."""
    if s_prev is None:
        return 0.0
    d = np.subtract(s_t, s_prev)
    return float(d @ d)


def update_gain(params: StageParams, r: float, b: float, sigma2: float, delta_s: float) -> float:
    return (
        params.eta
        * (r + b)
        / max(0.5, 1.0 + params.beta * sigma2)
        * math.exp(-params.gamma_penalty * delta_s)
    )


def weight_update(
    agent: AgentState,
    params: StageParams,
    r: float,
    b: float,
    sigma2: float,
    delta_s: float,
    m: np.ndarray,
) -> AgentState:
    """Add gain * m to both action-weight rows, then clip to +-weight_clip."""
    g = update_gain(params, r, b, sigma2, delta_s)
    agent.w_a += g * m
    np.clip(agent.w_a, -params.weight_clip, params.weight_clip, out=agent.w_a)
    return agent


def decay_epsilon(epsilon: float, eps_min: float) -> float:
    return max(eps_min, EPSILON_DECAY * epsilon)


def run_episode(
    agent: AgentState,
    env: GridWorld,
    mem: DualMemory,
    weights: MemoryWeights,
    params: StageParams,
    rng: np.random.Generator,
    use_attention_memory: bool = False,
) -> tuple[EpisodeRecord, DualMemory]:
    """Play one episode, updating the agent in place; returns its record and memory.

    The reward window is frozen for the whole episode, so the variance term
    is computed once up front. The curiosity bonus is evaluated at the state
    the action was taken from, using the count of earlier steps taken from
    that state; the count is incremented after acting, so grinding against a
    wall or obstacle erodes the cell's novelty step by step. Epsilon decays
    once, at episode end.
    """
    s = env.reset()
    agent.prev_state = None
    _, sigma2 = reward_stats(agent.reward_window)

    total = 0.0
    steps = 0
    success = False
    for _ in range(env.max_steps):
        sv = np.array(s, dtype=float)
        mem = update_short(mem, weights, sv, params.alpha_s)
        mem = update_long(mem, weights, sv, params.alpha_l)
        if use_attention_memory:
            _, _, m = attention(mem, weights)
        else:
            m = combine(mem).m
        delta_s = state_change(sv, agent.prev_state)
        angles = compute_angles(agent.w_a, m)
        counts = sample_shots(prepare_circuit(angles), params.shots, rng)
        action = select_action(action_probabilities(counts), agent.epsilon, rng)
        outcome = env.step(s, action)
        bonus = curiosity_bonus(
            CuriosityInputs(
                visits=agent.visit_counts.get(s, 0),
                dist_to_goal=manhattan_dist(s, env.goal),
                curiosity_factor=params.curiosity_factor,
                exploration_boost=params.exploration_boost,
            )
        )
        agent.visit_counts[s] = agent.visit_counts.get(s, 0) + 1
        weight_update(agent, params, outcome.reward, bonus, sigma2, delta_s, m)
        total += outcome.reward
        steps += 1
        agent.prev_state = sv
        s = outcome.next_state
        if outcome.done:
            success = True
            break

    record = EpisodeRecord(agent.episode_index, total, steps, success)
    agent.reward_window.append(total)
    agent.epsilon = decay_epsilon(agent.epsilon, params.eps_min)
    agent.episode_index += 1
    return record, mem


def train(
    config: RunConfig, on_obstacle_refresh: RefreshHook | None = None
) -> tuple[list[EpisodeRecord], RunSummary]:
    """Run the full training loop for the quantum agent.

    Obstacles are drawn from the env stream (shared across algorithms for a
    given seed) and refreshed every 100 episodes; everything else draws from
    this algorithm's own stream.
    """
    config.validate()
    env_rng = np.random.default_rng(derive_stream_seed(config.seed, "env"))
    agent_rng = np.random.default_rng(derive_stream_seed(config.seed, "ardns"))

    env = GridWorld(
        size=config.grid_size,
        obstacle_rate=config.obstacle_rate,
        max_steps=config.max_steps,
    )
    weights = MemoryWeights.initialize(agent_rng)
    agent = AgentState.initialize(agent_rng)
    mem = DualMemory.zeros()

    records: list[EpisodeRecord] = []
    started = time.perf_counter()
    for episode in range(config.episodes):
        if episode % OBSTACLE_REFRESH_PERIOD == 0:
            env = env.place_obstacles(env_rng)
            if on_obstacle_refresh is not None:
                on_obstacle_refresh(episode, env)
        params = stage_for_episode(episode) if config.stage_schedule else DEFAULT_PARAMS
        record, mem = run_episode(
            agent, env, mem, weights, params, agent_rng, config.use_attention_memory
        )
        records.append(record)
    elapsed = time.perf_counter() - started
    return records, summarize(records, wall_clock_seconds=elapsed)
