"""DQN baseline: replay buffer, target network, epsilon-greedy Q-learning.

Plain SGD on half the mean squared TD error, batch size 32, one update per
environment step once the buffer holds a full batch, target network synced
every 100 updates, epsilon annealed linearly from 1.0 to 0.05 over the first
half of training. Network inputs are grid coordinates scaled to [0, 1].
"""

from __future__ import annotations

import time

import numpy as np

from ..config import RunConfig, derive_stream_seed
from ..gridworld import GridWorld
from ..stats import EpisodeRecord, RunSummary, summarize
from .nets import Mlp, mlp_forward, mlp_forward_batch, mlp_gradient_batch, sgd_step

DQN_LEARNING_RATE = 0.001
DQN_GAMMA = 0.9
BUFFER_CAPACITY = 1000
BATCH_SIZE = 32
TARGET_SYNC_PERIOD = 100
EPSILON_START = 1.0
EPSILON_END = 0.05
ANNEAL_FRACTION = 0.5
OBSTACLE_REFRESH_PERIOD = 100


class ReplayBuffer:
    """Fixed-capacity FIFO store of (s, a, r, s', done) transitions."""

    def __init__(self, capacity: int = BUFFER_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._data: list = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._data)

    def push(self, transition) -> None:
        if len(self._data) < self.capacity:
            self._data.append(transition)
        else:
            self._data[self._cursor] = transition
        self._cursor = (self._cursor + 1) % self.capacity

    def entries(self) -> list:
        """Stored transitions, oldest first."""
        if len(self._data) < self.capacity:
            return list(self._data)
        return self._data[self._cursor:] + self._data[: self._cursor]

    def sample(self, batch_size: int, rng: np.random.Generator) -> list:
        """Uniform sample with replacement."""
        if not self._data:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(0, len(self._data), size=batch_size)
        return [self._data[i] for i in idx]


def epsilon_schedule(
    episode: int, total_episodes: int, anneal_fraction: float = ANNEAL_FRACTION
) -> float:
    """Linear anneal from 1.0 to 0.05 over the first `anneal_fraction` of training."""
    horizon = max(1, int(anneal_fraction * total_episodes))
    frac = min(1.0, episode / horizon)
    return EPSILON_START + frac * (EPSILON_END - EPSILON_START)


def dqn_act(net: Mlp, state_vec: np.ndarray, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy over Q values; greedy ties break to the lowest index."""
    if rng.random() < epsilon:
        return int(rng.integers(4))
    return int(np.argmax(mlp_forward(net, state_vec)))


def _batch_arrays(batch):
    states = np.stack([t[0] for t in batch])
    actions = np.array([t[1] for t in batch], dtype=int)
    rewards = np.array([t[2] for t in batch], dtype=float)
    next_states = np.stack([t[3] for t in batch])
    dones = np.array([t[4] for t in batch], dtype=float)
    return states, actions, rewards, next_states, dones


def td_targets(target_net: Mlp, batch, gamma: float = DQN_GAMMA) -> np.ndarray:
    """Bootstrapped regression targets r + gamma * max_a' Q_target(s', a'); r when done."""
    _, _, rewards, next_states, dones = _batch_arrays(batch)
    next_q = mlp_forward_batch(target_net, next_states).max(axis=1)
    return rewards + gamma * next_q * (1.0 - dones)


def dqn_update(
    net: Mlp,
    target_net: Mlp,
    batch,
    lr: float = DQN_LEARNING_RATE,
    gamma: float = DQN_GAMMA,
) -> Mlp:
    """One SGD step on half the mean squared TD error of the taken actions."""
    if not batch:
        raise ValueError("batch must be non-empty")
    states, actions, _, _, _ = _batch_arrays(batch)
    targets = td_targets(target_net, batch, gamma)
    q = mlp_forward_batch(net, states)
    rows = np.arange(len(batch))
    upstream = np.zeros_like(q)
    upstream[rows, actions] = (q[rows, actions] - targets) / len(batch)
    return sgd_step(net, mlp_gradient_batch(net, states, upstream), lr)


def train_dqn(
    config: RunConfig,
    on_obstacle_refresh=None,
    target_sync_period: int = TARGET_SYNC_PERIOD,
) -> tuple[list[EpisodeRecord], RunSummary]:
    config.validate()
    env_rng = np.random.default_rng(derive_stream_seed(config.seed, "env"))
    agent_rng = np.random.default_rng(derive_stream_seed(config.seed, "dqn"))

    env = GridWorld(
        size=config.grid_size,
        obstacle_rate=config.obstacle_rate,
        max_steps=config.max_steps,
    )
    net = Mlp.initialize(agent_rng, out_dim=4, hidden_activation="relu")
    target = net.copy()
    buffer = ReplayBuffer(BUFFER_CAPACITY)
    scale = 1.0 / max(config.grid_size - 1, 1)
    updates = 0

    records: list[EpisodeRecord] = []
    started = time.perf_counter()
    for episode in range(config.episodes):
        if episode % OBSTACLE_REFRESH_PERIOD == 0:
            env = env.place_obstacles(env_rng)
            if on_obstacle_refresh is not None:
                on_obstacle_refresh(episode, env)
        epsilon = epsilon_schedule(episode, config.episodes)
        s = env.reset()
        total = 0.0
        steps = 0
        success = False
        for _ in range(env.max_steps):
            sv = np.array(s, dtype=float) * scale
            action = dqn_act(net, sv, epsilon, agent_rng)
            outcome = env.step(s, action)
            nv = np.array(outcome.next_state, dtype=float) * scale
            buffer.push((sv, action, outcome.reward, nv, outcome.done))
            if len(buffer) >= BATCH_SIZE:
                dqn_update(net, target, buffer.sample(BATCH_SIZE, agent_rng))
                updates += 1
                if updates % target_sync_period == 0:
                    target = net.copy()
            total += outcome.reward
            steps += 1
            s = outcome.next_state
            if outcome.done:
                success = True
                break
        records.append(EpisodeRecord(episode, total, steps, success))
    elapsed = time.perf_counter() - started
    return records, summarize(records, wall_clock_seconds=elapsed)
