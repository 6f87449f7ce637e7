"""PPO baseline: clipped surrogate policy updates with GAE advantages.

Separate 32-unit tanh policy and value networks, one update per episode,
4 epochs of full-batch plain SGD at lr 3e-4, clip ratio 0.2, gamma 0.99,
GAE lambda 0.95, advantages normalized (skipped when their variance is ~0).
Network inputs are grid coordinates scaled to [0, 1].
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..config import RunConfig, derive_stream_seed
from ..gridworld import GridWorld
from ..stats import EpisodeRecord, RunSummary, summarize
from .nets import Mlp, mlp_forward, mlp_forward_batch, mlp_gradient_batch, sgd_step

PPO_CLIP = 0.2
PPO_LEARNING_RATE = 0.0003
PPO_GAMMA = 0.99
GAE_LAMBDA = 0.95
PPO_EPOCHS = 4
OBSTACLE_REFRESH_PERIOD = 100
_ADV_STD_FLOOR = 1e-8


@dataclass
class Trajectory:
    """One episode of on-policy experience, stored as parallel arrays."""

    states: np.ndarray     # (T, 2)
    actions: np.ndarray    # (T,)
    rewards: np.ndarray    # (T,)
    dones: np.ndarray      # (T,) bool
    log_probs: np.ndarray  # (T,) log pi_old(a_t | s_t)
    values: np.ndarray     # (T,) V(s_t) at collection time

    def __post_init__(self):
        if not (np.all(np.isfinite(self.log_probs)) and np.all(np.isfinite(self.values))):
            raise ValueError("log_probs and values must be finite")

    def __len__(self) -> int:
        return len(self.actions)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def policy_distribution(policy: Mlp, state_vec: np.ndarray) -> np.ndarray:
    return softmax(mlp_forward(policy, state_vec))


def gae(
    trajectory: Trajectory, gamma: float = PPO_GAMMA, lam: float = GAE_LAMBDA
) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimates and value targets for one trajectory.

    delta_t = r_t + gamma * V(s_{t+1}) * (1 - done_t) - V(s_t), with a zero
    bootstrap value past the end of the trajectory; advantages follow the
    usual backward recursion A_t = delta_t + gamma * lam * (1 - done_t) *
    A_{t+1}, and returns are A_t + V(s_t).
    """
    T = len(trajectory)
    advantages = np.zeros(T)
    running = 0.0
    next_value = 0.0
    for t in reversed(range(T)):
        mask = 1.0 - float(trajectory.dones[t])
        delta = trajectory.rewards[t] + gamma * next_value * mask - trajectory.values[t]
        running = delta + gamma * lam * mask * running
        advantages[t] = running
        next_value = trajectory.values[t]
    return advantages, advantages + trajectory.values


def ppo_update(
    policy: Mlp,
    value_net: Mlp,
    trajectories: list[Trajectory],
    clip: float = PPO_CLIP,
    lr: float = PPO_LEARNING_RATE,
    gamma: float = PPO_GAMMA,
    lam: float = GAE_LAMBDA,
    epochs: int = PPO_EPOCHS,
    normalize_advantages: bool = True,
) -> tuple[Mlp, Mlp]:
    """Ascend the clipped surrogate objective and fit the value net to returns.

    The surrogate is mean_t min(ratio_t * A_t, clip(ratio_t, 1-clip, 1+clip)
    * A_t); its gradient flows only through samples where the unclipped
    branch is active (ties, including the ratio=1 first epoch, take the
    unclipped branch). The value loss is half the mean squared error to the
    GAE returns. Both nets take `epochs` full-batch SGD steps.
    """
    if not trajectories:
        raise ValueError("need at least one trajectory")
    states = np.concatenate([t.states for t in trajectories])
    actions = np.concatenate([t.actions for t in trajectories])
    old_log_probs = np.concatenate([t.log_probs for t in trajectories])
    per_traj = [gae(t, gamma, lam) for t in trajectories]
    advantages = np.concatenate([adv for adv, _ in per_traj])
    returns = np.concatenate([ret for _, ret in per_traj])

    if normalize_advantages:
        std = advantages.std()
        if std > _ADV_STD_FLOOR:
            advantages = (advantages - advantages.mean()) / (std + _ADV_STD_FLOOR)

    n = len(actions)
    rows = np.arange(n)
    for _ in range(epochs):
        logits = mlp_forward_batch(policy, states)
        probs = softmax(logits)
        log_probs = log_softmax(logits)[rows, actions]
        ratio = np.exp(log_probs - old_log_probs)
        unclipped = ratio * advantages
        clipped = np.clip(ratio, 1.0 - clip, 1.0 + clip) * advantages
        take_unclipped = unclipped <= clipped
        d_obj_d_logp = np.where(take_unclipped, advantages * ratio, 0.0) / n

        # upstream of the minimized loss (-objective) w.r.t. the logits
        one_hot = np.zeros_like(logits)
        one_hot[rows, actions] = 1.0
        upstream = -d_obj_d_logp[:, None] * (one_hot - probs)
        sgd_step(policy, mlp_gradient_batch(policy, states, upstream), lr)

        values = mlp_forward_batch(value_net, states)[:, 0]
        value_upstream = ((values - returns) / n)[:, None]
        sgd_step(value_net, mlp_gradient_batch(value_net, states, value_upstream), lr)
    return policy, value_net


def _rollout(
    policy: Mlp,
    value_net: Mlp,
    env: GridWorld,
    rng: np.random.Generator,
    scale: float,
) -> tuple[Trajectory, float, int, bool]:
    states, actions, rewards, dones, log_probs, values = [], [], [], [], [], []
    s = env.reset()
    total = 0.0
    steps = 0
    success = False
    for _ in range(env.max_steps):
        sv = np.array(s, dtype=float) * scale
        probs = policy_distribution(policy, sv)
        action = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
        action = min(action, 3)
        states.append(sv)
        actions.append(action)
        log_probs.append(float(np.log(probs[action])))
        values.append(float(mlp_forward(value_net, sv)[0]))
        outcome = env.step(s, action)
        rewards.append(outcome.reward)
        dones.append(outcome.done)
        total += outcome.reward
        steps += 1
        s = outcome.next_state
        if outcome.done:
            success = True
            break
    trajectory = Trajectory(
        states=np.array(states),
        actions=np.array(actions, dtype=int),
        rewards=np.array(rewards),
        dones=np.array(dones, dtype=bool),
        log_probs=np.array(log_probs),
        values=np.array(values),
    )
    return trajectory, total, steps, success


def train_ppo(config: RunConfig, on_obstacle_refresh=None) -> tuple[list[EpisodeRecord], RunSummary]:
    config.validate()
    env_rng = np.random.default_rng(derive_stream_seed(config.seed, "env"))
    agent_rng = np.random.default_rng(derive_stream_seed(config.seed, "ppo"))

    env = GridWorld(
        size=config.grid_size,
        obstacle_rate=config.obstacle_rate,
        max_steps=config.max_steps,
    )
    policy = Mlp.initialize(agent_rng, out_dim=4, hidden_activation="tanh")
    value_net = Mlp.initialize(agent_rng, out_dim=1, hidden_activation="tanh")
    scale = 1.0 / max(config.grid_size - 1, 1)

    records: list[EpisodeRecord] = []
    started = time.perf_counter()
    for episode in range(config.episodes):
        if episode % OBSTACLE_REFRESH_PERIOD == 0:
            env = env.place_obstacles(env_rng)
            if on_obstacle_refresh is not None:
                on_obstacle_refresh(episode, env)
        trajectory, total, steps, success = _rollout(policy, value_net, env, agent_rng, scale)
        ppo_update(policy, value_net, [trajectory])
        records.append(EpisodeRecord(episode, total, steps, success))
    elapsed = time.perf_counter() - started
    return records, summarize(records, wall_clock_seconds=elapsed)
