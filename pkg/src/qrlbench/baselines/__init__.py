"""Classical baseline learners (DQN, PPO) over a shared tiny-MLP substrate."""

from .dqn import ReplayBuffer, dqn_act, dqn_update, epsilon_schedule, td_targets, train_dqn
from .nets import Mlp, MlpGrads, mlp_forward, mlp_forward_batch, mlp_gradient, mlp_gradient_batch, sgd_step
from .ppo import Trajectory, gae, policy_distribution, ppo_update, train_ppo

__all__ = [
    "Mlp",
    "MlpGrads",
    "ReplayBuffer",
    "Trajectory",
    "dqn_act",
    "dqn_update",
    "epsilon_schedule",
    "gae",
    "mlp_forward",
    "mlp_forward_batch",
    "mlp_gradient",
    "mlp_gradient_batch",
    "policy_distribution",
    "ppo_update",
    "sgd_step",
    "td_targets",
    "train_dqn",
    "train_ppo",
]
