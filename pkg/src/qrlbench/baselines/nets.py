"""Two-layer MLP with hand-derived gradients, shared by the baseline learners.

Forward pass: out = w2 @ act(w1 @ s + b1) + b2, with relu or tanh hidden
activation. Gradients are exact chain-rule expressions (relu subgradient at 0
is 0); the test suite checks every parameter against central finite
differences. Batched variants take row-stacked inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HIDDEN_UNITS = 32


@dataclass
class Mlp:
    w1: np.ndarray  # (hidden, in)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (out, hidden)
    b2: np.ndarray  # (out,)
    hidden_activation: str = "relu"

    def __post_init__(self):
        if self.hidden_activation not in ("relu", "tanh"):
            raise ValueError(f"unknown activation '{self.hidden_activation}'")

    @classmethod
    def initialize(
        cls,
        rng: np.random.Generator,
        in_dim: int = 2,
        hidden_dim: int = HIDDEN_UNITS,
        out_dim: int = 4,
        hidden_activation: str = "relu",
    ) -> Mlp:
        """Weights uniform in +-1/sqrt(fan_in), biases zero."""
        lim1 = 1.0 / np.sqrt(in_dim)
        lim2 = 1.0 / np.sqrt(hidden_dim)
        return cls(
            w1=rng.uniform(-lim1, lim1, (hidden_dim, in_dim)),
            b1=np.zeros(hidden_dim),
            w2=rng.uniform(-lim2, lim2, (out_dim, hidden_dim)),
            b2=np.zeros(out_dim),
            hidden_activation=hidden_activation,
        )

    def copy(self) -> Mlp:
        return Mlp(
            self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy(),
            self.hidden_activation,
        )

    def parameters(self) -> tuple[np.ndarray, ...]:
        return (self.w1, self.b1, self.w2, self.b2)


@dataclass
class MlpGrads:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (self.w1, self.b1, self.w2, self.b2)


def _activate(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _activation_grad(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return (z > 0.0).astype(float)
    t = np.tanh(z)
    return 1.0 - t * t


def mlp_forward_batch(net: Mlp, states: np.ndarray) -> np.ndarray:
    """Forward pass on row-stacked states, shape (batch, in) -> (batch, out)."""
    z1 = states @ net.w1.T + net.b1
    hidden = _activate(z1, net.hidden_activation)
    return hidden @ net.w2.T + net.b2


def mlp_forward(net: Mlp, state: np.ndarray) -> np.ndarray:
    return mlp_forward_batch(net, np.asarray(state, dtype=float)[None, :])[0]


def mlp_gradient_batch(net: Mlp, states: np.ndarray, upstream: np.ndarray) -> MlpGrads:
    """Parameter gradients of sum_i upstream_i . out_i, summed over the batch."""
    z1 = states @ net.w1.T + net.b1
    hidden = _activate(z1, net.hidden_activation)
    g_w2 = upstream.T @ hidden
    g_b2 = upstream.sum(axis=0)
    d_hidden = upstream @ net.w2
    d_z1 = d_hidden * _activation_grad(z1, net.hidden_activation)
    g_w1 = d_z1.T @ states
    g_b1 = d_z1.sum(axis=0)
    return MlpGrads(g_w1, g_b1, g_w2, g_b2)


def mlp_gradient(net: Mlp, state: np.ndarray, upstream: np.ndarray) -> MlpGrads:
    """Gradients of upstream . mlp_forward(net, state) for a single sample."""
    return mlp_gradient_batch(
        net,
        np.asarray(state, dtype=float)[None, :],
        np.asarray(upstream, dtype=float)[None, :],
    )


def sgd_step(net: Mlp, grads: MlpGrads, lr: float) -> Mlp:
    """One in-place gradient-descent step."""
    net.w1 -= lr * grads.w1
    net.b1 -= lr * grads.b1
    net.w2 -= lr * grads.w2
    net.b2 -= lr * grads.b2
    return net
