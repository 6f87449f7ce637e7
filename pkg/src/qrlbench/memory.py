"""Dual short/long-term memory with frozen random projections and gating attention.

An 8-dim short-term vector and a 16-dim long-term vector are exponential
moving averages of linear projections of the 2-dim grid state; short memory
decays fast, long memory slowly. The two halves concatenate to the 24-dim
vector consumed by the agent. An attention variant gates each half
elementwise before concatenation.

Projection and attention matrices are drawn once at run start and never
learn; only the agent's action weights are updated during training.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

STATE_DIM = 2
SHORT_DIM = 8
LONG_DIM = 16
COMBINED_DIM = SHORT_DIM + LONG_DIM

WEIGHT_INIT_RANGE = 0.1


@dataclass(frozen=True)
class DualMemory:
    m_short: np.ndarray
    m_long: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m_short", np.asarray(self.m_short, dtype=float))
        object.__setattr__(self, "m_long", np.asarray(self.m_long, dtype=float))
        if self.m_short.shape != (SHORT_DIM,):
            raise ValueError(f"m_short must have shape ({SHORT_DIM},), got {self.m_short.shape}")
        if self.m_long.shape != (LONG_DIM,):
            raise ValueError(f"m_long must have shape ({LONG_DIM},), got {self.m_long.shape}")

    @classmethod
    def zeros(cls) -> DualMemory:
        return cls(np.zeros(SHORT_DIM), np.zeros(LONG_DIM))


@dataclass(frozen=True)
class MemoryWeights:
    w_s: np.ndarray
    w_l: np.ndarray
    w_att_s: np.ndarray
    w_att_l: np.ndarray

    @classmethod
    def initialize(cls, rng: np.random.Generator) -> MemoryWeights:
        """Draw all matrices uniform in [-0.1, 0.1].

        Draw order is fixed (w_s, w_l, w_att_s, w_att_l) so a seeded rng
        reproduces the same weights.
        """
        r = WEIGHT_INIT_RANGE
        return cls(
            w_s=rng.uniform(-r, r, (SHORT_DIM, STATE_DIM)),
            w_l=rng.uniform(-r, r, (LONG_DIM, STATE_DIM)),
            w_att_s=rng.uniform(-r, r, (SHORT_DIM, SHORT_DIM)),
            w_att_l=rng.uniform(-r, r, (LONG_DIM, LONG_DIM)),
        )


@dataclass(frozen=True)
class CombinedMemory:
    """24-dim concatenation [m_short; m_long]."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (COMBINED_DIM,):
            raise ValueError(f"combined memory must have shape ({COMBINED_DIM},), got {m.shape}")
        object.__setattr__(self, "m", m)


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"decay must be in [0, 1], got {alpha}")


def update_short(
    mem: DualMemory, weights: MemoryWeights, state: np.ndarray, alpha_s: float
) -> DualMemory:
    """m_short <- alpha_s * m_short + (1 - alpha_s) * (w_s @ state)."""
    _check_alpha(alpha_s)
    projected = weights.w_s @ np.asarray(state, dtype=float)
    return DualMemory(alpha_s * mem.m_short + (1.0 - alpha_s) * projected, mem.m_long)


def update_long(
    mem: DualMemory, weights: MemoryWeights, state: np.ndarray, alpha_l: float
) -> DualMemory:
    """m_long <- alpha_l * m_long + (1 - alpha_l) * (w_l @ state)."""
    _check_alpha(alpha_l)
    projected = weights.w_l @ np.asarray(state, dtype=float)
    return DualMemory(mem.m_short, alpha_l * mem.m_long + (1.0 - alpha_l) * projected)


def combine(mem: DualMemory) -> CombinedMemory:
    return CombinedMemory(np.concatenate([mem.m_short, mem.m_long]))


def attention(
    mem: DualMemory, weights: MemoryWeights
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gated 24-dim memory: (w_s_att, w_l_att, m_final).

    The short half is gated by tanh(w_att_s @ m_short); the long half by the
    plain linear map w_att_l @ m_long (no squashing). Gates multiply their
    half elementwise and the gated halves concatenate to m_final.
    """
    w_s_att = np.tanh(weights.w_att_s @ mem.m_short)
    w_l_att = weights.w_att_l @ mem.m_long
    m_final = np.concatenate([w_s_att * mem.m_short, w_l_att * mem.m_long])
    return w_s_att, w_l_att, m_final
