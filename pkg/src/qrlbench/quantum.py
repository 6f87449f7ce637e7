"""Exact statevector simulation of a 2-qubit rotation circuit.

The circuit is two independent RY rotations applied to |00>, measured in the
computational basis. With no entangling gates the register stays a product of
two real 2-vectors, so the four amplitudes are tracked directly and the
measurement statistics are exact.

Outcome index convention: k = 2*b1 + b0, where b_i is the measured bit of
qubit i. Downstream, k = 0, 1, 2, 3 selects the actions up, down, left, right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NUM_OUTCOMES = 4
NORM_TOL = 1e-10

# Amplitude-index pairs (bit=0, bit=1) acted on by a single-qubit gate.
_QUBIT_PAIRS = (((0, 1), (2, 3)), ((0, 2), (1, 3)))


@dataclass(frozen=True)
class RotationAngles:
    """RY rotation angles in radians for qubit 0 and qubit 1."""

    theta0: float
    theta1: float

    def __post_init__(self):
        if not (math.isfinite(self.theta0) and math.isfinite(self.theta1)):
            raise ValueError(
                f"rotation angles must be finite, got ({self.theta0}, {self.theta1})"
            )


@dataclass(frozen=True)
class TwoQubitState:
    """Four complex amplitudes over |00>, |01>, |10>, |11> (index k = 2*b1 + b0)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (NUM_OUTCOMES,):
            raise ValueError(f"expected {NUM_OUTCOMES} amplitudes, got shape {amp.shape}")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def zero(cls) -> TwoQubitState:
        """The |00> basis state."""
        amp = np.zeros(NUM_OUTCOMES, dtype=complex)
        amp[0] = 1.0
        return cls(amp)

    def norm(self) -> float:
        amp = self.amplitudes
        return float(math.sqrt(np.sum(amp.real**2 + amp.imag**2)))


@dataclass(frozen=True)
class ShotCounts:
    """Per-outcome measurement counts from a fixed number of shots."""

    counts: np.ndarray
    shots: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (NUM_OUTCOMES,):
            raise ValueError(f"expected {NUM_OUTCOMES} counts, got shape {counts.shape}")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        if int(counts.sum()) != self.shots:
            raise ValueError(f"counts sum to {int(counts.sum())}, expected {self.shots} shots")
        object.__setattr__(self, "counts", counts)


def ry_apply(theta: float, qubit_index: int, state: TwoQubitState) -> TwoQubitState:
    """Apply RY(theta) = [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]] to one qubit."""
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    if qubit_index not in (0, 1):
        raise ValueError(f"qubit_index must be 0 or 1, got {qubit_index}")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    amp = state.amplitudes
    new = amp.copy()
    for lo, hi in _QUBIT_PAIRS[qubit_index]:
        a0, a1 = amp[lo], amp[hi]
        new[lo] = c * a0 - s * a1
        new[hi] = s * a0 + c * a1
    return TwoQubitState(new)


def prepare_circuit(angles: RotationAngles) -> TwoQubitState:
    """Rotate |00> by RY(theta0) on qubit 0 and RY(theta1) on qubit 1.

    The resulting outcome probabilities factor per qubit: the probability of
    measuring bit b on qubit i is cos^2(theta_i/2) for b=0 and sin^2(theta_i/2)
    for b=1.
    """
    state = ry_apply(angles.theta0, 0, TwoQubitState.zero())
    return ry_apply(angles.theta1, 1, state)


def outcome_probabilities(state: TwoQubitState) -> np.ndarray:
    """Born-rule probabilities |amplitude_k|^2 for the four outcomes."""
    amp = state.amplitudes
    return amp.real**2 + amp.imag**2


def sample_shots(state: TwoQubitState, shots: int, rng: np.random.Generator) -> ShotCounts:
    """Draw multinomial measurement counts, consuming one uniform per shot.

    Inverse-CDF sampling on `shots` uniforms drawn in a single call, so the
    counts are a deterministic function of the rng state.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    edges = np.cumsum(outcome_probabilities(state))
    draws = rng.random(shots)
    idx = np.searchsorted(edges, draws, side="right")
    np.minimum(idx, NUM_OUTCOMES - 1, out=idx)
    return ShotCounts(np.bincount(idx, minlength=NUM_OUTCOMES), shots)


def action_probabilities(counts: ShotCounts) -> np.ndarray:
    """Empirical outcome probabilities counts(k)/shots.

    Each entry is the correctly rounded rational counts(k)/shots; when shots
    is a power of two (16 throughout the benchmark) the division is exact and
    the four entries sum to exactly 1.0.
    """
    return counts.counts.astype(float) / counts.shots
