"""l1-norm coherence in the computational basis.

For a pure state the sum of off-diagonal density-matrix moduli reduces to
(sum of amplitude moduli)^2 - 1, which is what the hot paths evaluate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import Field, PureState

__all__ = ["CoherenceValue", "analytic_mean", "l1_coherence", "l1_raw"]


@dataclass(frozen=True)
class CoherenceValue:
    """Raw l1 coherence and its dimension-normalised companion in [0, 1]."""

    raw: float
    normalized: float
    dim: int

    def __post_init__(self) -> None:
        if self.raw < 0.0:
            raise ValueError("raw coherence must be >= 0")
        if not -1e-12 <= self.normalized <= 1.0 + 1e-12:
            raise ValueError("normalized coherence must lie in [0, 1]")


def l1_raw(amplitudes: np.ndarray) -> np.ndarray:
    """Row-wise raw l1 coherence of normalised amplitude vectors."""
    s = np.abs(amplitudes).sum(axis=-1)
    return np.maximum(s * s - 1.0, 0.0)


def l1_coherence(state: PureState) -> CoherenceValue:
    raw = float(l1_raw(state.amplitudes))
    return CoherenceValue(raw=raw, normalized=raw / (state.dim - 1), dim=state.dim)


def analytic_mean(dim: int, field: Field) -> float:
    """Closed-form Haar average of the raw l1 coherence: (d-1) pi/4 for a
    complex field, (d-1) 2/pi for a real one."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    per_level = math.pi / 4.0 if field is Field.COMPLEX else 2.0 / math.pi
    return (dim - 1) * per_level
