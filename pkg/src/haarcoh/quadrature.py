"""Deterministic average of redit coherence over the first hyperoctant.

The average is the ratio of two surface integrals over the angles
theta_1..theta_{d-1} in [0, pi/2], with surface element
sin^{d-2}(theta_1) sin^{d-3}(theta_2) ... sin(theta_{d-2}). On the first
octant all Cartesian coefficients are nonnegative, so the coherence needs
no absolute values and octant averaging equals full-sphere averaging.

Evaluation is a tensor product of Gauss-Legendre rules with the sin-power
weights folded into the per-axis weights. Partial sums are combined with
math.fsum, so the result does not depend on accumulation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "PolarPoint",
    "QuadratureConfig",
    "average_redit_coherence",
    "closed_form_octant_area",
    "octant_surface_area",
    "polar_to_cartesian",
]

_MAX_DIM = 7
# Grids beyond 2^25 nodes (the d=6 default) must be requested explicitly.
_LARGE_GRID = 1 << 25
_CHUNK = 1 << 22


@dataclass(frozen=True)
class PolarPoint:
    """Hyperspherical angles on the first octant, each in [0, pi/2]."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        angles = tuple(float(t) for t in self.angles)
        if not angles:
            raise ValueError("need at least one angle")
        if any(t < 0.0 or t > math.pi / 2.0 for t in angles):
            raise ValueError("angles must lie in [0, pi/2]")
        object.__setattr__(self, "angles", angles)


@dataclass(frozen=True)
class QuadratureConfig:
    dim: int
    nodes_per_axis: int = 32
    allow_large_grid: bool = False

    def __post_init__(self) -> None:
        if not 2 <= self.dim <= _MAX_DIM:
            raise ValueError(f"dim must be in 2..{_MAX_DIM}")
        if self.nodes_per_axis < 4:
            raise ValueError("nodes_per_axis must be >= 4")
        if self.grid_size > _LARGE_GRID and not self.allow_large_grid:
            raise ValueError(
                f"grid of {self.grid_size} nodes; pass allow_large_grid=True to run it"
            )

    @property
    def grid_size(self) -> int:
        return self.nodes_per_axis ** (self.dim - 1)


def polar_to_cartesian(point: PolarPoint | Sequence[float]) -> np.ndarray:
    """Unit-norm Cartesian coefficients of one angular point."""
    angles = point.angles if isinstance(point, PolarPoint) else point
    coeffs = np.empty(len(angles) + 1)
    running = 1.0
    for k, theta in enumerate(angles):
        coeffs[k] = running * math.cos(theta)
        running *= math.sin(theta)
    coeffs[-1] = running
    return coeffs


def _axis_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped from [-1, 1] to [0, pi/2]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) * (math.pi / 4.0), w * (math.pi / 4.0)


def _surface_weights(dim: int, n: int) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    theta, w = _axis_rule(n)
    sin, cos = np.sin(theta), np.cos(theta)
    weights = [w * sin ** (dim - 1 - k) for k in range(1, dim)]
    return cos, sin, weights


def closed_form_octant_area(dim: int) -> float:
    """First-octant share of the unit (d-1)-sphere area."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0) / 2.0**dim


def octant_surface_area(dim: int, cfg: QuadratureConfig) -> float:
    """Quadrature value of the octant surface integral (denominator)."""
    if not 2 <= dim <= _MAX_DIM:
        raise ValueError(f"dim must be in 2..{_MAX_DIM}")
    _, _, weights = _surface_weights(dim, cfg.nodes_per_axis)
    return math.prod(math.fsum(w) for w in weights)


def _chunked_weighted_sum(t: np.ndarray, wgrid: np.ndarray, c: float, s: float) -> float:
    """Sum of ((c + s * t)^2 - 1) * wgrid, in fixed-size chunks."""
    parts = []
    for lo in range(0, t.size, _CHUNK):
        f = c + s * t[lo : lo + _CHUNK]
        parts.append(float(np.sum((f * f - 1.0) * wgrid[lo : lo + _CHUNK])))
    return math.fsum(parts)


def average_redit_coherence(cfg: QuadratureConfig) -> float:
    """Haar average of the raw l1 coherence of d-dimensional redits."""
    dim, n = cfg.dim, cfg.nodes_per_axis
    cos, sin, weights = _surface_weights(dim, n)

    if dim == 2:
        t = cos + sin
        numerator = math.fsum(((t * t - 1.0) * weights[0]).tolist())
    else:
        # Suffix grid over axes 2..d-1: sum of coefficients and joint weight.
        t = cos + sin
        wgrid = weights[-1]
        for k in range(dim - 3, 0, -1):
            t = (cos[:, None] + sin[:, None] * t[None, :]).ravel()
            wgrid = (weights[k][:, None] * wgrid[None, :]).ravel()
        numerator = math.fsum(
            weights[0][i] * _chunked_weighted_sum(t, wgrid, cos[i], sin[i])
            for i in range(n)
        )

    return numerator / octant_surface_area(dim, cfg)
