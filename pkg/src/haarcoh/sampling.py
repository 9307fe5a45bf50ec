"""Reproducible random streams and the scalar distributions used for state
generation and disorder injection.

Streams are counter-based (Philox) and keyed by ``(master_seed,
stream_index)``, so any substream can be reconstructed on its own,
independent of how work is split across processes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NORMAL_QUARTILE",
    "Family",
    "RngStream",
    "ScalarDistribution",
    "as_generator",
    "cauchy_quantile",
    "draw_from",
    "draw_standard_normal",
]

# z-score of the 75th percentile of the standard normal; converts a
# semi-interquartile range into a Gaussian standard deviation.
NORMAL_QUARTILE = 0.674489750196082

_UINT64_SPAN = 1 << 64


class Family(enum.Enum):
    """Distribution family used for disorder draws."""

    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    CAUCHY_LORENTZ = "cauchy"


@dataclass(frozen=True)
class RngStream:
    """One member of a keyed family of independent random streams.

    The same ``(master_seed, stream_index)`` pair always reproduces the same
    sequence; distinct indices give streams with no shared prefix.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_index"):
            value = getattr(self, name)
            if not 0 <= value < _UINT64_SPAN:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def as_generator(stream: RngStream | np.random.Generator) -> np.random.Generator:
    """Accept either a stream descriptor or an already-running generator."""
    if isinstance(stream, RngStream):
        return stream.generator()
    return stream


def cauchy_quantile(location: float, siqr: float, u: float | np.ndarray):
    """Inverse CDF of the Cauchy-Lorentz law, defined for u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u >= 1.0):
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    x = location + siqr * np.tan(np.pi * (u - 0.5))
    return float(x) if x.ndim == 0 else x


def _open_unit(gen: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval (0, 1); endpoints are redrawn."""
    u = np.atleast_1d(gen.random(size))
    while True:
        bad = (u == 0.0) | (u == 1.0)
        if not bad.any():
            return u.reshape(size)
        u[bad] = gen.random(int(bad.sum()))


@dataclass(frozen=True)
class ScalarDistribution:
    """Scalar law parametrised by its centre and semi-interquartile range.

    The SIQR is the dispersion parameter shared by all families: it maps to
    sigma = siqr / NORMAL_QUARTILE for the Gaussian, to the endpoints
    location +/- 2*siqr for the uniform, and is the scale of the quantile
    map for Cauchy-Lorentz.
    """

    family: Family
    location: float = 0.0
    siqr: float = 0.5

    def __post_init__(self) -> None:
        if not self.siqr > 0:
            raise ValueError("siqr must be > 0")

    @property
    def gaussian_sigma(self) -> float:
        return self.siqr / NORMAL_QUARTILE

    @property
    def uniform_bounds(self) -> tuple[float, float]:
        return self.location - 2.0 * self.siqr, self.location + 2.0 * self.siqr

    def draw_many(self, stream: RngStream | np.random.Generator, size) -> np.ndarray:
        """Vector of independent draws from this distribution."""
        gen = as_generator(stream)
        if self.family is Family.GAUSSIAN:
            return self.location + self.gaussian_sigma * gen.standard_normal(size)
        if self.family is Family.UNIFORM:
            lo, hi = self.uniform_bounds
            return lo + (hi - lo) * gen.random(size)
        return cauchy_quantile(self.location, self.siqr, _open_unit(gen, size))


def draw_standard_normal(stream: RngStream | np.random.Generator) -> float:
    """One N(0, 1) draw."""
    return float(as_generator(stream).standard_normal())


def draw_from(dist: ScalarDistribution, stream: RngStream | np.random.Generator) -> float:
    """One draw from the given scalar distribution."""
    return float(dist.draw_many(stream, 1)[0])


def centered_noise(
    family: Family, siqr: float, stream: RngStream | np.random.Generator, size
) -> np.ndarray:
    """Zero-located draws, used as replacement offsets by the perturbation."""
    return ScalarDistribution(family, 0.0, siqr).draw_many(stream, size)
