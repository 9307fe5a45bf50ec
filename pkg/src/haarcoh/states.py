"""Pure states over real or complex fields: Haar-uniform generation and
coefficient-level disorder injection.

Haar uniformity comes from normalising vectors of i.i.d. standard normal
coefficients (d free parameters for a real field, 2d for a complex one).
Disorder replaces each targeted coefficient part with a draw centred at its
current value, then renormalises.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .disorder import DisorderSpec, Target
from .sampling import RngStream, as_generator, centered_noise

__all__ = ["Field", "PureState", "perturb", "perturb_block", "sample_haar", "sample_haar_block"]

NORM_TOL = 1e-12
# Norms below this count as a failed draw and are redrawn; keeps the
# normalising division safe on the measure-zero event.
_NORM_FLOOR = 1e-300


class Field(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class PureState:
    """Normalised state vector in the computational basis.

    Amplitudes are stored as float64 for a real field (imaginary parts are
    identically zero) and complex128 otherwise.
    """

    dim: int
    field: Field
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        amps = np.asarray(self.amplitudes)
        if amps.shape != (self.dim,):
            raise ValueError(f"amplitudes must have shape ({self.dim},)")
        if self.field is Field.REAL:
            if np.iscomplexobj(amps) and np.any(amps.imag != 0.0):
                raise ValueError("real-field state has nonzero imaginary parts")
            amps = np.asarray(amps.real, dtype=np.float64)
        else:
            amps = np.asarray(amps, dtype=np.complex128)
        norm_sq = float((amps.real**2 + amps.imag**2).sum())
        if abs(norm_sq - 1.0) > 2.0 * NORM_TOL:
            raise ValueError("state is not normalised")
        object.__setattr__(self, "amplitudes", amps)


def _row_norms(vectors: np.ndarray) -> np.ndarray:
    return np.sqrt((vectors.real**2 + vectors.imag**2).sum(axis=1))


def _normalize_rows(vectors: np.ndarray, redraw_rows) -> np.ndarray:
    """Divide each row by its norm, redrawing rows that are numerically zero."""
    norms = _row_norms(vectors)
    while True:
        bad = np.flatnonzero(norms < _NORM_FLOOR)
        if bad.size == 0:
            break
        vectors[bad] = redraw_rows(bad)
        norms[bad] = _row_norms(vectors[bad])
    return vectors / norms[:, None]


def sample_haar_block(
    n: int, dim: int, field: Field, stream: RngStream | np.random.Generator
) -> np.ndarray:
    """(n, dim) array of Haar-uniform states, one per row."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = as_generator(stream)

    def draw(count: int) -> np.ndarray:
        if field is Field.COMPLEX:
            z = gen.standard_normal((count, 2 * dim))
            return z[:, :dim] + 1j * z[:, dim:]
        return gen.standard_normal((count, dim))

    return _normalize_rows(draw(n), lambda idx: draw(idx.size))


def sample_haar(dim: int, field: Field, stream: RngStream | np.random.Generator) -> PureState:
    """One Haar-uniform pure state."""
    amps = sample_haar_block(1, dim, field, stream)[0]
    return PureState(dim=dim, field=field, amplitudes=amps)


def perturb_block(
    amplitudes: np.ndarray,
    disorder: DisorderSpec,
    stream: RngStream | np.random.Generator,
) -> np.ndarray:
    """Apply one disorder configuration to every row of a state block.

    Each targeted coefficient part is replaced by a draw from the disorder
    family located at its current value; untargeted parts are copied
    unchanged. Rows are renormalised afterwards.
    """
    gen = as_generator(stream)
    base = np.asarray(amplitudes)
    real_field = not np.iscomplexobj(base)
    if real_field and disorder.target is not Target.REAL_PARTS:
        raise ValueError("real-field states only admit disorder on the real parts")

    def perturb_rows(rows: np.ndarray) -> np.ndarray:
        shape = rows.shape
        if real_field:
            return rows + centered_noise(disorder.family, disorder.siqr, gen, shape)
        re, im = rows.real, rows.imag
        if disorder.target in (Target.REAL_PARTS, Target.BOTH_PARTS):
            re = re + centered_noise(disorder.family, disorder.siqr, gen, shape)
        if disorder.target in (Target.IMAG_PARTS, Target.BOTH_PARTS):
            im = im + centered_noise(disorder.family, disorder.siqr, gen, shape)
        return re + 1j * im

    out = perturb_rows(base)
    return _normalize_rows(out, lambda idx: perturb_rows(base[idx]))


def perturb(
    state: PureState,
    disorder: DisorderSpec,
    stream: RngStream | np.random.Generator,
) -> PureState:
    """One disordered copy of a pure state."""
    amps = perturb_block(state.amplitudes[None, :], disorder, stream)[0]
    return PureState(dim=state.dim, field=state.field, amplitudes=amps)
