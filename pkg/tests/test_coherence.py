import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haarcoh import (
    CoherenceValue,
    Field,
    PureState,
    RngStream,
    analytic_mean,
    l1_coherence,
    l1_raw,
    sample_haar_block,
)


def density_matrix_l1(amps: np.ndarray) -> float:
    """Oracle: build rho = |psi><psi| and sum the off-diagonal moduli."""
    rho = np.outer(amps, np.conjugate(amps))
    moduli = np.abs(rho)
    return float(moduli.sum() - np.trace(moduli))


def test_basis_state_has_zero_coherence():
    state = PureState(3, Field.COMPLEX, np.array([1.0, 0.0, 0.0], dtype=complex))
    assert l1_coherence(state).raw == 0.0


@pytest.mark.parametrize("dim", [2, 3, 5, 8])
@pytest.mark.parametrize("field", list(Field))
def test_equal_superposition_has_unit_normalized_coherence(dim, field):
    amps = np.full(dim, 1.0 / math.sqrt(dim))
    value = l1_coherence(PureState(dim, field, amps))
    assert abs(value.normalized - 1.0) <= 1e-12
    assert abs(value.raw - (dim - 1)) <= 1e-12 * dim


def test_rebit_three_four_five():
    amps = np.array([0.6, 0.8])
    expected = density_matrix_l1(amps)
    assert abs(expected - 24.0 / 25.0) <= 1e-15
    value = l1_coherence(PureState(2, Field.REAL, amps))
    assert abs(value.raw - expected) <= 1e-15
    assert abs(value.raw - 0.96) <= 1e-15


@pytest.mark.parametrize("field", list(Field))
def test_shortcut_matches_density_matrix(field):
    for dim in range(2, 9):
        amps = sample_haar_block(10_000, dim, field, RngStream(41, dim))
        fast = l1_raw(amps)
        slow = np.array([density_matrix_l1(row) for row in amps])
        assert np.max(np.abs(fast - slow)) <= 1e-12


@settings(deadline=None, max_examples=50)
@given(
    dim=st.integers(2, 6),
    index=st.integers(0, 5),
    phi=st.floats(0.0, 2.0 * math.pi, allow_nan=False),
    seed=st.integers(0, 2**32 - 1),
)
def test_phase_invariance(dim, index, phi, seed):
    amps = sample_haar_block(1, dim, Field.COMPLEX, RngStream(seed, 0))[0]
    rotated = amps.copy()
    rotated[index % dim] *= np.exp(1j * phi)
    assert abs(float(l1_raw(amps)) - float(l1_raw(rotated))) <= 1e-12


def test_analytic_mean_values():
    assert analytic_mean(2, Field.COMPLEX) == pytest.approx(math.pi / 4.0, rel=1e-15)
    assert analytic_mean(2, Field.COMPLEX) == pytest.approx(0.7853981634, abs=1e-9)
    assert analytic_mean(2, Field.REAL) == pytest.approx(2.0 / math.pi, rel=1e-15)
    assert analytic_mean(2, Field.REAL) == pytest.approx(0.6366197724, abs=1e-9)
    assert analytic_mean(4, Field.REAL) == pytest.approx(6.0 / math.pi, rel=1e-15)
    assert analytic_mean(4, Field.REAL) == pytest.approx(1.9098593171, abs=1e-9)
    with pytest.raises(ValueError):
        analytic_mean(1, Field.REAL)


@pytest.mark.parametrize("dim,field", [(2, Field.COMPLEX), (5, Field.COMPLEX),
                                       (2, Field.REAL), (5, Field.REAL)])
def test_sample_mean_matches_analytic(dim, field):
    amps = sample_haar_block(100_000, dim, field, RngStream(42, 10 * dim + (field is Field.REAL)))
    y = l1_raw(amps) / (dim - 1)
    se = y.std() / math.sqrt(y.size)
    assert abs(y.mean() - analytic_mean(dim, field) / (dim - 1)) <= 3.0 * se


def test_coherence_value_validation():
    with pytest.raises(ValueError):
        CoherenceValue(raw=-0.1, normalized=0.0, dim=2)
    with pytest.raises(ValueError):
        CoherenceValue(raw=3.0, normalized=1.5, dim=3)
