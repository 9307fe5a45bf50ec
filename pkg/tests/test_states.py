import numpy as np
import pytest

from haarcoh import (
    DisorderSpec,
    Family,
    Field,
    MomentAccumulator,
    PureState,
    RngStream,
    Target,
    l1_coherence,
    l1_raw,
    perturb,
    perturb_block,
    sample_haar,
    sample_haar_block,
)


def _norms(amps):
    return np.sqrt((np.abs(amps) ** 2).sum(axis=1))


@pytest.mark.parametrize("dim", [2, 3, 7])
@pytest.mark.parametrize("field", list(Field))
def test_sampled_states_are_normalized(dim, field):
    amps = sample_haar_block(500, dim, field, RngStream(11, dim))
    assert np.max(np.abs(_norms(amps) - 1.0)) <= 1e-12
    state = sample_haar(dim, field, RngStream(11, 100 + dim))
    assert isinstance(state, PureState)
    assert state.amplitudes.shape == (dim,)


def test_rebit_angle_uniform_on_circle():
    amps = sample_haar_block(1_000_000, 2, Field.REAL, RngStream(12, 0))
    theta = np.arctan2(amps[:, 1], amps[:, 0])
    counts, _ = np.histogram(theta, bins=8, range=(-np.pi, np.pi))
    level = len(theta) / 8
    assert np.max(np.abs(counts - level)) < 0.01 * level


def test_complex_qutrit_basis_weight_is_one_third():
    # Haar symmetry makes every |c_j|^2 exchangeable, so E|c_1|^2 = 1/d.
    amps = sample_haar_block(1_000_000, 3, Field.COMPLEX, RngStream(13, 0))
    weight = (np.abs(amps[:, 0]) ** 2).mean()
    assert abs(weight - 1.0 / 3.0) <= 0.001


def test_basis_permutation_leaves_coherence_unchanged():
    amps = sample_haar_block(50_000, 3, Field.COMPLEX, RngStream(14, 0))
    permuted = amps[:, [2, 0, 1]]
    assert np.max(np.abs(l1_raw(amps) - l1_raw(permuted))) <= 1e-12


def test_perturb_with_vanishing_siqr_preserves_coherence():
    state = sample_haar(4, Field.COMPLEX, RngStream(15, 0))
    weak = DisorderSpec(Family.GAUSSIAN, 1e-12, Target.BOTH_PARTS, 1)
    out = perturb(state, weak, RngStream(15, 1))
    assert abs(l1_coherence(out).raw - l1_coherence(state).raw) <= 1e-6


def test_perturbed_basis_state_gains_coherence():
    base = np.tile(np.array([[1.0 + 0.0j, 0.0 + 0.0j]]), (10_000, 1))
    disorder = DisorderSpec(Family.GAUSSIAN, 0.5, Target.REAL_PARTS, 1)
    out = perturb_block(base, disorder, RngStream(16, 0))
    assert float(l1_raw(out).mean()) > 0.0


@pytest.mark.parametrize("family", list(Family))
def test_perturb_output_is_normalized(family):
    amps = sample_haar_block(2_000, 3, Field.COMPLEX, RngStream(17, 0))
    out = perturb_block(amps, DisorderSpec(family, 0.5, Target.BOTH_PARTS, 1), RngStream(17, 1))
    assert np.max(np.abs(_norms(out) - 1.0)) <= 1e-12


def test_real_field_rejects_imaginary_target():
    state = sample_haar(2, Field.REAL, RngStream(18, 0))
    for target in (Target.IMAG_PARTS, Target.BOTH_PARTS):
        with pytest.raises(ValueError):
            perturb(state, DisorderSpec(Family.GAUSSIAN, 0.5, target, 1), RngStream(18, 1))


class _ZeroFirstGenerator:
    """Returns an all-zero draw first, then defers to a real stream."""

    def __init__(self):
        self._gen = RngStream(19, 0).generator()
        self._first = True

    def standard_normal(self, size):
        if self._first:
            self._first = False
            return np.zeros(size)
        return self._gen.standard_normal(size)


def test_zero_norm_vectors_are_redrawn():
    amps = sample_haar_block(1, 2, Field.REAL, _ZeroFirstGenerator())
    assert abs(float((amps**2).sum()) - 1.0) <= 1e-12


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(1, Field.REAL, np.array([1.0]))
    with pytest.raises(ValueError):
        PureState(2, Field.REAL, np.array([1.0, 1.0]))  # not normalised
    with pytest.raises(ValueError):
        PureState(2, Field.REAL, np.array([1.0 + 0.1j, 0.0]))  # imaginary parts
    with pytest.raises(ValueError):
        sample_haar(1, Field.COMPLEX, RngStream(20, 0))


def test_perturbation_is_deterministic_per_stream():
    amps = sample_haar_block(100, 2, Field.COMPLEX, RngStream(21, 0))
    disorder = DisorderSpec(Family.CAUCHY_LORENTZ, 0.5, Target.REAL_PARTS, 1)
    out1 = perturb_block(amps, disorder, RngStream(21, 1))
    out2 = perturb_block(amps, disorder, RngStream(21, 1))
    assert np.array_equal(out1, out2)


def test_real_and_imag_targets_give_matching_histograms():
    # Exchangeability of real and imaginary parts under Haar sampling.
    n, m = 50_000, 20
    disorder_kwargs = dict(family=Family.GAUSSIAN, siqr=0.5, configs_per_state=1)
    accs = {}
    for target, seed in ((Target.REAL_PARTS, 22), (Target.IMAG_PARTS, 23)):
        gen = RngStream(seed, 0).generator()
        base = sample_haar_block(n, 2, Field.COMPLEX, gen)
        total = np.zeros(n)
        spec = DisorderSpec(target=target, **disorder_kwargs)
        for _ in range(m):
            total += l1_raw(perturb_block(base, spec, gen))
        accs[target] = MomentAccumulator().ingest_many(total / m)
    p_real = 100.0 * accs[Target.REAL_PARTS].bins / n
    p_imag = 100.0 * accs[Target.IMAG_PARTS].bins / n
    assert np.max(np.abs(p_real - p_imag)) < 1.0
