import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from haarcoh import (
    Field,
    MomentAccumulator,
    RngStream,
    bin_centers,
    fit_exponential,
    l1_raw,
    relative_frequency_percent,
    sample_haar_block,
    summarize,
)

unit_values = st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=2, max_size=200)


def test_bin_edge_rules():
    acc = MomentAccumulator()
    acc.ingest(0.0)
    acc.ingest(1.0)
    acc.ingest(0.025)
    assert acc.bins[0] == 1
    assert acc.bins[39] == 1
    assert acc.bins[1] == 1
    assert acc.count == int(acc.bins.sum()) == 3


def test_symmetric_data_has_zero_skewness():
    acc = MomentAccumulator(binned=False)
    acc.ingest_many([-1.0, 0.0, 1.0])
    assert summarize(acc).skewness == 0.0


def test_skewness_hand_value():
    # mu = 1/3, sigma = sqrt(2)/3, third central moment = 2/9 -> s = 1/sqrt(2)
    acc = MomentAccumulator()
    acc.ingest_many([0.0, 0.0, 1.0])
    assert abs(summarize(acc).skewness - 1.0 / math.sqrt(2.0)) <= 1e-12


def test_relative_frequency_examples():
    acc = MomentAccumulator()
    acc.ingest(0.5)
    percent = relative_frequency_percent(acc)
    assert percent[20] == 100.0 and percent.sum() == 100.0

    acc = MomentAccumulator()
    acc.ingest_many([0.0, 1.0])
    percent = relative_frequency_percent(acc)
    assert percent[0] == 50.0 and percent[39] == 50.0


def test_uniform_sample_fills_bins_evenly():
    u = RngStream(31, 0).generator().random(1_000_000)
    acc = MomentAccumulator().ingest_many(u)
    percent = relative_frequency_percent(acc)
    assert np.max(np.abs(percent - 2.5)) <= 0.1
    assert abs(percent.sum() - 100.0) <= 1e-9


def test_accumulator_errors():
    acc = MomentAccumulator()
    with pytest.raises(ValueError):
        acc.ingest(float("nan"))
    with pytest.raises(ValueError):
        acc.ingest(1.5)
    with pytest.raises(ValueError):
        relative_frequency_percent(MomentAccumulator())
    with pytest.raises(ValueError):
        summarize(MomentAccumulator().ingest(0.5))
    constant = MomentAccumulator().ingest_many([0.5, 0.5, 0.5])
    with pytest.raises(ValueError):
        summarize(constant)
    with pytest.raises(ValueError):
        MomentAccumulator().merge(MomentAccumulator(binned=False))


def test_unbinned_mode_accepts_wide_values():
    acc = MomentAccumulator(binned=False)
    acc.ingest_many([-3.0, 4.0, 10.0])
    assert acc.count == 3
    assert int(acc.bins.sum()) == 0


def _close(a: float, b: float, rel: float = 1e-9) -> bool:
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


@settings(deadline=None, max_examples=100)
@given(values=unit_values, split=st.integers(0, 200))
def test_merge_matches_single_pass(values, split):
    split = min(split, len(values))
    left = MomentAccumulator().ingest_many(values[:split])
    right = MomentAccumulator().ingest_many(values[split:])
    merged = left.merge(right)
    single = MomentAccumulator().ingest_many(values)
    assert merged.count == single.count
    assert np.array_equal(merged.bins, single.bins)
    for name in ("sum1", "sum2", "sum3"):
        assert _close(getattr(merged, name), getattr(single, name))


@settings(deadline=None, max_examples=100)
@given(a=unit_values, b=unit_values, c=unit_values)
def test_merge_associativity(a, b, c):
    # raw moments cancel badly only for near-degenerate samples, which the
    # accumulator is not meant for; keep a real spread in play
    assume(np.std(a + b + c) > 1e-3)
    accs = [MomentAccumulator().ingest_many(v) for v in (a, b, c)]
    lhs = accs[0].merge(accs[1]).merge(accs[2])
    rhs = accs[0].merge(accs[1].merge(accs[2]))
    s1, s2 = summarize(lhs), summarize(rhs)
    assert _close(s1.mean, s2.mean)
    assert _close(s1.std, s2.std)
    assert _close(s1.skewness, s2.skewness)


@settings(deadline=None, max_examples=100)
@given(values=unit_values)
def test_reversed_ingest_order_matches(values):
    assume(np.std(values) > 1e-3)
    forward = MomentAccumulator().ingest_many(values)
    backward = MomentAccumulator().ingest_many(values[::-1])
    s1, s2 = summarize(forward), summarize(backward)
    assert _close(s1.mean, s2.mean)
    assert _close(s1.std, s2.std)
    assert _close(s1.skewness, s2.skewness)


@settings(deadline=None, max_examples=100)
@given(values=st.lists(st.floats(-10.0, 10.0, allow_nan=False), min_size=3, max_size=100))
def test_mirrored_sample_negates_skewness(values):
    v = np.asarray(values)
    assume(v.std() > 1e-3)
    mean = v.mean()
    original = MomentAccumulator(binned=False).ingest_many(v)
    mirrored = MomentAccumulator(binned=False).ingest_many(2.0 * mean - v)
    s_orig = summarize(original).skewness
    s_mirr = summarize(mirrored).skewness
    assert abs(s_orig + s_mirr) <= 1e-12 + 1e-9 * abs(s_orig)


def test_fit_recovers_exact_model():
    alpha, beta, gamma = 0.419, 0.579, 0.0903
    points = [(d, alpha * math.exp(-beta * d) + gamma) for d in range(2, 8)]
    fit = fit_exponential(points)
    assert fit.converged
    assert abs(fit.alpha - alpha) <= 1e-6
    assert abs(fit.beta - beta) <= 1e-6
    assert abs(fit.gamma - gamma) <= 1e-6
    assert fit.sse < 1e-20


def test_fit_reports_its_own_sse():
    points = [(2, 0.25), (3, 0.17), (4, 0.13), (5, 0.11), (6, 0.10)]
    fit = fit_exponential(points)
    residuals = [y - (fit.alpha * math.exp(-fit.beta * d) + fit.gamma) for d, y in points]
    assert abs(fit.sse - sum(r * r for r in residuals)) <= 1e-12


def test_fit_gradient_norm_is_small_at_optimum():
    gen = RngStream(32, 0).generator()
    points = [(d, 0.5 * math.exp(-0.6 * d) + 0.1 + 1e-3 * gen.standard_normal()) for d in range(2, 9)]
    fit = fit_exponential(points)
    d = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points])
    decay = np.exp(-fit.beta * d)
    r = y - (fit.alpha * decay + fit.gamma)
    jac = np.column_stack([decay, -fit.alpha * d * decay, np.ones_like(d)])
    gradient = -2.0 * jac.T @ r
    assert np.linalg.norm(gradient) < 1e-6 * (1.0 + fit.sse)


def test_fit_flags_non_convergence():
    gen = RngStream(33, 0).generator()
    points = [(d, 0.5 * math.exp(-0.6 * d) + 0.1 + 0.05 * gen.standard_normal()) for d in range(2, 9)]
    fit = fit_exponential(points, max_iter=1)
    assert not fit.converged


def test_fit_needs_four_points():
    with pytest.raises(ValueError):
        fit_exponential([(2, 1.0), (3, 0.5), (4, 0.25)])


def test_bin_centers_layout():
    centers = bin_centers()
    assert centers.shape == (40,)
    assert centers[0] == pytest.approx(0.0125)
    assert centers[-1] == pytest.approx(0.9875)


def test_haar_qubit_skewness_matches_reported_value():
    amps = sample_haar_block(100_000, 2, Field.COMPLEX, RngStream(34, 0))
    acc = MomentAccumulator().ingest_many(l1_raw(amps))
    assert abs(summarize(acc).skewness - (-1.15)) <= 0.03
