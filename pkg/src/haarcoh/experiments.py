"""Experiment drivers: ordered ensembles, quenched-disorder averages,
strength and dimension sweeps, and the conditional perturbation study.

Work is split into fixed-size blocks of base states. Block j of a run draws
everything it needs from the stream (seed, j), and block results are merged
in index order, so reports are bit-identical for any worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import partial

import numpy as np

from .coherence import l1_raw
from .disorder import DisorderSpec, Target
from .sampling import Family, RngStream
from .states import Field, perturb_block, sample_haar_block
from .stats import (
    ExpFitResult,
    MomentAccumulator,
    SummaryStats,
    fit_exponential,
    relative_frequency_percent,
    summarize,
)

__all__ = [
    "BLOCK_SIZE",
    "ConditionalResult",
    "ConditionalSpec",
    "DimensionSweepResult",
    "ExperimentReport",
    "run_conditional",
    "run_dimension_sweep",
    "run_disordered",
    "run_strength_sweep",
    "run_typical",
]

BLOCK_SIZE = 8192
# Stream-index namespace for the perturbation phase of the conditional
# experiment; keeps its draws disjoint from the base-pool streams.
_PHASE_STRIDE = 1 << 32

MIN_STATES = 1000


@dataclass(frozen=True)
class ExperimentReport:
    """Everything one run produced, plus the configuration that made it."""

    dim: int
    field: Field
    n_states: int
    configs_per_state: int  # 0 for ordered runs
    seed: int
    disorder: DisorderSpec | None
    stats: SummaryStats
    percent: tuple[float, ...]
    fit: ExpFitResult | None = None
    wall_time_s: float = dc_field(default=0.0, compare=False)


@dataclass(frozen=True)
class ConditionalSpec:
    """Window of initial coherence for the conditional perturbation study."""

    m_in: float
    window_halfwidth: float = 0.01
    base_pool: int = 10_000_000

    def __post_init__(self) -> None:
        if self.window_halfwidth <= 0:
            raise ValueError("window_halfwidth must be > 0")
        if not (0.0 < self.m_in - self.window_halfwidth and self.m_in + self.window_halfwidth < 1.0):
            raise ValueError("coherence window must lie inside (0, 1)")
        if self.base_pool < 1:
            raise ValueError("base_pool must be >= 1")


@dataclass(frozen=True)
class ConditionalResult:
    m_in: float
    m_f: float
    percent: tuple[float, ...]
    n_selected: int
    wall_time_s: float = dc_field(default=0.0, compare=False)


@dataclass(frozen=True)
class DimensionSweepResult:
    reports: tuple[ExperimentReport, ...]
    fit_std: ExpFitResult | None
    fit_skewness: ExpFitResult | None
    unnormalized: tuple[tuple[int, float, float], ...]  # (dim, raw mean, raw std)
    fit_skipped: bool


def _block_spans(n_states: int) -> list[tuple[int, int, int]]:
    return [
        (j, lo, min(lo + BLOCK_SIZE, n_states))
        for j, lo in enumerate(range(0, n_states, BLOCK_SIZE))
    ]


def _map_blocks(task, spans, workers: int) -> list:
    if workers <= 1:
        return [task(span) for span in spans]
    chunk = max(1, len(spans) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, spans, chunksize=chunk))


def _merge_accumulators(accs: list[MomentAccumulator]) -> MomentAccumulator:
    merged = accs[0]
    for acc in accs[1:]:
        merged = merged.merge(acc)
    return merged


def _check_run_args(dim: int, n_states: int) -> None:
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if n_states < MIN_STATES:
        raise ValueError(f"n_states must be >= {MIN_STATES}")


def _check_disorder(field: Field, disorder: DisorderSpec) -> None:
    if field is Field.REAL and disorder.target is not Target.REAL_PARTS:
        raise ValueError("real-field runs require disorder on the real parts")


def _report(dim, field, n_states, configs, seed, disorder, acc, elapsed) -> ExperimentReport:
    return ExperimentReport(
        dim=dim,
        field=field,
        n_states=n_states,
        configs_per_state=configs,
        seed=seed,
        disorder=disorder,
        stats=summarize(acc),
        percent=tuple(relative_frequency_percent(acc).tolist()),
        wall_time_s=elapsed,
    )


def _typical_block(params, span) -> MomentAccumulator:
    dim, field, seed = params
    j, lo, hi = span
    gen = RngStream(seed, j).generator()
    amps = sample_haar_block(hi - lo, dim, field, gen)
    return MomentAccumulator().ingest_many(l1_raw(amps) / (dim - 1))


def run_typical(
    dim: int, field: Field, n_states: int, seed: int, workers: int = 1
) -> ExperimentReport:
    """Distribution of normalised coherence over Haar-uniform states."""
    _check_run_args(dim, n_states)
    t0 = time.perf_counter()
    task = partial(_typical_block, (dim, field, seed))
    acc = _merge_accumulators(_map_blocks(task, _block_spans(n_states), workers))
    return _report(dim, field, n_states, 0, seed, None, acc, time.perf_counter() - t0)


def _disordered_block(params, span) -> MomentAccumulator:
    dim, field, disorder, seed = params
    j, lo, hi = span
    gen = RngStream(seed, j).generator()
    n = hi - lo
    base = sample_haar_block(n, dim, field, gen)
    total = np.zeros(n)
    for _ in range(disorder.configs_per_state):
        total += l1_raw(perturb_block(base, disorder, gen))
    quenched = total / (disorder.configs_per_state * (dim - 1))
    return MomentAccumulator().ingest_many(quenched)


def run_disordered(
    dim: int,
    field: Field,
    n_states: int,
    disorder: DisorderSpec,
    seed: int,
    workers: int = 1,
) -> ExperimentReport:
    """Quenched average: each base state contributes the mean normalised
    coherence of its disordered copies, and that single value is binned."""
    _check_run_args(dim, n_states)
    _check_disorder(field, disorder)
    t0 = time.perf_counter()
    task = partial(_disordered_block, (dim, field, disorder, seed))
    acc = _merge_accumulators(_map_blocks(task, _block_spans(n_states), workers))
    return _report(
        dim, field, n_states, disorder.configs_per_state, seed, disorder, acc,
        time.perf_counter() - t0,
    )


def run_strength_sweep(
    dim: int,
    field: Field,
    n_states: int,
    gammas: list[float],
    seed: int,
    workers: int = 1,
    configs_per_state: int = 50,
) -> list[ExperimentReport]:
    """One Gaussian-disorder run per strength value."""
    if not gammas:
        raise ValueError("gammas must be nonempty")
    if any(g <= 0 for g in gammas):
        raise ValueError("gammas must be positive")
    return [
        run_disordered(
            dim,
            field,
            n_states,
            DisorderSpec(Family.GAUSSIAN, g, Target.REAL_PARTS, configs_per_state),
            seed,
            workers,
        )
        for g in gammas
    ]


def run_dimension_sweep(
    field: Field,
    dims: list[int],
    n_states: int,
    seed: int,
    workers: int = 1,
) -> DimensionSweepResult:
    """Ordered runs across dimensions, exponential fits of spread and
    asymmetry, and the un-normalised mean/std table."""
    if not dims:
        raise ValueError("dims must be nonempty")
    if any(d < 2 or d > 10 for d in dims):
        raise ValueError("dims must lie in 2..10")
    reports = tuple(run_typical(d, field, n_states, seed, workers) for d in dims)
    unnormalized = tuple(
        (r.dim, (r.dim - 1) * r.stats.mean, (r.dim - 1) * r.stats.std) for r in reports
    )
    fit_skipped = len(dims) < 4
    fit_std = fit_skew = None
    if not fit_skipped:
        fit_std = fit_exponential([(r.dim, r.stats.std) for r in reports])
        fit_skew = fit_exponential([(r.dim, r.stats.skewness) for r in reports])
    return DimensionSweepResult(
        reports=reports,
        fit_std=fit_std,
        fit_skewness=fit_skew,
        unnormalized=unnormalized,
        fit_skipped=fit_skipped,
    )


def _conditional_select_block(params, span) -> np.ndarray:
    spec, seed = params
    j, lo, hi = span
    gen = RngStream(seed, j).generator()
    amps = sample_haar_block(hi - lo, 2, Field.COMPLEX, gen)
    coh = l1_raw(amps)  # dim 2: raw equals normalised
    keep = np.abs(coh - spec.m_in) < spec.window_halfwidth
    return amps[keep]


def _conditional_perturb_block(params, span) -> MomentAccumulator:
    selected, disorder, seed = params
    j, lo, hi = span
    gen = RngStream(seed, _PHASE_STRIDE + j).generator()
    base = selected[lo:hi]
    acc = MomentAccumulator()
    for _ in range(disorder.configs_per_state):
        acc.ingest_many(l1_raw(perturb_block(base, disorder, gen)))
    return acc


def run_conditional(
    spec: ConditionalSpec,
    disorder: DisorderSpec,
    seed: int,
    workers: int = 1,
) -> ConditionalResult:
    """Perturb qubits whose coherence starts inside a narrow window and
    histogram the coherence of every disordered copy."""
    _check_disorder(Field.COMPLEX, disorder)
    t0 = time.perf_counter()

    select = partial(_conditional_select_block, (spec, seed))
    picked = _map_blocks(select, _block_spans(spec.base_pool), workers)
    selected = np.concatenate(picked, axis=0)
    if selected.shape[0] == 0:
        raise RuntimeError(
            f"no base states with coherence within {spec.window_halfwidth} of "
            f"{spec.m_in}; enlarge base_pool"
        )

    perturb_task = partial(_conditional_perturb_block, (selected, disorder, seed))
    accs = _map_blocks(perturb_task, _block_spans(selected.shape[0]), workers)
    acc = _merge_accumulators(accs)
    return ConditionalResult(
        m_in=spec.m_in,
        m_f=acc.sum1 / acc.count,
        percent=tuple(relative_frequency_percent(acc).tolist()),
        n_selected=int(selected.shape[0]),
        wall_time_s=time.perf_counter() - t0,
    )
