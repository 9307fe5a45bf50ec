"""Statistics of the l1-norm coherence of Haar-random pure states, with and
without glassy disorder in the state parameters."""

__version__ = "0.1.0"

from .coherence import CoherenceValue, analytic_mean, l1_coherence, l1_raw
from .disorder import DisorderSpec, Target
from .experiments import (
    BLOCK_SIZE,
    ConditionalResult,
    ConditionalSpec,
    DimensionSweepResult,
    ExperimentReport,
    run_conditional,
    run_dimension_sweep,
    run_disordered,
    run_strength_sweep,
    run_typical,
)
from .quadrature import (
    PolarPoint,
    QuadratureConfig,
    average_redit_coherence,
    closed_form_octant_area,
    octant_surface_area,
    polar_to_cartesian,
)
from .sampling import (
    NORMAL_QUARTILE,
    Family,
    RngStream,
    ScalarDistribution,
    cauchy_quantile,
    draw_from,
    draw_standard_normal,
)
from .states import Field, PureState, perturb, perturb_block, sample_haar, sample_haar_block
from .stats import (
    BIN_WIDTH,
    N_BINS,
    ExpFitResult,
    MomentAccumulator,
    SummaryStats,
    bin_centers,
    fit_exponential,
    relative_frequency_percent,
    summarize,
)

__all__ = [
    "BIN_WIDTH",
    "BLOCK_SIZE",
    "CoherenceValue",
    "ConditionalResult",
    "ConditionalSpec",
    "DimensionSweepResult",
    "DisorderSpec",
    "ExpFitResult",
    "ExperimentReport",
    "Family",
    "Field",
    "MomentAccumulator",
    "N_BINS",
    "NORMAL_QUARTILE",
    "PolarPoint",
    "PureState",
    "QuadratureConfig",
    "RngStream",
    "ScalarDistribution",
    "SummaryStats",
    "Target",
    "analytic_mean",
    "average_redit_coherence",
    "bin_centers",
    "cauchy_quantile",
    "closed_form_octant_area",
    "draw_from",
    "draw_standard_normal",
    "fit_exponential",
    "l1_coherence",
    "l1_raw",
    "octant_surface_area",
    "perturb",
    "perturb_block",
    "polar_to_cartesian",
    "relative_frequency_percent",
    "run_conditional",
    "run_dimension_sweep",
    "run_disordered",
    "run_strength_sweep",
    "run_typical",
    "sample_haar",
    "sample_haar_block",
    "summarize",
    "__version__",
]
