"""Extreme-value statistics of the best relay in a SWIPT dual-hop network."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .evt import (
    approx_max_cdf,
    approx_max_pdf,
    approx_max_quantile,
    bin_thetas,
    classify_case,
    gumbel_cdf,
    normalized_max_samples,
    normalizing_constants,
    select_beta,
    u_of_gamma,
)
from .exact import (
    CdfCurve,
    empirical_cdf,
    exact_max_cdf,
    ks_distance,
    ks_statistic,
    link_cdf_quadrature,
    link_cdf_series,
    mean_theta_iid_baseline,
)
from .metrics import (
    CapacityReport,
    capacity_report,
    ergodic_capacity,
    outage_capacity,
    outage_probability,
    throughput,
)
from .optimize import (
    OptimizationResult,
    maximize_ergodic,
    maximize_throughput,
    minimize_outage,
    protocol_comparison,
)
from .ordering import OrderingVerdict, check_dominance, predict_order
from .scenario import (
    LinkParams,
    LinkSet,
    SampleBatch,
    ScenarioConfig,
    ScenarioError,
    build_links,
    sample_batch,
    sample_max,
)
from .special import exp_integral
