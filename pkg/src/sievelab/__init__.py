"""Desk-scale laboratory for the large sieve with power moduli.

Core objects: exact Farey families a/q^k, their clustering statistic M,
the Gram-operator sieve constant Delta*, certified 1/n-spaced partitions,
polynomial congruence box counts, and an exact catalog of published bound
formulas with piecewise-linear exponent comparison.
"""

from .bounds import (
    BoundId,
    PROVEN_COMPETITORS,
    crossover,
    dominant_bound,
    evaluate,
    exponent,
    exponent_profile,
    improvement_interval,
    regime_map,
)
from .budgets import Budgets
from .congruence import (
    BoxSpec,
    PolySpec,
    count_box_solutions,
    count_close_pairs_via_congruence,
)
from .errors import (
    ConvergenceError,
    InvalidArgumentError,
    ResourceLimitError,
    SieveLabError,
)
from .exactmath import circle_distance, make_rational, parse_rational, rational_str
from .farey import (
    FareyFamily,
    FareyPoint,
    SpacingReport,
    enumerate_family,
    max_close_count,
    min_spacing,
    predicted_size,
)
from .gram import (
    ComplexSequence,
    GramKernel,
    delta_star,
    delta_star_dense_oracle,
    kernel_entry,
    lhs_energy,
)
from .partition import (
    build_partition,
    covering_bound,
    dyadic_assembly,
    verify_partition,
)
from .survey import SurveyConfig, run_survey
from .verify import run_verify

__version__ = "0.1.0"
