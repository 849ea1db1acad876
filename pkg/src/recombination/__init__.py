"""Recombination dynamics on product measures and the quasi-stationary
analysis of the associated partition-valued Markov chain."""

from .arith import EXACT, FLOAT
from .chain import (
    HittingDivergenceError,
    PartitionWeights,
    StateSpace,
    TransitionMatrix,
    WeightsError,
    build_chain,
    build_state_space,
    build_transition_matrix,
    can_reach,
    distribution_at,
    distribution_series,
    hitting_functional,
    hitting_vector,
    reachable,
    several_atoms_split,
    splittable_atoms,
    survival,
    survival_series,
)
from .measures import (
    FactorizedMeasure,
    MeasureError,
    ProductMeasure,
    factorize,
    marginal,
    mixture_of_factorizations,
    product_of_marginals,
    tensor,
    total_variation,
    xi_apply,
    xi_iterate,
)
from .montecarlo import Trajectory, estimate_survival, sample_trajectory, simulate_counts
from .partitions import (
    Partition,
    PartitionError,
    PartitionSyntaxError,
    ResourceLimitError,
    all_partitions,
    canonicalize,
    closure,
    coarsest,
    common_refinement,
    finer_eq,
    finest,
    format_partition,
    join,
    parse_partition,
)
from .quasistationary import (
    ConsistencyError,
    DegenerateModelError,
    QuasiStationaryReport,
    analyze,
    beta0,
    boundary,
    delta_set,
    eta_and_F,
    limit_constant,
    phi_vector,
    q_matrix,
    qsd_check,
    quasi_limiting,
    ratio_limit,
)

__version__ = "0.1.0"
