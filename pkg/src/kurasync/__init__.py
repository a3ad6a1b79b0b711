"""Numerical certificates of global synchronization on graphs.

The package measures an expander profile (alpha, c_minus, c_plus) of a
graph, turns it into a certificate that every stable state of the
homogeneous oscillator flow is the synchronized one, and cross-checks the
arithmetic against direct simulation.
"""

__version__ = "0.1.0"

from .errors import (
    BracketError,
    ConsistencyError,
    DomainError,
    GenerationError,
    InputError,
    KurasyncError,
    NumericalError,
    ScheduleError,
)
from .graphs import (
    Graph,
    degree_extrema,
    edges_between,
    from_edge_list,
    gen_erdos_renyi,
    gen_named,
    gen_random_regular,
    read_edge_list,
    write_edge_list,
)
from .spectral import (
    ExpanderProfile,
    MixingReport,
    centered_adjacency_alpha,
    centered_laplacian_extremes,
    check_mixing_bounds,
    degree_bounds_from_profile,
    degree_implies_profile,
    expander_profile,
)
from .dynamics import (
    EquilibriumReport,
    FlowResult,
    arc_set,
    classify_equilibrium,
    daido,
    energy,
    flow,
    gradient,
    half_circle_check,
    hessian,
    kernel_K,
    kernel_stability_violations,
    random_phases,
    rotate_to_real_rho1,
    s_func,
    wrap_phases,
)
from .certify import (
    AmplificationTrace,
    CertResult,
    LargeArcStep,
    OrderParamBounds,
    Schedule,
    SmallArcStep,
    TailStep,
    amplification_run,
    cubic_root_a,
    max_alpha_regular,
    min_ramanujan_degree,
    order_param_bounds,
    order_param_validity_limit,
    preset_regular_schedule,
    theorem_condition,
)
from .randomgraphs import (
    ErPrediction,
    binom_tail_ratio_check,
    chernoff_degree_bound,
    concentration_tail,
    concentration_tail_gamma,
    er_failure_probability,
    er_prediction,
    gamma_roots,
    gamma_roots_eps,
    h_func,
    symmetrization_factor,
    symmetrization_norm_bound,
)
