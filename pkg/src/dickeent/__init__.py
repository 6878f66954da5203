"""Entanglement and correlation measures for symmetric multi-qubit states.

Closed-form relative entropy of entanglement for totally symmetric qubit
states, their reduced states, and their thermal mixtures, together with the
classical-correlation and long-range-order quantities that survive the
macroscopic limit, and a dense brute-force oracle that verifies every closed
form at small size.
"""

from .core import (
    DickeDiagonal,
    DickeState,
    GeneralizedDickeState,
    PhasedDickeState,
    TwoSiteState,
    binary_entropy,
    closest_separable_diagonal,
    dephase_equivalent,
    log_binomial,
    log_binomial_exact,
    reduced_l,
    reduced_two_site,
)
from .correlations import (
    CorrelationReport,
    MeasuredCorrelation,
    classical_correlation_closed,
    classical_correlation_measured,
    correlation_report,
    max_singlet_fraction,
    mutual_information_pure,
    odlro,
)
from .measures import (
    EQUAL,
    GREATER,
    LESS,
    CrossoverReport,
    SumInequalityReport,
    check_sum_inequality,
    crossover_compare,
    crossover_scan,
    entropy_block,
    entropy_one_vs_rest,
    first_crossover,
    is_two_site_entangled,
    ree_l,
    ree_pure,
    ree_pure_asymptotic,
    ree_pure_generalized,
    ree_two_site,
)
from .thermal import (
    CriticalTempParams,
    MutualInformationMixtureReport,
    ThermalEnsemble,
    average_entanglement,
    average_entanglement_asymptotic,
    coupling_for_temperature,
    critical_temperature,
    inseparability_sum,
    make_ensemble,
    mutual_information_mixture,
    mutual_information_mixture_uniform,
    odlro_mixture,
    odlro_mixture_exact,
    point_ensemble,
    ree_upper_bound,
    ree_upper_bound_printed,
    thermal_inseparable,
    thermal_two_site,
    uniform_ensemble,
)

__version__ = "0.1.0"
