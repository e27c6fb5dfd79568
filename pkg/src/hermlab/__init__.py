"""hermlab: numerical harmonic analysis for the Hermite operator -Delta + |x|^2.

Spectral expansions in Hermite functions, heat/Poisson semigroups (kernel
and spectral form), multivariate Littlewood-Paley square functions with
gamma-radonifying norms over finite-dimensional value spaces, spectral
multipliers with a Mellin-transform integrability estimator, ladder/Riesz
operator algebra, and Sobolev/potential/Triebel-Lizorkin norm experiments.
"""

from .errors import (
    BudgetError,
    DimensionMismatchError,
    NonConvergenceError,
    ValidationError,
)
from .expansion import (
    HermiteExpansion,
    analyze,
    random_expansion,
    synthesize,
    synthesize_on_grid,
)
from .gfunction import (
    GFieldSample,
    equivalence_experiment,
    g_field,
    g_norm_field,
    g_norm_profile,
    gamma_norm,
    gamma_norm_exact,
    gamma_norm_operator,
    hn_norm,
    polarization_check,
)
from .grids import SpatialGrid, TimeGrid, composite_gauss_legendre, default_grid, lp_norm
from .hermite import eval_hermite, eval_hermite_multi, hermite_matrix
from .multiplier import (
    GrowthModel,
    MellinSample,
    MultiplierSymbol,
    apply_multiplier,
    build_symbol,
    gamma_envelope,
    half_ratio_symbol,
    identity_4_1_check,
    identity_symbol,
    imaginary_power,
    imaginary_power_symbol,
    meda_condition,
    mellin_transform,
    riesz_multiplier_symbol,
    tau_inverse_symbol,
)
from .semigroup import (
    DecayReport,
    FractionalOrder,
    SubordinationQuadrature,
    fractional_derivative_closed_form,
    fractional_derivative_scalar,
    fractional_g_operator,
    heat_apply,
    kernel_decay_check,
    mehler_kernel,
    mehler_kernel_1d,
    negative_power,
    poisson_apply,
    poisson_apply_subordination,
    poisson_kernel_1d,
    poisson_kernel_derivative_1d,
    poisson_time_derivative,
)
from .sobolev import (
    ladder_apply,
    potential_norm,
    riesz_transform,
    shift,
    sobolev_equivalence_experiment,
    sobolev_norm,
    tau_operator,
    tau_operator_via_riesz,
    triebel_norm,
    triebel_profile,
)
from .spaces import ValueSpace
from .symbols import parse_symbol
from .config import ExperimentConfig, load_config, parse_config
from .report import ExperimentReport, export, load_report
from .runner import run

__version__ = "0.1.0"
