"""Energy-conserving SBP solver for the 2D compressible Euler equations in
square-root variables, with the verification suite for the split form's
algebraic identities and boundary analysis."""

from .boundary import (
    BcRegimeReport,
    RotatedState,
    UnitNormal,
    bc_threshold,
    boundary_matrix,
    closed_form_eigenvalues,
    eigenvalue_crosscheck,
    expanded_contraction,
    free_param_contraction,
    required_bc_count,
    rotate,
    rotated_boundary_matrix,
    wall_sat_penalty,
)
from .exceptions import (
    CflError,
    ConfigError,
    DivergenceError,
    DomainError,
    ModelError,
    NormalizationError,
    SizeError,
    SkewEulerError,
    VacuumStateError,
)
from .kernels import BACKEND, HAVE_COMPILED
from .matrices import (
    FreeParams,
    ZERO_PARAMS,
    check_general_skew_conditions,
    coeff_a,
    coeff_atilde,
    coeff_b,
    coeff_btilde,
    norm_matrix,
    skew_identity_residual,
    split_matrices,
)
from .sbp import (
    SbpOperator1D,
    TensorApplicator,
    apply_dx,
    apply_dy,
    build_sbp,
    inner_product,
    operators_for_grid,
    verify_accuracy,
    verify_sbp_constraint,
)
from .solver import (
    EnergySample,
    RunRecord,
    SchemeConfig,
    discrete_boundary_flux,
    discrete_energy,
    energy_rate_residual,
    rk4_step,
    run,
    semi_discrete_rhs,
)
from .state import (
    Field,
    GasModel,
    Grid2D,
    PhysicalState,
    SkewState,
    from_skew,
    sound_speed,
    to_skew,
)

__version__ = "0.1.0"
