"""Random correlation matrices: samplers, densities, validation, benchmark."""

from .bench import BenchReport, BenchRow, run_benchmark
from .densities import (
    LogDensity,
    inverse_wishart_log_density,
    lkj_log_density,
    marginal_rho_log_density,
    riw_log_density,
    rw_log_density,
    wishart_log_density,
)
from .errors import (
    DomainError,
    IndexOutOfRangeError,
    NonPositiveDiagonalError,
    NotPositiveDefiniteError,
    RandCorrError,
    SingularFactorError,
    TooFewSamplesError,
)
from .linalg import (
    check_correlation_matrix,
    cholesky,
    corr_from_offdiag,
    cov_to_corr,
    delete_index_submatrix,
    invert_lower_triangular,
    is_correlation_matrix,
    log_det_spd,
    offdiag_lower,
    principal_submatrix,
)
from .samplers import (
    SampleBatch,
    sample_bartlett_factor,
    sample_batch,
    sample_correlation,
    sample_inverse_wishart,
    sample_onion_correlation,
    sample_riw_correlation,
    sample_rw_correlation,
    sample_wishart,
)
from .specfun import (
    dof_to_eta,
    duplication_residual,
    eta_to_dof,
    log_beta_function,
    log_f_constant,
    log_gamma,
    log_lkj_constant,
    log_multivariate_gamma,
)
from .streams import DEFAULT_SEED, RandomStream
from .validation import (
    JacobianCheck,
    KsResult,
    MomentReport,
    beta_cdf_on_interval,
    chi_square_cdf,
    inverse_gamma_cdf,
    jacobian_check_sigma_to_corr,
    jacobian_check_var_to_sd,
    ks_one_sample,
    ks_two_sample,
    moment_report,
    run_suite,
    theorem_suite,
)

__version__ = "0.1.0"
