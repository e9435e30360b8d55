"""Log densities for the matrix distributions handled by this package.

All values are natural-log scale.  Every trace term is computed through
triangular solves against Cholesky factors; no matrix inverse is ever
formed.  The restricted inverse-Wishart correlation density is only
available as an unnormalized kernel (its normalizing constant has no
known closed form), which the ``normalized`` flag records.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError
from .linalg import cholesky, delete_index_submatrix
from .specfun import (
    LN_2,
    log_beta_function,
    log_gamma,
    log_lkj_constant,
    log_multivariate_gamma,
)


@dataclass(frozen=True)
class LogDensity:
    """A log-density value plus whether it includes its normalizing constant."""

    value: float
    normalized: bool


def _logdet_from_factor(L):
    return 2.0 * float(np.sum(np.log(np.diagonal(L)))) if L.shape[0] else 0.0


def wishart_log_density(S, K, Sigma):
    """Normalized Wishart log density of S at dof K and scale Sigma.

    log p = -(KT/2) ln 2 - ln Gamma_T(K/2) - (K/2) ln|Sigma|
            + ((K-T-1)/2) ln|S| - tr(Sigma^{-1} S)/2
    """
    S = np.asarray(S, dtype=float)
    T = S.shape[0]
    if not K > T - 1:
        raise DomainError(f"degrees of freedom must exceed T - 1 = {T - 1}, got {K}")
    L_s = cholesky(S)
    L_sig = cholesky(Sigma)
    # tr(Sigma^{-1} S) = ||L_sig^{-1} L_s||_F^2
    V = solve_triangular(L_sig, L_s, lower=True, check_finite=False)
    trace = float(np.sum(V * V))
    value = (
        -0.5 * K * T * LN_2
        - log_multivariate_gamma(T, K / 2.0)
        - 0.5 * K * _logdet_from_factor(L_sig)
        + 0.5 * (K - T - 1) * _logdet_from_factor(L_s)
        - 0.5 * trace
    )
    return LogDensity(value, normalized=True)


def inverse_wishart_log_density(Sigma, m, Psi):
    """Normalized inverse-Wishart log density of Sigma at dof m and scale Psi.

    Uses the standard constant |Psi|^{m/2} / (2^{mT/2} Gamma_T(m/2)),
    i.e. the Wishart constant carried through the change of variables
    Sigma -> Sigma^{-1} (Jacobian |Sigma|^{-(T+1)}); the equality with
    the transformed Wishart density is exact and is tested.
    """
    Sigma = np.asarray(Sigma, dtype=float)
    T = Sigma.shape[0]
    if not m > T - 1:
        raise DomainError(f"degrees of freedom must exceed T - 1 = {T - 1}, got {m}")
    L_sigma = cholesky(Sigma)
    L_psi = cholesky(Psi)
    # tr(Sigma^{-1} Psi) = ||L_sigma^{-1} L_psi||_F^2
    V = solve_triangular(L_sigma, L_psi, lower=True, check_finite=False)
    trace = float(np.sum(V * V))
    value = (
        0.5 * m * _logdet_from_factor(L_psi)
        - 0.5 * m * T * LN_2
        - log_multivariate_gamma(T, m / 2.0)
        - 0.5 * (m + T + 1) * _logdet_from_factor(L_sigma)
        - 0.5 * trace
    )
    return LogDensity(value, normalized=True)


def rw_log_density(P, m):
    """Normalized log density |P|^{(m-T-1)/2} * Gamma^T(m/2) / Gamma_T(m/2).

    The caller supplies a valid correlation matrix; positive
    definiteness is enforced by the Cholesky pass.
    """
    P = np.asarray(P, dtype=float)
    T = P.shape[0]
    if not m > T - 1:
        raise DomainError(f"degrees of freedom must exceed T - 1 = {T - 1}, got {m}")
    logdet = _logdet_from_factor(cholesky(P))
    value = (
        T * log_gamma(m / 2.0)
        - log_multivariate_gamma(T, m / 2.0)
        + 0.5 * (m - T - 1) * logdet
    )
    return LogDensity(value, normalized=True)


def lkj_log_density(P, eta):
    """Normalized LKJ log density |P|^{eta-1} / c_d."""
    P = np.asarray(P, dtype=float)
    d = P.shape[0]
    if not eta > 0.0:
        raise DomainError(f"eta must be > 0, got {eta}")
    logdet = _logdet_from_factor(cholesky(P))
    value = -log_lkj_constant(d, eta) + (eta - 1.0) * logdet
    return LogDensity(value, normalized=True)


def riw_log_density(P, m):
    """Unnormalized log kernel of the inverse-Wishart-route correlation law.

    kernel = ((m-1)(T-1)/2 - 1) ln|P| - (m/2) sum_i ln|P with row/col i deleted|

    The sum runs over the T submatrices obtained by deleting one index.
    """
    P = np.asarray(P, dtype=float)
    T = P.shape[0]
    if not m > T - 1:
        raise DomainError(f"degrees of freedom must exceed T - 1 = {T - 1}, got {m}")
    if T == 1:
        return LogDensity(0.0, normalized=False)
    logdet = _logdet_from_factor(cholesky(P))
    minors = sum(
        _logdet_from_factor(cholesky(delete_index_submatrix(P, i))) for i in range(T)
    )
    value = (0.5 * (m - 1.0) * (T - 1.0) - 1.0) * logdet - 0.5 * m * minors
    return LogDensity(value, normalized=False)


def marginal_rho_log_density(rho, a):
    """Log density of a single correlation entry: Beta(a, a) mapped to [-1, 1].

    log f(rho) = (a-1) ln(1 - rho^2) - ln B(a, a) - (2a-1) ln 2
    """
    if not a > 0.0:
        raise DomainError(f"shape must be > 0, got {a}")
    if not -1.0 < rho < 1.0:
        raise DomainError(f"rho must lie strictly inside (-1, 1), got {rho}")
    return (a - 1.0) * np.log1p(-rho * rho) - log_beta_function(a, a) - (2.0 * a - 1.0) * LN_2
