"""Log-scale gamma-family functions and normalizing constants.

Everything here stays in log space: the power-of-two exponent inside the
LKJ constant grows quadratically with the dimension and overflows double
precision near d ~ 40, so the linear-scale constant is never formed.

The central identity is ``log_f_constant(T, m) == 0``: the normalizing
constant of the |P|^((m-T-1)/2) correlation density written with the
multivariate gamma function agrees with the LKJ constant at
eta = (m - T + 1)/2.  The functions below compute both sides
independently so the identity can be checked numerically.
"""

import math

from .errors import DomainError

LN_2 = math.log(2.0)
LN_PI = math.log(math.pi)


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_multivariate_gamma(T, x):
    """ln Gamma_T(x) = T(T-1)/4 * ln pi + sum_k ln Gamma(x + (1-k)/2).

    Requires x > (T-1)/2 so every gamma argument is positive.
    """
    if T < 1 or T != int(T):
        raise DomainError(f"T must be a positive integer, got {T}")
    T = int(T)
    if not x > (T - 1) / 2.0:
        raise DomainError(f"log_multivariate_gamma requires x > (T-1)/2 = {(T - 1) / 2}, got {x}")
    terms = [math.lgamma(x + (1 - k) / 2.0) for k in range(1, T + 1)]
    return T * (T - 1) / 4.0 * LN_PI + math.fsum(terms)


def log_beta_function(a, b):
    """ln B(a, b) for a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"log_beta_function requires a, b > 0, got ({a}, {b})")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def log_lkj_constant(d, eta):
    """ln of the LKJ normalizing constant c_d at shape eta.

    c_d = 2^{sum_{k=1}^{d-1} (2 eta - 2 + d - k)(d - k)}
          * prod_{k=1}^{d-1} B(eta + (d-1-k)/2, eta + (d-1-k)/2)^{d-k}

    evaluated entirely in log space.  d = 1 gives 0 (empty sums).
    """
    if d < 1 or d != int(d):
        raise DomainError(f"d must be a positive integer, got {d}")
    if not eta > 0.0:
        raise DomainError(f"eta must be > 0, got {eta}")
    d = int(d)
    terms = []
    for k in range(1, d):
        a = eta + (d - 1 - k) / 2.0
        terms.append((2.0 * eta - 2.0 + d - k) * (d - k) * LN_2)
        terms.append((d - k) * log_beta_function(a, a))
    return math.fsum(terms)


def log_f_constant(T, m):
    """ln of the ratio between the two normalizing constants; identically 0.

    Evaluated through the telescoped product form

        sum_{k=1}^{T-1} [ (m-k-1)(T-k) ln 2 + ln Gamma(m/2) - (T/4) ln pi
                          + (2T-2k-1) ln Gamma((m-k)/2) - (T-k) ln Gamma(m-k) ]

    which is mathematically zero for every m > T - 1; the returned value
    is the accumulated floating-point residual.
    """
    if T < 1 or T != int(T):
        raise DomainError(f"T must be a positive integer, got {T}")
    T = int(T)
    if not m > T - 1:
        raise DomainError(f"log_f_constant requires m > T - 1 = {T - 1}, got {m}")
    terms = []
    lg_half_m = math.lgamma(m / 2.0)
    for k in range(1, T):
        terms.append((m - k - 1.0) * (T - k) * LN_2)
        terms.append(lg_half_m)
        terms.append(-(T / 4.0) * LN_PI)
        terms.append((2 * T - 2 * k - 1) * math.lgamma((m - k) / 2.0))
        terms.append(-(T - k) * math.lgamma(m - k))
    return math.fsum(terms)


def f_constant_tolerance(T):
    """Rounding budget for ``log_f_constant`` at dimension T.

    The residual grows linearly with the number of weighted log-gamma
    factors in the product, so the tolerance is 1e-12 per factor with a
    floor of 1e-10.
    """
    factors = (T - 1) + (T - 1) ** 2 + T * (T - 1) // 2
    return max(1e-10, 1e-12 * factors)


def duplication_residual(m):
    """Residual of 2^{m-2} pi^{-1/2} Gamma(m/2) Gamma((m-1)/2) / Gamma(m-1) = 1.

    Returns the log of the left-hand side, which is 0 up to rounding for
    every m > 1 (the gamma duplication identity).
    """
    if not m > 1.0:
        raise DomainError(f"duplication_residual requires m > 1, got {m}")
    return math.fsum(
        [
            (m - 2.0) * LN_2,
            -0.5 * LN_PI,
            math.lgamma(m / 2.0),
            math.lgamma((m - 1.0) / 2.0),
            -math.lgamma(m - 1.0),
        ]
    )


def dof_to_eta(T, m):
    """Shape eta = (m - T + 1)/2 matching degrees of freedom m at dimension T."""
    if T < 1 or T != int(T):
        raise DomainError(f"T must be a positive integer, got {T}")
    if not m > T - 1:
        raise DomainError(f"dof_to_eta requires m > T - 1 = {T - 1}, got {m}")
    return (m - T + 1) / 2.0


def eta_to_dof(d, eta):
    """Degrees of freedom m = 2*eta + d - 1 matching shape eta at dimension d."""
    if d < 1 or d != int(d):
        raise DomainError(f"d must be a positive integer, got {d}")
    if not eta > 0.0:
        raise DomainError(f"eta must be > 0, got {eta}")
    return 2.0 * eta + d - 1.0
