"""Random generation of correlation matrices.

Three samplers over the space of positive definite correlation matrices:

* ``rw``    — factor-based: draw a lower triangular factor A with
  chi-square diagonal and standard normal subdiagonal, form X = A A',
  and keep the correlation part of X.
* ``riw``   — same factor, but invert it (B = A^{-1}) and keep the
  correlation part of Y = B' B.
* ``onion`` — dimension-growing LKJ sampler: at each expansion step draw
  a squared radius from a Beta law and a direction uniform on the
  sphere, appending one row to a running Cholesky factor.

``rw`` at degrees of freedom m coincides in distribution with ``onion``
at eta = (m - T + 1)/2; the validation suites certify this numerically.

A plain Wishart / inverse-Wishart path with an explicit scale matrix is
included for the variance-marginal and independence checks.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .linalg import (
    cholesky,
    cov_to_corr,
    invert_lower_triangular,
    offdiag_lower,
    tril_indices,
)
from .streams import RandomStream

# Draws whose largest |rho| lands within one ulp-scale band of 1 would
# violate the open-interval invariant; they are rejected and redrawn.
_BOUNDARY_TOL = 1e-14

METHODS = ("onion", "rw", "riw")


def _require_dof(T, m):
    if T < 1 or T != int(T):
        raise DomainError(f"dimension must be a positive integer, got {T}")
    if not m > T - 1:
        raise DomainError(f"degrees of freedom must exceed T - 1 = {T - 1}, got {m}")


def sample_bartlett_factor(T, m, rng):
    """Lower triangular factor A of a standard Wishart draw.

    Diagonal entry i (0-based) is sqrt(g) with g ~ chi-square(m - i);
    entries below the diagonal are independent standard normals.  Then
    A A' is Wishart with m degrees of freedom and identity scale.
    """
    _require_dof(T, m)
    T = int(T)
    g = rng.generator
    # chi-square(k) == Gamma(k/2, scale=2); diagonal dofs are m, m-1, ..., m-T+1
    dof = m - np.arange(T)
    A = np.zeros((T, T))
    np.fill_diagonal(A, np.sqrt(2.0 * g.standard_gamma(dof / 2.0)))
    if T > 1:
        A[tril_indices(T)] = g.standard_normal(T * (T - 1) // 2)
    return A


def sample_rw_correlation(T, m, rng):
    """One correlation matrix from the Wishart route (equals LKJ at
    eta = (m - T + 1)/2)."""
    A = sample_bartlett_factor(T, m, rng)
    P, _ = cov_to_corr(A @ A.T)
    return P


def sample_riw_correlation(T, m, rng):
    """One correlation matrix from the inverse-Wishart route."""
    A = sample_bartlett_factor(T, m, rng)
    B = invert_lower_triangular(A)
    P, _ = cov_to_corr(B.T @ B)
    return P


def sample_onion_correlation(d, eta, rng):
    """One correlation matrix from the onion construction at shape eta.

    The running Cholesky factor L is grown one row per step: for the
    step taking size k to k+1, draw y ~ Beta(k/2, eta + (d-k-1)/2) and a
    direction u uniform on the (k-1)-sphere, then append the row
    (sqrt(y) u', sqrt(1-y)).  Rows have unit norm, so L L' has a unit
    diagonal by construction.
    """
    if d < 1 or d != int(d):
        raise DomainError(f"dimension must be a positive integer, got {d}")
    if not eta > 0.0:
        raise DomainError(f"eta must be > 0, got {eta}")
    d = int(d)
    if d == 1:
        return np.ones((1, 1))
    g = rng.generator
    L = np.zeros((d, d))
    L[0, 0] = 1.0
    for k in range(1, d):
        y = g.beta(k / 2.0, eta + (d - k - 1) / 2.0)
        u = g.standard_normal(k)
        u /= np.linalg.norm(u)
        L[k, :k] = np.sqrt(y) * u
        L[k, k] = np.sqrt(1.0 - y)
    P = L @ L.T
    np.fill_diagonal(P, 1.0)
    return P


def sample_wishart(T, m, Psi, rng):
    """One draw from the Wishart distribution with scale matrix Psi."""
    Psi = np.asarray(Psi, dtype=float)
    _require_dof(T, m)
    Lpsi = cholesky(Psi)
    F = Lpsi @ sample_bartlett_factor(T, m, rng)
    return F @ F.T


def sample_inverse_wishart(T, m, Psi, rng):
    """One draw from the inverse-Wishart distribution with scale matrix Psi.

    Draws W from the Wishart law with scale Psi^{-1} (factor form:
    Cholesky of Psi^{-1} times the triangular factor) and returns its
    inverse, without ever forming W itself.
    """
    Psi = np.asarray(Psi, dtype=float)
    _require_dof(T, m)
    Linv = invert_lower_triangular(cholesky(Psi))
    M = cholesky(Linv.T @ Linv)  # lower Cholesky factor of Psi^{-1}
    F = M @ sample_bartlett_factor(T, m, rng)
    # W = F F' with F lower triangular, so W^{-1} = (F^{-1})' F^{-1}
    H = invert_lower_triangular(F)
    return H.T @ H


_CORRELATION_SAMPLERS = {
    "rw": sample_rw_correlation,
    "riw": sample_riw_correlation,
    "onion": sample_onion_correlation,
}


def sample_correlation(method, T, param, rng):
    """Dispatch to one correlation sampler; ``param`` is m for rw/riw, eta for onion."""
    try:
        sampler = _CORRELATION_SAMPLERS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}") from None
    return sampler(T, param, rng)


@dataclass
class SampleBatch:
    """A batch of correlation matrices drawn with one method and parameter."""

    method: str
    dim: int
    param: float  # degrees of freedom for rw/riw, eta for onion
    count: int
    seed: int
    matrices: np.ndarray = field(repr=False)  # shape (count, dim, dim)
    retries: int = 0


def sample_batch(method, dim, param, n, seed):
    """Draw ``n`` matrices, one independent child stream per matrix.

    Because each matrix consumes its own split stream, the result does
    not depend on iteration order.  Draws with an off-diagonal at the
    (-1, 1) boundary (probability ~0, possible at tiny m - T + 1) are
    rejected and redrawn from the same child stream; the total number of
    rejections is reported in ``retries``.
    """
    if n < 1:
        raise DomainError(f"batch size must be >= 1, got {n}")
    if method not in _CORRELATION_SAMPLERS:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    streams = RandomStream(seed).split(n)
    matrices = np.empty((n, int(dim), int(dim)))
    retries = 0
    for i, stream in enumerate(streams):
        while True:
            P = sample_correlation(method, dim, param, stream)
            off = offdiag_lower(P)
            if off.size == 0 or np.max(np.abs(off)) < 1.0 - _BOUNDARY_TOL:
                break
            retries += 1
        matrices[i] = P
    return SampleBatch(
        method=method,
        dim=int(dim),
        param=float(param),
        count=n,
        seed=int(seed),
        matrices=matrices,
        retries=retries,
    )
