"""Dense symmetric/triangular matrix primitives.

All matrices are plain ``numpy`` arrays of shape ``(T, T)``.  Symmetric
inputs are only ever read through their lower triangle, so the upper
triangle is never trusted; symmetric outputs are exactly symmetric by
construction.  Correlation matrices additionally carry an exact unit
diagonal.

The serialization layer stores only the lower-triangle off-diagonals
(row-major); see :func:`offdiag_lower` / :func:`corr_from_offdiag`.
"""

from functools import lru_cache

import numpy as np
from scipy.linalg.lapack import dtrtri

from .errors import (
    DomainError,
    IndexOutOfRangeError,
    NonPositiveDiagonalError,
    NotPositiveDefiniteError,
    SingularFactorError,
)

# A Cholesky pivot at or below PIVOT_RTOL * max(diagonal) counts as a
# positive-definiteness failure.  No eigendecomposition anywhere.
PIVOT_RTOL = 1e-13


def cholesky(S):
    """Lower Cholesky factor L with L @ L.T == S.

    Reads only the lower triangle of ``S``.  Raises
    :class:`NotPositiveDefiniteError` carrying the 0-based index of the
    first failing pivot.
    """
    S = np.asarray(S, dtype=float)
    T = S.shape[0]
    if S.ndim != 2 or S.shape[1] != T:
        raise DomainError(f"expected a square matrix, got shape {S.shape}")
    diag = np.diagonal(S)
    tol = PIVOT_RTOL * max(diag.max(initial=0.0), 0.0)
    L = np.zeros((T, T))
    for j in range(T):
        pivot = S[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= tol:
            raise NotPositiveDefiniteError(j)
        L[j, j] = np.sqrt(pivot)
        if j + 1 < T:
            L[j + 1 :, j] = (S[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


@lru_cache(maxsize=None)
def tril_indices(dim):
    """Cached ``np.tril_indices(dim, -1)``; treat the arrays as read-only."""
    return np.tril_indices(dim, -1)


def invert_lower_triangular(L):
    """Inverse of a lower triangular matrix, itself lower triangular."""
    L = np.asarray(L, dtype=float)
    if L.shape[0] == 0:
        return L.copy()
    inv, info = dtrtri(L, lower=1)
    if info > 0:
        raise SingularFactorError(f"triangular factor has zero diagonal at index {info - 1}")
    if info < 0:
        raise ValueError(f"illegal triangular inverse input (argument {-info})")
    # LAPACK leaves the strict upper triangle untouched; clear it.
    return np.tril(inv)


def log_det_spd(S):
    """log determinant of a symmetric positive definite matrix.

    Computed as 2 * sum(log(diag(cholesky(S)))); propagates
    :class:`NotPositiveDefiniteError`.
    """
    L = cholesky(S)
    return 2.0 * float(np.sum(np.log(np.diagonal(L))))


def cov_to_corr(S):
    """Split a covariance matrix into (correlation matrix, variance vector).

    The correlation entries are S_ij / sqrt(S_ii * S_jj); the diagonal of
    the result is assigned exactly 1 so downstream invariant checks never
    see 1 +/- ulp drift.
    """
    S = np.asarray(S, dtype=float)
    variances = np.diagonal(S).copy()
    if np.any(variances <= 0.0):
        bad = int(np.flatnonzero(variances <= 0.0)[0])
        raise NonPositiveDiagonalError(f"covariance diagonal entry {bad} is <= 0")
    d = np.sqrt(variances)
    P = S / np.outer(d, d)
    np.fill_diagonal(P, 1.0)
    return P, variances


def principal_submatrix(S, indices):
    """Restrict ``S`` to ``indices`` on both rows and columns."""
    S = np.asarray(S)
    T = S.shape[0]
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise IndexOutOfRangeError(f"indices must be distinct, got {idx}")
    for i in idx:
        if not 0 <= i < T:
            raise IndexOutOfRangeError(f"index {i} out of range for dim {T}")
    ix = np.asarray(idx, dtype=int)
    return S[np.ix_(ix, ix)]


def delete_index_submatrix(S, i):
    """Principal submatrix obtained by deleting row and column ``i``."""
    T = np.asarray(S).shape[0]
    if not 0 <= i < T:
        raise IndexOutOfRangeError(f"index {i} out of range for dim {T}")
    keep = [j for j in range(T) if j != i]
    return principal_submatrix(S, keep)


def check_correlation_matrix(P):
    """Raise :class:`DomainError` describing the first violated invariant.

    A valid correlation matrix has an exact unit diagonal, symmetric
    entries, off-diagonals strictly inside (-1, 1) for dim >= 2, and is
    positive definite (Cholesky succeeds).
    """
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DomainError(f"not a square matrix: shape {P.shape}")
    if P.shape[0] < 1:
        raise DomainError("dim must be >= 1")
    if np.any(np.diagonal(P) != 1.0):
        bad = int(np.flatnonzero(np.diagonal(P) != 1.0)[0])
        raise DomainError(f"diagonal entry {bad} is not exactly 1")
    if not np.array_equal(P, P.T):
        raise DomainError("matrix is not symmetric")
    off = offdiag_lower(P)
    if off.size and np.max(np.abs(off)) >= 1.0:
        raise DomainError("an off-diagonal entry is outside (-1, 1)")
    try:
        cholesky(P)
    except NotPositiveDefiniteError as exc:
        raise DomainError(f"matrix is not positive definite (pivot {exc.index})") from exc


def is_correlation_matrix(P):
    try:
        check_correlation_matrix(P)
    except DomainError:
        return False
    return True


def offdiag_lower(P):
    """Lower-triangle off-diagonal entries in row-major order.

    Order is (2,1), (3,1), (3,2), ... in 1-based terms, matching the
    serialized column layout.
    """
    P = np.asarray(P)
    return P[tril_indices(P.shape[0])]


def corr_from_offdiag(values, dim=None):
    """Rebuild a full correlation matrix from its packed off-diagonals."""
    values = np.asarray(values, dtype=float)
    if dim is None:
        dim = dim_from_npairs(values.size)
    elif values.size != dim * (dim - 1) // 2:
        raise DomainError(
            f"expected {dim * (dim - 1) // 2} off-diagonal values for dim {dim}, got {values.size}"
        )
    P = np.eye(dim)
    rows, cols = tril_indices(dim)
    P[rows, cols] = values
    P[cols, rows] = values
    return P


def dim_from_npairs(npairs):
    """Matrix dimension T with T*(T-1)/2 == npairs."""
    dim = int(round((1 + np.sqrt(1 + 8 * npairs)) / 2))
    if dim * (dim - 1) // 2 != npairs:
        raise DomainError(f"{npairs} is not T*(T-1)/2 for any integer T")
    return dim
