"""Statistical test machinery and the numerical check suites.

The suites turn distributional claims into deterministic pass/fail
checks: every suite runs from a fixed seed, so a given (seed, suite)
pair always produces the same report.  Kolmogorov-Smirnov acceptance is
p > 1e-3 at n = 1e4 or more; if a KS check fails, the suite may redraw
it once from a fixed secondary stream (at most one such repeat per
suite run), keeping the family-wise behavior deterministic.

``theorem_suite`` is the executable form of the distribution
equivalence: it checks the normalizing-constant identity, pointwise
equality of the two log densities, and two-sample agreement between the
factor-based sampler and the onion sampler.  The ``constant_perturbation``
and ``eta_shift`` arguments deliberately corrupt one side so the
suite's sensitivity can itself be tested.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import betainc, gammainc, gammaincc

from .densities import lkj_log_density, rw_log_density
from .errors import DomainError, TooFewSamplesError
from .linalg import cov_to_corr, offdiag_lower
from .samplers import (
    sample_batch,
    sample_inverse_wishart,
    sample_wishart,
)
from .specfun import (
    dof_to_eta,
    duplication_residual,
    eta_to_dof,
    f_constant_tolerance,
    log_f_constant,
    log_gamma,
    log_lkj_constant,
    log_multivariate_gamma,
)
from .streams import DEFAULT_SEED, RandomStream

KS_P_THRESHOLD = 1e-3
_KOLMOGOROV_TERMS = 100


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov tests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n: int
    n2: int | None = None


def kolmogorov_sf(lam):
    """Asymptotic Kolmogorov survival function, first 100 series terms.

    Below lam ~ 0.04 the alternating series has not converged within
    100 terms; the true value there is 1 to double precision.
    """
    if lam <= 0.04:
        return 1.0
    j = np.arange(1, _KOLMOGOROV_TERMS + 1)
    total = 2.0 * np.sum((-1.0) ** (j - 1) * np.exp(-2.0 * j * j * lam * lam))
    return float(min(1.0, max(0.0, total)))


def ks_one_sample(xs, cdf):
    """Exact sup-distance between the empirical CDF of ``xs`` and ``cdf``.

    ``cdf`` must be vectorized and monotone on the support of the data.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    if n < 10:
        raise TooFewSamplesError(f"need at least 10 samples, got {n}")
    f = np.asarray(cdf(np.sort(xs)), dtype=float)
    grid = np.arange(1, n + 1) / n
    d_plus = np.max(grid - f)
    d_minus = np.max(f - (grid - 1.0 / n))
    stat = float(max(d_plus, d_minus))
    return KsResult(statistic=stat, p_value=kolmogorov_sf(math.sqrt(n) * stat), n=n)


def ks_two_sample(xs, ys):
    """Two-sample sup-distance with the asymptotic p-value at effective
    sample size n1*n2/(n1+n2)."""
    xs = np.sort(np.asarray(xs, dtype=float))
    ys = np.sort(np.asarray(ys, dtype=float))
    n1, n2 = xs.size, ys.size
    if n1 < 10 or n2 < 10:
        raise TooFewSamplesError(f"need at least 10 samples per side, got {n1} and {n2}")
    pooled = np.concatenate([xs, ys])
    cdf1 = np.searchsorted(xs, pooled, side="right") / n1
    cdf2 = np.searchsorted(ys, pooled, side="right") / n2
    stat = float(np.max(np.abs(cdf1 - cdf2)))
    effective = math.sqrt(n1 * n2 / (n1 + n2))
    return KsResult(statistic=stat, p_value=kolmogorov_sf(effective * stat), n=n1, n2=n2)


# ---------------------------------------------------------------------------
# Reference CDFs
# ---------------------------------------------------------------------------


def beta_cdf_on_interval(rho, a):
    """CDF at ``rho`` of a symmetric Beta(a, a) variable rescaled to [-1, 1]."""
    if not a > 0.0:
        raise DomainError(f"shape must be > 0, got {a}")
    x = (np.asarray(rho, dtype=float) + 1.0) / 2.0
    return betainc(a, a, np.clip(x, 0.0, 1.0))


def chi_square_cdf(x, k):
    """Chi-square CDF: regularized lower incomplete gamma at (k/2, x/2)."""
    if not k > 0.0:
        raise DomainError(f"degrees of freedom must be > 0, got {k}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("chi-square CDF requires x >= 0")
    return gammainc(k / 2.0, x / 2.0)


def inverse_gamma_cdf(x, shape, scale):
    """Inverse-gamma CDF: regularized upper incomplete gamma at (shape, scale/x)."""
    if not (shape > 0.0 and scale > 0.0):
        raise DomainError(f"shape and scale must be > 0, got ({shape}, {scale})")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = gammaincc(shape, scale / x[pos])
    return out


# ---------------------------------------------------------------------------
# Jacobian determinant checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JacobianCheck:
    closed_form_log: float
    numeric_log: float
    rel_error: float


def _finite_difference_jacobian(func, x0, steps):
    m = func(x0).size
    J = np.empty((m, x0.size))
    for q in range(x0.size):
        xp = x0.copy()
        xm = x0.copy()
        xp[q] += steps[q]
        xm[q] -= steps[q]
        J[:, q] = (func(xp) - func(xm)) / (2.0 * steps[q])
    return J


def jacobian_check_sigma_to_corr(Sigma, step_scale=1e-5):
    """Compare the closed-form log |J| of the covariance -> (variances,
    correlations) map against a central-finite-difference Jacobian.

    Restricted to T in {2, 3, 4}: the numeric Jacobian is O(T^4) and the
    identity is dimension-generic, so desk-scale dimensions suffice.
    """
    Sigma = np.asarray(Sigma, dtype=float)
    T = Sigma.shape[0]
    if T not in (2, 3, 4):
        raise DomainError(f"numeric Jacobian check supports T in {{2, 3, 4}}, got {T}")
    variances = np.diagonal(Sigma)
    if np.any(variances <= 0.0):
        raise DomainError("covariance diagonal must be positive")
    rows, cols = np.tril_indices(T, -1)

    def pack(S):
        return np.concatenate([np.diagonal(S), S[rows, cols]])

    def outputs(x):
        S = np.empty((T, T))
        S[np.diag_indices(T)] = x[:T]
        S[rows, cols] = x[T:]
        S[cols, rows] = x[T:]
        d = np.sqrt(np.diagonal(S))
        corr = S[rows, cols] / (d[rows] * d[cols])
        return np.concatenate([np.diagonal(S), corr])

    x0 = pack(Sigma)
    steps = step_scale * (1.0 + np.abs(x0))
    J = _finite_difference_jacobian(outputs, x0, steps)
    _, numeric = np.linalg.slogdet(J)
    closed = -((T - 1) / 2.0) * float(np.sum(np.log(variances)))
    rel = abs(closed - numeric) / max(1.0, abs(closed))
    return JacobianCheck(closed_form_log=closed, numeric_log=float(numeric), rel_error=rel)


def jacobian_check_var_to_sd(sigmas, step_scale=1e-5):
    """Compare the closed-form log |J| of the variances -> standard
    deviations map (a diagonal Jacobian) against central differences."""
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(sigmas <= 0.0):
        raise DomainError("variances must be strictly positive")
    T = sigmas.size
    h = step_scale * sigmas  # relative step keeps the FD error scale-free
    derivs = (np.sqrt(sigmas + h) - np.sqrt(sigmas - h)) / (2.0 * h)
    numeric = float(np.sum(np.log(derivs)))
    closed = -T * math.log(2.0) - 0.5 * float(np.sum(np.log(sigmas)))
    rel = abs(closed - numeric) / max(1.0, abs(closed))
    return JacobianCheck(closed_form_log=closed, numeric_log=numeric, rel_error=rel)


# ---------------------------------------------------------------------------
# Batch summaries
# ---------------------------------------------------------------------------


def batch_log_dets(matrices):
    """log determinant of each matrix in a (n, T, T) stack."""
    L = np.linalg.cholesky(matrices)
    return 2.0 * np.sum(np.log(np.diagonal(L, axis1=1, axis2=2)), axis=1)


def batch_offdiagonals(matrices):
    """(n, T(T-1)/2) array of packed lower off-diagonals."""
    T = matrices.shape[1]
    rows, cols = np.tril_indices(T, -1)
    return matrices[:, rows, cols]


@dataclass
class MomentReport:
    """Summary moments of a sample batch, with standard errors."""

    count: int
    dim: int
    pair_means: np.ndarray = field(repr=False)
    pair_variances: np.ndarray = field(repr=False)
    pair_mean_se: np.ndarray = field(repr=False)
    pair_variance_se: np.ndarray = field(repr=False)
    mean_log_det: float = 0.0
    mean_log_det_se: float = 0.0
    sigma_rho_correlations: np.ndarray | None = field(default=None, repr=False)


def moment_report(batch, variances=None):
    """Per-pair mean/variance of the correlations and mean log |P|.

    When per-draw ``variances`` (shape (n, T)) accompany the batch, the
    report also carries the full cross-correlation matrix between each
    variance and each correlation entry.  Standard errors use the
    normal approximation for the variance estimator.
    """
    if batch.count < 100:
        raise TooFewSamplesError(f"need at least 100 samples, got {batch.count}")
    rho = batch_offdiagonals(batch.matrices)
    n = batch.count
    pair_means = rho.mean(axis=0)
    pair_vars = rho.var(axis=0, ddof=1)
    pair_mean_se = np.sqrt(pair_vars / n)
    pair_var_se = pair_vars * math.sqrt(2.0 / (n - 1))
    log_dets = batch_log_dets(batch.matrices)
    cross = None
    if variances is not None:
        variances = np.asarray(variances, dtype=float)
        if variances.shape != (n, batch.dim):
            raise DomainError(
                f"variances must have shape ({n}, {batch.dim}), got {variances.shape}"
            )
        full = np.corrcoef(np.hstack([variances, rho]), rowvar=False)
        cross = full[: batch.dim, batch.dim :]
    return MomentReport(
        count=n,
        dim=batch.dim,
        pair_means=pair_means,
        pair_variances=pair_vars,
        pair_mean_se=pair_mean_se,
        pair_variance_se=pair_var_se,
        mean_log_det=float(log_dets.mean()),
        mean_log_det_se=float(log_dets.std(ddof=1) / math.sqrt(n)),
        sigma_rho_correlations=cross,
    )


# ---------------------------------------------------------------------------
# Check suites
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    observed: float
    threshold: float
    comparison: str  # "<": observed must stay below; ">": must stay above
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }

    def lines(self):
        out = []
        for c in self.checks:
            mark = "ok " if c.passed else "FAIL"
            extra = f" ({c.detail})" if c.detail else ""
            out.append(
                f"[{mark}] {c.name}: {c.observed:.6g} {c.comparison} {c.threshold:g}{extra}"
            )
        status = "PASSED" if self.passed else "FAILED"
        out.append(f"suite {self.suite}: {status} ({len(self.checks)} checks, seed {self.seed})")
        return out


def _below(name, observed, threshold, detail=""):
    observed = float(observed)
    return CheckResult(name, observed < threshold, observed, threshold, "<", detail)


def _above(name, observed, threshold, detail=""):
    observed = float(observed)
    return CheckResult(name, observed > threshold, observed, threshold, ">", detail)


class _RetryBudget:
    """At most one KS redraw per suite run, from a fixed secondary stream."""

    def __init__(self):
        self.used = False

    def take(self):
        if self.used:
            return False
        self.used = True
        return True


def _ks_check(name, draw, test, budget, threshold=KS_P_THRESHOLD):
    """Run ``test`` on ``draw(stream_tag)``, retrying once on failure."""
    result = test(draw(0))
    detail = f"D={result.statistic:.4f}"
    if result.p_value <= threshold and budget.take():
        result = test(draw(1))
        detail = f"D={result.statistic:.4f}, repeated once"
    return _above(name, result.p_value, threshold, detail)


def constants_suite(seed=DEFAULT_SEED, constant_perturbation=0.0):
    """Deterministic identities: the constant ratio, the duplication
    residual, the two routes to the LKJ constant, and monotonicity of
    the multivariate log gamma."""
    checks = []
    worst = 0.0
    scaled_ok = True
    for T in range(1, 51):
        tol = f_constant_tolerance(T)
        for m in (T + 0.5, T + 1.0, T + 2.0, T + 10.0):
            residual = abs(log_f_constant(T, m) + constant_perturbation)
            worst = max(worst, residual)
            scaled_ok &= residual < tol
    checks.append(_below("f_constant_residual_max_T1_50", worst, 1e-7))
    checks.append(
        CheckResult(
            "f_constant_residual_within_scaled_tolerance",
            scaled_ok,
            float(scaled_ok),
            1.0,
            ">=",
            "1e-12 per log-gamma factor, floor 1e-10",
        )
    )

    grid = 1.0 + 199.0 * np.arange(1, 1001) / 1000.0
    worst = max(abs(duplication_residual(m)) for m in grid)
    checks.append(_below("duplication_residual_max", worst, 1e-11))

    worst = 0.0
    for d in range(1, 31):
        for m in (d + 0.5, d + 1.0, d + 3.0):
            lhs = log_lkj_constant(d, dof_to_eta(d, m)) + constant_perturbation
            rhs = log_multivariate_gamma(d, m / 2.0) - d * log_gamma(m / 2.0)
            worst = max(worst, abs(lhs - rhs))
    checks.append(_below("lkj_constant_identity_max", worst, 1e-8))

    # monotone in x once every gamma argument clears the gamma minimum
    monotone = True
    for T in (1, 3, 7):
        xs = np.linspace((T - 1) / 2.0 + 1.5, 60.0, 200)
        monotone &= bool(np.all(np.diff([log_multivariate_gamma(T, x) for x in xs]) > 0.0))
    checks.append(
        CheckResult("multivariate_gamma_monotone", monotone, float(monotone), 1.0, ">=")
    )
    return SuiteReport("constants", seed, checks)


def _pair_name(rows, cols, j):
    return f"rho_{rows[j] + 1}_{cols[j] + 1}"


def check_rw_marginals(T, m, n, seed, budget=None):
    """KS of every correlation entry against Beta((m-1)/2, (m-1)/2) on
    [-1, 1], plus the pooled variance against 1/(2a+1)."""
    budget = budget or _RetryBudget()
    a = (m - 1.0) / 2.0
    rows, cols = np.tril_indices(T, -1)
    batches = {}

    def draw(tag):
        if tag not in batches:
            batches[tag] = batch_offdiagonals(
                sample_batch("rw", T, m, n, seed + tag).matrices
            )
        return batches[tag]

    checks = []
    for j in range(rows.size):
        checks.append(
            _ks_check(
                f"rw_marginal_ks_T{T}_m{m:g}_{_pair_name(rows, cols, j)}",
                lambda tag, j=j: draw(tag)[:, j],
                lambda xs: ks_one_sample(xs, lambda v: beta_cdf_on_interval(v, a)),
                budget,
            )
        )
    pooled_var = float(draw(0).var(ddof=1))
    expected = 1.0 / (2.0 * a + 1.0)
    checks.append(
        _below(
            f"rw_marginal_var_T{T}_m{m:g}",
            abs(pooled_var - expected),
            0.01,
            f"var={pooled_var:.4f}, expected {expected:.4f}",
        )
    )
    return checks


def check_riw_marginals(T, m, n, seed, budget=None):
    """KS of every correlation entry against Beta((m-T+1)/2, same) on [-1, 1]."""
    budget = budget or _RetryBudget()
    a = (m - T + 1.0) / 2.0
    rows, cols = np.tril_indices(T, -1)
    batches = {}

    def draw(tag):
        if tag not in batches:
            batches[tag] = batch_offdiagonals(
                sample_batch("riw", T, m, n, seed + tag).matrices
            )
        return batches[tag]

    return [
        _ks_check(
            f"riw_marginal_ks_T{T}_m{m:g}_{_pair_name(rows, cols, j)}",
            lambda tag, j=j: draw(tag)[:, j],
            lambda xs: ks_one_sample(xs, lambda v: beta_cdf_on_interval(v, a)),
            budget,
        )
        for j in range(rows.size)
    ]


def _draw_wishart_stats(T, m, psi_diag, n, seed):
    """Per-draw (variances, correlations) from the Wishart path with a
    diagonal scale matrix."""
    Psi = np.diag(psi_diag)
    stream = RandomStream(seed, stream_id=1)
    variances = np.empty((n, T))
    rhos = np.empty((n, T * (T - 1) // 2))
    for i in range(n):
        W = sample_wishart(T, m, Psi, stream)
        P, v = cov_to_corr(W)
        variances[i] = v
        rhos[i] = offdiag_lower(P)
    return variances, rhos


def check_wishart_independence(psi_diag=(1.0, 2.0, 3.0), m=6.0, n=100_000, seed=DEFAULT_SEED,
                               budget=None):
    """Scaled variances are chi-square(m) and independent of the
    correlations: KS per variance plus the sigma_11 / rho_21 sample
    correlation."""
    budget = budget or _RetryBudget()
    T = len(psi_diag)
    cache = {}

    def draw(tag):
        if tag not in cache:
            cache[tag] = _draw_wishart_stats(T, m, psi_diag, n, seed + tag)
        return cache[tag]

    checks = []
    for i in range(T):
        checks.append(
            _ks_check(
                f"wishart_variance_chi2_ks_sigma_{i + 1}",
                lambda tag, i=i: draw(tag)[0][:, i] / psi_diag[i],
                lambda xs: ks_one_sample(xs, lambda v: chi_square_cdf(v, m)),
                budget,
            )
        )
    variances, rhos = draw(0)
    corr = float(np.corrcoef(variances[:, 0], rhos[:, 0])[0, 1])
    checks.append(_below("wishart_sigma_rho_correlation", abs(corr), 0.01))
    return checks


def check_inverse_wishart_variances(psi_diag=(1.0, 2.0, 3.0), m=6.0, n=10_000,
                                    seed=DEFAULT_SEED, budget=None):
    """Each variance from the inverse-Wishart path is inverse-gamma
    ((m-T+1)/2, psi_ii/2)."""
    budget = budget or _RetryBudget()
    T = len(psi_diag)
    shape = (m - T + 1.0) / 2.0
    Psi = np.diag(psi_diag)
    cache = {}

    def draw(tag):
        if tag not in cache:
            stream = RandomStream(seed + tag, stream_id=2)
            sigmas = np.empty((n, T))
            for i in range(n):
                sigmas[i] = np.diagonal(sample_inverse_wishart(T, m, Psi, stream))
            cache[tag] = sigmas
        return cache[tag]

    return [
        _ks_check(
            f"inverse_wishart_ig_ks_sigma_{i + 1}",
            lambda tag, i=i: draw(tag)[:, i],
            lambda xs: ks_one_sample(
                xs, lambda v: inverse_gamma_cdf(v, shape, psi_diag[i] / 2.0)
            ),
            budget,
        )
        for i in range(T)
    ]


def marginals_suite(seed=DEFAULT_SEED, n=10_000, independence_n=100_000):
    """Marginal-law checks for both factor-based samplers plus the
    variance laws of the Wishart and inverse-Wishart paths."""
    budget = _RetryBudget()
    checks = []
    checks += check_rw_marginals(5, 6.0, n, seed, budget)
    checks += check_riw_marginals(3, 4.0, n, seed, budget)
    checks += check_riw_marginals(2, 5.0, n, seed, budget)
    checks += check_wishart_independence((1.0, 2.0, 3.0), 6.0, independence_n, seed, budget)
    checks += check_inverse_wishart_variances((1.0, 2.0, 3.0), 6.0, n, seed, budget)
    return SuiteReport("marginals", seed, checks)


def jacobians_suite(seed=DEFAULT_SEED, trials=100):
    """Finite-difference certification of both Jacobian determinants on
    random SPD inputs."""
    checks = []
    for T in (2, 3):
        stream = RandomStream(seed, stream_id=3 + T)
        worst = 0.0
        for _ in range(trials):
            S = sample_wishart(T, T + 3.0, np.eye(T), stream) / (T + 3.0)
            worst = max(worst, jacobian_check_sigma_to_corr(S).rel_error)
        checks.append(_below(f"jacobian_cov_to_corr_T{T}_max_rel_error", worst, 1e-4))
    stream = RandomStream(seed, stream_id=9)
    worst = 0.0
    for _ in range(trials):
        sigmas = stream.generator.uniform(0.05, 20.0, size=4)
        worst = max(worst, jacobian_check_var_to_sd(sigmas).rel_error)
    checks.append(_below("jacobian_var_to_sd_max_rel_error", worst, 1e-8))
    return SuiteReport("jacobians", seed, checks)


def theorem_suite(dims=(2, 5, 8), etas=(0.5, 1.0, 2.5), n=10_000, seed=DEFAULT_SEED,
                  density_points=200, constant_perturbation=0.0, eta_shift=0.0):
    """Numeric certification of the factor/onion equivalence.

    Three check families per (T, eta) cell, in canonical (T, eta) order:
      (a) the log of the normalizing-constant ratio vanishes;
      (b) the two log densities agree pointwise on sampled matrices;
      (c) two-sample KS between the two samplers on scalar summaries
          (log determinant, one correlation entry, max off-diagonal).
    """
    budget = _RetryBudget()
    checks = []
    for T in sorted(dims):
        for eta in sorted(etas):
            m = eta_to_dof(T, eta)
            tag = f"T{T}_eta{eta:g}"
            checks.append(
                _below(
                    f"theorem_constant_{tag}",
                    abs(log_f_constant(T, m) + constant_perturbation),
                    1e-7,
                )
            )

            points = sample_batch("rw", T, m, density_points, seed).matrices
            worst = max(
                abs(
                    rw_log_density(P, m).value
                    - (lkj_log_density(P, eta).value - constant_perturbation)
                )
                for P in points
            )
            checks.append(_below(f"theorem_density_{tag}", worst, 1e-8))

            if T < 2:
                continue
            cache = {}

            def summaries(tag_id, T=T, m=m, eta=eta):
                if tag_id not in cache:
                    rw = sample_batch("rw", T, m, n, seed + tag_id).matrices
                    onion = sample_batch(
                        "onion", T, eta + eta_shift, n, seed + 1000 + tag_id
                    ).matrices
                    cache[tag_id] = (rw, onion)
                return cache[tag_id]

            stats = {
                "logdet": batch_log_dets,
                "rho21": lambda mats: mats[:, 1, 0],
                "maxoff": lambda mats: batch_offdiagonals(mats).max(axis=1),
            }
            for stat_name, stat in stats.items():
                checks.append(
                    _ks_check(
                        f"theorem_ks_{stat_name}_{tag}",
                        lambda tag_id, stat=stat: tuple(
                            stat(mats) for mats in summaries(tag_id)
                        ),
                        lambda pair: ks_two_sample(*pair),
                        budget,
                    )
                )
    return SuiteReport("theorem", seed, checks)


SUITES = ("constants", "marginals", "theorem", "jacobians", "all")


def run_suite(name, seed=DEFAULT_SEED, constant_perturbation=0.0, eta_shift=0.0):
    """Run one named suite (or all of them) and return the reports."""
    if name == "constants":
        return [constants_suite(seed, constant_perturbation)]
    if name == "marginals":
        return [marginals_suite(seed)]
    if name == "theorem":
        return [theorem_suite(seed=seed, constant_perturbation=constant_perturbation,
                              eta_shift=eta_shift)]
    if name == "jacobians":
        return [jacobians_suite(seed)]
    if name == "all":
        reports = []
        for sub in ("constants", "marginals", "theorem", "jacobians"):
            reports += run_suite(sub, seed, constant_perturbation, eta_shift)
        return reports
    raise DomainError(f"unknown suite {name!r}, expected one of {SUITES}")
