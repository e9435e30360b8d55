import math

import numpy as np
import pytest
from scipy.special import kolmogorov as scipy_kolmogorov
from scipy.stats import invgamma

from randcorr.errors import DomainError, TooFewSamplesError
from randcorr.samplers import sample_batch
from randcorr.validation import (
    beta_cdf_on_interval,
    chi_square_cdf,
    constants_suite,
    inverse_gamma_cdf,
    jacobian_check_sigma_to_corr,
    jacobian_check_var_to_sd,
    jacobians_suite,
    kolmogorov_sf,
    ks_one_sample,
    ks_two_sample,
    marginals_suite,
    moment_report,
    run_suite,
    theorem_suite,
)

SEED = 20090713


class TestKolmogorovSf:
    def test_matches_independent_implementation(self):
        for lam in (0.2, 0.5, 1.0, 1.5, 2.5):
            assert kolmogorov_sf(lam) == pytest.approx(float(scipy_kolmogorov(lam)), abs=1e-12)

    def test_limits(self):
        assert kolmogorov_sf(0.0) == 1.0
        assert kolmogorov_sf(10.0) < 1e-12


class TestKsOneSample:
    def test_null_uniform(self):
        rng = np.random.default_rng(1)
        r = ks_one_sample(rng.uniform(size=10_000), lambda v: v)
        assert r.p_value > 1e-3
        assert 0.0 <= r.statistic <= 1.0

    def test_degenerate_constant(self):
        r = ks_one_sample(np.full(100, 0.5), lambda v: v)
        assert r.statistic == pytest.approx(0.5, abs=1e-12)

    def test_power_against_wrong_law(self):
        rng = np.random.default_rng(2)
        r = ks_one_sample(rng.beta(2.0, 2.0, size=10_000), lambda v: v)
        assert r.p_value < 1e-6

    def test_too_few(self):
        with pytest.raises(TooFewSamplesError):
            ks_one_sample(np.arange(5), lambda v: v)


class TestKsTwoSample:
    def test_null(self):
        rng = np.random.default_rng(3)
        r = ks_two_sample(rng.standard_normal(10_000), rng.standard_normal(8_000))
        assert r.p_value > 1e-3
        assert r.n == 10_000 and r.n2 == 8_000

    def test_disjoint_supports(self):
        r = ks_two_sample(np.arange(100), np.arange(100) + 1000.0)
        assert r.statistic == 1.0

    def test_power(self):
        rng = np.random.default_rng(4)
        r = ks_two_sample(rng.beta(2, 2, size=10_000), rng.uniform(size=10_000))
        assert r.p_value < 1e-6

    def test_too_few(self):
        with pytest.raises(TooFewSamplesError):
            ks_two_sample(np.arange(9), np.arange(100))


class TestReferenceCdfs:
    def test_beta_on_interval(self):
        assert beta_cdf_on_interval(0.0, 2.5) == pytest.approx(0.5, abs=1e-14)
        assert beta_cdf_on_interval(-1.0, 1.3) == 0.0
        assert beta_cdf_on_interval(1.0, 1.3) == 1.0
        assert beta_cdf_on_interval(0.5, 1.0) == pytest.approx(0.75, abs=1e-14)

    def test_beta_domain(self):
        with pytest.raises(DomainError):
            beta_cdf_on_interval(0.0, 0.0)

    def test_chi_square(self):
        assert chi_square_cdf(0.0, 4.0) == 0.0
        assert chi_square_cdf(2.0 * math.log(2.0), 2.0) == pytest.approx(0.5, rel=1e-12)
        assert chi_square_cdf(1000.0, 1000.0) == pytest.approx(0.5, abs=0.01)

    def test_chi_square_domain(self):
        with pytest.raises(DomainError):
            chi_square_cdf(-1.0, 3.0)
        with pytest.raises(DomainError):
            chi_square_cdf(1.0, 0.0)

    def test_inverse_gamma(self):
        xs = np.array([0.2, 0.7, 1.5, 4.0])
        expected = invgamma(2.0, scale=1.5).cdf(xs)
        np.testing.assert_allclose(inverse_gamma_cdf(xs, 2.0, 1.5), expected, rtol=1e-10)
        assert inverse_gamma_cdf(np.array([0.0]), 2.0, 1.5)[0] == 0.0


class TestJacobianChecks:
    def test_identity_3x3(self):
        check = jacobian_check_sigma_to_corr(np.eye(3))
        assert check.closed_form_log == 0.0
        assert abs(check.numeric_log) < 1e-5

    def test_diagonal_closed_form(self):
        check = jacobian_check_sigma_to_corr(np.diag([4.0, 9.0]))
        assert check.closed_form_log == pytest.approx(
            -0.5 * (math.log(4.0) + math.log(9.0)), rel=1e-14
        )
        assert check.rel_error < 1e-4

    def test_random_spd_agreement(self):
        rng = np.random.default_rng(10)
        for T in (2, 3):
            for _ in range(100):
                A = rng.standard_normal((T, T))
                S = A @ A.T + T * np.eye(T)
                assert jacobian_check_sigma_to_corr(S).rel_error < 1e-4

    def test_dimension_guard(self):
        with pytest.raises(DomainError):
            jacobian_check_sigma_to_corr(np.eye(5))

    def test_var_to_sd_ones(self):
        check = jacobian_check_var_to_sd(np.ones(2))
        assert check.closed_form_log == pytest.approx(-2.0 * math.log(2.0), rel=1e-15)
        assert check.rel_error < 1e-8

    def test_var_to_sd_single_entry(self):
        # d sqrt(s)/ds at s=4 is 1/4
        check = jacobian_check_var_to_sd(np.array([4.0]))
        assert check.closed_form_log == pytest.approx(math.log(0.25), rel=1e-14)

    def test_var_to_sd_random(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            sigmas = rng.uniform(0.05, 20.0, size=5)
            assert jacobian_check_var_to_sd(sigmas).rel_error < 1e-8

    def test_var_to_sd_domain(self):
        with pytest.raises(DomainError):
            jacobian_check_var_to_sd(np.array([1.0, 0.0]))


class TestMomentReport:
    def test_rw_batch_moments(self):
        batch = sample_batch("rw", 4, 5.0, 4000, SEED)
        report = moment_report(batch)
        # each entry is Beta(2, 2) on [-1, 1]: mean 0, variance 1/5
        assert np.all(np.abs(report.pair_means) < 4.0 * report.pair_mean_se)
        assert np.all(np.abs(report.pair_variances - 0.2) < 4.0 * report.pair_variance_se)
        assert report.sigma_rho_correlations is None

    def test_deterministic_given_batch(self):
        batch = sample_batch("onion", 3, 1.0, 500, 42)
        a = moment_report(batch)
        b = moment_report(batch)
        np.testing.assert_array_equal(a.pair_means, b.pair_means)
        assert a.mean_log_det == b.mean_log_det

    def test_cross_correlations_shape(self):
        batch = sample_batch("rw", 3, 4.0, 300, 7)
        variances = np.random.default_rng(0).uniform(0.5, 2.0, size=(300, 3))
        report = moment_report(batch, variances)
        assert report.sigma_rho_correlations.shape == (3, 3)

    def test_too_few(self):
        with pytest.raises(TooFewSamplesError):
            moment_report(sample_batch("rw", 3, 4.0, 99, 1))


class TestSuites:
    def test_constants_suite_passes(self):
        report = constants_suite(SEED)
        assert report.passed

    def test_constants_suite_sensitive(self):
        report = constants_suite(SEED, constant_perturbation=1e-3)
        names = {c.name for c in report.checks if not c.passed}
        assert "f_constant_residual_max_T1_50" in names
        assert "lkj_constant_identity_max" in names

    def test_theorem_suite_reduced_grid_passes(self):
        report = theorem_suite(dims=(2, 3), etas=(0.5, 1.0), n=2500, seed=SEED,
                               density_points=50)
        assert report.passed

    def test_theorem_suite_detects_corrupted_constant(self):
        report = theorem_suite(dims=(2,), etas=(1.0,), n=500, seed=SEED,
                               density_points=20, constant_perturbation=1e-3)
        failing = {c.name for c in report.checks if not c.passed}
        assert "theorem_constant_T2_eta1" in failing
        assert "theorem_density_T2_eta1" in failing

    def test_theorem_suite_detects_wrong_eta(self):
        report = theorem_suite(dims=(5,), etas=(1.0,), n=4000, seed=SEED,
                               density_points=20, eta_shift=1.0)
        ks_failures = [c for c in report.checks if c.name.startswith("theorem_ks") and not c.passed]
        assert ks_failures

    def test_theorem_suite_canonical_order(self):
        report = theorem_suite(dims=(3, 2), etas=(1.0, 0.5), n=500, seed=SEED,
                               density_points=10)
        tags = [c.name.split("_T")[-1] for c in report.checks if c.name.startswith("theorem_constant")]
        assert tags == sorted(tags)

    def test_marginals_suite_reduced(self):
        report = marginals_suite(SEED, n=1500, independence_n=20_000)
        assert report.passed

    def test_jacobians_suite(self):
        report = jacobians_suite(SEED, trials=30)
        assert report.passed

    def test_run_suite_dispatch(self):
        reports = run_suite("constants", SEED)
        assert len(reports) == 1 and reports[0].suite == "constants"
        with pytest.raises(DomainError):
            run_suite("bogus", SEED)

    def test_report_serialization(self):
        report = constants_suite(SEED)
        payload = report.to_dict()
        assert payload["suite"] == "constants"
        assert payload["passed"] is True
        assert {"name", "passed", "observed", "threshold", "comparison", "detail"} <= set(
            payload["checks"][0]
        )
        assert any("PASSED" in line for line in report.lines())
