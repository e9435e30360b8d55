import math

import numpy as np
import pytest

from randcorr.errors import DomainError
from randcorr.specfun import (
    dof_to_eta,
    duplication_residual,
    eta_to_dof,
    f_constant_tolerance,
    log_beta_function,
    log_f_constant,
    log_gamma,
    log_lkj_constant,
    log_multivariate_gamma,
)

# Reference values computed once with a 60-digit extended-precision
# evaluation of ln Gamma and frozen here; the implementation must agree
# to 1e-13 relative.
LGAMMA_REFERENCE = [
    (0.001, 6.907178885383853682512),
    (0.01, 4.599479878042021722514),
    (0.1, 2.25271265173420595987),
    (0.25, 1.288022524698077457371),
    (0.5, 0.5723649429247000870717),
    (0.75, 0.2032809514312953714814),
    (1.0, 0.0),
    (1.2357, -0.0948961779878273472807),
    (1.4616321449683622, -0.1214862905358496080955),
    (1.5, -0.1207822376352452223455),
    (2.0, 0.0),
    (2.5, 0.2846828704729191596325),
    (3.0, 0.6931471805599453094172),
    (4.75, 2.808571418575736502702),
    (6.0, 4.787491742782045994248),
    (8.5, 9.549267257300997711737),
    (10.0, 12.80182748008146961121),
    (13.37, 20.92725257606593733916),
    (20.0, 39.33988418719949403622),
    (35.5, 90.35493026581838826593),
    (50.0, 144.5657439463448860089),
    (77.25, 257.3058680617812605163),
    (100.0, 359.134205369575398776),
    (140.5, 552.7485800803454121699),
    (171.6, 709.6573587630563505303),
    (250.0, 1128.523770872990714198),
    (500.5, 2608.222904410986655147),
    (1000.0, 5905.220423209181211826),
    (5000.25, 37584.75559523289191454),
    (20000.0, 178065.7182496461641848),
]


class TestLogGamma:
    def test_exact_integers(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(6.0) == pytest.approx(math.log(120.0), rel=1e-14)

    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)

    def test_reference_table(self):
        for x, expected in LGAMMA_REFERENCE:
            got = log_gamma(x)
            if expected == 0.0:
                assert abs(got) < 1e-13
            else:
                assert abs(got - expected) / abs(expected) < 1e-13

    def test_domain(self):
        for bad in (0.0, -1.0, -0.5):
            with pytest.raises(DomainError):
                log_gamma(bad)


class TestLogMultivariateGamma:
    def test_collapses_at_dim_1(self):
        for x in (0.3, 1.0, 7.5):
            assert log_multivariate_gamma(1, x) == log_gamma(x)

    def test_dim_2(self):
        # sqrt(pi) * Gamma(1.5) * Gamma(1) = pi / 2
        assert log_multivariate_gamma(2, 1.5) == pytest.approx(
            0.4515827052894548647262, abs=1e-14
        )

    def test_dim_3(self):
        # pi^{3/2} * Gamma(3) * Gamma(2.5) * Gamma(2), extended-precision value
        assert log_multivariate_gamma(3, 3.0) == pytest.approx(
            2.694924879806964730265, abs=1e-13
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            log_multivariate_gamma(3, 1.0)  # needs x > 1
        with pytest.raises(DomainError):
            log_multivariate_gamma(0, 1.0)

    def test_strictly_increasing_in_x(self):
        # monotone once every gamma argument clears the gamma minimum
        # (~1.4616); below that the derivative genuinely changes sign
        for T in (1, 3, 7, 20):
            xs = np.linspace((T - 1) / 2 + 1.5, 80.0, 300)
            vals = [log_multivariate_gamma(T, x) for x in xs]
            assert np.all(np.diff(vals) > 0)


class TestLogBetaFunction:
    def test_known_values(self):
        assert log_beta_function(1.0, 1.0) == 0.0
        assert log_beta_function(0.5, 0.5) == pytest.approx(math.log(math.pi), rel=1e-14)
        assert log_beta_function(2.0, 3.0) == pytest.approx(math.log(1.0 / 12.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            log_beta_function(0.0, 1.0)


class TestLkjConstant:
    def test_dim_1_empty(self):
        assert log_lkj_constant(1, 0.5) == 0.0
        assert log_lkj_constant(1, 7.0) == 0.0

    def test_dim_2_uniform(self):
        # the uniform correlation density on [-1, 1] has height 1/2
        assert log_lkj_constant(2, 1.0) == pytest.approx(math.log(2.0), abs=1e-15)

    def test_dim_3_uniform_volume_monte_carlo(self):
        # at eta = 1 the constant is the volume of the set of valid
        # (rho_21, rho_31, rho_32); estimate it by rejection over the cube
        rng = np.random.default_rng(2024)
        n = 2_000_000
        pts = rng.uniform(-1.0, 1.0, size=(n, 3))
        r21, r31, r32 = pts[:, 0], pts[:, 1], pts[:, 2]
        det = 1.0 + 2.0 * r21 * r31 * r32 - r21**2 - r31**2 - r32**2
        frac = np.mean(det > 0.0)
        volume = 8.0 * frac
        se = 8.0 * math.sqrt(frac * (1.0 - frac) / n)
        assert abs(math.exp(log_lkj_constant(3, 1.0)) - volume) < 4.0 * se

    def test_matches_multivariate_gamma_route(self):
        # second route to the same constant, through the gamma-ratio identity
        for d in range(1, 31):
            for m in (d + 0.5, d + 1.0, d + 3.0, d + 9.5):
                lhs = log_lkj_constant(d, dof_to_eta(d, m))
                rhs = log_multivariate_gamma(d, m / 2.0) - d * log_gamma(m / 2.0)
                assert abs(lhs - rhs) < 1e-8

    def test_domain(self):
        with pytest.raises(DomainError):
            log_lkj_constant(2, 0.0)
        with pytest.raises(DomainError):
            log_lkj_constant(0, 1.0)


class TestFConstant:
    def test_dim_1_exact_zero(self):
        for m in (0.5, 1.0, 10.0):
            assert log_f_constant(1, m) == 0.0

    def test_base_case(self):
        assert abs(log_f_constant(2, 3.0)) < 1e-10

    def test_large_dim(self):
        assert abs(log_f_constant(25, 26.0)) < 1e-7

    def test_vanishes_on_grid(self):
        worst = 0.0
        for T in range(1, 51):
            for m in (T + 0.5, T + 1.0, T + 2.0, T + 10.0):
                worst = max(worst, abs(log_f_constant(T, m)))
        assert worst < 1e-7

    def test_within_scaled_tolerance(self):
        # rounding budget: 1e-12 per weighted log-gamma factor, floor 1e-10
        assert f_constant_tolerance(1) == 1e-10
        assert f_constant_tolerance(50) > 1e-9
        for T in (2, 10, 30, 50):
            tol = f_constant_tolerance(T)
            for m in (T + 0.5, T + 1.0, T + 10.0):
                assert abs(log_f_constant(T, m)) < tol

    def test_domain(self):
        with pytest.raises(DomainError):
            log_f_constant(3, 2.0)  # needs m > 2


class TestDuplicationResidual:
    def test_small_arguments(self):
        assert abs(duplication_residual(2.0)) < 1e-13
        assert abs(duplication_residual(3.0)) < 1e-13

    def test_large_argument(self):
        assert abs(duplication_residual(101.5)) < 1e-11

    def test_grid(self):
        ms = 1.0 + 199.0 * np.arange(1, 1001) / 1000.0
        assert max(abs(duplication_residual(m)) for m in ms) < 1e-11

    def test_domain(self):
        with pytest.raises(DomainError):
            duplication_residual(1.0)


class TestParameterMaps:
    def test_uniform_setting(self):
        for T in (1, 2, 5, 17):
            assert dof_to_eta(T, T + 1) == 1.0

    def test_vague_setting(self):
        for T in (2, 5):
            assert dof_to_eta(T, T + 2) == 1.5

    def test_roundtrip(self):
        assert eta_to_dof(5, 1.0) == 6.0
        assert dof_to_eta(5, 6.0) == 1.0
        for d in (1, 4, 9):
            for eta in (0.25, 1.0, 3.75):
                assert dof_to_eta(d, eta_to_dof(d, eta)) == eta

    def test_domain(self):
        with pytest.raises(DomainError):
            dof_to_eta(4, 3.0)
        with pytest.raises(DomainError):
            eta_to_dof(4, 0.0)
