import math

import numpy as np
import pytest
import scipy.special

from viboost_lab import numerics, vlog
from viboost_lab.numerics import QuadratureConfig
from viboost_lab.vlog import BLogObservation, VLogParams


def vp(slopes, knots, mults):
    return VLogParams(np.array(slopes, float), np.array(knots, float), np.array(mults, float))


def random_valid_params(rng, k_max=6):
    k = rng.integers(2, k_max + 1)
    slopes = rng.uniform(0.3, 3.0, k) * rng.choice([-1.0, 1.0], k)
    slopes[0] = abs(slopes[0])
    slopes[1] = -abs(slopes[1])
    knots = rng.uniform(-3.0, 3.0, k)
    mults = rng.uniform(0.2, 4.0, k)
    return VLogParams(slopes, knots, mults)


class TestConstruction:
    def test_validation(self):
        with pytest.raises(ValueError):
            vp([1.0], [0.0], [1.0])  # K < 2
        with pytest.raises(ValueError):
            vp([1, -1], [0, 0], [1, -0.5])  # negative multiplicity
        with pytest.raises(ValueError):
            vp([1, -1], [0], [1, 1])  # ragged
        with pytest.raises(ValueError):
            BLogObservation(y=0, slope=1.0, knot=0.0)

    def test_is_valid(self):
        assert vlog.is_valid(vp([1, -1], [0, 0], [1, 1]))
        assert not vlog.is_valid(vp([1, 2], [0, 0], [1, 1]))
        assert not vlog.is_valid(vp([1, -1], [0, 0], [1, 0]))


class TestLogDensity:
    def test_symmetric_point(self):
        p = vlog.standard_logistic()
        assert vlog.unnorm_log_density(p, 0.0) == pytest.approx(-2 * math.log(2), abs=1e-12)

    def test_linear_tail(self):
        p = vlog.standard_logistic()
        assert vlog.unnorm_log_density(p, 10.0) == pytest.approx(-10.0, abs=1e-4)

    def test_three_factor_value(self):
        p = vp([1, -1, -1], [0, 0, 2], [1, 1, 1])
        expected = -(math.log(2) + math.log(2) + numerics.log1pexp(2.0))
        assert vlog.unnorm_log_density(p, 0.0) == pytest.approx(expected, abs=1e-12)

    def test_stable_far_out(self):
        p = vp([1, -1], [0, 0], [2, 3])
        for z in (-1e4, 1e4):
            assert math.isfinite(vlog.unnorm_log_density(p, z))


class TestPosteriorUpdate:
    def test_single_observation(self):
        post = vlog.posterior_update(
            vlog.standard_logistic(), [BLogObservation(y=+1, slope=1.0, knot=0.0)]
        )
        np.testing.assert_allclose(post.slopes, [1, -1, -1])
        np.testing.assert_allclose(post.knots, [0, 0, 0])
        np.testing.assert_allclose(post.multiplicities, [1, 1, 1])

    def test_empty_observation_list_is_identity(self):
        prior = vlog.standard_logistic()
        assert vlog.posterior_update(prior, []) is prior

    def test_two_observations(self):
        post = vlog.posterior_update(
            vlog.standard_logistic(),
            [BLogObservation(+1, 1.0, 0.5), BLogObservation(-1, 2.0, -1.0)],
        )
        np.testing.assert_allclose(post.slopes, [1, -1, -1, 2])
        np.testing.assert_allclose(post.knots, [0, 0, 0.5, -1.0])
        np.testing.assert_allclose(post.multiplicities, [1, 1, 1, 1])

    def test_conjugacy_pointwise(self):
        # posterior unnormalized density == prior density * product of label pmfs
        rng = np.random.default_rng(5)
        zgrid = np.linspace(-8, 8, 161)
        for _ in range(50):
            prior = random_valid_params(rng)
            n = int(rng.integers(0, 6))
            obs = [
                BLogObservation(
                    int(rng.choice([-1, 1])),
                    float(rng.uniform(-2, 2)),
                    float(rng.uniform(-2, 2)),
                )
                for _ in range(n)
            ]
            post = vlog.posterior_update(prior, obs)
            lhs = vlog.unnorm_log_density(post, zgrid)
            rhs = vlog.unnorm_log_density(prior, zgrid).copy()
            for o in obs:
                rhs -= np.logaddexp(0.0, -o.y * o.slope * (zgrid - o.knot))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestModes:
    def test_two_term_asymmetric(self):
        assert vlog.mode_exact(vp([1, -1], [0, 0], [1, 3])) == pytest.approx(
            math.log(3), abs=1e-6
        )

    def test_symmetry_gives_zero(self):
        for mu in (0.5, 1.0, 4.0):
            assert vlog.mode_exact(vp([1, -1], [0, 0], [mu, mu])) == pytest.approx(0, abs=1e-7)

    def test_against_grid_search(self):
        p = vp([1, -1, -1], [0, 0, 1], [2, 1, 1])
        grid = np.arange(-20.0, 20.0, 1e-5)
        oracle = grid[np.argmax(vlog.unnorm_log_density(p, grid))]
        assert vlog.mode_exact(p) == pytest.approx(float(oracle), abs=2e-5)

    def test_mode_requires_validity(self):
        with pytest.raises(ValueError):
            vlog.mode_exact(vp([1, 2], [0, 0], [1, 1]))

    def test_approx_equals_exact_at_half_tau(self):
        assert vlog.mode_approx(vp([1, -1], [0, 0], [2, 8]), tau=0.5) == pytest.approx(
            math.log(4), abs=1e-12
        )
        assert vlog.mode_exact(vp([1, -1], [0, 0], [2, 8])) == pytest.approx(
            math.log(4), abs=1e-6
        )

    def test_approx_symmetric_zero(self):
        for tau in (0.25, 1.0, 3.0):
            assert vlog.mode_approx(vp([1, -1], [0, 0], [2, 2]), tau) == pytest.approx(
                0.0, abs=1e-12
            )

    def test_approx_plugin_value(self):
        p = vp([1, -1, -1, -1], [0, 0, 0, 0], [1, 1, 1, 1])
        assert vlog.mode_approx(p, tau=1.0) == pytest.approx(0.5 * math.log(3), abs=1e-12)

    def test_approx_half_tau_identity_on_shared_knot_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            beta = rng.uniform(0.3, 3.0)
            gamma = rng.uniform(-4, 4)
            m1, m2 = rng.uniform(0.2, 6.0, 2)
            p = vp([beta, -beta], [gamma, gamma], [m1, m2])
            assert vlog.mode_approx(p, tau=0.5) == pytest.approx(
                vlog.mode_exact(p, tol=1e-9), abs=1e-6
            )

    def test_approx_preconditions(self):
        with pytest.raises(ValueError):
            vlog.mode_approx(vp([1, -2], [0, 0], [1, 1]))  # unequal magnitudes
        with pytest.raises(ValueError):
            vlog.mode_approx(vp([1, -1], [0, 0], [1, 0]))  # one sign class empty
        # zero-multiplicity factors are inert and do not trip the magnitude check
        assert vlog.mode_approx(vp([1, -1, 5], [0, 0, 0], [1, 3, 0])) == pytest.approx(
            0.5 * math.log(3), abs=1e-12
        )


class TestLogNormalizer:
    def test_standard_logistic_is_normalized(self):
        assert vlog.log_normalizer(vlog.standard_logistic()) == pytest.approx(0.0, abs=1e-8)

    def test_slope_two_closed_form(self):
        p = vp([2, -2], [0, 0], [1, 1])
        assert vlog.log_normalizer(p) == pytest.approx(math.log(0.5), abs=1e-8)

    def test_against_brute_force_trapezoid(self):
        p = vp([1, -1, -1], [0, 0, 1], [1, 1, 1])
        grid = np.arange(-40.0, 40.0, 1e-3)
        dens = np.exp(vlog.unnorm_log_density(p, grid))
        oracle = math.log(np.trapezoid(dens, grid))
        assert vlog.log_normalizer(p) == pytest.approx(oracle, abs=1e-7)

    def test_two_term_closed_form_grid(self):
        for beta in (0.5, 1.0, 2.0):
            for m1 in (0.5, 1.0, 3.0, 8.0):
                for m2 in (0.5, 1.0, 3.0, 8.0):
                    p = vp([beta, -beta], [0, 0], [m1, m2])
                    expected = (
                        -math.log(beta)
                        + math.lgamma(m1)
                        + math.lgamma(m2)
                        - math.lgamma(m1 + m2)
                    )
                    assert vlog.log_normalizer(p) == pytest.approx(expected, rel=1e-6, abs=1e-8)


class TestTwoTermExpectations:
    def test_unit_case(self):
        assert vlog.two_term_expectations(1.0, 1.0) == pytest.approx((1.0, 1.0), abs=1e-10)

    def test_telescoped(self):
        e_plus, e_minus = vlog.two_term_expectations(1.0, 3.0)
        assert e_plus == pytest.approx(11.0 / 6.0, abs=1e-10)
        assert e_minus == pytest.approx(1.0 / 3.0, abs=1e-10)

    def test_against_monte_carlo(self):
        rng = np.random.default_rng(17)
        v = rng.beta(2.5, 0.7, size=10**6)
        mc_plus, mc_minus = -np.log(v), -np.log1p(-v)
        e_plus, e_minus = vlog.two_term_expectations(2.5, 0.7)
        for mc, exact in ((mc_plus, e_plus), (mc_minus, e_minus)):
            se = mc.std(ddof=1) / math.sqrt(mc.size)
            assert abs(mc.mean() - exact) < 3 * se

    def test_domain(self):
        with pytest.raises(ValueError):
            vlog.two_term_expectations(0.0, 1.0)


class TestLogConcavity:
    def test_second_differences_nonpositive(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            p = random_valid_params(rng)
            mode = vlog.mode_exact(p)
            grid = np.linspace(mode - 10, mode + 10, 2001)
            ld = vlog.unnorm_log_density(p, grid)
            second = ld[2:] - 2 * ld[1:-1] + ld[:-2]
            assert np.max(second) <= 1e-9


def _quadrature_cdf(p, zmin, zmax, n=40001):
    grid = np.linspace(zmin, zmax, n)
    dens = np.exp(vlog.unnorm_log_density(p, grid))
    steps = np.diff(grid)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * steps)])
    return grid, cum / cum[-1]


class TestSampling:
    def test_beta_transform_midpoint(self):
        assert vlog.beta_transform(0.5, beta=2.0, gamma=1.25) == pytest.approx(1.25, abs=1e-14)

    def test_symmetric_mean(self):
        rng = np.random.default_rng(3)
        zs = vlog.sample_many(vlog.standard_logistic(), rng, 10**5)
        assert abs(zs.mean()) < 0.02

    def test_asymmetric_mean_matches_quadrature(self):
        p = vp([1, -1], [0, 0], [1, 3])
        grid = np.linspace(-30, 30, 200001)
        dens = np.exp(vlog.unnorm_log_density(p, grid))
        mean = np.trapezoid(grid * dens, grid) / np.trapezoid(dens, grid)
        rng = np.random.default_rng(7)
        zs = vlog.sample_many(p, rng, 10**5)
        se = zs.std(ddof=1) / math.sqrt(zs.size)
        assert abs(zs.mean() - mean) < 3 * se

    @pytest.mark.parametrize(
        "params",
        [
            ([1, -1], [0, 0], [1, 1]),          # exact transform path
            ([1, -1, -1], [0, 0, 1], [1, 1, 1]),  # slice path, three factors
            ([2, -2], [0, 2], [2, 3]),           # slice path, split knots
        ],
    )
    def test_kolmogorov_smirnov(self, params):
        p = vp(*params)
        mode = vlog.mode_exact(p)
        grid, cdf = _quadrature_cdf(p, mode - 35, mode + 35)
        rng = np.random.default_rng(29)
        zs = np.sort(vlog.sample_many(p, rng, 10**5))
        theo = np.interp(zs, grid, cdf)
        emp = np.arange(1, zs.size + 1) / zs.size
        ks = np.max(np.abs(emp - theo))
        assert ks <= 0.01

    def test_single_draw_api(self):
        rng = np.random.default_rng(1)
        z = vlog.sample(vp([1, -1], [0, 0], [1, 3]), rng)
        assert math.isfinite(z)

    def test_sampling_requires_validity(self):
        with pytest.raises(ValueError):
            vlog.sample(vp([1, 1], [0, 0], [1, 1]), np.random.default_rng(0))


class TestDigammaConsistency:
    def test_two_term_expectations_match_scipy(self):
        for a, b in ((0.3, 0.9), (2.0, 5.0), (11.0, 0.4)):
            got = vlog.two_term_expectations(a, b)
            want = (
                scipy.special.digamma(a + b) - scipy.special.digamma(a),
                scipy.special.digamma(a + b) - scipy.special.digamma(b),
            )
            assert got == pytest.approx(want, abs=1e-10)
