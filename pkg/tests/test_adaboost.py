import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viboost_lab import adaboost, hypotheses
from viboost_lab.adaboost import AdaConfig, run_adaboost, smoothed_alpha
from viboost_lab.errors import DegenerateWeightError
from viboost_lab.hypotheses import Dataset, build_stumps


class TestSmoothedAlpha:
    def test_balanced_error_is_zero(self):
        for z in (0.5, 1.0, 100.0):
            for mu0 in (0.0, 1.0, 3.0):
                assert smoothed_alpha(0.5, z, mu0) == 0.0

    def test_classic_limit(self):
        assert smoothed_alpha(0.25, 1.0, 0.0) == pytest.approx(0.5 * math.log(3), abs=1e-12)

    def test_smoothed_value(self):
        assert smoothed_alpha(0.25, 1.0, 1.0) == pytest.approx(
            0.5 * math.log(1.75 / 1.25), abs=1e-12
        )

    def test_degenerate_sentinels(self):
        assert smoothed_alpha(0.0, 1.0, 0.0) == math.inf
        assert smoothed_alpha(1.0, 1.0, 0.0) == -math.inf
        assert math.isfinite(smoothed_alpha(0.0, 1.0, 1.0))

    def test_large_z_matches_classic(self):
        for eps in np.arange(0.05, 0.96, 0.05):
            eps = float(eps)
            got = smoothed_alpha(eps, 1e10, 1.0, 1.0)
            classic = 0.5 * math.log((1 - eps) / eps)
            assert abs(got - classic) <= 1e-6

    def test_antisymmetry_exact_on_dyadic_grid(self):
        for k in range(1, 64):
            eps = k / 64.0
            assert smoothed_alpha(eps, 2.0, 0.7) == -smoothed_alpha(1.0 - eps, 2.0, 0.7)

    @given(
        st.floats(0.01, 0.49),
        st.floats(0.1, 50.0),
        st.floats(0.25, 4.0),
    )
    @settings(max_examples=100)
    def test_shrinkage_monotone_in_smoothing_mass(self, eps, z, tau):
        weights = [abs(smoothed_alpha(eps, z, mu0, tau)) for mu0 in (0.0, 0.5, 1.0, 2.0)]
        assert all(a > b for a, b in zip(weights, weights[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            smoothed_alpha(-0.1, 1.0, 0.0)
        with pytest.raises(ValueError):
            smoothed_alpha(0.2, 0.0, 0.0)
        with pytest.raises(ValueError):
            smoothed_alpha(0.2, 1.0, -1.0)


def separable_pair():
    return Dataset(np.array([[-1.0], [1.0]]), np.array([-1, 1]))


class TestRunAdaboost:
    def test_separable_single_round(self):
        data = separable_pair()
        space = build_stumps(data)
        stages = run_adaboost(data, space, AdaConfig(rounds=1, smoothing_mu0=1.0))
        margins = hypotheses.ensemble_margins(stages, space)
        assert np.all(hypotheses.predict_sign(margins) == data.labels)

    def test_degenerate_weight_raises_for_classic(self):
        data = separable_pair()
        space = build_stumps(data)
        with pytest.raises(DegenerateWeightError):
            run_adaboost(data, space, AdaConfig(rounds=1, smoothing_mu0=0.0))

    def test_exponential_loss_nonincreasing(self):
        rng = np.random.default_rng(8)
        data = Dataset(rng.normal(size=(60, 4)), rng.choice([-1, 1], 60))
        space = build_stumps(data)
        stages = run_adaboost(data, space, AdaConfig(rounds=25, smoothing_mu0=0.0))
        margins = np.zeros(60)
        losses = [60.0]
        for alpha, idx in stages:
            margins += alpha * space.prediction_table[idx]
            losses.append(float(np.exp(-data.labels * margins).sum()))
        assert all(b <= a + 1e-9 for a, b in zip(losses, losses[1:]))

    def test_hand_traced_three_rounds(self):
        # x = 0,1,2,3 ; y = +1,-1,+1,+1 ; stumps at thresholds -1, .5, 1.5, 2.5
        data = Dataset(np.array([[0.0], [1.0], [2.0], [3.0]]), np.array([1, -1, 1, 1]))
        space = build_stumps(data)
        assert [s.threshold for s in space.stumps] == [-1.0, 0.5, 1.5, 2.5]
        stages = run_adaboost(data, space, AdaConfig(rounds=3, smoothing_mu0=0.0))
        # round 1: eps = (.25, .5, .25, .5) -> stump 0, alpha = .5 ln 3
        # round 2: d = (1/6, 1/2, 1/6, 1/6), eps = (1/2, 2/3, 1/6, 1/3) -> stump 2, .5 ln 5
        # round 3: d = (1/2, 3/10, 1/10, 1/10), eps = (.3, .8, .5, .6) -> stump 0, .5 ln(7/3)
        assert [idx for _, idx in stages] == [0, 2, 0]
        expected_alphas = [0.5 * math.log(3), 0.5 * math.log(5), 0.5 * math.log(7 / 3)]
        for (alpha, _), want in zip(stages, expected_alphas):
            assert alpha == pytest.approx(want, abs=1e-12)

    def test_tie_breaks_to_lowest_index(self):
        data = Dataset(np.array([[0.0], [1.0], [2.0], [3.0]]), np.array([1, -1, 1, 1]))
        space = build_stumps(data)
        stages = run_adaboost(data, space, AdaConfig(rounds=1, smoothing_mu0=0.5))
        assert stages[0][1] == 0  # stumps 0 and 2 tie at eps = 0.25
