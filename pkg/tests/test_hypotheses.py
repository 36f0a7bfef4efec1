import numpy as np
import pytest

from viboost_lab import hypotheses
from viboost_lab.errors import EmptySpaceError
from viboost_lab.hypotheses import Dataset, Stump, build_stumps, weighted_error


def make_dataset(values, labels=None):
    x = np.asarray(values, float).reshape(-1, 1)
    y = np.ones(x.shape[0], int) if labels is None else np.asarray(labels, int)
    return Dataset(x, y)


class TestDataset:
    def test_validation(self):
        with pytest.raises(ValueError):
            Dataset(np.zeros((0, 2)), np.array([], int))
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 1)), np.array([1, 0]))
        with pytest.raises(ValueError):
            Dataset(np.zeros((2, 1)), np.array([1, -1]), true_types=np.array([1, 2]))

    def test_subset(self):
        d = Dataset(np.arange(6.0).reshape(3, 2), np.array([1, -1, 1]), np.array([1, 0, 1]))
        s = d.subset(np.array([0, 2]))
        assert s.n_examples == 2
        np.testing.assert_array_equal(s.true_types, [1, 1])


class TestBuildStumps:
    def test_two_values_two_stumps(self):
        space = build_stumps(make_dataset([-1.0, 1.0]))
        assert [s.threshold for s in space.stumps] == [-2.0, 0.0]
        np.testing.assert_array_equal(space.prediction_table, [[1, 1], [-1, 1]])

    def test_constant_features_raise(self):
        with pytest.raises(EmptySpaceError):
            build_stumps(Dataset(np.ones((4, 3)), np.array([1, -1, 1, -1])))

    def test_step_domain_yields_hundred_distinct_rows(self):
        space = build_stumps(make_dataset(np.arange(-99.0, 100.0, 2.0)))
        assert space.size == 100
        rows = {r.tobytes() for r in space.prediction_table}
        assert len(rows) == 100

    def test_negation_freedom_and_distinctness(self):
        rng = np.random.default_rng(2)
        data = Dataset(rng.normal(size=(40, 5)), rng.choice([-1, 1], 40))
        table = build_stumps(data).prediction_table
        m = table.shape[0]
        for i in range(m):
            for j in range(i + 1, m):
                assert not np.array_equal(table[i], table[j])
                assert not np.array_equal(table[i], -table[j])

    def test_duplicate_rows_across_features_deduplicated(self):
        x = np.array([[0.0, 10.0], [1.0, 11.0]])  # second feature predicts identically
        space = build_stumps(Dataset(x, np.array([1, -1])))
        assert space.size == 2
        assert all(s.feature_index == 0 for s in space.stumps)

    def test_sign_zero_is_positive(self):
        s = Stump(0, 0.5)
        assert s.predict(np.array([[0.5]]))[0] == 1


class TestWeightedError:
    def test_perfect_stump(self):
        data = make_dataset([-1.0, 1.0], [-1, 1])
        assert weighted_error(Stump(0, 0.0), data, np.array([0.3, 0.7])) == 0.0

    def test_half_wrong_uniform(self):
        data = make_dataset([-1.0, 1.0], [1, 1])
        assert weighted_error(Stump(0, 0.0), data, np.array([0.5, 0.5])) == 0.5

    def test_weighted_mistakes(self):
        data = make_dataset([0.0, 1.0, 2.0, 3.0], [-1, -1, 1, -1])
        # stump at 1.5 errs on examples 0 (predict -1? no: 0<1.5 -> -1 == y) ...
        # choose stump below min so it predicts +1 everywhere: mistakes on 0,1,3
        d = np.array([0.4, 0.3, 0.2, 0.1])
        assert weighted_error(Stump(0, -1.0), data, d) == pytest.approx(0.8)
        # stump at 1.5: predictions [-1,-1,1,1], mistake only on example 3
        assert weighted_error(Stump(0, 1.5), data, d) == pytest.approx(0.1)

    def test_mistakes_on_first_and_last(self):
        data = make_dataset([0.0, 1.0, 2.0, 3.0], [1, 1, 1, -1])
        # stump at 0.5 predicts [-1,1,1,1]: wrong on examples 1 and 4
        d = np.array([0.4, 0.3, 0.2, 0.1])
        assert weighted_error(Stump(0, 0.5), data, d) == pytest.approx(0.5)

    def test_example_from_mistake_indices(self):
        data = make_dataset([0.0, 1.0, 2.0, 3.0], [-1, 1, 1, -1])
        # stump at 0.5 predicts [-1,1,1,1]: mistakes on example 4 only -> index 3
        d = np.array([0.4, 0.3, 0.2, 0.1])
        assert weighted_error(Stump(0, 0.5), data, d) == pytest.approx(0.1)
        # complement identity through explicit negation of the predictions
        pred = Stump(0, 0.5).predict(data.features)
        err_pos = float(d[pred != data.labels].sum())
        err_neg = float(d[(-pred) != data.labels].sum())
        assert err_pos + err_neg == pytest.approx(1.0)

    def test_preconditions(self):
        data = make_dataset([0.0, 1.0], [1, -1])
        with pytest.raises(ValueError):
            weighted_error(Stump(0, 0.5), data, np.array([0.9, 0.2]))
        with pytest.raises(ValueError):
            weighted_error(Stump(0, 0.5), data, np.array([-0.1, 1.1]))

    def test_complement_identity_random(self):
        rng = np.random.default_rng(4)
        data = Dataset(rng.normal(size=(25, 3)), rng.choice([-1, 1], 25))
        space = build_stumps(data)
        d = rng.dirichlet(np.ones(25))
        for s, row in zip(space.stumps, space.prediction_table):
            err = weighted_error(s, data, d)
            err_neg = float(d[(-row) != data.labels].sum())
            assert err + err_neg == pytest.approx(1.0, abs=1e-12)


class TestEnsembleMargin:
    def setup_method(self):
        self.space = build_stumps(make_dataset([-1.0, 1.0]))

    def test_empty_ensemble_is_zero(self):
        assert hypotheses.ensemble_margin([], self.space, 0) == 0.0

    def test_single_stage(self):
        # stump 0 predicts +1 everywhere
        assert hypotheses.ensemble_margin([(0.5, 0)], self.space, 0) == 0.5

    def test_two_stages(self):
        # on example 0: stump 0 -> +1, stump 1 -> -1
        stages = [(0.5, 0), (0.3, 1)]
        assert hypotheses.ensemble_margin(stages, self.space, 0) == pytest.approx(0.2)

    def test_index_error(self):
        with pytest.raises(IndexError):
            hypotheses.ensemble_margin([], self.space, 5)

    def test_margins_consistency(self):
        stages = [(0.5, 0), (-0.7, 1)]
        all_margins = hypotheses.ensemble_margins(stages, self.space)
        for n in range(2):
            assert all_margins[n] == pytest.approx(
                hypotheses.ensemble_margin(stages, self.space, n), abs=1e-15
            )

    def test_margins_on_fresh_features(self):
        stages = [(1.0, 1)]
        margins = hypotheses.ensemble_margins_on(
            stages, self.space, np.array([[-3.0], [3.0], [0.0]])
        )
        np.testing.assert_allclose(margins, [-1.0, 1.0, 1.0])
