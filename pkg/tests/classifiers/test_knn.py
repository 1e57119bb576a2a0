import numpy as np
import pytest

import seizure.classes
import seizure.classifiers
import seizure.config
import seizure.exceptions
import seizure.pipeline
import seizure.preprocessing
import seizure.synth


def make_dataset(vectors, labels):
    return seizure.classes.Dataset(vectors=vectors, labels=labels)


class TestKnn:

    SOME_TRAIN = make_dataset([[0.0], [1.0], [10.0]], [0, 0, 1])

    def test_majority(self):
        assert seizure.classifiers.knn_classify(self.SOME_TRAIN, 3, [0.5]) == 0
        assert seizure.classifiers.knn_classify(self.SOME_TRAIN, 1, [9.0]) == 1

    def test_predict_many(self):
        predictions = seizure.classifiers.knn_predict(self.SOME_TRAIN, 1, [[0.2], [9.0], [4.0]])
        assert predictions.tolist() == [0, 1, 0]

    def test_ties_go_to_earlier_rows(self):
        # both stored vectors are at distance 1 from the query
        train = make_dataset([[1.0], [-1.0]], [1, 0])
        assert seizure.classifiers.knn_classify(train, 1, [0.0]) == 1
        swapped = make_dataset([[-1.0], [1.0]], [0, 1])
        assert seizure.classifiers.knn_classify(swapped, 1, [0.0]) == 0

    @pytest.mark.parametrize("k", [0, 2, -1, 4, True])
    def test_invalid_k(self, k):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.classifiers.knn_predict(self.SOME_TRAIN, k, [[0.0]])

    def test_k_larger_than_training_set(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.classifiers.knn_train(self.SOME_TRAIN, k=5)

    def test_dimension_mismatch(self):
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            seizure.classifiers.knn_predict(self.SOME_TRAIN, 1, [[0.0, 1.0]])

    def test_model(self):
        model = seizure.classifiers.knn_train(self.SOME_TRAIN, k=3)
        assert model.kind == "knn"
        assert model.dimension == 1
        assert model.predict([[0.5], [100.0]]).tolist() == [0, 0]
        assert model.provenance["k"] == 3

    def test_many_queries(self):
        rng = np.random.default_rng(0)
        train = make_dataset(rng.standard_normal((50, 3)), rng.integers(0, 2, size=50))
        queries = rng.standard_normal((600, 3))

        blocked = seizure.classifiers.knn_predict(train, 5, queries)
        one_by_one = [seizure.classifiers.knn_classify(train, 5, q) for q in queries[:40]]

        assert blocked.shape == (600,)
        assert blocked[:40].tolist() == one_by_one


class TestCnn:

    SOME_CLUSTERS = make_dataset([[0.0], [0.1], [0.2], [10.0], [10.1]], [0, 0, 0, 1, 1])

    def test_small_store(self):
        store = seizure.classifiers.cnn_condense(self.SOME_CLUSTERS, seed=0)
        assert len(store) <= 3
        assert store.has_both_classes()

    @pytest.mark.parametrize("seed", range(100))
    def test_store_is_consistent(self, seed):
        """
        Every training instance is classified correctly by 1-NN on the
        condensed store.
        """
        rng = np.random.default_rng(seed)
        vectors = rng.standard_normal((80, 2))
        labels = (vectors[:, 0] + 0.3 * rng.standard_normal(80) > 0).astype(int)
        train = make_dataset(vectors, labels)

        store = seizure.classifiers.cnn_condense(train, seed=seed)

        assert len(store) < len(train)
        np.testing.assert_array_equal(seizure.classifiers.knn_predict(store, 1, vectors), labels)

    def test_deterministic(self):
        first = seizure.classifiers.cnn_condense(self.SOME_CLUSTERS, seed=7)
        second = seizure.classifiers.cnn_condense(self.SOME_CLUSTERS, seed=7)
        assert first.keys == second.keys

    def test_single_class(self):
        train = make_dataset([[0.0], [1.0], [2.0]], [1, 1, 1])
        assert len(seizure.classifiers.cnn_condense(train, seed=0)) == 1

    def test_train_lowers_k(self):
        model = seizure.classifiers.cnn_train(self.SOME_CLUSTERS, k=5, seed=0)
        assert model.kind == "cnn"
        assert model.k <= len(model.vectors)
        assert model.k % 2 == 1
        assert model.predict([[0.05], [10.05]]).tolist() == [0, 1]

    def test_empty(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.classifiers.cnn_condense(make_dataset(np.zeros((0, 2)), []), seed=0)


class TestCnnOnEeg:

    def test_store_reduction(self, tmp_path):
        """
        Condensing the scaled features of synthetic recordings keeps at most
        40% of the windows.
        """
        seizure.synth.synthgen(
            tmp_path, patients=2, seconds=120, channels=4, sample_rate=128,
            seizure_fraction=0.1, seed=0)
        dataset = seizure.pipeline.featurize(seizure.config.RunConfig(inputs=str(tmp_path)))
        scaled = seizure.preprocessing.scale_dataset(
            seizure.preprocessing.fit_scaler(dataset.vectors), dataset)

        store = seizure.classifiers.cnn_condense(scaled, seed=0)

        assert len(dataset) == 240
        assert len(store) <= 0.4 * len(dataset)
        assert store.has_both_classes()
        np.testing.assert_array_equal(
            seizure.classifiers.knn_predict(store, 1, scaled.vectors), scaled.labels)
