import numpy as np
import pytest

import seizure.classes
import seizure.exceptions
import seizure.preprocessing


class TestNearestRank:

    @pytest.mark.parametrize("n, permille, rank", [
        (1000, 25, 25),
        (1000, 975, 975),
        (1001, 975, 976),
        (10, 25, 1),
        (1, 975, 1),
        (256, 975, 250),
    ])
    def test_rank(self, n, permille, rank):
        assert seizure.preprocessing.nearest_rank(n, permille) == rank


class TestNormalizeRecord:

    @staticmethod
    def make_record(*channels, rate=None):
        channels = np.asarray(channels, dtype=float)
        return seizure.classes.Record(
            channels=channels, sample_rate=rate or channels.shape[1], record_id="p1_01")

    def test_constant_channel(self):
        normalized, stats = seizure.preprocessing.normalize_record(self.make_record([3.0] * 16))
        assert np.all(normalized.channels == 0)
        assert stats.std[0] == 0

    def test_alternating_channel(self):
        a = 7.5
        normalized, _ = seizure.preprocessing.normalize_record(self.make_record([a, -a] * 8))
        np.testing.assert_allclose(normalized.channels[0], [1.0, -1.0] * 8)

    def test_outlier_clamped(self):
        rng = np.random.default_rng(0)
        samples = rng.standard_normal(1000)
        samples = np.append(samples, samples.mean() + 10 * samples.std())

        normalized, stats = seizure.preprocessing.normalize_record(self.make_record(samples))
        z = normalized.channels[0]

        assert z[-1] == 2.0
        assert z.max() == 2.0
        assert z.min() == -2.0
        # 1001 - 976 samples lie above the 97.5th nearest-rank percentile
        assert np.sum(z == 2.0) == 25
        assert stats.high[0] < 2.5

    def test_channels_independent(self):
        record = self.make_record([1.0, 2.0, 3.0, 4.0], [100.0, 100.0, 100.0, 100.0])
        normalized, stats = seizure.preprocessing.normalize_record(record)

        np.testing.assert_allclose(stats.mean, [2.5, 100.0])
        assert np.all(normalized.channels[1] == 0)
        assert normalized.channels[0, 0] < 0 < normalized.channels[0, 3]

    def test_metadata_kept(self):
        record = self.make_record([1.0, 2.0, 3.0, 4.0])
        normalized = seizure.preprocessing.preprocess_record(record)
        assert normalized.record_id == "p1_01"
        assert normalized.sample_rate == record.sample_rate
        assert normalized is not record

    def test_clamp_channels(self):
        z = np.array([[-3.0, -1.0, 0.0, 1.0, 3.0]])
        clamped = seizure.preprocessing.clamp_channels(z, low=[-1.0], high=[1.0])
        np.testing.assert_array_equal(clamped, [[-2.0, -1.0, 0.0, 1.0, 2.0]])


class TestMinMaxScaler:

    SOME_VECTORS = [[0.0, 10.0], [4.0, 20.0]]

    def test_fit_and_apply(self):
        scaler = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)

        np.testing.assert_array_equal(scaler.minimum, [0.0, 10.0])
        np.testing.assert_array_equal(scaler.maximum, [4.0, 20.0])
        np.testing.assert_allclose(seizure.preprocessing.apply_scaler(scaler, [2.0, 15.0]), [0.5, 0.5])
        np.testing.assert_allclose(seizure.preprocessing.apply_scaler(scaler, [4.0, 10.0]), [1.0, 0.0])

    def test_clamped_outside_training_range(self):
        scaler = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)
        np.testing.assert_allclose(seizure.preprocessing.apply_scaler(scaler, [8.0, 0.0]), [1.0, 0.0])

    def test_degenerate_feature(self):
        scaler = seizure.preprocessing.fit_scaler([[7.0, 1.0], [7.0, 3.0]])
        scaled = seizure.preprocessing.apply_scaler(scaler, [100.0, 2.0])
        np.testing.assert_allclose(scaled, [0.5, 0.5])

    def test_transform_matrix(self):
        scaler = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)
        np.testing.assert_allclose(scaler.transform(self.SOME_VECTORS), [[0.0, 0.0], [1.0, 1.0]])

    def test_apply_scaler_wants_a_vector(self):
        scaler = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            seizure.preprocessing.apply_scaler(scaler, self.SOME_VECTORS)

    def test_dimension_mismatch(self):
        scaler = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            seizure.preprocessing.apply_scaler(scaler, [1.0, 2.0, 3.0])

    def test_fit_empty(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.preprocessing.fit_scaler(np.zeros((0, 3)))

    def test_invalid_bounds(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.preprocessing.MinMaxScaler(minimum=[1.0], maximum=[0.0])

    def test_equality(self):
        a = seizure.preprocessing.fit_scaler(self.SOME_VECTORS)
        b = seizure.preprocessing.MinMaxScaler(minimum=[0.0, 10.0], maximum=[4.0, 20.0])
        assert a == b

    def test_scale_dataset(self):
        dataset = seizure.classes.Dataset(vectors=self.SOME_VECTORS, labels=[0, 1])
        scaler = seizure.preprocessing.fit_scaler(dataset.vectors)

        scaled = seizure.preprocessing.scale_dataset(scaler, dataset)

        np.testing.assert_allclose(scaled.vectors, [[0.0, 0.0], [1.0, 1.0]])
        np.testing.assert_array_equal(scaled.labels, dataset.labels)
        assert scaled.keys == dataset.keys
