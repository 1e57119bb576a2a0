import numpy as np
import pytest

import seizure.classes
import seizure.exceptions


class TestRecord:

    SOME_RATE = 4

    @staticmethod
    def make_record(n_samples=10, channels=2, rate=4, **kwargs):
        data = np.arange(channels * n_samples, dtype=float).reshape(channels, n_samples)
        return seizure.classes.Record(channels=data, sample_rate=rate, **kwargs)

    def test_partial_second_dropped(self):
        record = self.make_record(n_samples=10, rate=self.SOME_RATE)
        assert record.duration == 2
        assert record.n_samples == 8
        assert record.channels.shape == (2, 8)

    def test_read_only(self):
        record = self.make_record()
        with pytest.raises(ValueError):
            record.channels[0, 0] = 1.0

    def test_window(self):
        record = self.make_record(n_samples=12, channels=1, rate=4)
        np.testing.assert_array_equal(record.window(1), [[4, 5, 6, 7]])
        with pytest.raises(seizure.exceptions.SeizureValueError):
            record.window(3)

    @pytest.mark.parametrize("record_id, patient_id", [
        ("chb01_03", "chb01"),
        ("chb12", "chb12"),
        ("", ""),
    ])
    def test_patient_from_record_id(self, record_id, patient_id):
        assert self.make_record(record_id=record_id).patient_id == patient_id

    def test_explicit_patient(self):
        assert self.make_record(record_id="chb01_03", patient_id="x").patient_id == "x"

    def test_default_channel_labels(self):
        assert self.make_record(channels=3).channel_labels == ("ch0", "ch1", "ch2")

    def test_channel_label_count(self):
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            self.make_record(channels=2, channel_labels=["only one"])

    @pytest.mark.parametrize("rate", [0, -256, 2.5, True])
    def test_invalid_rate(self, rate):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.classes.Record(channels=[[0.0] * 8], sample_rate=rate)

    def test_ragged_channels(self):
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            seizure.classes.Record(channels=[[0.0] * 8, [0.0] * 4], sample_rate=4)

    def test_non_finite(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            seizure.classes.Record(channels=[[0.0, np.nan, 0.0, 0.0]], sample_rate=4)

    def test_single_channel_vector(self):
        record = seizure.classes.Record(channels=[1.0, 2.0, 3.0, 4.0], sample_rate=4)
        assert record.n_channels == 1
        assert record.duration == 1

    def test_clone_keeps_metadata(self):
        record = self.make_record(n_samples=8, record_id="chb02_01")
        clone = record.clone(newdata=np.zeros((2, 8)))

        assert clone.record_id == "chb02_01"
        assert clone.patient_id == "chb02"
        assert clone.sample_rate == record.sample_rate
        assert np.all(clone.channels == 0)
        # the original is untouched
        assert record.channels[1, 0] == 8

    def test_clone_rejects_wrong_channel_count(self):
        with pytest.raises(seizure.exceptions.SeizureValueError):
            self.make_record(channels=2).clone(newdata=np.zeros((3, 8)))
