import typing

import numpy as np

import seizure.abstract
import seizure.exceptions


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "Record",
    "patient_id_from_record_id",
]


def patient_id_from_record_id(record_id: str) -> str:
    """
    Returns the patient identifier encoded in a record identifier: the prefix
    before the first underscore (so `chb01_03` belongs to `chb01`), or the
    whole identifier when there is no underscore.
    """
    return record_id.split("_", 1)[0]


class Record(seizure.abstract.CloneableCollection):
    """
    One patient recording: `C` channels of equal length, sampled at
    `sample_rate` Hz, for a whole number of seconds. The channel data is a
    read-only `numpy` array of shape `(C, sample_rate * duration)`; a tail
    shorter than one second is dropped at construction.

    A record is immutable; derived records (normalized channels, for
    instance) are obtained with `Record.clone(newdata=...)`.
    """

    data: np.ndarray = None

    def __init__(
        self,
        channels: typing.Any,
        sample_rate: int,
        patient_id: typing.Optional[str] = None,
        record_id: str = "",
        channel_labels: typing.Optional[typing.Sequence[str]] = None,
    ):
        if isinstance(sample_rate, bool) or int(sample_rate) != sample_rate or sample_rate <= 0:
            raise seizure.exceptions.SeizureValueError(
                "sample rate must be a positive integer, not {!r}".format(sample_rate))

        self.sample_rate = int(sample_rate)
        self.record_id = str(record_id)
        self.patient_id = (
            str(patient_id) if patient_id is not None
            else patient_id_from_record_id(self.record_id))

        array = self._as_channel_matrix(channels)

        if channel_labels is None:
            channel_labels = ["ch{}".format(c) for c in range(array.shape[0])]
        channel_labels = tuple(map(str, channel_labels))
        if len(channel_labels) != array.shape[0]:
            raise seizure.exceptions.SeizureDimensionError(
                "{} channel labels given for {} channels".format(
                    len(channel_labels), array.shape[0]))
        self.channel_labels = channel_labels

        self.data = self._prepare_newdata(array)

    # ===================================================================
    # Validation

    @staticmethod
    def _as_channel_matrix(channels: typing.Any) -> np.ndarray:
        try:
            array = np.array(channels, dtype=np.float64)
        except ValueError as exc:
            raise seizure.exceptions.SeizureDimensionError(
                "all channels of a record must have the same length") from exc

        if array.ndim == 1:
            array = array.reshape(1, -1)

        if array.ndim != 2 or array.shape[0] < 1:
            raise seizure.exceptions.SeizureDimensionError(
                "a record needs at least one channel, given as a "
                "(channels, samples) matrix")

        if not np.all(np.isfinite(array)):
            raise seizure.exceptions.SeizureValueError(
                "record samples must be finite")

        return array

    def _validate_newdata(self, newdata: typing.Any = None) -> bool:
        if newdata is None:
            return False
        array = np.asarray(newdata)
        return array.ndim == 2 and array.shape[0] == len(self.channel_labels)

    def _prepare_newdata(self, newdata: typing.Any) -> np.ndarray:
        array = np.array(newdata, dtype=np.float64)
        whole = (array.shape[1] // self.sample_rate) * self.sample_rate
        array = np.ascontiguousarray(array[:, :whole])
        array.setflags(write=False)
        return array

    # ===================================================================
    # Accessors

    @property
    def channels(self) -> np.ndarray:
        """
        The read-only `(C, samples)` channel matrix.
        """
        return self.data

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    @property
    def duration(self) -> int:
        """
        Duration of the record in whole seconds.
        """
        return self.data.shape[1] // self.sample_rate

    def window(self, second: int) -> np.ndarray:
        """
        Returns the `(C, W)` samples of the `second`-th one-second window.
        """
        if not 0 <= second < self.duration:
            raise seizure.exceptions.SeizureValueError(
                "window {} is outside of a {} s record".format(second, self.duration))
        start = second * self.sample_rate
        return self.data[:, start:start + self.sample_rate]

    def __repr__(self):
        return "Record(patient_id={!r}, record_id={!r}, channels={}, sample_rate={}, duration={})".format(
            self.patient_id, self.record_id, self.n_channels,
            self.sample_rate, self.duration)
