"""
Normalization of recordings before featurization (per-channel z-scoring,
then truncation of the extreme 2.5% on each side to -2 and +2), and min-max
scaling of feature vectors to [0, 1] afterwards.
"""

import dataclasses
import logging
import typing

import numpy as np

import seizure.classes.dataset
import seizure.classes.record
import seizure.exceptions


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "ChannelStats",
    "MinMaxScaler",
    "nearest_rank",
    "clamp_channels",
    "normalize_record",
    "preprocess_record",
    "fit_scaler",
    "apply_scaler",
    "scale_dataset",
]


logger = logging.getLogger(__name__)


# percentiles are expressed in tenths of a percent to keep rank arithmetic
# in integers
LOW_PERMILLE = 25
HIGH_PERMILLE = 975

CLAMP_LOW = -2.0
CLAMP_HIGH = 2.0


def _read_only(array: typing.Any) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclasses.dataclass(frozen=True)
class ChannelStats:
    """
    Per-channel statistics of a normalized record: population mean and
    standard deviation of the raw samples, and the 2.5th and 97.5th
    nearest-rank percentiles of the z-scored samples.
    """

    mean: np.ndarray
    std: np.ndarray
    low: np.ndarray
    high: np.ndarray


def nearest_rank(n: int, permille: int) -> int:
    """
    Returns the 1-based nearest rank of a percentile (given in tenths of a
    percent) among `n` sorted values: `ceil(permille * n / 1000)`, at least 1.
    """
    return max(1, -((-permille * n) // 1000))


def clamp_channels(z: np.ndarray, low: np.ndarray, high: np.ndarray) -> np.ndarray:
    """
    Replaces the values of each channel (row) of `z` strictly above the
    channel's `high` threshold by +2, and strictly below its `low` threshold
    by -2.
    """
    z = np.asarray(z, dtype=np.float64)
    low = np.asarray(low, dtype=np.float64).reshape(-1, 1)
    high = np.asarray(high, dtype=np.float64).reshape(-1, 1)
    return np.where(z > high, CLAMP_HIGH, np.where(z < low, CLAMP_LOW, z))


def normalize_record(
    record: seizure.classes.record.Record,
) -> typing.Tuple[seizure.classes.record.Record, ChannelStats]:
    """
    Normalizes each channel of `record` independently: z-scores it with its
    population mean and standard deviation (a constant channel becomes all
    zeros), then clamps the values beyond its 2.5th and 97.5th nearest-rank
    percentiles to -2 and +2. Returns the normalized record (same metadata)
    and the statistics used.
    """

    x = record.channels
    n = x.shape[1]

    if n == 0:
        raise seizure.exceptions.SeizureValueError(
            "cannot normalize record {!r}: it is shorter than one second".format(
                record.record_id or record.patient_id))

    mean = x.mean(axis=1)
    std = x.std(axis=1)

    z = np.zeros_like(x)
    varying = std > 0
    z[varying] = (x[varying] - mean[varying, None]) / std[varying, None]

    ordered = np.sort(z, axis=1)
    low = ordered[:, nearest_rank(n, LOW_PERMILLE) - 1]
    high = ordered[:, nearest_rank(n, HIGH_PERMILLE) - 1]

    normalized = clamp_channels(z, low, high)

    stats = ChannelStats(
        mean=_read_only(mean),
        std=_read_only(std),
        low=_read_only(low),
        high=_read_only(high),
    )

    return record.clone(newdata=normalized), stats


def preprocess_record(record: seizure.classes.record.Record) -> seizure.classes.record.Record:
    """
    Returns the normalized version of `record` (see `normalize_record()`),
    logging its channel statistics at debug level.
    """
    normalized, stats = normalize_record(record)
    logger.debug(
        "normalized %r: %d constant channel(s), clamping thresholds in [%.3f, %.3f]",
        record.record_id or record.patient_id,
        int(np.sum(stats.std == 0)),
        float(np.min(stats.low)),
        float(np.max(stats.high)))
    return normalized


# ======================================================================
# Min-max scaling


@dataclasses.dataclass(frozen=True)
class MinMaxScaler:
    """
    Per-feature minimum and maximum of a fitting set. Features are mapped to
    `(x - min) / (max - min)` clamped to [0, 1], or to 0.5 where the range is
    empty.
    """

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        minimum = _read_only(self.minimum).reshape(-1)
        maximum = _read_only(self.maximum).reshape(-1)
        if minimum.shape != maximum.shape:
            raise seizure.exceptions.SeizureDimensionError(
                "scaler minimum and maximum have different lengths")
        if np.any(minimum > maximum):
            raise seizure.exceptions.SeizureValueError(
                "scaler minimum exceeds maximum for some feature")
        object.__setattr__(self, "minimum", _read_only(minimum))
        object.__setattr__(self, "maximum", _read_only(maximum))

    @property
    def dimension(self) -> int:
        return self.minimum.shape[0]

    def transform(self, matrix: typing.Any) -> np.ndarray:
        """
        Scales every row of `matrix` (or a single vector).
        """
        values = np.asarray(matrix, dtype=np.float64)
        if values.shape[-1:] != (self.dimension,):
            raise seizure.exceptions.SeizureDimensionError(
                "cannot scale vectors of dimension {} with a scaler of "
                "dimension {}".format(values.shape[-1] if values.ndim else 0, self.dimension))

        span = self.maximum - self.minimum
        varying = span > 0

        scaled = np.full(values.shape, 0.5)
        scaled[..., varying] = np.clip(
            (values[..., varying] - self.minimum[varying]) / span[varying], 0.0, 1.0)
        return scaled

    def __eq__(self, other):
        if not isinstance(other, MinMaxScaler):
            return NotImplemented
        return (np.array_equal(self.minimum, other.minimum) and
                np.array_equal(self.maximum, other.maximum))


def fit_scaler(vectors: typing.Any) -> MinMaxScaler:
    """
    Returns the scaler recording the per-feature extrema of `vectors` (a
    non-empty list or matrix of feature vectors; the training set only).
    """
    matrix = np.asarray(vectors, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.shape[0] == 0:
        raise seizure.exceptions.SeizureValueError(
            "cannot fit a scaler on an empty set of vectors")
    return MinMaxScaler(minimum=matrix.min(axis=0), maximum=matrix.max(axis=0))


def apply_scaler(scaler: MinMaxScaler, v: typing.Any) -> np.ndarray:
    """
    Returns the feature vector `v` scaled to [0, 1] by `scaler`.
    """
    vector = np.asarray(v, dtype=np.float64)
    if vector.ndim != 1:
        raise seizure.exceptions.SeizureDimensionError(
            "`apply_scaler` scales one vector; use `MinMaxScaler.transform` "
            "for matrices")
    return scaler.transform(vector)


def scale_dataset(
    scaler: MinMaxScaler,
    dataset: seizure.classes.dataset.Dataset,
) -> seizure.classes.dataset.Dataset:
    """
    Returns `dataset` with every vector scaled by `scaler`.
    """
    return dataset.clone(newdata=scaler.transform(dataset.vectors))
