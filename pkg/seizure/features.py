"""
The nine per-channel features of a one-second window (area, normalized
decay, line length, mean energy, average peak and valley amplitudes,
normalized peak number, peak variation, root mean square) and their
channel-major assembly into feature vectors.
"""

import dataclasses
import typing

import numpy as np

import seizure.classes.annotations
import seizure.classes.dataset
import seizure.classes.record
import seizure.exceptions
import seizure.helpers
import seizure.ingestion
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "FEATURE_NAMES",
    "FEATURES_PER_CHANNEL",
    "PeaksValleys",
    "ChannelFeatures",
    "detect_peaks_valleys",
    "channel_features",
    "window_features",
    "record_features",
    "feature_csv_header",
    "write_feature_csv",
    "read_feature_csv",
]


FEATURE_NAMES = (
    "area",
    "normalized_decay",
    "line_length",
    "mean_energy",
    "avg_peak_amplitude",
    "avg_valley_amplitude",
    "normalized_peak_number",
    "peak_variation",
    "rms",
)

FEATURES_PER_CHANNEL = len(FEATURE_NAMES)

ID_COLUMNS = ("patient_id", "window_index", "label")


@dataclasses.dataclass(frozen=True)
class PeaksValleys:
    """
    Turning points of a window. Peaks and valleys strictly alternate, and
    never sit on the first or last sample.
    """

    peak_indices: np.ndarray
    peak_values: np.ndarray
    valley_indices: np.ndarray
    valley_values: np.ndarray

    @property
    def n_peaks(self) -> int:
        return len(self.peak_indices)

    @property
    def n_valleys(self) -> int:
        return len(self.valley_indices)


@dataclasses.dataclass(frozen=True)
class ChannelFeatures:
    area: float
    normalized_decay: float
    line_length: float
    mean_energy: float
    avg_peak_amplitude: float
    avg_valley_amplitude: float
    normalized_peak_number: float
    peak_variation: float
    rms: float

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=np.float64)


def _as_window(window: typing.Any) -> np.ndarray:
    values = np.asarray(window, dtype=np.float64)
    if values.ndim != 1 or values.shape[0] < 2:
        raise seizure.exceptions.SeizureValueError(
            "a window needs at least 2 samples, given as a sequence")
    return values


def detect_peaks_valleys(window: typing.Any) -> PeaksValleys:
    """
    Finds the peaks (the derivative turns from positive to negative) and the
    valleys (from negative to positive) of a window. A zero difference keeps
    the sign of the last nonzero one, so a plateau turn is recorded at the
    first sample of the plateau; nothing is recorded before the first nonzero
    difference.
    """

    x = _as_window(window)
    d = np.diff(x)

    nonzero = np.flatnonzero(d)
    signs = np.sign(d[nonzero])

    turns = np.flatnonzero(signs[1:] != signs[:-1]) + 1
    indices = nonzero[turns - 1] + 1
    is_peak = signs[turns - 1] > 0

    peak_indices = indices[is_peak]
    valley_indices = indices[~is_peak]

    return PeaksValleys(
        peak_indices=peak_indices,
        peak_values=x[peak_indices],
        valley_indices=valley_indices,
        valley_values=x[valley_indices],
    )


def _log_mean_square(values: np.ndarray) -> float:
    if len(values) == 0:
        return 0.0
    mean_square = float(np.mean(values ** 2))
    if mean_square == 0.0:
        return 0.0
    return float(np.log10(mean_square))


def _peak_variation(turns: PeaksValleys) -> float:
    n = min(turns.n_peaks, turns.n_valleys)
    if n < 2:
        return 0.0

    index_gaps = (turns.peak_indices[:n] - turns.valley_indices[:n]).astype(np.float64)
    value_gaps = turns.peak_values[:n] - turns.valley_values[:n]

    spread = float(np.std(index_gaps, ddof=1)) * float(np.std(value_gaps, ddof=1))
    if spread == 0.0:
        return 0.0
    return 1.0 / spread


def channel_features(window: typing.Any) -> ChannelFeatures:
    """
    Computes the nine features of one channel of a window of `W >= 2`
    samples. Undefined quantities are replaced by 0: the peak (valley)
    amplitude without peaks (valleys) or with a zero mean square, the
    normalized peak number of a constant window, and the peak variation with
    fewer than two peak/valley pairs or a zero spread.
    """

    x = _as_window(window)
    d = np.diff(x)
    turns = detect_peaks_valleys(x)

    mean_energy = float(np.mean(x ** 2))
    mean_step = float(np.mean(np.abs(d)))

    return ChannelFeatures(
        area=float(np.mean(x)),
        normalized_decay=abs(float(np.mean(d < 0)) - 0.5),
        line_length=float(np.sum(np.abs(d))),
        mean_energy=mean_energy,
        avg_peak_amplitude=_log_mean_square(turns.peak_values),
        avg_valley_amplitude=_log_mean_square(turns.valley_values),
        normalized_peak_number=turns.n_peaks / mean_step if mean_step > 0 else 0.0,
        peak_variation=_peak_variation(turns),
        rms=float(np.sqrt(mean_energy)),
    )


def window_features(samples: typing.Any) -> np.ndarray:
    """
    Returns the feature vector of a `(C, W)` window: the nine features of
    channel 0, then those of channel 1, and so on (length `9 * C`).
    """
    try:
        matrix = np.asarray(samples, dtype=np.float64)
    except ValueError as exc:
        raise seizure.exceptions.SeizureDimensionError(
            "every channel of a window must have the same number of samples") from exc

    if matrix.ndim != 2:
        raise seizure.exceptions.SeizureDimensionError(
            "a window is a (channels, samples) matrix")

    return np.concatenate([channel_features(channel).as_array() for channel in matrix])


def record_features(
    record: seizure.classes.record.Record,
    ann: typing.Optional[seizure.classes.annotations.SeizureAnnotations] = None,
) -> seizure.classes.dataset.Dataset:
    """
    Featurizes every one-second window of a (normalized) record, labeled
    with `ann`, into a `Dataset` whose rows carry the window identities.
    """

    if ann is None:
        ann = seizure.classes.annotations.SeizureAnnotations()

    windows = seizure.ingestion.label_windows(record, ann)
    dimension = FEATURES_PER_CHANNEL * record.n_channels

    return seizure.classes.dataset.Dataset(
        vectors=[window_features(window.samples) for window in windows],
        labels=[window.label for window in windows],
        keys=[window.key for window in windows],
        dimension=dimension,
    )


# ======================================================================
# Feature files


def feature_csv_header(dimension: int) -> typing.List[str]:
    return list(ID_COLUMNS) + ["f{}".format(i) for i in range(dimension)]


def write_feature_csv(
    destination: typing.Union[seizure.typing.PathType, typing.TextIO],
    dataset: seizure.classes.dataset.Dataset,
) -> None:
    """
    Writes `dataset` as a feature file: header `patient_id,window_index,
    label,f0,...`, one row per window, features in channel-major order.
    """

    rows = (
        [key[0], key[2], int(label)] + [float(value) for value in vector]
        for key, label, vector in zip(dataset.keys, dataset.labels, dataset.vectors)
    )

    if hasattr(destination, "write"):
        seizure.helpers.write_csv(destination, rows, header=feature_csv_header(dataset.dimension))
        return

    with open(destination, "w", encoding="utf-8", newline="") as stream:
        seizure.helpers.write_csv(stream, rows, header=feature_csv_header(dataset.dimension))


def read_feature_csv(
    source: seizure.typing.SourceType,
) -> seizure.classes.dataset.Dataset:
    """
    Reads a feature file written by `write_feature_csv()`. Rows keep their
    order; their record identifier is empty.
    """

    info = seizure.helpers.open_csv(source, delimiters=[","])
    header = info["header"]
    name = info["source_name"]
    prefix = "{}: ".format(name) if name else ""

    if header is None or tuple(header[:3]) != ID_COLUMNS:
        raise seizure.exceptions.CsvParseException(
            "{}feature files start with the columns {}".format(prefix, ",".join(ID_COLUMNS)),
            row=1)

    dimension = len(header) - len(ID_COLUMNS)
    if header != feature_csv_header(dimension):
        raise seizure.exceptions.CsvParseException(
            "{}feature columns must be named f0..f{}".format(prefix, dimension - 1),
            row=1)

    vectors = np.empty((len(info["rows"]), dimension), dtype=np.float64)
    labels = []
    keys = []

    for index, (lineno, row) in enumerate(zip(info["line_numbers"], info["rows"])):
        if len(row) != len(header):
            raise seizure.exceptions.CsvParseException(
                "{}row {}: {} columns, expected {}".format(prefix, lineno, len(row), len(header)),
                row=lineno)

        window_index = seizure.helpers.parse_float_cell(row[1], row=lineno, column=2, source=name)
        label = seizure.helpers.parse_float_cell(row[2], row=lineno, column=3, source=name)
        if window_index != int(window_index) or label not in (0.0, 1.0):
            raise seizure.exceptions.CsvParseException(
                "{}row {}: window index must be an integer and label 0 or 1".format(
                    prefix, lineno),
                row=lineno)

        keys.append((row[0].strip(), "", int(window_index)))
        labels.append(int(label))
        for column, cell in enumerate(row[3:]):
            vectors[index, column] = seizure.helpers.parse_float_cell(
                cell, row=lineno, column=column + 4, source=name)

    return seizure.classes.dataset.Dataset(
        vectors=vectors, labels=labels, keys=keys, dimension=dimension)
