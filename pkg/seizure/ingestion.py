"""
Reading of EEG recordings (classic 16-bit EDF, or plain CSV with one column
per channel), of seizure annotation files, and cutting of recordings into
labeled one-second windows.
"""

import collections
import dataclasses
import logging
import math
import os
import typing
import warnings

import numpy as np

import seizure.classes.annotations
import seizure.classes.record
import seizure.classes.window
import seizure.exceptions
import seizure.extras
import seizure.helpers
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "EdfHeader",
    "read_edf_header",
    "read_edf_digital",
    "read_edf",
    "digitize",
    "write_edf",
    "read_csv",
    "read_recording",
    "read_annotations",
    "annotations_for",
    "window_labels",
    "label_windows",
]


logger = logging.getLogger(__name__)


# (field name, width in bytes) of the 256-byte global header
GLOBAL_HEADER_FIELDS = [
    ("version", 8),
    ("patient", 80),
    ("recording", 80),
    ("start_date", 8),
    ("start_time", 8),
    ("header_bytes", 8),
    ("reserved", 44),
    ("n_records", 8),
    ("record_duration", 8),
    ("n_signals", 4),
]

# (field name, width in bytes) of each per-signal header block; a block
# holds that field for every signal, one after the other
SIGNAL_HEADER_FIELDS = [
    ("label", 16),
    ("transducer", 80),
    ("physical_dimension", 8),
    ("physical_min", 8),
    ("physical_max", 8),
    ("digital_min", 8),
    ("digital_max", 8),
    ("prefiltering", 80),
    ("samples_per_record", 8),
    ("reserved", 32),
]

HEADER_BLOCK_SIZE = 256

EDF_ANNOTATIONS_LABEL = "EDF Annotations"

DIGITAL_MIN = -32768
DIGITAL_MAX = 32767

CSV_EXTENSIONS = (".csv", ".tsv", ".txt")
EDF_EXTENSIONS = (".edf",)


@dataclasses.dataclass(frozen=True)
class EdfHeader:
    """
    The parsed header of an EDF file. `signals` holds one
    `EdfSignalHeaderType` dictionary per signal, in file order (EDF+
    annotation signals included).
    """

    version: str
    patient: str
    recording: str
    start_date: str
    start_time: str
    header_bytes: int
    n_records: int
    record_duration: float
    signals: typing.Tuple[seizure.typing.EdfSignalHeaderType, ...]

    @property
    def n_signals(self) -> int:
        return len(self.signals)

    @property
    def record_samples(self) -> int:
        """
        Number of 16-bit samples in one data record, all signals included.
        """
        return sum(signal["samples_per_record"] for signal in self.signals)

    @property
    def data_bytes(self) -> int:
        return 2 * self.n_records * self.record_samples

    @property
    def data_signal_indices(self) -> typing.List[int]:
        """
        Indices of the signals holding samples (EDF+ annotation signals are
        skipped).
        """
        return [
            index for index, signal in enumerate(self.signals)
            if signal["label"] != EDF_ANNOTATIONS_LABEL
        ]

    @property
    def sample_rate(self) -> int:
        """
        The common sampling rate (Hz) of the data signals. Raises an
        `EdfRateMismatchException` if the signals disagree, or if the rate is
        not a whole number.
        """
        counts = {self.signals[i]["samples_per_record"] for i in self.data_signal_indices}

        if len(counts) == 0:
            raise seizure.exceptions.EdfHeaderException(
                "the EDF file contains no data signal")

        if len(counts) > 1:
            raise seizure.exceptions.EdfRateMismatchException(
                "signals have different sampling rates ({} samples per "
                "record); resampling is not supported".format(sorted(counts)))

        rate = counts.pop() / self.record_duration
        if rate <= 0 or abs(rate - round(rate)) > 1e-9:
            raise seizure.exceptions.EdfRateMismatchException(
                "sampling rate {} Hz is not a positive whole number".format(rate))

        return int(round(rate))


# ======================================================================
# EDF reading


def _decode_field(raw: bytes) -> str:
    return raw.decode("ascii", errors="replace").strip()


def _parse_header_number(text: str, field: str, kind: type):
    try:
        value = float(text) if kind is float else int(text)
    except ValueError:
        raise seizure.exceptions.EdfHeaderException(
            "EDF header field `{}` is not a number: {!r}".format(field, text))
    if kind is float and not math.isfinite(value):
        raise seizure.exceptions.EdfHeaderException(
            "EDF header field `{}` is not finite: {!r}".format(field, text))
    return value


def read_edf_header(source: seizure.typing.SourceType) -> EdfHeader:
    """
    Parses the global and per-signal headers of an EDF source (a path, bytes
    or binary stream). Raises an `EdfHeaderException` when a field cannot be
    parsed or when the declared header size does not match the number of
    signals.
    """

    stream = seizure.helpers.open_binary(source)

    block = stream.read(HEADER_BLOCK_SIZE)
    if len(block) < HEADER_BLOCK_SIZE:
        raise seizure.exceptions.EdfHeaderException(
            "EDF header is {} bytes long, at least {} were expected".format(
                len(block), HEADER_BLOCK_SIZE))

    fields = dict()
    offset = 0
    for name, width in GLOBAL_HEADER_FIELDS:
        fields[name] = _decode_field(block[offset:offset + width])
        offset += width

    header_bytes = _parse_header_number(fields["header_bytes"], "header_bytes", int)
    n_records = _parse_header_number(fields["n_records"], "n_records", int)
    record_duration = _parse_header_number(fields["record_duration"], "record_duration", float)
    n_signals = _parse_header_number(fields["n_signals"], "n_signals", int)

    if n_signals < 1:
        raise seizure.exceptions.EdfHeaderException(
            "EDF header declares {} signals".format(n_signals))

    if header_bytes != HEADER_BLOCK_SIZE * (n_signals + 1):
        raise seizure.exceptions.EdfHeaderException(
            "EDF header declares {} header bytes, but {} signals need {}".format(
                header_bytes, n_signals, HEADER_BLOCK_SIZE * (n_signals + 1)))

    if record_duration <= 0:
        raise seizure.exceptions.EdfHeaderException(
            "EDF data record duration must be positive, not {}".format(record_duration))

    if n_records < -1:
        raise seizure.exceptions.EdfHeaderException(
            "EDF header declares {} data records".format(n_records))

    signal_block = stream.read(HEADER_BLOCK_SIZE * n_signals)
    if len(signal_block) < HEADER_BLOCK_SIZE * n_signals:
        raise seizure.exceptions.EdfHeaderException(
            "EDF signal headers are truncated: {} bytes for {} signals".format(
                len(signal_block), n_signals))

    columns = dict()
    offset = 0
    for name, width in SIGNAL_HEADER_FIELDS:
        columns[name] = [
            _decode_field(signal_block[offset + i * width:offset + (i + 1) * width])
            for i in range(n_signals)
        ]
        offset += width * n_signals

    signals = []
    for i in range(n_signals):
        signal = {
            "label": columns["label"][i],
            "transducer": columns["transducer"][i],
            "physical_dimension": columns["physical_dimension"][i],
            "physical_min": _parse_header_number(columns["physical_min"][i], "physical_min", float),
            "physical_max": _parse_header_number(columns["physical_max"][i], "physical_max", float),
            "digital_min": _parse_header_number(columns["digital_min"][i], "digital_min", int),
            "digital_max": _parse_header_number(columns["digital_max"][i], "digital_max", int),
            "prefiltering": columns["prefiltering"][i],
            "samples_per_record": _parse_header_number(
                columns["samples_per_record"][i], "samples_per_record", int),
        }
        if signal["samples_per_record"] < 1:
            raise seizure.exceptions.EdfHeaderException(
                "signal {} ({!r}) declares {} samples per record".format(
                    i, signal["label"], signal["samples_per_record"]))
        if signal["digital_max"] <= signal["digital_min"] and signal["label"] != EDF_ANNOTATIONS_LABEL:
            raise seizure.exceptions.EdfHeaderException(
                "signal {} ({!r}) has an empty digital range [{}, {}]".format(
                    i, signal["label"], signal["digital_min"], signal["digital_max"]))
        signals.append(signal)

    return EdfHeader(
        version=fields["version"],
        patient=fields["patient"],
        recording=fields["recording"],
        start_date=fields["start_date"],
        start_time=fields["start_time"],
        header_bytes=header_bytes,
        n_records=n_records,
        record_duration=record_duration,
        signals=tuple(signals),
    )


def read_edf_digital(
    source: seizure.typing.SourceType,
) -> typing.Tuple[EdfHeader, np.ndarray]:
    """
    Returns the header of an EDF source and the digital (16-bit) samples of
    its data signals, as an `int16` matrix of shape `(signals, samples)`.

    A data section shorter than the header declares raises an
    `EdfTruncatedException` (nothing is padded); extra trailing bytes are
    ignored with a warning.
    """

    stream = seizure.helpers.open_binary(source)
    header = read_edf_header(stream)

    # checked first, so a rate mismatch is reported before a size mismatch
    header.sample_rate

    stream.seek(header.header_bytes)
    data = stream.read()

    record_bytes = 2 * header.record_samples

    if header.n_records == -1:
        # unknown count: as many whole records as the data holds
        header = dataclasses.replace(header, n_records=len(data) // record_bytes)

    expected = header.data_bytes

    if len(data) < expected:
        raise seizure.exceptions.EdfTruncatedException(
            "EDF data section holds {} bytes, but {} records of {} signals "
            "need {}".format(len(data), header.n_records, header.n_signals, expected))

    if len(data) > expected:
        warnings.warn(
            "ignoring {} trailing bytes after the last EDF data record".format(
                len(data) - expected))

    raw = np.frombuffer(data[:expected], dtype="<i2").reshape(
        header.n_records, header.record_samples)

    starts = np.cumsum([0] + [signal["samples_per_record"] for signal in header.signals])
    digital = np.stack([
        raw[:, starts[i]:starts[i + 1]].reshape(-1)
        for i in header.data_signal_indices
    ]).astype(np.int16)

    return header, digital


def read_edf(
    source: seizure.typing.SourceType,
    patient_id: typing.Optional[str] = None,
    record_id: typing.Optional[str] = None,
) -> seizure.classes.record.Record:
    """
    Reads an EDF recording, mapping the digital samples of each signal to
    physical values with the signal's header:

        physical = physical_min + (digital - digital_min) *
                   (physical_max - physical_min) / (digital_max - digital_min)

    The record identifier defaults to the file name without extension, and
    the patient identifier to the part of it before the first underscore.
    """

    header, digital = read_edf_digital(source)

    physical = np.empty(digital.shape, dtype=np.float64)
    for row, index in enumerate(header.data_signal_indices):
        signal = header.signals[index]
        gain = (
            (signal["physical_max"] - signal["physical_min"]) /
            (signal["digital_max"] - signal["digital_min"]))
        physical[row] = (
            signal["physical_min"] +
            (digital[row].astype(np.float64) - signal["digital_min"]) * gain)

    if record_id is None:
        record_id = _record_id_from_source(source)

    record = seizure.classes.record.Record(
        channels=physical,
        sample_rate=header.sample_rate,
        patient_id=patient_id,
        record_id=record_id,
        channel_labels=[header.signals[i]["label"] for i in header.data_signal_indices],
    )

    logger.debug("read EDF %r: %d channels, %d s at %d Hz",
                 record.record_id, record.n_channels, record.duration, record.sample_rate)

    return record


# ======================================================================
# EDF writing


def _fixed_point_text(integer: int, decimals: int) -> str:
    sign = "-" if integer < 0 else ""
    digits = str(abs(integer)).rjust(decimals + 1, "0")
    if decimals == 0:
        return sign + digits
    text = "{}.{}".format(digits[:-decimals], digits[-decimals:]).rstrip("0").rstrip(".")
    if text == "0":
        sign = ""
    return sign + text


def _format_bound(value: float, upward: bool, width: int = 8) -> str:
    """
    Returns the most precise decimal text of at most `width` characters that
    is at least (`upward`) or at most `value`.
    """
    for decimals in range(width - 1, -1, -1):
        scale = 10 ** decimals
        integer = math.ceil(value * scale) if upward else math.floor(value * scale)
        text = _fixed_point_text(integer, decimals)
        while (float(text) < value) if upward else (float(text) > value):
            integer += 1 if upward else -1
            text = _fixed_point_text(integer, decimals)
        if len(text) <= width:
            return text
    raise seizure.exceptions.SeizureValueError(
        "value {} does not fit in an EDF header field".format(value))


def _physical_range(channel: np.ndarray) -> typing.Tuple[str, str]:
    low, high = float(np.min(channel)), float(np.max(channel))
    if low == high:
        low, high = low - 1.0, high + 1.0
    return _format_bound(low, upward=False), _format_bound(high, upward=True)


def _edf_header_for(
    record: seizure.classes.record.Record,
) -> typing.Tuple[EdfHeader, typing.List[typing.Tuple[str, str]]]:
    ranges = [_physical_range(channel) for channel in record.channels]
    signals = tuple(
        {
            "label": label[:16],
            "transducer": "",
            "physical_dimension": "mV",
            "physical_min": float(low),
            "physical_max": float(high),
            "digital_min": DIGITAL_MIN,
            "digital_max": DIGITAL_MAX,
            "prefiltering": "",
            "samples_per_record": record.sample_rate,
        }
        for label, (low, high) in zip(record.channel_labels, ranges)
    )
    header = EdfHeader(
        version="0",
        patient=record.patient_id[:80],
        recording=record.record_id[:80],
        start_date="01.01.00",
        start_time="00.00.00",
        header_bytes=HEADER_BLOCK_SIZE * (record.n_channels + 1),
        n_records=record.duration,
        record_duration=1.0,
        signals=signals,
    )
    return header, ranges


def digitize(
    record: seizure.classes.record.Record,
    header: typing.Optional[EdfHeader] = None,
) -> np.ndarray:
    """
    Returns the `int16` digital samples that `write_edf()` stores for
    `record`, using the physical ranges of `header` (computed from the record
    if not provided).
    """
    if header is None:
        header, _ = _edf_header_for(record)

    digital = np.empty(record.channels.shape, dtype=np.int16)
    for row, signal in enumerate(header.signals):
        span = signal["physical_max"] - signal["physical_min"]
        levels = signal["digital_max"] - signal["digital_min"]
        scaled = (record.channels[row] - signal["physical_min"]) * levels / span + signal["digital_min"]
        digital[row] = np.clip(np.rint(scaled), signal["digital_min"], signal["digital_max"])
    return digital


def write_edf(
    record: seizure.classes.record.Record,
    path: seizure.typing.PathType,
) -> EdfHeader:
    """
    Writes `record` as a classic EDF file with one-second data records. Each
    channel's physical range is its own minimum and maximum (widened by 1 on
    both sides for a constant channel), mapped to the digital range
    [-32768, 32767]. Returns the header that was written.
    """

    header, ranges = _edf_header_for(record)

    def field(text: str, width: int) -> bytes:
        raw = str(text).encode("ascii", errors="replace")[:width]
        return raw.ljust(width, b" ")

    global_values = {
        "version": header.version,
        "patient": header.patient,
        "recording": header.recording,
        "start_date": header.start_date,
        "start_time": header.start_time,
        "header_bytes": str(header.header_bytes),
        "reserved": "",
        "n_records": str(header.n_records),
        "record_duration": "1",
        "n_signals": str(header.n_signals),
    }

    signal_texts = {
        "label": [signal["label"] for signal in header.signals],
        "transducer": [signal["transducer"] for signal in header.signals],
        "physical_dimension": [signal["physical_dimension"] for signal in header.signals],
        "physical_min": [low for low, _ in ranges],
        "physical_max": [high for _, high in ranges],
        "digital_min": [str(DIGITAL_MIN)] * header.n_signals,
        "digital_max": [str(DIGITAL_MAX)] * header.n_signals,
        "prefiltering": [signal["prefiltering"] for signal in header.signals],
        "samples_per_record": [str(record.sample_rate)] * header.n_signals,
        "reserved": [""] * header.n_signals,
    }

    chunks = [field(global_values[name], width) for name, width in GLOBAL_HEADER_FIELDS]
    for name, width in SIGNAL_HEADER_FIELDS:
        chunks.extend(field(text, width) for text in signal_texts[name])

    digital = digitize(record, header)

    # (signals, records, rate) -> (records, signals, rate)
    records = digital.reshape(
        record.n_channels, record.duration, record.sample_rate).transpose(1, 0, 2)
    chunks.append(np.ascontiguousarray(records).astype("<i2").tobytes())

    with open(path, "wb") as stream:
        stream.write(b"".join(chunks))

    logger.debug("wrote EDF %s: %d channels, %d s", path, record.n_channels, record.duration)

    return header


# ======================================================================
# CSV recordings


def _record_id_from_source(source: typing.Any) -> str:
    name = seizure.helpers.source_name(source)
    if name is None:
        return ""
    return os.path.splitext(os.path.basename(name))[0]


def read_csv(
    source: seizure.typing.SourceType,
    sample_rate: int,
    patient_id: typing.Optional[str] = None,
    record_id: typing.Optional[str] = None,
    encoding: typing.Optional[str] = None,
) -> seizure.classes.record.Record:
    """
    Reads a recording stored as CSV: one row per sample, one column per
    channel, numeric cells, with an optional header row (which then provides
    the channel labels). Samples past the last whole second are dropped.

    Raises a `CsvParseException` naming the row and column of the first
    non-numeric cell, or the row whose column count differs from the first.
    """

    info = seizure.helpers.open_csv(source, encoding=encoding)
    rows = info["rows"]
    name = info["source_name"]

    if len(rows) == 0:
        raise seizure.exceptions.CsvParseException(
            "{}: the recording contains no samples".format(name or "CSV source"))

    n_columns = len(info["header"]) if info["header"] is not None else len(rows[0])

    matrix = np.empty((len(rows), n_columns), dtype=np.float64)
    for lineno, (index, row) in zip(info["line_numbers"], enumerate(rows)):
        if len(row) != n_columns:
            raise seizure.exceptions.CsvParseException(
                "{}row {}: {} columns, expected {}".format(
                    "{}: ".format(name) if name else "", lineno, len(row), n_columns),
                row=lineno)
        for column, cell in enumerate(row):
            matrix[index, column] = seizure.helpers.parse_float_cell(
                cell, row=lineno, column=column + 1, source=name)

    if record_id is None:
        record_id = _record_id_from_source(source)

    dropped = len(rows) % int(sample_rate)
    if dropped:
        logger.debug("%s: dropping %d samples after the last whole second",
                     name or "CSV source", dropped)

    return seizure.classes.record.Record(
        channels=matrix.T,
        sample_rate=sample_rate,
        patient_id=patient_id,
        record_id=record_id,
        channel_labels=info["header"],
    )


def read_recording(
    path: seizure.typing.PathType,
    sample_rate: int = 256,
    patient_id: typing.Optional[str] = None,
) -> seizure.classes.record.Record:
    """
    Reads a recording from EDF or CSV according to the file extension; for
    other extensions, content that looks binary (or starts like an EDF
    header) is read as EDF. The `sample_rate` only applies to CSV files.
    """

    extension = os.path.splitext(os.fspath(path))[1].lower()

    if extension in EDF_EXTENSIONS:
        return read_edf(path, patient_id=patient_id)

    if extension in CSV_EXTENSIONS:
        return read_csv(path, sample_rate=sample_rate, patient_id=patient_id)

    with open(path, "rb") as stream:
        head = stream.read(seizure.helpers.MAX_SAMPLE_CHUNKSIZE)

    if head[:8] == b"0       " or seizure.extras.is_binary_string(head):
        return read_edf(path, patient_id=patient_id)

    return read_csv(path, sample_rate=sample_rate, patient_id=patient_id)


# ======================================================================
# Annotations


def read_annotations(
    source: seizure.typing.SourceType,
    encoding: typing.Optional[str] = None,
) -> typing.Dict[str, seizure.classes.annotations.SeizureAnnotations]:
    """
    Reads a seizure annotation file: CSV rows `record_id,start_second,
    end_second` (optional header row, fractional seconds accepted), and
    returns the annotations of each record, overlapping or adjacent intervals
    merged.
    """

    info = seizure.helpers.open_csv(source, encoding=encoding, delimiters=[","])
    name = info["source_name"]
    prefix = "{}: ".format(name) if name else ""

    intervals = collections.defaultdict(list)

    for lineno, row in zip(info["line_numbers"], info["rows"]):
        if len(row) != 3:
            raise seizure.exceptions.CsvParseException(
                "{}row {}: expected `record_id,start_second,end_second`, got {} "
                "columns".format(prefix, lineno, len(row)),
                row=lineno)

        record_id = row[0].strip()
        start = seizure.helpers.parse_float_cell(row[1], row=lineno, column=2, source=name)
        end = seizure.helpers.parse_float_cell(row[2], row=lineno, column=3, source=name)

        if start < 0:
            raise seizure.exceptions.CsvParseException(
                "{}row {}: negative start second {}".format(prefix, lineno, start),
                row=lineno, column=2)
        if not start < end:
            raise seizure.exceptions.CsvParseException(
                "{}row {}: start second {} is not before end second {}".format(
                    prefix, lineno, start, end),
                row=lineno, column=3)

        intervals[record_id].append((start, end))

    return {
        record_id: seizure.classes.annotations.SeizureAnnotations(spans)
        for record_id, spans in intervals.items()
    }


def annotations_for(
    record: seizure.classes.record.Record,
    table: typing.Optional[typing.Mapping[str, seizure.classes.annotations.SeizureAnnotations]],
) -> seizure.classes.annotations.SeizureAnnotations:
    """
    Returns the annotations of `record` in an annotation table (looked up by
    record identifier); no seizure if the table has none.
    """
    if table is None:
        return seizure.classes.annotations.SeizureAnnotations()
    return table.get(record.record_id, seizure.classes.annotations.SeizureAnnotations())


# ======================================================================
# Windowing


def _first_sample_at_or_after(seconds: float, sample_rate: int) -> int:
    # rounding absorbs representation error of decimal seconds
    return int(math.ceil(round(seconds * sample_rate, 9)))


def window_labels(
    record: seizure.classes.record.Record,
    ann: seizure.classes.annotations.SeizureAnnotations,
) -> np.ndarray:
    """
    Returns the label of every one-second window of `record`: 1 when at least
    half of its samples lie inside a seizure interval. Intervals reaching
    past the end of the record are clipped, with a warning.
    """

    duration = record.duration
    rate = record.sample_rate

    clipped_ann, clipped = ann.clip(duration)
    if clipped:
        warnings.warn(
            "seizure annotations of record {!r} reach past its {} s duration "
            "and were clipped".format(record.record_id or record.patient_id, duration))

    inside = np.zeros(duration * rate, dtype=bool)
    for start, end in clipped_ann:
        first = _first_sample_at_or_after(start, rate)
        stop = min(_first_sample_at_or_after(end, rate), duration * rate)
        inside[first:stop] = True

    counts = inside.reshape(duration, rate).sum(axis=1)
    return (2 * counts >= rate).astype(np.int64)


def label_windows(
    record: seizure.classes.record.Record,
    ann: seizure.classes.annotations.SeizureAnnotations,
) -> typing.List[seizure.classes.window.LabeledWindow]:
    """
    Cuts `record` into one window per whole second, each labeled with
    `window_labels()`.
    """

    labels = window_labels(record, ann)

    return [
        seizure.classes.window.LabeledWindow(
            patient_id=record.patient_id,
            window_index=second,
            samples=record.window(second),
            label=int(labels[second]),
            record_id=record.record_id,
        )
        for second in range(record.duration)
    ]
