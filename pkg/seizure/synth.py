"""
Synthetic multi-patient EEG, so the whole pipeline can run without clinical
data. Background activity is band-limited Gaussian noise; seizures are bursts
of high-amplitude 3-5 Hz oscillation, strongest around a patient-specific
focus.
"""

import logging
import os
import typing

import numpy as np
import scipy.signal

import seizure.classes.annotations
import seizure.classes.record
import seizure.exceptions
import seizure.helpers
import seizure.ingestion
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "LABELS_FILENAME",
    "patient_ids",
    "seizure_intervals",
    "generate_patient",
    "synthgen",
]


logger = logging.getLogger(__name__)


LABELS_FILENAME = "labels.csv"

BACKGROUND_BAND = (1.0, 30.0)
SEIZURE_BAND = (3.0, 5.0)

# bounds on the length of one seizure event, in seconds
MIN_EVENT_SECONDS = 10
MAX_EVENT_SECONDS = 40

# channel gains of the background, in microvolts
BACKGROUND_GAIN = (20.0, 60.0)

# seizure amplitude at the focus, relative to the channel gain
SEIZURE_GAIN = (4.0, 6.0)


def patient_ids(count: int) -> typing.List[str]:
    return ["syn{:02d}".format(index + 1) for index in range(count)]


def seizure_intervals(
    seconds: int,
    fraction: float,
    rng: np.random.Generator,
) -> typing.List[typing.Tuple[int, int]]:
    """
    Draws whole-second seizure events of 10 to 40 s (shorter only to finish
    off the target) at random non-touching positions, until they cover
    `round(fraction * seconds)` seconds or no free room is left.
    """
    if not 0 <= fraction < 1:
        raise seizure.exceptions.SeizureValueError(
            "the seizure fraction must lie in [0, 1), not {!r}".format(fraction))

    target = int(round(fraction * seconds))
    occupied = np.zeros(seconds, dtype=bool)
    intervals = []
    covered = 0
    attempts = 0

    while covered < target and attempts < 1000:
        attempts += 1
        length = int(rng.integers(MIN_EVENT_SECONDS, MAX_EVENT_SECONDS + 1))
        length = min(length, target - covered)
        if length >= seconds:
            break
        start = int(rng.integers(0, seconds - length + 1))
        # keep one free second on each side so that events stay distinct
        if np.any(occupied[max(0, start - 1):start + length + 1]):
            continue
        occupied[start:start + length] = True
        intervals.append((start, start + length))
        covered += length

    return sorted(intervals)


def _background(
    n_channels: int,
    n_samples: int,
    sample_rate: int,
    rng: np.random.Generator,
) -> np.ndarray:
    low, high = BACKGROUND_BAND
    high = min(high, 0.45 * sample_rate)
    sos = scipy.signal.butter(4, [low, high], btype="bandpass", fs=sample_rate, output="sos")
    noise = scipy.signal.sosfiltfilt(sos, rng.standard_normal((n_channels, n_samples)), axis=1)
    return noise / noise.std(axis=1, keepdims=True)


def generate_patient(
    patient_id: str,
    seconds: int = 600,
    channels: int = 23,
    sample_rate: int = 256,
    seizure_fraction: float = 0.1,
    rng: seizure.typing.SeedType = None,
) -> typing.Tuple[seizure.classes.record.Record, seizure.classes.annotations.SeizureAnnotations]:
    """
    Returns one synthetic recording of `patient_id` (record `<patient>_01`)
    and its seizure annotations.
    """
    if seconds < 1 or channels < 1 or sample_rate < 8:
        raise seizure.exceptions.SeizureValueError(
            "invalid synthetic recording size: {} s, {} channels, {} Hz".format(
                seconds, channels, sample_rate))

    rng = np.random.default_rng(rng)
    n_samples = seconds * sample_rate

    gains = rng.uniform(*BACKGROUND_GAIN, size=channels)
    signal = _background(channels, n_samples, sample_rate, rng) * gains[:, None]

    # patient-specific rhythm and focus
    frequency = rng.uniform(*SEIZURE_BAND)
    focus = rng.uniform(0, channels)
    spread = max(channels / 4.0, 1.0)
    focality = 0.3 + 0.7 * np.exp(-((np.arange(channels) - focus) / spread) ** 2)
    amplitudes = gains * rng.uniform(*SEIZURE_GAIN) * focality
    phases = rng.uniform(0, 2 * np.pi, size=channels)

    intervals = seizure_intervals(seconds, seizure_fraction, rng)

    for start, end in intervals:
        t = np.arange((end - start) * sample_rate) / sample_rate
        angle = 2 * np.pi * frequency * t[None, :] + phases[:, None]
        burst = np.sin(angle) + 0.3 * np.sin(2 * angle)
        signal[:, start * sample_rate:end * sample_rate] += amplitudes[:, None] * burst

    record = seizure.classes.record.Record(
        channels=signal,
        sample_rate=sample_rate,
        patient_id=patient_id,
        record_id="{}_01".format(patient_id),
        channel_labels=["ch{:02d}".format(c + 1) for c in range(channels)],
    )

    logger.debug("synthesized %s: %d s, %d seizure events at %.2f Hz",
                 patient_id, seconds, len(intervals), frequency)

    return record, seizure.classes.annotations.SeizureAnnotations(intervals)


def synthgen(
    output_dir: seizure.typing.PathType,
    patients: int = 5,
    seconds: int = 600,
    channels: int = 23,
    sample_rate: int = 256,
    seizure_fraction: float = 0.1,
    seed: seizure.typing.SeedType = 0,
) -> typing.List[str]:
    """
    Writes one EDF recording per synthetic patient (`<patient>_01.edf`) and a
    shared `labels.csv` annotation file into `output_dir`; returns the paths
    of the recordings. Every patient draws from its own stream of `seed`.
    """
    if patients < 1:
        raise seizure.exceptions.SeizureValueError(
            "at least one patient is needed, not {}".format(patients))

    os.makedirs(output_dir, exist_ok=True)

    streams = np.random.SeedSequence(seed).spawn(patients)
    paths = []
    label_rows = []

    for patient_id, stream in zip(patient_ids(patients), streams):
        record, ann = generate_patient(
            patient_id,
            seconds=seconds,
            channels=channels,
            sample_rate=sample_rate,
            seizure_fraction=seizure_fraction,
            rng=stream)

        path = os.path.join(os.fspath(output_dir), "{}.edf".format(record.record_id))
        seizure.ingestion.write_edf(record, path)
        paths.append(path)

        label_rows.extend(
            [record.record_id, int(start), int(end)] for start, end in ann.intervals)

        logger.info("wrote %s (%d seizure seconds)", path, int(ann.total_seconds))

    labels_path = os.path.join(os.fspath(output_dir), LABELS_FILENAME)
    with open(labels_path, "w", encoding="utf-8", newline="") as stream:
        seizure.helpers.write_csv(
            stream, label_rows, header=["record_id", "start_second", "end_second"])

    return paths
