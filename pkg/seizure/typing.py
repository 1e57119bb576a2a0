import os
import typing

import numpy as np


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "PathType",
    "SourceType",
    "SeedType",

    "WindowKey",

    "EdfSignalHeaderType",
    "CsvInfoType",
    "MetricsRowType",
    "CostRowType",
]


# A location on disk

PathType = typing.Union[str, os.PathLike]


# Our type hint for a data source:
#  - a local file path
#  - a stream (text or binary)
#  - a string of bytes

SourceType = typing.Union[PathType, typing.IO, bytes]


# Anything `numpy.random.default_rng()` accepts

SeedType = typing.Union[
    None, int, np.random.SeedSequence, np.random.Generator]


# Identity of a window: (patient_id, record_id, window_index)

WindowKey = typing.Tuple[str, str, int]


# Type definitions for helper dictionaries

EdfSignalHeaderType = typing.TypedDict(
    "EdfSignalHeaderType", {
        "label":            str,
        "transducer":       str,
        "physical_dimension": str,
        "physical_min":     float,
        "physical_max":     float,
        "digital_min":      int,
        "digital_max":      int,
        "prefiltering":     str,
        "samples_per_record": int,
    })

CsvInfoType = typing.TypedDict(
    "CsvInfoType", {
        # the parsed CSV rows (header and empty lines excluded)
        "rows":   typing.List[typing.List[str]],

        # the line number (1-based) of each row in `rows`
        "line_numbers": typing.List[int],

        # the header row, if the first row was not data
        "header": typing.Optional[typing.List[str]],

        # the line number (1-based) of the first row in `rows`
        "first_line": int,

        # an identifier for the source (if not raw buffer)
        "source_name": typing.Optional[str],
    })

MetricsRowType = typing.TypedDict(
    "MetricsRowType", {
        "protocol":   str,
        "classifier": str,
        "patient":    str,
        "precision":  float,
        "recall":     float,
        "f1":         float,
        "accuracy":   float,
    })

CostRowType = typing.TypedDict(
    "CostRowType", {
        "classifier":        str,
        "memory_bits":       typing.Any,
        "computation_ops":   typing.Any,
        "memory_ratio":      typing.Optional[float],
        "computation_ratio": typing.Optional[float],
    })
