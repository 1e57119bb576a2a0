import math
import typing

import seizure.exceptions


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "SeizureAnnotations",
]


IntervalType = typing.Tuple[float, float]


class SeizureAnnotations(object):
    """
    The seizure intervals of one recording, in seconds, each half-open
    `[start, end)`. Intervals are sorted, and overlapping or adjacent
    intervals are merged, when the object is created; the order in which they
    are provided does not matter.
    """

    def __init__(self, intervals: typing.Iterable[typing.Sequence[float]] = ()):
        checked = []
        for interval in intervals:
            try:
                start, end = interval
                start, end = float(start), float(end)
            except (TypeError, ValueError) as exc:
                raise seizure.exceptions.SeizureValueError(
                    "seizure interval must be a (start, end) pair, not {!r}".format(
                        interval)) from exc
            if not (math.isfinite(start) and math.isfinite(end)):
                raise seizure.exceptions.SeizureValueError(
                    "seizure interval bounds must be finite: {!r}".format(interval))
            if start < 0:
                raise seizure.exceptions.SeizureValueError(
                    "seizure interval starts before the record: {!r}".format(interval))
            if not start < end:
                raise seizure.exceptions.SeizureValueError(
                    "seizure interval must have start < end: {!r}".format(interval))
            checked.append((start, end))

        self._intervals = tuple(self._merge(checked))

    @staticmethod
    def _merge(intervals: typing.List[IntervalType]) -> typing.List[IntervalType]:
        merged = []
        for start, end in sorted(intervals):
            if merged and start <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], end))
            else:
                merged.append((start, end))
        return merged

    @property
    def intervals(self) -> typing.Tuple[IntervalType, ...]:
        return self._intervals

    @property
    def total_seconds(self) -> float:
        return sum(end - start for start, end in self._intervals)

    def clip(self, duration: float) -> typing.Tuple["SeizureAnnotations", bool]:
        """
        Returns the annotations restricted to `[0, duration)`, and whether any
        interval had to be shortened or dropped.
        """
        kept = []
        clipped = False
        for start, end in self._intervals:
            if start >= duration:
                clipped = True
                continue
            if end > duration:
                clipped = True
                end = duration
            kept.append((start, end))
        return SeizureAnnotations(kept), clipped

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __bool__(self):
        return len(self._intervals) > 0

    def __eq__(self, other):
        if not isinstance(other, SeizureAnnotations):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        return "SeizureAnnotations({!r})".format(list(self._intervals))
