import dataclasses

import numpy as np

import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "LabeledWindow",
]


@dataclasses.dataclass(frozen=True, eq=False)
class LabeledWindow:
    """
    One second of a recording: the `(C, W)` raw samples of window
    `window_index`, with `W` equal to the sampling rate, and its binary label
    (1 for seizure).
    """

    patient_id: str
    window_index: int
    samples: np.ndarray
    label: int
    record_id: str = ""

    @property
    def key(self) -> seizure.typing.WindowKey:
        return self.patient_id, self.record_id, self.window_index
