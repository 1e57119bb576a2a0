from seizure.classes.record import Record
from seizure.classes.annotations import SeizureAnnotations
from seizure.classes.window import LabeledWindow
from seizure.classes.dataset import Dataset, Split


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "Record",
    "SeizureAnnotations",
    "LabeledWindow",
    "Dataset",
    "Split",
]
