import collections
import dataclasses
import typing

import numpy as np

import seizure.abstract
import seizure.exceptions
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "Dataset",
    "Split",
]


class Dataset(seizure.abstract.CloneableCollection):
    """
    Labeled feature vectors: a read-only `(n, d)` float matrix in `data`
    (also available as `vectors`), `n` binary labels, and the `n` window
    identities `(patient_id, record_id, window_index)` the rows come from.

    Partitions of a split may be empty; classifiers that need data check for
    it themselves. The dimension `d` of an empty dataset is given explicitly.
    """

    data: np.ndarray = None

    def __init__(
        self,
        vectors: typing.Any,
        labels: typing.Any,
        keys: typing.Optional[typing.Sequence[seizure.typing.WindowKey]] = None,
        dimension: typing.Optional[int] = None,
    ):
        matrix = np.array(vectors, dtype=np.float64)

        if matrix.size == 0:
            if dimension is None:
                dimension = matrix.shape[1] if matrix.ndim == 2 else 0
            matrix = matrix.reshape(0, dimension)

        if matrix.ndim == 1:
            matrix = matrix.reshape(-1, 1)

        if matrix.ndim != 2:
            raise seizure.exceptions.SeizureDimensionError(
                "feature vectors must form a (n, d) matrix")

        if dimension is not None and matrix.shape[1] != dimension:
            raise seizure.exceptions.SeizureDimensionError(
                "feature vectors have dimension {}, expected {}".format(
                    matrix.shape[1], dimension))

        label_array = np.array(labels, dtype=np.int64).reshape(-1)
        if label_array.shape[0] != matrix.shape[0]:
            raise seizure.exceptions.SeizureDimensionError(
                "{} labels given for {} vectors".format(
                    label_array.shape[0], matrix.shape[0]))
        if not np.all((label_array == 0) | (label_array == 1)):
            raise seizure.exceptions.SeizureValueError(
                "labels must be binary (0 or 1)")
        label_array.setflags(write=False)

        if keys is None:
            keys = [("", "", index) for index in range(matrix.shape[0])]
        keys = tuple((str(p), str(r), int(i)) for p, r, i in keys)
        if len(keys) != matrix.shape[0]:
            raise seizure.exceptions.SeizureDimensionError(
                "{} window identities given for {} vectors".format(
                    len(keys), matrix.shape[0]))

        self.labels = label_array
        self.keys = keys
        self.data = self._prepare_newdata(matrix)

    def _validate_newdata(self, newdata: typing.Any = None) -> bool:
        if newdata is None:
            return False
        array = np.asarray(newdata)
        return array.ndim == 2 and array.shape[0] == len(self.keys)

    def _prepare_newdata(self, newdata: typing.Any) -> np.ndarray:
        array = np.array(newdata, dtype=np.float64)
        array.setflags(write=False)
        return array

    # ===================================================================

    @property
    def vectors(self) -> np.ndarray:
        return self.data

    @property
    def dimension(self) -> int:
        return self.data.shape[1]

    @property
    def patient_ids(self) -> typing.List[str]:
        """
        The distinct patients of the rows, in order of first appearance.
        """
        return list(dict.fromkeys(key[0] for key in self.keys))

    @property
    def class_counts(self) -> typing.Dict[int, int]:
        counts = collections.Counter(int(label) for label in self.labels)
        return {0: counts.get(0, 0), 1: counts.get(1, 0)}

    def has_both_classes(self) -> bool:
        counts = self.class_counts
        return counts[0] > 0 and counts[1] > 0

    def subset(self, indices: typing.Sequence[int]) -> "Dataset":
        """
        Returns the rows at `indices`, in that order.
        """
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        return Dataset(
            vectors=self.data[indices],
            labels=self.labels[indices],
            keys=[self.keys[i] for i in indices],
            dimension=self.dimension)

    def by_patient(self) -> typing.Dict[str, "Dataset"]:
        """
        Returns the rows of each patient, in their original order.
        """
        positions = collections.defaultdict(list)
        for index, key in enumerate(self.keys):
            positions[key[0]].append(index)
        return {patient: self.subset(indices) for patient, indices in positions.items()}

    @classmethod
    def concatenate(
        cls,
        datasets: typing.Sequence["Dataset"],
        dimension: typing.Optional[int] = None,
    ) -> "Dataset":
        """
        Returns the rows of all `datasets`, one after the other.
        """
        datasets = list(datasets)
        if not datasets:
            return cls(vectors=[], labels=[], keys=[], dimension=dimension or 0)

        dimensions = {dataset.dimension for dataset in datasets}
        if len(dimensions) != 1:
            raise seizure.exceptions.SeizureDimensionError(
                "cannot concatenate datasets of dimensions {}".format(sorted(dimensions)))

        return cls(
            vectors=np.vstack([dataset.data for dataset in datasets]),
            labels=np.concatenate([dataset.labels for dataset in datasets]),
            keys=[key for dataset in datasets for key in dataset.keys],
            dimension=dimensions.pop())

    def __len__(self):
        return self.data.shape[0]

    def __repr__(self):
        counts = self.class_counts
        return "Dataset(n={}, dimension={}, seizure={}, non_seizure={})".format(
            len(self), self.dimension, counts[1], counts[0])


@dataclasses.dataclass(frozen=True)
class Split:
    """
    The train, validation and test partitions of an evaluation protocol, with
    the patients each partition was drawn from.
    """

    train: Dataset
    validation: Dataset
    test: Dataset
    train_patients: typing.Tuple[str, ...] = ()
    validation_patients: typing.Tuple[str, ...] = ()
    test_patients: typing.Tuple[str, ...] = ()

    @property
    def partitions(self) -> typing.Dict[str, Dataset]:
        return {
            "train": self.train,
            "validation": self.validation,
            "test": self.test,
        }

    def sizes(self) -> typing.Tuple[int, int, int]:
        return len(self.train), len(self.validation), len(self.test)
