"""
Evaluation protocols (single-patient 5:1:1 splits and leave-one-patient-out
4:1 splits), confusion-matrix metrics for the seizure class, and the
majority-class baseline.
"""

import dataclasses
import typing

import numpy as np

import seizure.classes.dataset
import seizure.exceptions
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "Metrics",
    "split_single_patient",
    "split_leave_one_out",
    "compute_metrics",
    "majority_baseline",
]


# train : validation : test
SINGLE_PATIENT_PARTS = 7

# train : validation, over the patients not tested on
LEAVE_ONE_OUT_PARTS = 5


def _order(n: int, seed: seizure.typing.SeedType, contiguous: bool) -> np.ndarray:
    if contiguous:
        return np.arange(n)
    return np.random.default_rng(seed).permutation(n)


def split_single_patient(
    dataset: seizure.classes.dataset.Dataset,
    seed: seizure.typing.SeedType = None,
    contiguous: bool = False,
) -> seizure.classes.dataset.Split:
    """
    Shuffles the windows (or keeps them in recording order if `contiguous`)
    and slices them 5:1:1 into train, validation and test; the validation and
    test partitions get `n // 7` windows each, the rest goes to train.
    """
    n = len(dataset)
    if n < SINGLE_PATIENT_PARTS:
        raise seizure.exceptions.SeizureProtocolException(
            "the single-patient split needs at least {} windows, got {}".format(
                SINGLE_PATIENT_PARTS, n))

    order = _order(n, seed, contiguous)
    held_out = n // SINGLE_PATIENT_PARTS
    n_train = n - 2 * held_out

    train = dataset.subset(order[:n_train])
    validation = dataset.subset(order[n_train:n_train + held_out])
    test = dataset.subset(order[n_train + held_out:])

    if not train.has_both_classes():
        raise seizure.exceptions.SeizureSingleClassException(
            "the training partition lacks a class: {}".format(train.class_counts))

    patients = tuple(dataset.patient_ids)
    return seizure.classes.dataset.Split(
        train=train,
        validation=validation,
        test=test,
        train_patients=patients,
        validation_patients=patients,
        test_patients=patients)


def split_leave_one_out(
    patients: typing.Union[
        seizure.classes.dataset.Dataset,
        typing.Mapping[str, seizure.classes.dataset.Dataset]],
    test_patient: str,
    seed: seizure.typing.SeedType = None,
    contiguous: bool = False,
) -> seizure.classes.dataset.Split:
    """
    Tests on every window of `test_patient`; pools the windows of all other
    patients (in the order given), shuffles them unless `contiguous`, and
    slices them 4:1 into train and validation (`n // 5` validation windows).

    `patients` maps each patient to its windows, or is one Dataset whose rows
    carry their patient ids.
    """
    if isinstance(patients, seizure.classes.dataset.Dataset):
        patients = patients.by_patient()
    patients = dict(patients)

    if test_patient not in patients:
        raise seizure.exceptions.SeizureKeyError(
            "unknown test patient {!r}, expected one of {}".format(
                test_patient, sorted(patients)))
    if len(patients) < 2:
        raise seizure.exceptions.SeizureProtocolException(
            "leave-one-out needs at least 2 patients, got {}".format(len(patients)))

    others = [patient for patient in patients if patient != test_patient]
    pool = seizure.classes.dataset.Dataset.concatenate(
        [patients[patient] for patient in others],
        dimension=patients[test_patient].dimension)

    order = _order(len(pool), seed, contiguous)
    n_validation = len(pool) // LEAVE_ONE_OUT_PARTS
    n_train = len(pool) - n_validation

    return seizure.classes.dataset.Split(
        train=pool.subset(order[:n_train]),
        validation=pool.subset(order[n_train:]),
        test=patients[test_patient],
        train_patients=tuple(others),
        validation_patients=tuple(others),
        test_patients=(test_patient,))


@dataclasses.dataclass(frozen=True)
class Metrics:
    """
    Confusion counts for the seizure (positive) class, and the metrics derived
    from them. Precision and recall are 0 when nothing was predicted or
    present; F1 is 0 when both are.
    """

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def precision(self) -> float:
        predicted = self.tp + self.fp
        return self.tp / predicted if predicted > 0 else 0.0

    @property
    def recall(self) -> float:
        present = self.tp + self.fn
        return self.tp / present if present > 0 else 0.0

    @property
    def f1(self) -> float:
        precision, recall = self.precision, self.recall
        if precision + recall == 0:
            return 0.0
        return 2 * precision * recall / (precision + recall)

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total > 0 else 0.0

    def as_row(
        self,
        protocol: str = "",
        classifier: str = "",
        patient: str = "",
    ) -> seizure.typing.MetricsRowType:
        return {
            "protocol": protocol,
            "classifier": classifier,
            "patient": patient,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }


def compute_metrics(predictions: typing.Any, labels: typing.Any) -> Metrics:
    predictions = np.asarray(predictions, dtype=np.int64).reshape(-1)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)

    if predictions.shape != labels.shape:
        raise seizure.exceptions.SeizureDimensionError(
            "{} predictions given for {} labels".format(len(predictions), len(labels)))
    if len(labels) == 0:
        raise seizure.exceptions.SeizureValueError("cannot score an empty set of predictions")

    predicted = predictions == 1
    present = labels == 1
    return Metrics(
        tp=int(np.sum(predicted & present)),
        fp=int(np.sum(predicted & ~present)),
        fn=int(np.sum(~predicted & present)),
        tn=int(np.sum(~predicted & ~present)))


def majority_baseline(labels: typing.Any) -> Metrics:
    """
    Scores the constant prediction of the most frequent label (non-seizure
    when both are equally frequent).
    """
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if len(labels) == 0:
        raise seizure.exceptions.SeizureValueError("cannot score an empty set of labels")
    majority = 1 if 2 * int(np.sum(labels == 1)) > len(labels) else 0
    return compute_metrics(np.full(len(labels), majority), labels)
