"""
The end-to-end pipelines behind the command line: featurization of
recordings, training of one classifier on a protocol's train partition, and
evaluation of classifiers under a protocol.
"""

import concurrent.futures
import dataclasses
import logging
import os
import typing
import warnings

import numpy as np

import seizure.classes.dataset
import seizure.classifiers.knn
import seizure.classifiers.logistic
import seizure.classifiers.svm
import seizure.config
import seizure.dbn
import seizure.evaluation
import seizure.exceptions
import seizure.features
import seizure.helpers
import seizure.ingestion
import seizure.methods
import seizure.preprocessing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "FEATURES_FILENAME",
    "MODEL_FILENAME",
    "METRICS_FILENAME",
    "PREDICTIONS_FILENAME",
    "SUMMARY_FILENAME",
    "EvaluationResult",
    "featurize_path",
    "featurize",
    "scale_features",
    "load_dataset",
    "train_model",
    "predict",
    "make_split",
    "train",
    "evaluate",
]


logger = logging.getLogger(__name__)


FEATURES_FILENAME = "features.csv"
MODEL_FILENAME = "model.szdt"
METRICS_FILENAME = "metrics.csv"
PREDICTIONS_FILENAME = "predictions.csv"
SUMMARY_FILENAME = "summary.txt"

METRICS_HEADER = ["protocol", "classifier", "patient", "precision", "recall", "f1", "accuracy"]

PREDICTIONS_HEADER = [
    "protocol", "classifier", "patient", "record_id", "window_index", "label", "prediction",
]

BASELINE_NAME = "majority"


# ======================================================================
# Featurization


def featurize_path(
    path: str,
    annotations: typing.Optional[typing.Mapping[str, typing.Any]],
    sample_rate: int,
) -> seizure.classes.dataset.Dataset:
    """
    Reads, normalizes and featurizes one recording.
    """
    record = seizure.ingestion.read_recording(path, sample_rate=sample_rate)
    normalized = seizure.preprocessing.preprocess_record(record)
    ann = seizure.ingestion.annotations_for(record, annotations)
    dataset = seizure.features.record_features(normalized, ann)
    logger.info("featurized %s: %d windows, %d seizure", path, len(dataset), dataset.class_counts[1])
    return dataset


def featurize(config: seizure.config.RunConfig) -> seizure.classes.dataset.Dataset:
    """
    Featurizes every recording of `config.inputs` (in path order), labeled
    with the annotation file; without one, every window is labeled 0 and a
    warning is issued. With `jobs > 1`, recordings are featurized in
    separate processes. With `scaler` set, the feature rows are scaled by
    the scaler embedded in that stored model.
    """
    paths = config.input_paths
    if not paths:
        raise seizure.exceptions.SeizureConfigException(
            "no recordings to featurize: set `inputs` to files or directories")

    labels_path = config.labels_path
    annotations = None
    if labels_path is not None and os.path.isfile(labels_path):
        annotations = seizure.ingestion.read_annotations(labels_path)
    else:
        warnings.warn(
            "no label file{}: every window is labeled non-seizure".format(
                " at '{}'".format(labels_path) if labels_path else ""))

    arguments = [(path, annotations, config.sample_rate) for path in paths]

    if config.jobs > 1 and len(paths) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as executor:
            datasets = list(executor.map(featurize_path, *zip(*arguments)))
    else:
        datasets = [featurize_path(*args) for args in arguments]

    dataset = seizure.classes.dataset.Dataset.concatenate(datasets)
    if config.scaler:
        dataset = scale_features(dataset, config.scaler)
    return dataset


def scale_features(
    dataset: seizure.classes.dataset.Dataset,
    model_path: str,
) -> seizure.classes.dataset.Dataset:
    """
    Scales `dataset` with the min-max scaler embedded in the model stored at
    `model_path`.
    """
    model = seizure.methods.load(model_path)
    if model.scaler is None:
        raise seizure.exceptions.SeizureConfigException(
            "the model at '{}' holds no scaler".format(model_path))
    return seizure.preprocessing.scale_dataset(model.scaler, dataset)


def load_dataset(config: seizure.config.RunConfig) -> seizure.classes.dataset.Dataset:
    """
    Returns the featurized windows: read from the feature file `features` when
    it exists, featurized from `inputs` otherwise.
    """
    if config.features and os.path.isfile(config.features):
        return seizure.features.read_feature_csv(config.features)
    if config.inputs:
        return featurize(config)
    raise seizure.exceptions.SeizureConfigException(
        "no data: provide an existing feature file or recordings as inputs")


# ======================================================================
# Training and prediction


def train_model(
    kind: str,
    train: seizure.classes.dataset.Dataset,
    config: seizure.config.RunConfig,
    validation: typing.Optional[seizure.classes.dataset.Dataset] = None,
) -> seizure.methods.ModelType:
    """
    Fits a min-max scaler on `train`, trains a classifier of `kind` on the
    scaled vectors and returns it with the scaler embedded. Only the DBN uses
    the (scaled) `validation` set, to keep its best finetuning iteration.
    """
    if kind not in seizure.config.CLASSIFIERS:
        raise seizure.exceptions.SeizureUnknownClassifierException(
            "unknown classifier {!r}, expected one of {}".format(kind, seizure.config.CLASSIFIERS))
    if not train.has_both_classes():
        raise seizure.exceptions.SeizureSingleClassException(
            "training data holds a single class: {}".format(train.class_counts))

    scaler = seizure.preprocessing.fit_scaler(train.vectors)
    scaled = seizure.preprocessing.scale_dataset(scaler, train)

    if kind == "knn":
        model = seizure.classifiers.knn.knn_train(scaled, k=config.k)
    elif kind == "cnn":
        model = seizure.classifiers.knn.cnn_train(scaled, k=config.k, seed=config.seed)
    elif kind == "svm":
        model = seizure.classifiers.svm.svm_train(
            scaled,
            kernel=config.kernel,
            c_reg=config.c_reg,
            tol=config.svm_tol,
            gamma=config.gamma or None,
            degree=config.degree,
            coef0=config.coef0)
    elif kind == "lr":
        model = seizure.classifiers.logistic.lr_train(
            scaled, rate=config.lr_rate, iters=config.lr_iters, seed=config.seed)
    else:
        scaled_validation = None
        if validation is not None and len(validation) > 0:
            scaled_validation = seizure.preprocessing.scale_dataset(scaler, validation)
        model = seizure.dbn.dbn_train(
            scaled,
            hidden_sizes=config.hidden_sizes,
            pretrain_epochs=config.pretrain_epochs,
            pretrain_rate=config.pretrain_rate,
            finetune_iters=config.finetune_iters,
            finetune_rate=config.finetune_rate,
            finetune_mode=config.finetune_mode,
            batch_size=config.batch_size,
            seed=config.seed,
            validation=scaled_validation)

    return dataclasses.replace(model, scaler=scaler)


def predict(model: seizure.methods.ModelType, vectors: typing.Any) -> np.ndarray:
    """
    Returns the labels a model assigns to unscaled feature vectors (its
    embedded scaler, if any, is applied first).
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim == 1:
        vectors = vectors.reshape(1, -1)
    if vectors.shape[1] != model.dimension:
        raise seizure.exceptions.SeizureDimensionError(
            "feature vectors of dimension {} given to a model of dimension {}".format(
                vectors.shape[1], model.dimension))
    if vectors.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if model.scaler is not None:
        vectors = model.scaler.transform(vectors)
    return model.predict(vectors)


def make_split(
    dataset: seizure.classes.dataset.Dataset,
    config: seizure.config.RunConfig,
    patient: typing.Optional[str] = None,
) -> seizure.classes.dataset.Split:
    """
    Splits `dataset` with the protocol of `config`. In the single-patient
    protocol, `patient` selects whose windows are split (all windows when
    `None`); in leave-one-out, `patient` is the test patient and is required.
    """
    if config.protocol == "single":
        if patient is not None:
            patients = dataset.by_patient()
            if patient not in patients:
                raise seizure.exceptions.SeizureKeyError(
                    "unknown patient {!r}, expected one of {}".format(patient, sorted(patients)))
            dataset = patients[patient]
        return seizure.evaluation.split_single_patient(
            dataset, seed=config.seed, contiguous=config.contiguous)

    if patient is None:
        raise seizure.exceptions.SeizureProtocolException(
            "leave-one-out needs a test patient")
    return seizure.evaluation.split_leave_one_out(
        dataset, patient, seed=config.seed, contiguous=config.contiguous)


def train(
    config: seizure.config.RunConfig,
    dataset: typing.Optional[seizure.classes.dataset.Dataset] = None,
) -> typing.Tuple[seizure.methods.ModelType, typing.Optional[seizure.evaluation.Metrics], str]:
    """
    Trains the one classifier of `config` on the train partition of its
    protocol and writes the model container. Returns the model, its
    validation metrics (`None` for an empty validation partition) and the
    path written.
    """
    kinds = config.classifiers
    if len(kinds) != 1:
        raise seizure.exceptions.SeizureConfigException(
            "`train` needs exactly one classifier, got {!r}".format(config.classifier))

    if dataset is None:
        dataset = load_dataset(config)

    split = make_split(dataset, config, patient=config.test_patient or None)
    model = train_model(kinds[0], split.train, config, validation=split.validation)

    metrics = None
    if len(split.validation) > 0:
        metrics = seizure.evaluation.compute_metrics(
            predict(model, split.validation.vectors), split.validation.labels)
        logger.info("validation F1 of %s: %.4f", kinds[0], metrics.f1)

    path = config.model or os.path.join(config.output_dir, MODEL_FILENAME)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    seizure.methods.dump(model, filename=path)

    return model, metrics, path


# ======================================================================
# Evaluation


@dataclasses.dataclass
class EvaluationResult:
    """
    The metrics rows (one per classifier and fold, plus the majority
    baseline of each fold), the per-window predictions behind them, and a
    text summary.
    """

    rows: typing.List[typing.Dict[str, typing.Any]]
    predictions: typing.List[typing.List[typing.Any]]
    summary: str = ""

    def write(self, output_dir: str) -> typing.List[str]:
        os.makedirs(output_dir, exist_ok=True)
        paths = [
            os.path.join(output_dir, METRICS_FILENAME),
            os.path.join(output_dir, PREDICTIONS_FILENAME),
            os.path.join(output_dir, SUMMARY_FILENAME),
        ]
        with open(paths[0], "w", encoding="utf-8", newline="") as stream:
            seizure.helpers.write_csv(
                stream,
                ([row[column] for column in METRICS_HEADER] for row in self.rows),
                header=METRICS_HEADER)
        with open(paths[1], "w", encoding="utf-8", newline="") as stream:
            seizure.helpers.write_csv(stream, self.predictions, header=PREDICTIONS_HEADER)
        with open(paths[2], "w", encoding="utf-8") as stream:
            stream.write(self.summary)
        return paths


def _score(protocol, name, patient, test, predictions):
    metrics = seizure.evaluation.compute_metrics(predictions, test.labels)
    rows = [
        [protocol, name, key[0], key[1], key[2], int(label), int(prediction)]
        for key, label, prediction in zip(test.keys, test.labels, predictions)
    ]
    return metrics.as_row(protocol=protocol, classifier=name, patient=patient), rows


def _baseline(protocol, patient, test):
    metrics = seizure.evaluation.majority_baseline(test.labels)
    return metrics.as_row(protocol=protocol, classifier=BASELINE_NAME, patient=patient)


def _run_fold(
    config: seizure.config.RunConfig,
    dataset: seizure.classes.dataset.Dataset,
    patient: str,
    model: typing.Optional[seizure.methods.ModelType] = None,
):
    split = make_split(dataset, config, patient=patient)
    if len(split.test) == 0:
        raise seizure.exceptions.SeizureProtocolException(
            "the test partition of patient {!r} is empty".format(patient))

    rows = []
    predictions = []

    if model is not None:
        models = [(model.kind, model)]
    else:
        models = [
            (kind, train_model(kind, split.train, config, validation=split.validation))
            for kind in config.classifiers
        ]

    for name, trained in models:
        row, window_rows = _score(
            config.protocol, name, patient, split.test, predict(trained, split.test.vectors))
        logger.info("%s %s on %s: F1 %.4f", config.protocol, name, patient, row["f1"])
        rows.append(row)
        predictions.extend(window_rows)

    rows.append(_baseline(config.protocol, patient, split.test))
    return rows, predictions


def _summary(rows: typing.List[typing.Dict[str, typing.Any]]) -> str:
    lines = ["{:<8} {:<10} {:<12} {:>9} {:>9} {:>9} {:>9}".format(*METRICS_HEADER)]
    for row in rows:
        lines.append("{:<8} {:<10} {:<12} {:>9.4f} {:>9.4f} {:>9.4f} {:>9.4f}".format(
            row["protocol"], row["classifier"], row["patient"],
            row["precision"], row["recall"], row["f1"], row["accuracy"]))

    names = list(dict.fromkeys(row["classifier"] for row in rows))
    lines.append("")
    for name in names:
        scores = [row["f1"] for row in rows if row["classifier"] == name]
        lines.append("mean F1 of {}: {:.4f} over {} run(s)".format(name, float(np.mean(scores)), len(scores)))
    return "\n".join(lines) + "\n"


def evaluate(
    config: seizure.config.RunConfig,
    dataset: typing.Optional[seizure.classes.dataset.Dataset] = None,
) -> EvaluationResult:
    """
    Runs the protocol of `config` for every patient (or only `test_patient`):
    trains each classifier of `config` on the fold's train partition, or
    scores the stored model `config.model` when one is given, and scores the
    fold's test partition along with the majority baseline. With
    `jobs > 1`, folds run in separate processes.
    """
    if dataset is None:
        dataset = load_dataset(config)

    model = None
    if config.model:
        model = seizure.methods.load(config.model)
        if config.protocol == "loo" and not config.test_patient:
            raise seizure.exceptions.SeizureProtocolException(
                "a stored model was trained for one held-out patient: "
                "leave-one-out evaluation of a model needs a test patient")

    patients = [config.test_patient] if config.test_patient else dataset.patient_ids
    if config.jobs > 1 and len(patients) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as executor:
            futures = [executor.submit(_run_fold, config, dataset, patient, model) for patient in patients]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [_run_fold(config, dataset, patient, model) for patient in patients]

    rows = [row for fold_rows, _ in outcomes for row in fold_rows]
    predictions = [row for _, fold_predictions in outcomes for row in fold_predictions]

    return EvaluationResult(rows=rows, predictions=predictions, summary=_summary(rows))
