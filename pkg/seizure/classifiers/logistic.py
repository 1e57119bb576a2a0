import dataclasses
import logging
import typing

import numpy as np
import scipy.special

import seizure.classes.dataset
import seizure.exceptions
import seizure.preprocessing
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "LrModel",
    "lr_loss",
    "lr_gradient",
    "lr_train",
    "lr_predict_proba",
    "lr_predict",
    "lr_classify",
]


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True, eq=False)
class LrModel:
    """
    A logistic regression classifier, `p(seizure | x) = logistic(w . x + b)`,
    with the learning rate and iteration count it was trained with, and the
    training loss before each iteration (and after the last).
    """

    weights: np.ndarray
    bias: float
    rate: float = 0.0
    iterations: int = 0
    loss_history: typing.Tuple[float, ...] = ()
    scaler: typing.Optional[seizure.preprocessing.MinMaxScaler] = None
    provenance: typing.Dict[str, float] = dataclasses.field(default_factory=dict)

    kind = "lr"

    @property
    def dimension(self) -> int:
        return self.weights.shape[0]

    def predict(self, X: typing.Any) -> np.ndarray:
        return lr_predict(self, X)


def _design(X: typing.Any, dimension: typing.Optional[int] = None) -> np.ndarray:
    matrix = np.asarray(X, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if dimension is not None and matrix.shape[1] != dimension:
        raise seizure.exceptions.SeizureDimensionError(
            "input dimension {} differs from the model dimension {}".format(
                matrix.shape[1], dimension))
    return matrix


def lr_loss(weights: np.ndarray, bias: float, X: typing.Any, y: typing.Any) -> float:
    """
    Mean cross-entropy of the labels `y` under the model `(weights, bias)`.
    """
    X = _design(X, len(weights))
    y = np.asarray(y, dtype=np.float64)
    z = X @ weights + bias
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def lr_gradient(
    weights: np.ndarray,
    bias: float,
    X: typing.Any,
    y: typing.Any,
) -> typing.Tuple[np.ndarray, float]:
    """
    Gradient of `lr_loss()` with respect to the weights and the bias.
    """
    X = _design(X, len(weights))
    y = np.asarray(y, dtype=np.float64)
    residual = scipy.special.expit(X @ weights + bias) - y
    return X.T @ residual / X.shape[0], float(np.mean(residual))


def lr_train(
    train: seizure.classes.dataset.Dataset,
    rate: float = 0.1,
    iters: int = 1000,
    seed: seizure.typing.SeedType = None,
) -> LrModel:
    """
    Full-batch gradient descent on the mean cross-entropy, from zero weights.
    The result only depends on the data, `rate` and `iters`; `seed` is
    accepted so every classifier can be trained the same way.
    """

    if len(train) == 0:
        raise seizure.exceptions.SeizureValueError(
            "cannot train logistic regression on an empty dataset")
    if not rate > 0:
        raise seizure.exceptions.SeizureValueError(
            "learning rate must be positive, not {!r}".format(rate))
    if int(iters) != iters or iters < 0:
        raise seizure.exceptions.SeizureValueError(
            "iteration count must be a non-negative integer, not {!r}".format(iters))

    X = np.asarray(train.vectors, dtype=np.float64)
    y = np.asarray(train.labels, dtype=np.float64)
    n = X.shape[0]

    weights = np.zeros(X.shape[1])
    bias = 0.0
    history = []

    for _ in range(int(iters)):
        z = X @ weights + bias
        history.append(float(np.mean(np.logaddexp(0.0, z) - y * z)))
        residual = scipy.special.expit(z) - y
        weights = weights - rate * (X.T @ residual) / n
        bias = bias - rate * float(np.mean(residual))

    history.append(lr_loss(weights, bias, X, y))

    logger.info("logistic regression: loss %.6f -> %.6f over %d iterations",
                history[0], history[-1], int(iters))

    return LrModel(
        weights=weights,
        bias=bias,
        rate=float(rate),
        iterations=int(iters),
        loss_history=tuple(history),
        provenance={"rate": float(rate), "iterations": float(iters), "n_train": float(n)})


def lr_predict_proba(model: LrModel, X: typing.Any) -> np.ndarray:
    """
    Returns the seizure probability of every row of `X`.
    """
    X = _design(X, model.dimension)
    return scipy.special.expit(X @ model.weights + model.bias)


def lr_predict(model: LrModel, X: typing.Any) -> np.ndarray:
    """
    Returns 1 where the seizure probability is at least 0.5.
    """
    return (lr_predict_proba(model, X) >= 0.5).astype(np.int64)


def lr_classify(model: LrModel, x: typing.Any) -> typing.Tuple[int, float]:
    """
    Returns the label and seizure probability of one vector.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise seizure.exceptions.SeizureDimensionError("`x` must be one vector")
    p = float(lr_predict_proba(model, x)[0])
    return int(p >= 0.5), p
