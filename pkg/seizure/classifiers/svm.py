import dataclasses
import logging
import typing
import warnings

import numpy as np
import scipy.spatial.distance

import seizure.classes.dataset
import seizure.exceptions
import seizure.preprocessing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "KERNELS",
    "SvmModel",
    "kernel_matrix",
    "svm_train",
    "svm_decision_function",
    "svm_predict",
    "svm_classify",
]


logger = logging.getLogger(__name__)


KERNELS = ("linear", "rbf", "polynomial", "sigmoid")

# curvature used when a pair of vectors gives a non-positive one
TAU = 1e-12


def kernel_matrix(
    kind: str,
    A: np.ndarray,
    B: np.ndarray,
    gamma: float,
    degree: int = 3,
    coef0: float = 0.0,
) -> np.ndarray:
    """
    Returns the kernel values between every row of `A` and every row of `B`:

    - `linear`: `a . b`
    - `rbf`: `exp(-gamma |a - b|^2)`
    - `polynomial`: `(gamma a . b + coef0) ^ degree`
    - `sigmoid`: `tanh(gamma a . b + coef0)`
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)

    if kind == "linear":
        return A @ B.T
    if kind == "rbf":
        return np.exp(-gamma * scipy.spatial.distance.cdist(A, B, metric="sqeuclidean"))
    if kind == "polynomial":
        return (gamma * (A @ B.T) + coef0) ** degree
    if kind == "sigmoid":
        return np.tanh(gamma * (A @ B.T) + coef0)

    raise seizure.exceptions.SeizureValueError(
        "unknown kernel {!r}, expected one of {}".format(kind, KERNELS))


@dataclasses.dataclass(frozen=True, eq=False)
class SvmModel:
    """
    A trained soft-margin kernel SVM: the support vectors, their dual
    coefficients `alpha_i * y_i` (with `y_i` in {-1, +1}), and the bias. The
    decision value of `x` is `sum_i dual_coef_i K(s_i, x) + bias`.
    """

    kernel: str
    gamma: float
    degree: int
    coef0: float
    c_reg: float
    tol: float
    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    scaler: typing.Optional[seizure.preprocessing.MinMaxScaler] = None
    provenance: typing.Dict[str, float] = dataclasses.field(default_factory=dict)

    kind = "svm"

    @property
    def dimension(self) -> int:
        return self.support_vectors.shape[1]

    @property
    def alphas(self) -> np.ndarray:
        return np.abs(self.dual_coef)

    def predict(self, X: typing.Any) -> np.ndarray:
        return svm_predict(self, X)


def _rho(y: np.ndarray, G: np.ndarray, alpha: np.ndarray, c_reg: float) -> float:
    yG = y * G
    at_upper = alpha >= c_reg
    at_lower = alpha <= 0
    free = ~(at_upper | at_lower)

    if np.any(free):
        return float(np.mean(yG[free]))

    # bounded vectors only: middle of the feasible interval
    upper_side = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lower_side = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = float(np.min(yG[upper_side])) if np.any(upper_side) else np.inf
    lb = float(np.max(yG[lower_side])) if np.any(lower_side) else -np.inf
    return (ub + lb) / 2


def svm_train(
    train: seizure.classes.dataset.Dataset,
    kernel: str = "rbf",
    c_reg: float = 1.0,
    tol: float = 1e-3,
    gamma: typing.Optional[float] = None,
    degree: int = 3,
    coef0: float = 0.0,
    max_iter: typing.Optional[int] = None,
) -> SvmModel:
    """
    Trains a soft-margin SVM by sequential minimal optimization of the dual,
    choosing each working pair with second-order information, until the
    largest KKT violation is at most `tol`. `gamma` defaults to one over the
    input dimension. Only vectors with a positive dual variable are kept.
    """

    if kernel not in KERNELS:
        raise seizure.exceptions.SeizureValueError(
            "unknown kernel {!r}, expected one of {}".format(kernel, KERNELS))
    if not c_reg > 0:
        raise seizure.exceptions.SeizureValueError(
            "the regularization constant must be positive, not {!r}".format(c_reg))
    if not train.has_both_classes():
        raise seizure.exceptions.SeizureSingleClassException(
            "SVM training needs both classes, got {}".format(train.class_counts))

    X = np.asarray(train.vectors, dtype=np.float64)
    y = np.where(np.asarray(train.labels) == 1, 1.0, -1.0)
    n = X.shape[0]

    if gamma is None or gamma == 0:
        gamma = 1.0 / X.shape[1]
    if max_iter is None:
        max_iter = max(100000, 100 * n)

    K = kernel_matrix(kernel, X, X, gamma=gamma, degree=degree, coef0=coef0)
    diagonal = np.diag(K).copy()

    alpha = np.zeros(n)
    G = -np.ones(n)

    iterations = 0
    converged = False

    while iterations < max_iter:
        v = -y * G

        up = ((y > 0) & (alpha < c_reg)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c_reg))

        if not np.any(up) or not np.any(low):
            converged = True
            break

        up_indices = np.flatnonzero(up)
        i = int(up_indices[np.argmax(v[up_indices])])
        m = v[i]
        M = float(np.min(v[low]))

        if m - M <= tol:
            converged = True
            break

        candidates = np.flatnonzero(low & (v < m))
        gain = m - v[candidates]
        curvature = diagonal[i] + diagonal[candidates] - 2 * K[i, candidates]
        curvature = np.where(curvature > 0, curvature, TAU)
        j = int(candidates[np.argmin(-(gain * gain) / curvature)])

        old_i, old_j = alpha[i], alpha[j]

        if y[i] != y[j]:
            quad = diagonal[i] + diagonal[j] + 2 * (y[i] * y[j] * K[i, j])
            if quad <= 0:
                quad = TAU
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0
                    alpha[i] = diff
            else:
                if alpha[i] < 0:
                    alpha[i] = 0
                    alpha[j] = -diff
            if diff > 0:
                if alpha[i] > c_reg:
                    alpha[i] = c_reg
                    alpha[j] = c_reg - diff
            else:
                if alpha[j] > c_reg:
                    alpha[j] = c_reg
                    alpha[i] = c_reg + diff
        else:
            quad = diagonal[i] + diagonal[j] - 2 * (y[i] * y[j] * K[i, j])
            if quad <= 0:
                quad = TAU
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > c_reg:
                if alpha[i] > c_reg:
                    alpha[i] = c_reg
                    alpha[j] = total - c_reg
            else:
                if alpha[j] < 0:
                    alpha[j] = 0
                    alpha[i] = total
            if total > c_reg:
                if alpha[j] > c_reg:
                    alpha[j] = c_reg
                    alpha[i] = total - c_reg
            else:
                if alpha[i] < 0:
                    alpha[i] = 0
                    alpha[j] = total

        # Q[:, t] = y * y[t] * K[:, t]
        G += y * (y[i] * (alpha[i] - old_i) * K[:, i] + y[j] * (alpha[j] - old_j) * K[:, j])
        iterations += 1

    if not converged:
        warnings.warn(
            "SMO stopped after {} iterations without reaching tolerance {}".format(
                iterations, tol))

    rho = _rho(y, G, alpha, c_reg)
    support = alpha > 0

    logger.info("SMO: %d iterations, %d support vectors out of %d",
                iterations, int(np.sum(support)), n)

    return SvmModel(
        kernel=kernel,
        gamma=float(gamma),
        degree=int(degree),
        coef0=float(coef0),
        c_reg=float(c_reg),
        tol=float(tol),
        support_vectors=X[support].copy(),
        dual_coef=(alpha * y)[support],
        bias=-rho,
        provenance={
            "iterations": float(iterations),
            "n_train": float(n),
            "n_support": float(np.sum(support)),
        })


def svm_decision_function(model: SvmModel, X: typing.Any) -> np.ndarray:
    """
    Returns the decision value of every row of `X`.
    """
    queries = np.asarray(X, dtype=np.float64)
    if queries.ndim == 1:
        queries = queries.reshape(1, -1)
    if queries.shape[1] != model.dimension:
        raise seizure.exceptions.SeizureDimensionError(
            "input dimension {} differs from the model dimension {}".format(
                queries.shape[1], model.dimension))
    K = kernel_matrix(
        model.kernel, queries, model.support_vectors,
        gamma=model.gamma, degree=model.degree, coef0=model.coef0)
    return K @ model.dual_coef + model.bias


def svm_predict(model: SvmModel, X: typing.Any) -> np.ndarray:
    """
    Returns 1 where the decision value is non-negative, 0 elsewhere.
    """
    return (svm_decision_function(model, X) >= 0).astype(np.int64)


def svm_classify(model: SvmModel, x: typing.Any) -> int:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise seizure.exceptions.SeizureDimensionError("`x` must be one vector")
    return int(svm_predict(model, x.reshape(1, -1))[0])
