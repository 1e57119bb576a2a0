import dataclasses
import logging
import typing

import numpy as np
import scipy.spatial.distance

import seizure.classes.dataset
import seizure.exceptions
import seizure.preprocessing
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "KnnModel",
    "knn_train",
    "knn_predict",
    "knn_classify",
    "cnn_condense",
    "cnn_train",
]


logger = logging.getLogger(__name__)


# queries are compared to the stored vectors in blocks of this many rows
QUERY_BLOCK_SIZE = 256


@dataclasses.dataclass(frozen=True, eq=False)
class KnnModel:
    """
    A k-nearest-neighbor classifier: the stored (possibly condensed)
    training vectors and labels, and `k`.
    """

    vectors: np.ndarray
    labels: np.ndarray
    k: int
    condensed: bool = False
    scaler: typing.Optional[seizure.preprocessing.MinMaxScaler] = None
    provenance: typing.Dict[str, float] = dataclasses.field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "cnn" if self.condensed else "knn"

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def predict(self, X: typing.Any) -> np.ndarray:
        return knn_predict(self, self.k, X)


def _check_k(k: int, n: int):
    if isinstance(k, bool) or int(k) != k or k < 1 or k % 2 == 0:
        raise seizure.exceptions.SeizureValueError(
            "k must be an odd positive integer, not {!r}".format(k))
    if k > n:
        raise seizure.exceptions.SeizureValueError(
            "k = {} exceeds the {} stored training vectors".format(k, n))


def _stored(train: typing.Union[seizure.classes.dataset.Dataset, KnnModel]):
    return np.asarray(train.vectors, dtype=np.float64), np.asarray(train.labels, dtype=np.int64)


def knn_predict(
    train: typing.Union[seizure.classes.dataset.Dataset, KnnModel],
    k: int,
    X: typing.Any,
) -> np.ndarray:
    """
    Returns the majority label of the `k` nearest stored vectors (Euclidean
    distance) of every row of `X`; equally distant vectors are ranked by
    their position in the training set.
    """

    vectors, labels = _stored(train)
    _check_k(k, vectors.shape[0])

    queries = np.asarray(X, dtype=np.float64)
    if queries.ndim == 1:
        queries = queries.reshape(1, -1)
    if queries.shape[1] != vectors.shape[1]:
        raise seizure.exceptions.SeizureDimensionError(
            "query dimension {} differs from training dimension {}".format(
                queries.shape[1], vectors.shape[1]))

    predictions = np.empty(queries.shape[0], dtype=np.int64)

    for start in range(0, queries.shape[0], QUERY_BLOCK_SIZE):
        block = queries[start:start + QUERY_BLOCK_SIZE]
        distances = scipy.spatial.distance.cdist(block, vectors, metric="euclidean")
        nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
        votes = labels[nearest].sum(axis=1)
        predictions[start:start + QUERY_BLOCK_SIZE] = (2 * votes > k).astype(np.int64)

    return predictions


def knn_classify(
    train: typing.Union[seizure.classes.dataset.Dataset, KnnModel],
    k: int,
    query: typing.Any,
) -> int:
    """
    Returns the label of a single `query` vector (see `knn_predict()`).
    """
    query = np.asarray(query, dtype=np.float64)
    if query.ndim != 1:
        raise seizure.exceptions.SeizureDimensionError("`query` must be one vector")
    return int(knn_predict(train, k, query.reshape(1, -1))[0])


def knn_train(
    train: seizure.classes.dataset.Dataset,
    k: int = 5,
) -> KnnModel:
    """
    Stores the training set.
    """
    if len(train) == 0:
        raise seizure.exceptions.SeizureValueError("cannot train KNN on an empty dataset")
    _check_k(k, len(train))
    return KnnModel(
        vectors=np.array(train.vectors),
        labels=np.array(train.labels),
        k=int(k),
        provenance={"k": float(k), "n_train": float(len(train))})


def cnn_condense(
    train: seizure.classes.dataset.Dataset,
    seed: seizure.typing.SeedType = None,
) -> seizure.classes.dataset.Dataset:
    """
    Hart's condensed nearest neighbor: visits the training set in a
    seed-shuffled order, starts the store with the first instance of each
    class, then keeps adding every instance the 1-nearest-neighbor rule on
    the store misclassifies, until a full pass adds nothing. The returned
    store classifies every training instance correctly with 1-NN (ties go
    to the earliest stored instance).
    """

    n = len(train)
    if n == 0:
        raise seizure.exceptions.SeizureValueError("cannot condense an empty dataset")

    vectors, labels = _stored(train)
    order = np.random.default_rng(seed).permutation(n)

    store = np.empty(vectors.shape, dtype=np.float64)
    store_labels = np.empty(n, dtype=np.int64)
    store_indices = []
    in_store = np.zeros(n, dtype=bool)

    def add(index):
        position = len(store_indices)
        store[position] = vectors[index]
        store_labels[position] = labels[index]
        store_indices.append(index)
        in_store[index] = True

    for index in order:
        if labels[index] not in store_labels[:len(store_indices)]:
            add(index)

    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for index in order:
            if in_store[index]:
                continue
            size = len(store_indices)
            gaps = store[:size] - vectors[index]
            nearest = int(np.argmin(np.einsum("ij,ij->i", gaps, gaps)))
            if store_labels[nearest] != labels[index]:
                add(index)
                changed = True

    logger.debug("condensed %d instances into %d in %d passes", n, len(store_indices), passes)

    return train.subset(store_indices)


def cnn_train(
    train: seizure.classes.dataset.Dataset,
    k: int = 5,
    seed: seizure.typing.SeedType = None,
) -> KnnModel:
    """
    Condenses the training set with `cnn_condense()` and stores the result
    for k-nearest-neighbor classification (`k` is lowered to the largest odd
    number not above the store size when the store is smaller than `k`).
    """
    store = cnn_condense(train, seed=seed)
    effective_k = min(int(k), len(store) if len(store) % 2 == 1 else len(store) - 1)
    _check_k(effective_k, len(store))
    return KnnModel(
        vectors=np.array(store.vectors),
        labels=np.array(store.labels),
        k=effective_k,
        condensed=True,
        provenance={
            "k": float(effective_k),
            "n_train": float(len(train)),
            "n_stored": float(len(store)),
        })
