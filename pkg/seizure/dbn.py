"""
Restricted Boltzmann machines trained with one-step contrastive divergence
(CD-1), stacked greedily into a deep belief network, and finetuned with a
two-class softmax output layer.

All randomness comes from one seed: it is split into independent streams for
weight initialization, hidden-state sampling, pretraining shuffles and
finetuning shuffles, so training is reproducible bit for bit.
"""

import dataclasses
import logging
import typing

import numpy as np
import scipy.special

import seizure.classes.dataset
import seizure.evaluation
import seizure.exceptions
import seizure.preprocessing
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "Rbm",
    "DbnModel",
    "TrainingStreams",
    "training_streams",
    "rbm_init",
    "rbm_hidden_probs",
    "rbm_visible_probs",
    "rbm_cd1_update",
    "reconstruction_cross_entropy",
    "rbm_train",
    "init_stack",
    "dbn_pretrain",
    "dbn_forward",
    "dbn_loss_and_gradients",
    "dbn_finetune",
    "dbn_train",
    "dbn_predict_proba",
    "dbn_predict",
]


logger = logging.getLogger(__name__)


FINETUNE_MODES = ("full", "top")

N_CLASSES = 2


# ======================================================================
# Random streams


@dataclasses.dataclass(frozen=True)
class TrainingStreams:
    init: np.random.SeedSequence
    sampling: np.random.SeedSequence
    pretrain_shuffle: np.random.SeedSequence
    finetune_shuffle: np.random.SeedSequence


def training_streams(seed: seizure.typing.SeedType) -> TrainingStreams:
    """
    Splits `seed` (an integer, a `SeedSequence` or `None` for fresh entropy)
    into the four independent streams used by DBN training. The same seed
    always gives the same streams.
    """
    if isinstance(seed, np.random.SeedSequence):
        root = np.random.SeedSequence(entropy=seed.entropy, spawn_key=seed.spawn_key)
    elif isinstance(seed, np.random.Generator):
        raise seizure.exceptions.SeizureTypeError(
            "DBN training derives its own generators; pass an integer seed")
    else:
        root = np.random.SeedSequence(seed)
    return TrainingStreams(*root.spawn(4))


# ======================================================================
# Restricted Boltzmann machines


@dataclasses.dataclass(frozen=True, eq=False)
class Rbm:
    """
    A restricted Boltzmann machine with `i` visible and `j` hidden units: an
    `i x j` weight matrix, a visible bias of length `i` and a hidden bias of
    length `j`.
    """

    weights: np.ndarray
    visible_bias: np.ndarray
    hidden_bias: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 2:
            raise seizure.exceptions.SeizureDimensionError("RBM weights must be a matrix")
        visible_bias = np.asarray(self.visible_bias, dtype=np.float64).reshape(-1)
        hidden_bias = np.asarray(self.hidden_bias, dtype=np.float64).reshape(-1)
        if visible_bias.shape[0] != weights.shape[0] or hidden_bias.shape[0] != weights.shape[1]:
            raise seizure.exceptions.SeizureDimensionError(
                "RBM biases of lengths {} and {} do not match a {}x{} weight matrix".format(
                    visible_bias.shape[0], hidden_bias.shape[0], *weights.shape))
        for name, value in (("weights", weights),
                            ("visible_bias", visible_bias),
                            ("hidden_bias", hidden_bias)):
            if not np.all(np.isfinite(value)):
                raise seizure.exceptions.SeizureValueError(
                    "RBM {} must be finite".format(name))
            value = value.copy()
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_visible(self) -> int:
        return self.weights.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.weights.shape[1]


def rbm_init(
    n_visible: int,
    n_hidden: int,
    seed: seizure.typing.SeedType = None,
) -> Rbm:
    """
    Returns an RBM with weights drawn uniformly in
    `+/- 4 sqrt(6 / (n_visible + n_hidden))` and zero biases.
    """
    if n_visible < 1 or n_hidden < 1:
        raise seizure.exceptions.SeizureValueError(
            "RBM sizes must be positive, not {}x{}".format(n_visible, n_hidden))
    bound = 4 * np.sqrt(6.0 / (n_visible + n_hidden))
    rng = np.random.default_rng(seed)
    return Rbm(
        weights=rng.uniform(-bound, bound, size=(n_visible, n_hidden)),
        visible_bias=np.zeros(n_visible),
        hidden_bias=np.zeros(n_hidden),
    )


def _check_width(values: np.ndarray, width: int, what: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if values.shape[-1:] != (width,):
        raise seizure.exceptions.SeizureDimensionError(
            "{} of width {} given where {} is expected".format(
                what, values.shape[-1] if values.ndim else 0, width))
    return values


def rbm_hidden_probs(rbm: Rbm, visible: typing.Any) -> np.ndarray:
    """
    `logistic(visible W + h)`, for one visible vector or a batch of them.
    """
    visible = _check_width(visible, rbm.n_visible, "visible vector")
    return scipy.special.expit(visible @ rbm.weights + rbm.hidden_bias)


def rbm_visible_probs(rbm: Rbm, hidden: typing.Any) -> np.ndarray:
    """
    `logistic(hidden W^T + v)`, for one hidden vector or a batch of them.
    """
    hidden = _check_width(hidden, rbm.n_hidden, "hidden vector")
    return scipy.special.expit(hidden @ rbm.weights.T + rbm.visible_bias)


def rbm_cd1_update(
    rbm: Rbm,
    batch: typing.Any,
    rate: float,
    rng: np.random.Generator,
) -> Rbm:
    """
    One CD-1 step on a batch of visible vectors. Binary hidden states are
    sampled from the hidden probabilities (one uniform draw per unit and
    sample, taken from `rng` as a `(batch, hidden)` block); the
    reconstruction and the negative hidden phase use probabilities. The
    weights move by `rate` times the batch mean of `v h^T - v' h'^T`, the
    biases by the batch mean of `v - v'` and `h - h'`.
    """
    v0 = _check_width(batch, rbm.n_visible, "visible batch")
    if v0.ndim != 2 or v0.shape[0] == 0:
        raise seizure.exceptions.SeizureValueError("CD-1 needs a non-empty batch")

    h0 = rbm_hidden_probs(rbm, v0)
    h_sample = (rng.random(h0.shape) < h0).astype(np.float64)
    v1 = rbm_visible_probs(rbm, h_sample)
    h1 = rbm_hidden_probs(rbm, v1)

    n = v0.shape[0]
    return Rbm(
        weights=rbm.weights + rate * (v0.T @ h0 - v1.T @ h1) / n,
        visible_bias=rbm.visible_bias + rate * np.mean(v0 - v1, axis=0),
        hidden_bias=rbm.hidden_bias + rate * np.mean(h0 - h1, axis=0),
    )


def reconstruction_cross_entropy(rbm: Rbm, data: typing.Any) -> float:
    """
    Mean over samples of the cross-entropy between each visible vector and
    its mean-field reconstruction (visible probabilities given the hidden
    probabilities).
    """
    v = _check_width(data, rbm.n_visible, "visible batch")
    logits = rbm_hidden_probs(rbm, v) @ rbm.weights.T + rbm.visible_bias
    per_unit = v * np.logaddexp(0.0, -logits) + (1 - v) * np.logaddexp(0.0, logits)
    return float(np.mean(np.sum(np.atleast_2d(per_unit), axis=1)))


def _batches(n: int, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


def rbm_train(
    rbm: Rbm,
    data: np.ndarray,
    epochs: int,
    rate: float,
    batch_size: int,
    sampling_rng: np.random.Generator,
    shuffle_rng: np.random.Generator,
    layer: int = 0,
) -> Rbm:
    """
    Runs `epochs` passes of mini-batch CD-1 over `data`, in an order
    reshuffled every epoch.
    """
    data = _check_width(data, rbm.n_visible, "training data")
    for epoch in range(epochs):
        for indices in _batches(data.shape[0], batch_size, shuffle_rng):
            rbm = rbm_cd1_update(rbm, data[indices], rate, sampling_rng)
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("pretraining layer %d, epoch %d: reconstruction cross-entropy %.6f",
                         layer, epoch + 1, reconstruction_cross_entropy(rbm, data))
    return rbm


# ======================================================================
# Deep belief network


@dataclasses.dataclass(frozen=True, eq=False)
class DbnModel:
    """
    A deep belief network classifier: RBM layers whose hidden probabilities
    feed the next layer, and a softmax output layer with two classes
    (weights `hidden_N-1 x 2`, bias of length 2).
    """

    layers: typing.Tuple[Rbm, ...]
    output_weights: np.ndarray
    output_bias: np.ndarray
    finetune_mode: str = "full"
    scaler: typing.Optional[seizure.preprocessing.MinMaxScaler] = None
    provenance: typing.Dict[str, float] = dataclasses.field(default_factory=dict)

    kind = "dbn"

    def __post_init__(self):
        layers = tuple(self.layers)
        if len(layers) == 0:
            raise seizure.exceptions.SeizureValueError("a DBN needs at least one layer")
        for below, above in zip(layers, layers[1:]):
            if below.n_hidden != above.n_visible:
                raise seizure.exceptions.SeizureDimensionError(
                    "layer of {} hidden units feeds a layer of {} visible units".format(
                        below.n_hidden, above.n_visible))
        output_weights = np.array(self.output_weights, dtype=np.float64)
        output_bias = np.array(self.output_bias, dtype=np.float64).reshape(-1)
        if output_weights.shape != (layers[-1].n_hidden, N_CLASSES) or output_bias.shape != (N_CLASSES,):
            raise seizure.exceptions.SeizureDimensionError(
                "output layer must be {}x{} with a bias of length {}".format(
                    layers[-1].n_hidden, N_CLASSES, N_CLASSES))
        output_weights.setflags(write=False)
        output_bias.setflags(write=False)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "output_weights", output_weights)
        object.__setattr__(self, "output_bias", output_bias)

    @property
    def layer_sizes(self) -> typing.List[int]:
        return [self.layers[0].n_visible] + [rbm.n_hidden for rbm in self.layers]

    @property
    def dimension(self) -> int:
        return self.layers[0].n_visible

    def predict(self, X: typing.Any) -> np.ndarray:
        probabilities = dbn_predict_proba(self, X)
        return (probabilities[:, 1] > probabilities[:, 0]).astype(np.int64)


def init_stack(
    layer_sizes: typing.Sequence[int],
    seed: seizure.typing.SeedType = None,
) -> typing.List[Rbm]:
    """
    Returns the freshly initialized RBM layers of a network of the given
    sizes (input size first), as `dbn_pretrain()` starts them with the same
    seed.
    """
    sizes = [int(size) for size in layer_sizes]
    if len(sizes) < 2:
        raise seizure.exceptions.SeizureValueError(
            "layer sizes must list the input size and at least one hidden size")
    layer_seeds = training_streams(seed).init.spawn(len(sizes) - 1)
    return [
        rbm_init(n_visible, n_hidden, layer_seed)
        for n_visible, n_hidden, layer_seed in zip(sizes, sizes[1:], layer_seeds)
    ]


def dbn_pretrain(
    layer_sizes: typing.Sequence[int],
    data: typing.Any,
    epochs: int = 25,
    rate: float = 0.001,
    batch_size: int = 10,
    seed: seizure.typing.SeedType = None,
) -> typing.List[Rbm]:
    """
    Greedy layer-wise pretraining: trains the first RBM on `data` with CD-1,
    then trains each following RBM on the hidden probabilities of the layer
    below. No labels are involved.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != layer_sizes[0]:
        raise seizure.exceptions.SeizureDimensionError(
            "pretraining data of shape {} does not match an input layer of size {}".format(
                data.shape, layer_sizes[0]))
    if batch_size < 1:
        raise seizure.exceptions.SeizureValueError("batch size must be positive")

    streams = training_streams(seed)
    sampling_rng = np.random.default_rng(streams.sampling)
    shuffle_rng = np.random.default_rng(streams.pretrain_shuffle)

    stack = []
    inputs = data
    for layer, rbm in enumerate(init_stack(layer_sizes, seed)):
        if inputs.shape[0] > 0:
            rbm = rbm_train(rbm, inputs, epochs, rate, batch_size,
                            sampling_rng, shuffle_rng, layer=layer)
            logger.info("pretrained layer %d (%dx%d) for %d epochs",
                        layer, rbm.n_visible, rbm.n_hidden, epochs)
        stack.append(rbm)
        inputs = rbm_hidden_probs(rbm, inputs)

    return stack


def dbn_forward(layers: typing.Sequence[Rbm], X: typing.Any) -> typing.List[np.ndarray]:
    """
    Returns the activations of the input and of every layer, using hidden
    probabilities (no sampling, visible biases unused).
    """
    activations = [_check_width(np.atleast_2d(X), layers[0].n_visible, "input vector")]
    for rbm in layers:
        activations.append(scipy.special.expit(activations[-1] @ rbm.weights + rbm.hidden_bias))
    return activations


def dbn_loss_and_gradients(
    layers: typing.Sequence[Rbm],
    output_weights: np.ndarray,
    output_bias: np.ndarray,
    X: typing.Any,
    y: typing.Any,
    output_only: bool = False,
) -> typing.Tuple[float, typing.List[typing.Tuple[np.ndarray, np.ndarray]], typing.Tuple[np.ndarray, np.ndarray]]:
    """
    Returns the mean softmax cross-entropy of labels `y` and its gradients:
    one `(weights, hidden bias)` pair per RBM layer (empty when
    `output_only`), and the `(weights, bias)` pair of the output layer.
    """
    activations = dbn_forward(layers, X)
    labels = np.asarray(y, dtype=np.int64).reshape(-1)
    n = labels.shape[0]

    logits = activations[-1] @ output_weights + output_bias
    loss = float(np.mean(scipy.special.logsumexp(logits, axis=1) - logits[np.arange(n), labels]))

    delta = scipy.special.softmax(logits, axis=1)
    delta[np.arange(n), labels] -= 1.0
    delta /= n

    output_gradients = (activations[-1].T @ delta, delta.sum(axis=0))

    layer_gradients = []
    if not output_only:
        delta = (delta @ output_weights.T) * activations[-1] * (1 - activations[-1])
        for index in range(len(layers) - 1, -1, -1):
            layer_gradients.append((activations[index].T @ delta, delta.sum(axis=0)))
            if index > 0:
                delta = (delta @ layers[index].weights.T) * activations[index] * (1 - activations[index])
        layer_gradients.reverse()

    return loss, layer_gradients, output_gradients


def _check_stack(stack: typing.Sequence[Rbm], dimension: int):
    if len(stack) == 0:
        raise seizure.exceptions.SeizureValueError("a DBN needs at least one layer")
    if stack[0].n_visible != dimension:
        raise seizure.exceptions.SeizureDimensionError(
            "input layer of size {} cannot read vectors of dimension {}".format(
                stack[0].n_visible, dimension))
    for below, above in zip(stack, stack[1:]):
        if below.n_hidden != above.n_visible:
            raise seizure.exceptions.SeizureDimensionError(
                "layer of {} hidden units feeds a layer of {} visible units".format(
                    below.n_hidden, above.n_visible))


def _validation_score(model: DbnModel, validation: seizure.classes.dataset.Dataset):
    loss, _, _ = dbn_loss_and_gradients(
        model.layers, model.output_weights, model.output_bias,
        validation.vectors, validation.labels, output_only=True)
    metrics = seizure.evaluation.compute_metrics(model.predict(validation.vectors), validation.labels)
    return metrics.f1, loss


def dbn_finetune(
    stack: typing.Sequence[Rbm],
    train: seizure.classes.dataset.Dataset,
    rate: float = 0.1,
    iters: int = 16,
    batch_size: int = 10,
    seed: seizure.typing.SeedType = None,
    mode: str = "full",
    validation: typing.Optional[seizure.classes.dataset.Dataset] = None,
) -> DbnModel:
    """
    Supervised training of a pretrained stack with a zero-initialized softmax
    output layer: `iters` epochs of mini-batch gradient descent on the cross-
    entropy. In `full` mode the gradient flows into every RBM weight matrix
    and hidden bias; in `top` mode only the output layer is trained.

    With a non-empty `validation` set, the model of the iteration with the
    best validation F1 (lower validation loss on ties) is returned.
    """
    if mode not in FINETUNE_MODES:
        raise seizure.exceptions.SeizureValueError(
            "finetune mode must be one of {}, not {!r}".format(FINETUNE_MODES, mode))
    _check_stack(stack, train.dimension)
    if batch_size < 1:
        raise seizure.exceptions.SeizureValueError("batch size must be positive")

    weights = [np.array(rbm.weights) for rbm in stack]
    hidden_biases = [np.array(rbm.hidden_bias) for rbm in stack]
    output_weights = np.zeros((stack[-1].n_hidden, N_CLASSES))
    output_bias = np.zeros(N_CLASSES)

    def snapshot() -> DbnModel:
        return DbnModel(
            layers=tuple(
                Rbm(weights=w, visible_bias=rbm.visible_bias, hidden_bias=h)
                for w, h, rbm in zip(weights, hidden_biases, stack)),
            output_weights=output_weights,
            output_bias=output_bias,
            finetune_mode=mode)

    shuffle_rng = np.random.default_rng(training_streams(seed).finetune_shuffle)
    X = np.asarray(train.vectors, dtype=np.float64)
    y = np.asarray(train.labels, dtype=np.int64)

    model = snapshot()
    best = None
    best_iteration = 0

    use_validation = validation is not None and len(validation) > 0

    for iteration in range(1, iters + 1):
        losses = []
        for indices in _batches(X.shape[0], batch_size, shuffle_rng):
            layers = snapshot().layers if mode == "full" else stack
            loss, layer_gradients, (grad_w, grad_b) = dbn_loss_and_gradients(
                layers, output_weights, output_bias, X[indices], y[indices],
                output_only=(mode == "top"))
            losses.append(loss)
            output_weights = output_weights - rate * grad_w
            output_bias = output_bias - rate * grad_b
            for index, (grad_lw, grad_lh) in enumerate(layer_gradients):
                weights[index] = weights[index] - rate * grad_lw
                hidden_biases[index] = hidden_biases[index] - rate * grad_lh

        model = snapshot()

        if use_validation:
            f1, validation_loss = _validation_score(model, validation)
            logger.info("finetuning iteration %d: training loss %.6f, validation F1 %.4f, "
                        "validation loss %.6f", iteration, float(np.mean(losses)), f1, validation_loss)
            if best is None or (f1, -validation_loss) > (best[0], -best[1]):
                best = (f1, validation_loss, model)
                best_iteration = iteration
        else:
            logger.info("finetuning iteration %d: training loss %.6f",
                        iteration, float(np.mean(losses)) if losses else float("nan"))

    if best is not None:
        model = best[2]
    else:
        best_iteration = iters

    return dataclasses.replace(
        model,
        provenance={
            "finetune_rate": float(rate),
            "finetune_iters": float(iters),
            "batch_size": float(batch_size),
            "best_iteration": float(best_iteration),
        })


def dbn_train(
    train: seizure.classes.dataset.Dataset,
    hidden_sizes: typing.Sequence[int] = (500, 500),
    pretrain_epochs: int = 25,
    pretrain_rate: float = 0.001,
    finetune_iters: int = 16,
    finetune_rate: float = 0.1,
    finetune_mode: str = "full",
    batch_size: int = 10,
    seed: seizure.typing.SeedType = None,
    validation: typing.Optional[seizure.classes.dataset.Dataset] = None,
) -> DbnModel:
    """
    Pretrains a stack of the given hidden sizes on the training vectors, then
    finetunes it on the labeled training set.
    """
    if len(train) == 0:
        raise seizure.exceptions.SeizureValueError("cannot train a DBN on an empty dataset")

    layer_sizes = [train.dimension] + [int(size) for size in hidden_sizes]
    stack = dbn_pretrain(
        layer_sizes, train.vectors,
        epochs=pretrain_epochs, rate=pretrain_rate, batch_size=batch_size, seed=seed)
    model = dbn_finetune(
        stack, train,
        rate=finetune_rate, iters=finetune_iters, batch_size=batch_size,
        seed=seed, mode=finetune_mode, validation=validation)

    provenance = dict(model.provenance)
    provenance.update({
        "pretrain_epochs": float(pretrain_epochs),
        "pretrain_rate": float(pretrain_rate),
        "n_train": float(len(train)),
    })
    return dataclasses.replace(model, provenance=provenance)


def dbn_predict_proba(model: DbnModel, X: typing.Any) -> np.ndarray:
    """
    Returns the `(n, 2)` class probabilities of the rows of `X`.
    """
    activations = dbn_forward(model.layers, X)
    logits = activations[-1] @ model.output_weights + model.output_bias
    return scipy.special.softmax(logits, axis=1)


def dbn_predict(model: DbnModel, x: typing.Any) -> typing.Tuple[int, np.ndarray]:
    """
    Returns the label of one vector (1 only if the seizure probability is
    strictly larger) and its two class probabilities.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise seizure.exceptions.SeizureDimensionError("`x` must be one vector")
    probabilities = dbn_predict_proba(model, x)[0]
    return int(probabilities[1] > probabilities[0]), probabilities
