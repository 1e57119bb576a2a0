"""
The `SZDT` model container: a small binary format holding any trained
classifier (KNN, CNN, SVM, logistic regression, DBN) with its embedded
scaler and hyperparameter provenance.

Layout (all integers unsigned little-endian, all reals little-endian 64-bit
floats, matrices row-major):

- magic `SZDT`, format version (u16), classifier tag (u8), input dimension
  (u32);
- scaler flag (u8), then the `d` minima and `d` maxima when present;
- provenance: entry count (u16), then for each entry, in key order, the key
  length (u16), the UTF-8 key and its value (f8);
- the classifier payload.

The same model always gives the same bytes.
"""

import io
import os
import struct
import typing

import numpy as np

import seizure.classifiers.knn
import seizure.classifiers.logistic
import seizure.classifiers.svm
import seizure.dbn
import seizure.exceptions
import seizure.helpers
import seizure.preprocessing
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "ModelType",
    "MAGIC",
    "FORMAT_VERSION",
    "TAGS",
    "load",
    "dumps",
    "dump",
]


# Our type hint for a trained model
# NOTE: Must be here rather than in seizure.typing, since it refers to the
# model classes

ModelType = typing.Union[
    seizure.classifiers.knn.KnnModel,
    seizure.classifiers.svm.SvmModel,
    seizure.classifiers.logistic.LrModel,
    seizure.dbn.DbnModel,
]


MAGIC = b"SZDT"

FORMAT_VERSION = 1

TAGS = {
    "knn": 1,
    "cnn": 2,
    "svm": 3,
    "lr": 4,
    "dbn": 5,
}

KINDS_BY_TAG = {tag: kind for kind, tag in TAGS.items()}

FINETUNE_MODE_CODES = {mode: code for code, mode in enumerate(seizure.dbn.FINETUNE_MODES)}


# ==========================================================================
# Writing


class _Writer:

    def __init__(self):
        self._buffer = io.BytesIO()

    def pack(self, fmt: str, *values):
        self._buffer.write(struct.pack("<" + fmt, *values))

    def array(self, values: typing.Any):
        self._buffer.write(np.ascontiguousarray(values, dtype="<f8").tobytes())

    def text(self, value: str):
        raw = value.encode("utf-8")
        self.pack("H", len(raw))
        self._buffer.write(raw)

    def getvalue(self) -> bytes:
        return self._buffer.getvalue()


def _write_payload(writer: _Writer, model: ModelType):

    if model.kind in ("knn", "cnn"):
        writer.pack("II", model.vectors.shape[0], model.k)
        writer.array(model.vectors)
        writer.array(model.labels)

    elif model.kind == "svm":
        writer.pack("B", seizure.classifiers.svm.KERNELS.index(model.kernel))
        writer.pack("dIddd", model.gamma, model.degree, model.coef0, model.c_reg, model.tol)
        writer.pack("dI", model.bias, model.support_vectors.shape[0])
        writer.array(model.support_vectors)
        writer.array(model.dual_coef)

    elif model.kind == "lr":
        writer.pack("ddI", model.bias, model.rate, model.iterations)
        writer.array(model.weights)
        writer.pack("I", len(model.loss_history))
        writer.array(model.loss_history)

    elif model.kind == "dbn":
        sizes = model.layer_sizes
        writer.pack("BH", FINETUNE_MODE_CODES[model.finetune_mode], len(model.layers))
        writer.pack("{}I".format(len(sizes)), *sizes)
        for rbm in model.layers:
            writer.array(rbm.weights)
            writer.array(rbm.visible_bias)
            writer.array(rbm.hidden_bias)
        writer.array(model.output_weights)
        writer.array(model.output_bias)


def dumps(model: ModelType) -> bytes:
    """
    Serializes a trained model into the `SZDT` container and returns the
    bytes.
    """
    kind = getattr(model, "kind", None)
    if kind not in TAGS:
        raise seizure.exceptions.SeizureUnknownClassifierException(
            "cannot serialize an object of type `{}`".format(type(model).__name__))

    writer = _Writer()
    writer.pack("4sHBI", MAGIC, FORMAT_VERSION, TAGS[kind], model.dimension)

    scaler = model.scaler
    if scaler is None:
        writer.pack("B", 0)
    else:
        if scaler.dimension != model.dimension:
            raise seizure.exceptions.SeizureDimensionError(
                "scaler of dimension {} embedded in a model of dimension {}".format(
                    scaler.dimension, model.dimension))
        writer.pack("B", 1)
        writer.array(scaler.minimum)
        writer.array(scaler.maximum)

    provenance = model.provenance or dict()
    writer.pack("H", len(provenance))
    for key in sorted(provenance):
        writer.text(key)
        writer.pack("d", float(provenance[key]))

    _write_payload(writer, model)
    return writer.getvalue()


def dump(
    model: ModelType,
    filename: typing.Optional[seizure.typing.PathType] = None,
    fp: typing.Optional[typing.BinaryIO] = None,
) -> typing.Optional[bytes]:
    """
    Serializes a trained model into the `SZDT` container and writes it to
    the file `filename` (if provided), to the binary stream `fp` (if
    provided), or returns the bytes otherwise.
    """
    data = dumps(model)

    if filename is not None:
        with open(os.fspath(filename), mode="wb") as stream:
            stream.write(data)

    if fp is not None:
        fp.write(data)

    if filename is None and fp is None:
        return data


# ==========================================================================
# Reading


class _Reader:

    def __init__(self, data: bytes):
        self._data = data
        self._offset = 0

    def _take(self, size: int) -> bytes:
        if self._offset + size > len(self._data):
            raise seizure.exceptions.SeizureContainerException(
                "truncated model container: {} bytes expected at offset {}, {} available".format(
                    size, self._offset, len(self._data) - self._offset))
        chunk = self._data[self._offset:self._offset + size]
        self._offset += size
        return chunk

    def unpack(self, fmt: str) -> tuple:
        fmt = "<" + fmt
        return struct.unpack(fmt, self._take(struct.calcsize(fmt)))

    def array(self, *shape: int) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64))
        values = np.frombuffer(self._take(8 * count), dtype="<f8").astype(np.float64)
        return values.reshape(shape)

    def text(self) -> str:
        (length,) = self.unpack("H")
        try:
            return self._take(length).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise seizure.exceptions.SeizureContainerException(
                "invalid provenance key in model container") from exc

    def finish(self):
        if self._offset != len(self._data):
            raise seizure.exceptions.SeizureContainerException(
                "{} unexpected bytes after the model payload".format(
                    len(self._data) - self._offset))


def _read_payload(reader: _Reader, kind: str, dimension: int, scaler, provenance) -> ModelType:

    if kind in ("knn", "cnn"):
        n, k = reader.unpack("II")
        vectors = reader.array(n, dimension)
        labels = reader.array(n).astype(np.int64)
        return seizure.classifiers.knn.KnnModel(
            vectors=vectors, labels=labels, k=k, condensed=(kind == "cnn"),
            scaler=scaler, provenance=provenance)

    if kind == "svm":
        (kernel_code,) = reader.unpack("B")
        if kernel_code >= len(seizure.classifiers.svm.KERNELS):
            raise seizure.exceptions.SeizureContainerException(
                "unknown kernel code {} in model container".format(kernel_code))
        gamma, degree, coef0, c_reg, tol = reader.unpack("dIddd")
        bias, n_support = reader.unpack("dI")
        return seizure.classifiers.svm.SvmModel(
            kernel=seizure.classifiers.svm.KERNELS[kernel_code],
            gamma=gamma, degree=degree, coef0=coef0, c_reg=c_reg, tol=tol,
            support_vectors=reader.array(n_support, dimension),
            dual_coef=reader.array(n_support),
            bias=bias, scaler=scaler, provenance=provenance)

    if kind == "lr":
        bias, rate, iterations = reader.unpack("ddI")
        weights = reader.array(dimension)
        (n_history,) = reader.unpack("I")
        history = tuple(float(value) for value in reader.array(n_history))
        return seizure.classifiers.logistic.LrModel(
            weights=weights, bias=bias, rate=rate, iterations=iterations,
            loss_history=history, scaler=scaler, provenance=provenance)

    mode_code, n_layers = reader.unpack("BH")
    if mode_code >= len(seizure.dbn.FINETUNE_MODES) or n_layers == 0:
        raise seizure.exceptions.SeizureContainerException(
            "invalid DBN description in model container")
    sizes = reader.unpack("{}I".format(n_layers + 1))
    if sizes[0] != dimension:
        raise seizure.exceptions.SeizureContainerException(
            "DBN input size {} differs from the container dimension {}".format(sizes[0], dimension))
    layers = []
    for n_visible, n_hidden in zip(sizes, sizes[1:]):
        layers.append(seizure.dbn.Rbm(
            weights=reader.array(n_visible, n_hidden),
            visible_bias=reader.array(n_visible),
            hidden_bias=reader.array(n_hidden)))
    return seizure.dbn.DbnModel(
        layers=tuple(layers),
        output_weights=reader.array(sizes[-1], seizure.dbn.N_CLASSES),
        output_bias=reader.array(seizure.dbn.N_CLASSES),
        finetune_mode=seizure.dbn.FINETUNE_MODES[mode_code],
        scaler=scaler, provenance=provenance)


def load(source: seizure.typing.SourceType) -> ModelType:
    """
    Deserializes a trained model from an `SZDT` container, given as a local
    path, a string of bytes or a binary stream.
    """
    with seizure.helpers.open_binary(source) as stream:
        reader = _Reader(stream.read())

    magic, version, tag, dimension = reader.unpack("4sHBI")
    if magic != MAGIC:
        raise seizure.exceptions.SeizureContainerException(
            "not a model container: magic bytes {!r}".format(magic))
    if version != FORMAT_VERSION:
        raise seizure.exceptions.SeizureContainerException(
            "unsupported model container version {}".format(version))
    if tag not in KINDS_BY_TAG:
        raise seizure.exceptions.SeizureContainerException(
            "unknown classifier tag {} in model container".format(tag))

    (has_scaler,) = reader.unpack("B")
    scaler = None
    if has_scaler:
        scaler = seizure.preprocessing.MinMaxScaler(
            minimum=reader.array(dimension), maximum=reader.array(dimension))

    (n_provenance,) = reader.unpack("H")
    provenance = dict()
    for _ in range(n_provenance):
        key = reader.text()
        (provenance[key],) = reader.unpack("d")

    model = _read_payload(reader, KINDS_BY_TAG[tag], dimension, scaler, provenance)
    reader.finish()
    return model
