import dataclasses
import io
import struct
import typing

import numpy as np
import pytest

import seizure.classifiers
import seizure.dbn
import seizure.exceptions
import seizure.methods
import seizure.preprocessing

from .helpers.datasets import blobs


SOME_FILENAME = "model.szdt"

SOME_TRAIN = blobs(n_per_class=10, dimension=3)

SOME_SCALER = seizure.preprocessing.fit_scaler(SOME_TRAIN.vectors)


def train_model(kind):
    if kind == "knn":
        return seizure.classifiers.knn_train(SOME_TRAIN, k=3)
    if kind == "cnn":
        return seizure.classifiers.cnn_train(SOME_TRAIN, k=3, seed=0)
    if kind == "svm":
        return seizure.classifiers.svm_train(SOME_TRAIN, kernel="rbf")
    if kind == "lr":
        return seizure.classifiers.lr_train(SOME_TRAIN, iters=20)
    return seizure.dbn.dbn_train(
        SOME_TRAIN, hidden_sizes=(4, 3), pretrain_epochs=1, finetune_iters=2, batch_size=5, seed=0)


KINDS = list(seizure.methods.TAGS)


class TestDumps:

    def test_header(self):
        data = seizure.methods.dumps(train_model("lr"))
        assert data[:4] == b"SZDT"
        assert struct.unpack("<HBI", data[4:11]) == (1, seizure.methods.TAGS["lr"], 3)

    @pytest.mark.parametrize("kind", KINDS)
    def test_deterministic(self, kind):
        model = train_model(kind)
        assert seizure.methods.dumps(model) == seizure.methods.dumps(model)
        assert seizure.methods.dumps(train_model(kind)) == seizure.methods.dumps(model)

    def test_invalid_model(self, mocker):
        invalid = typing.cast(seizure.methods.ModelType, mocker.Mock())
        with pytest.raises(seizure.exceptions.SeizureUnknownClassifierException):
            seizure.methods.dumps(invalid)

    def test_scaler_dimension(self):
        model = dataclasses.replace(
            train_model("lr"),
            scaler=seizure.preprocessing.fit_scaler([[0.0, 1.0], [1.0, 2.0]]))
        with pytest.raises(seizure.exceptions.SeizureDimensionError):
            seizure.methods.dumps(model)


class TestLoad:

    @pytest.mark.parametrize("kind", KINDS)
    def test_round_trip(self, kind):
        model = dataclasses.replace(train_model(kind), scaler=SOME_SCALER)
        data = seizure.methods.dumps(model)

        loaded = seizure.methods.load(data)

        assert loaded.kind == kind
        assert type(loaded) is type(model)
        assert loaded.scaler == SOME_SCALER
        assert loaded.provenance == pytest.approx(model.provenance)
        np.testing.assert_array_equal(loaded.predict(SOME_TRAIN.vectors), model.predict(SOME_TRAIN.vectors))
        assert seizure.methods.dumps(loaded) == data

    def test_dbn_details(self):
        model = train_model("dbn")
        loaded = seizure.methods.load(seizure.methods.dumps(model))
        assert loaded.layer_sizes == [3, 4, 3]
        assert loaded.finetune_mode == "full"
        for original, reread in zip(model.layers, loaded.layers):
            np.testing.assert_array_equal(original.visible_bias, reread.visible_bias)

    def test_lr_details(self):
        model = train_model("lr")
        loaded = seizure.methods.load(seizure.methods.dumps(model))
        assert loaded.loss_history == model.loss_history
        assert loaded.iterations == 20
        assert loaded.scaler is None

    def test_file_and_stream(self, tmp_path):
        model = train_model("svm")
        path = tmp_path / SOME_FILENAME

        assert seizure.methods.dump(model, filename=str(path)) is None
        stream = io.BytesIO()
        seizure.methods.dump(model, fp=stream)

        from_path = seizure.methods.load(str(path))
        from_stream = seizure.methods.load(stream)

        assert path.read_bytes() == stream.getvalue()
        np.testing.assert_array_equal(from_path.dual_coef, model.dual_coef)
        np.testing.assert_array_equal(from_stream.support_vectors, model.support_vectors)

    def test_dump_returns_bytes(self):
        model = train_model("knn")
        assert seizure.methods.dump(model) == seizure.methods.dumps(model)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            seizure.methods.load(str(tmp_path / SOME_FILENAME))


class TestCorrupt:

    SOME_DATA = seizure.methods.dumps(train_model("lr"))

    def test_magic(self):
        with pytest.raises(seizure.exceptions.SeizureContainerException):
            seizure.methods.load(b"SZDX" + self.SOME_DATA[4:])

    def test_version(self):
        data = self.SOME_DATA[:4] + struct.pack("<H", 99) + self.SOME_DATA[6:]
        with pytest.raises(seizure.exceptions.SeizureContainerException):
            seizure.methods.load(data)

    def test_tag(self):
        data = self.SOME_DATA[:6] + struct.pack("<B", 42) + self.SOME_DATA[7:]
        with pytest.raises(seizure.exceptions.SeizureContainerException):
            seizure.methods.load(data)

    @pytest.mark.parametrize("cut", [0, 3, 11, -1, -8])
    def test_truncated(self, cut):
        with pytest.raises(seizure.exceptions.SeizureContainerException):
            seizure.methods.load(self.SOME_DATA[:cut])

    def test_trailing_bytes(self):
        with pytest.raises(seizure.exceptions.SeizureContainerException):
            seizure.methods.load(self.SOME_DATA + b"\x00")

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            seizure.methods.load(b"")
