import logging
import os
import warnings

import pytest

import seizure
import seizure.cli
import seizure.features
import seizure.methods
import seizure.pipeline


SOME_SYNTH_ARGS = [
    "--patients", "2", "--seconds", "30", "--channels", "2",
    "--sample-rate", "64", "--seizure-fraction", "0.2",
]

SOME_FAST_MODEL_ARGS = [
    "--k", "3", "--lr-iters", "100", "--hidden-layers", "6", "--pretrain-epochs", "1",
    "--finetune-iters", "4", "--batch-size", "5",
]


@pytest.fixture(autouse=True)
def restore_warnings():
    formatwarning = warnings.formatwarning
    yield
    warnings.formatwarning = formatwarning
    logging.captureWarnings(False)


@pytest.fixture
def synthetic_dir(tmp_path):
    directory = tmp_path / "eeg"
    assert seizure.cli.main(["synthgen", "--output-dir", str(directory)] + SOME_SYNTH_ARGS) == 0
    return directory


class TestParser:

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            seizure.cli.main(["--version"])
        assert info.value.code == 0
        assert seizure.__version__ in capsys.readouterr().out

    def test_command_required(self):
        with pytest.raises(SystemExit) as info:
            seizure.cli.main([])
        assert info.value.code == 2

    def test_invalid_choice(self):
        with pytest.raises(SystemExit):
            seizure.cli.main(["train", "--protocol", "kfold"])


class TestCostReport:

    def test_default_table(self, capsys):
        assert seizure.cli.main(["cost-report"]) == 0
        out = capsys.readouterr().out
        assert "66,560,000" in out
        assert "177,615" in out
        assert out.splitlines()[0].startswith("classifier")

    def test_parameter_flags(self, capsys):
        assert seizure.cli.main(["cost-report", "--t", "700"]) == 0
        assert "4,659,200" in capsys.readouterr().out

    def test_csv_to_stdout(self, capsys):
        assert seizure.cli.main(["cost-report", "--csv", "-"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert "classifier,memory_bits,computation_ops,memory_ratio,computation_ratio" in lines
        assert any(line.startswith("knn,66560000,6365392,") for line in lines)

    def test_csv_file(self, tmp_path):
        path = tmp_path / "costs.csv"
        assert seizure.cli.main(["cost-report", "--csv", str(path)]) == 0
        assert path.read_text(encoding="utf-8").startswith("classifier,")

    def test_invalid_parameter(self, capsys):
        assert seizure.cli.main(["cost-report", "--alpha-cnn", "2"]) == 1
        assert capsys.readouterr().err.startswith("seizure: error:")

    def test_missing_model(self, tmp_path, capsys):
        assert seizure.cli.main(["cost-report", "--actual", str(tmp_path / "none.szdt")]) == 1
        assert "no such file" in capsys.readouterr().err


class TestCommands:

    def test_synthgen(self, capsys, synthetic_dir):
        names = sorted(os.listdir(str(synthetic_dir)))
        assert names == ["labels.csv", "syn01_01.edf", "syn02_01.edf"]
        assert "wrote 2 recordings" in capsys.readouterr().out

    def test_featurize_train_evaluate(self, synthetic_dir, tmp_path, capsys):
        features = tmp_path / "out" / "features.csv"
        model = tmp_path / "out" / "model.szdt"

        assert seizure.cli.main([
            "featurize", "--inputs", str(synthetic_dir), "--features", str(features)]) == 0
        assert features.is_file()

        assert seizure.cli.main([
            "train", "--features", str(features), "--classifier", "lr", "--model", str(model),
        ] + SOME_FAST_MODEL_ARGS) == 0
        assert seizure.methods.load(str(model)).kind == "lr"
        assert "model written to" in capsys.readouterr().out

        results = tmp_path / "results"
        assert seizure.cli.main([
            "evaluate", "--features", str(features), "--classifier", "knn,lr",
            "--protocol", "loo", "--output-dir", str(results),
        ] + SOME_FAST_MODEL_ARGS) == 0

        out = capsys.readouterr().out
        assert "mean F1 of knn" in out
        assert sorted(os.listdir(str(results))) == sorted([
            seizure.pipeline.METRICS_FILENAME,
            seizure.pipeline.PREDICTIONS_FILENAME,
            seizure.pipeline.SUMMARY_FILENAME,
        ])

        assert seizure.cli.main(["cost-report", "--actual", str(model)]) == 0
        assert "lr (actual)" in capsys.readouterr().out

    def test_featurize_with_scaler(self, synthetic_dir, tmp_path):
        raw = tmp_path / "raw.csv"
        scaled = tmp_path / "scaled.csv"
        model = tmp_path / "model.szdt"
        assert seizure.cli.main(["featurize", "--inputs", str(synthetic_dir), "--features", str(raw)]) == 0
        assert seizure.cli.main([
            "train", "--features", str(raw), "--classifier", "lr", "--model", str(model),
        ] + SOME_FAST_MODEL_ARGS) == 0

        assert seizure.cli.main([
            "featurize", "--inputs", str(synthetic_dir), "--features", str(scaled),
            "--scaler", str(model)]) == 0

        raw_rows = seizure.features.read_feature_csv(str(raw))
        scaled_rows = seizure.features.read_feature_csv(str(scaled))
        assert len(scaled_rows) == len(raw_rows)
        assert scaled_rows.vectors.min() >= 0.0
        assert scaled_rows.vectors.max() <= 1.0
        assert raw_rows.vectors.max() > 1.0

    def test_config_file(self, synthetic_dir, tmp_path):
        features = tmp_path / "features.csv"
        seizure.cli.main(["featurize", "--inputs", str(synthetic_dir), "--features", str(features)])

        config = tmp_path / "run.cfg"
        config.write_text(
            "# quick logistic regression\nclassifier = lr\nlr_iters = 50\n"
            "features = {}\nmodel = {}\n".format(features, tmp_path / "from_config.szdt"),
            encoding="utf-8")

        assert seizure.cli.main(["train", "--config", str(config)]) == 0
        loaded = seizure.methods.load(str(tmp_path / "from_config.szdt"))
        assert loaded.iterations == 50

    def test_flags_override_config(self, synthetic_dir, tmp_path):
        features = tmp_path / "features.csv"
        seizure.cli.main(["featurize", "--inputs", str(synthetic_dir), "--features", str(features)])
        config = tmp_path / "run.cfg"
        config.write_text("classifier = lr\nlr_iters = 50\n", encoding="utf-8")

        model = tmp_path / "model.szdt"
        assert seizure.cli.main([
            "train", "--config", str(config), "--lr-iters", "7",
            "--features", str(features), "--model", str(model)]) == 0
        assert seizure.methods.load(str(model)).iterations == 7

    def test_error_message(self, tmp_path, capsys):
        assert seizure.cli.main(["featurize", "--output-dir", str(tmp_path)]) == 1
        assert capsys.readouterr().err.startswith("seizure: error: no recordings")

    def test_unknown_config_field(self, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text("neighbours = 3\n", encoding="utf-8")
        assert seizure.cli.main(["train", "--config", str(config)]) == 1
        assert "unknown configuration field" in capsys.readouterr().err


@pytest.mark.slow
class TestEndToEnd:

    def test_default_dbn(self, tmp_path, capsys):
        """
        Synthesizes a small cohort and evaluates the default deep belief
        network against the baselines under both protocols.
        """
        data = tmp_path / "eeg"
        assert seizure.cli.main([
            "synthgen", "--output-dir", str(data), "--patients", "3", "--seconds", "120",
            "--channels", "4", "--sample-rate", "128", "--seizure-fraction", "0.25"]) == 0

        features = tmp_path / "features.csv"
        assert seizure.cli.main([
            "featurize", "--inputs", str(data), "--features", str(features), "--jobs", "2"]) == 0

        for protocol in ("single", "loo"):
            results = tmp_path / protocol
            assert seizure.cli.main([
                "evaluate", "--features", str(features), "--protocol", protocol,
                "--classifier", "dbn,svm,lr,knn,cnn", "--hidden-layers", "50,50",
                "--output-dir", str(results)]) == 0
            assert (results / seizure.pipeline.METRICS_FILENAME).is_file()

        assert "mean F1 of dbn" in capsys.readouterr().out
