import pytest

import seizure.config
import seizure.exceptions


class TestConfigHelper:

    SOME_INT_VALUES = ["1", "0", "11111", "3214"]
    SOME_NOT_INT_VALUES = ["", "a", None, "1.0", "1e7", "True"]

    SOME_FLOAT_VALUES = SOME_INT_VALUES + ["1.0", "0.001", "1e-3"]
    SOME_NOT_FLOAT_VALUES = ["", "a", None, "True"]

    @pytest.mark.parametrize("not_int_value", SOME_NOT_INT_VALUES)
    def test_is_int_false(self, not_int_value):
        assert not seizure.config.ConfigHelper.is_int(not_int_value)
        with pytest.raises(Exception):
            seizure.config.ConfigHelper.parse_int(not_int_value)

    @pytest.mark.parametrize("int_value", SOME_INT_VALUES)
    def test_is_int_true(self, int_value):
        assert seizure.config.ConfigHelper.is_int(int_value)
        assert seizure.config.ConfigHelper.parse_int(int_value) == int(int_value)

    @pytest.mark.parametrize("not_float_value", SOME_NOT_FLOAT_VALUES)
    def test_is_float_false(self, not_float_value):
        assert not seizure.config.ConfigHelper.is_float(not_float_value)

    @pytest.mark.parametrize("float_value", SOME_FLOAT_VALUES)
    def test_is_float_true(self, float_value):
        assert seizure.config.ConfigHelper.is_float(float_value)

    @pytest.mark.parametrize("value", seizure.config.ConfigHelper.BOOL_STR_TRUE)
    def test_parse_bool_true(self, value):
        assert seizure.config.ConfigHelper.parse_bool(value)

    @pytest.mark.parametrize("value", seizure.config.ConfigHelper.BOOL_STR_FALSE)
    def test_parse_bool_false(self, value):
        assert not seizure.config.ConfigHelper.parse_bool(value)

    def test_guess(self):
        assert seizure.config.ConfigHelper.guess("7") is int
        assert seizure.config.ConfigHelper.guess("0.1") is float
        assert seizure.config.ConfigHelper.guess("yes") is bool
        assert seizure.config.ConfigHelper.guess("rbf") is str
        assert seizure.config.ConfigHelper.guess(0.0) is float

    def test_parse_with_type(self):
        assert seizure.config.ConfigHelper.parse("3", typ=float) == 3.0
        assert seizure.config.ConfigHelper.parse("true", typ=bool) is True
        assert seizure.config.ConfigHelper.parse("500,500", typ=str) == "500,500"
        assert seizure.config.ConfigHelper.parse("x", typ=object) is None


class TestSettings:

    def test_defaults(self):
        obj = seizure.config.ConfigClass()
        assert obj.SEED == 0
        assert obj.BATCH_SIZE == 10
        assert obj.JOBS == 1
        assert obj.LOG_LEVEL == "WARNING"

    def test_runtime_assignment(self, subtests):
        obj = seizure.config.ConfigClass()

        with subtests.test(msg="SEED"):
            obj.SEED = 42
            assert obj.SEED == 42

        with subtests.test(msg="reset"):
            obj.reset()
            assert obj.SEED == 0

    def test_environment(self, monkeypatch):
        """
        Checks that `SEIZURE_*` environment variables are read at access
        time and parsed with the type of the default.
        """
        monkeypatch.setenv("SEIZURE_SEED", "7")
        monkeypatch.setenv("SEIZURE_JOBS", "3")

        obj = seizure.config.ConfigClass()
        assert obj.SEED == 7
        assert obj.JOBS == 3

        # runtime assignment wins over the environment
        obj.SEED = 1
        assert obj.SEED == 1

    def test_run_config_reads_settings(self, monkeypatch):
        monkeypatch.setenv("SEIZURE_BATCH_SIZE", "4")
        monkeypatch.setenv("SEIZURE_SEED", "11")
        config = seizure.config.RunConfig()
        assert config.batch_size == 4
        assert config.seed == 11

    def test_patch_settings(self, mocker):
        mock_settings = mocker.patch("seizure.config.settings")
        mock_settings.SEED = 0
        mock_settings.BATCH_SIZE = 10
        mock_settings.JOBS = 5
        assert seizure.config.RunConfig().jobs == 5


class TestRunConfig:

    SOME_CONFIG_TEXT = "\n".join([
        "# a comment",
        "",
        "classifier = knn,svm",
        "k=7",
        "hidden-layers = 8,4",
        "contiguous = yes",
        "seed=5",
    ])

    def test_defaults(self):
        config = seizure.config.RunConfig()
        assert config.classifiers == ["dbn"]
        assert config.hidden_sizes == [500, 500]
        assert config.pretrain_epochs == 25
        assert config.pretrain_rate == 0.001
        assert config.finetune_iters == 16
        assert config.finetune_rate == 0.1
        assert config.finetune_mode == "full"
        assert config.protocol == "single"

    def test_parse_text(self):
        values = seizure.config.RunConfig.parse_text(self.SOME_CONFIG_TEXT)
        assert values == {
            "classifier": "knn,svm",
            "k": "7",
            "hidden_layers": "8,4",
            "contiguous": "yes",
            "seed": "5",
        }

    @pytest.mark.parametrize("text", ["k 7", "unknown_field=1", "=3"])
    def test_parse_text_invalid(self, text):
        with pytest.raises(seizure.exceptions.SeizureConfigException):
            seizure.config.RunConfig.parse_text(text)

    def test_load_with_overrides(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(self.SOME_CONFIG_TEXT, encoding="utf-8")

        config = seizure.config.RunConfig.load(path, seed=3, k=None)

        assert config.classifiers == ["knn", "svm"]
        assert config.hidden_sizes == [8, 4]
        assert config.contiguous is True
        # command-line values win, `None` means "not given"
        assert config.seed == 3
        assert config.k == 7

    def test_override_parses_strings(self):
        config = seizure.config.RunConfig().override(k="9", gamma="0.5", contiguous="false")
        assert config.k == 9
        assert config.gamma == 0.5
        assert config.contiguous is False

    SOME_STRING_OPTIONS = dict(
        inputs="/data/eeg",
        labels="labels.csv",
        features="features.csv",
        test_patient="chb01",
        model="m.szdt",
        output_dir="results",
    )

    def test_string_options(self, subtests):
        config = seizure.config.RunConfig.load(None, **self.SOME_STRING_OPTIONS)
        for name, value in self.SOME_STRING_OPTIONS.items():
            with subtests.test(name=name):
                assert getattr(config, name) == value

    def test_string_options_from_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("".join(
            "{} = {}\n".format(name, value) for name, value in self.SOME_STRING_OPTIONS.items()),
            encoding="utf-8")

        config = seizure.config.RunConfig.load(path)

        assert config.inputs == "/data/eeg"
        assert config.test_patient == "chb01"
        assert config.input_paths == ["/data/eeg"]

    def test_numeric_looking_string(self):
        # patient identifiers may look like numbers
        assert seizure.config.RunConfig().override(test_patient="01").test_patient == "01"

    def test_field_types(self):
        types = seizure.config.RunConfig.field_types()
        assert types["inputs"] is str
        assert types["k"] is int
        assert types["gamma"] is float
        assert types["contiguous"] is bool
        assert types["seed"] is int

    def test_override_unknown(self):
        with pytest.raises(seizure.exceptions.SeizureConfigException):
            seizure.config.RunConfig().override(colour="blue")

    def test_override_unparsable(self):
        with pytest.raises(seizure.exceptions.SeizureConfigException):
            seizure.config.RunConfig().override(k="many")

    @pytest.mark.parametrize("changes", [
        dict(protocol="kfold"),
        dict(finetune_mode="middle"),
        dict(kernel="cubic"),
        dict(classifier="knn,forest"),
        dict(k=0),
        dict(lr_rate=0.0),
        dict(pretrain_epochs=-1),
        dict(gamma=-1.0),
        dict(hidden_layers="a,b"),
        dict(hidden_layers="10,0"),
    ])
    def test_validate(self, changes):
        with pytest.raises(seizure.exceptions.SeizureConfigException):
            seizure.config.RunConfig(**changes)

    def test_input_paths_and_labels(self, tmp_path):
        for name in ["b.csv", "a.edf", "labels.csv", "notes.txt"]:
            (tmp_path / name).write_text("", encoding="utf-8")

        config = seizure.config.RunConfig(inputs=str(tmp_path))

        assert config.input_paths == [str(tmp_path / "a.edf"), str(tmp_path / "b.csv")]
        assert config.labels_path == str(tmp_path / "labels.csv")

    def test_labels_path_explicit(self, tmp_path):
        config = seizure.config.RunConfig(inputs=str(tmp_path), labels="elsewhere.csv")
        assert config.labels_path == "elsewhere.csv"

    def test_labels_path_missing(self, tmp_path):
        config = seizure.config.RunConfig(inputs=str(tmp_path))
        assert config.labels_path is None
