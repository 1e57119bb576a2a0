import dataclasses
import functools
import os
import textwrap
import typing

import seizure.exceptions
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "settings",
    "RunConfig",
    "ENV_PREFIX",
]


ENV_PREFIX = "SEIZURE_"


class ConfigMetaclass(type):

    # ===================================================================
    # Metaclass bound functions

    @staticmethod
    def __bound__init__(self):
        """
        Returns a new configuration object.
        """
        # initialize metadata
        setattr(self, "_metadata", dict())

    @staticmethod
    def __bound_get(
            self,

            # partially bound by metaclass:
            field_name: str,
            field_type: type,
            field_env_name: str,
            field_doc: str,
            field_default: typing.Any,
    ):
        return ConfigHelper.parse(
            value=self._metadata.get(
                field_name,
                os.environ.get(field_env_name, field_default)),
            typ=field_type)

    @staticmethod
    def __bound_set(
            self,
            value,

            # partially bound by metaclass:
            field_name: str,
            field_type: type,
            field_env_name: str,
            field_doc: str,
            field_default: typing.Any,
    ):
        self._metadata[field_name] = value

    @staticmethod
    def __bound_reset(self):
        """
        Forgets every value assigned at runtime (environment variables and
        defaults apply again).
        """
        self._metadata.clear()

    # ===================================================================

    @staticmethod
    def _make_property(field_name, field_default, field_doc):
        field_type = ConfigHelper.guess(field_default)
        field_doc = textwrap.dedent(field_doc)
        field_info = {
            "field_name"    : field_name,
            "field_env_name": "{}{}".format(ENV_PREFIX, field_name.upper()),
            "field_default" : field_default,
            "field_type"    : field_type,
            "field_doc"     : field_doc,
        }
        return property(
            fget=functools.partial(ConfigMetaclass.__bound_get, **field_info),
            fset=functools.partial(ConfigMetaclass.__bound_set, **field_info),
            doc=field_doc)

    def __init__(cls, name, bases, attrs):

        # initialize constructor
        setattr(cls, "__init__", ConfigMetaclass.__bound__init__)
        setattr(cls, "reset", ConfigMetaclass.__bound_reset)

        # gather all attribute names that are not protected/private
        class_field_names = list(filter(
            lambda s: s[:1] != "_" and s != "reset",
            cls.__dict__))

        # create properties
        for field_name in class_field_names:
            field_default, field_doc = cls.__dict__.get(field_name)
            setattr(
                cls,
                field_name,
                ConfigMetaclass._make_property(
                    field_name=field_name,
                    field_default=field_default,
                    field_doc=field_doc))


class ConfigHelper:

    @classmethod
    def guess(cls, value):
        if type(value) is not str:
            return type(value)
        else:
            if cls.is_int(value):
                return int
            if cls.is_float(value):
                return float
            if cls.is_likely_bool(value):
                return bool
            return str

    @classmethod
    def parse(cls, value, typ=None):
        if typ is None:
            typ = cls.guess(value)
        if typ is str:
            return value
        if typ is bool:
            return cls.parse_bool(value)
        if typ is int:
            return cls.parse_int(value)
        if typ is float:
            return cls.parse_float(value)
        return

    # ======================================================================

    BOOL_STR_FALSE = ["f", "0", "false", "False", "no", ""]
    BOOL_STR_TRUE  = ["t", "1", "true", "True", "yes"]

    @classmethod
    def is_likely_bool(cls, value):
        if type(value) is str:
            return value in cls.BOOL_STR_FALSE or value in cls.BOOL_STR_TRUE
        return type(value) is int or type(value) is bool

    @classmethod
    def parse_bool(cls, value):
        if type(value) is str:
            if value in cls.BOOL_STR_FALSE:
                return False
            if value in cls.BOOL_STR_TRUE:
                return True
            return bool(value)
        if type(value) is int:
            return not (value == 0)
        if type(value) is bool:
            return value
        return bool(value)

    @staticmethod
    def is_int(value):
        try:
            int(value)
            return True
        except TypeError:
            return False
        except ValueError:
            return False

    @staticmethod
    def parse_int(value):
        return int(value)

    @staticmethod
    def is_float(value):
        try:
            float(value)
            return True
        except TypeError:
            return False
        except ValueError:
            return False

    @staticmethod
    def parse_float(value):
        return float(value)


class ConfigClass(metaclass=ConfigMetaclass):
    """
    Global configuration for the `seizure` package. Every setting can be
    overridden by an environment variable named after it with the `SEIZURE_`
    prefix (for instance `SEIZURE_SEED=7`), or assigned at runtime.
    """

    SEED = 0, """
        Default seed for every randomized operation started from the command
        line (shuffles, initializations, CD-1 sampling, synthetic data).
        """

    LOG_LEVEL = "WARNING", """
        Level of the messages the command line prints on standard error.
        """

    BATCH_SIZE = 10, """
        Mini-batch size used by DBN pretraining and finetuning when none is
        provided.
        """

    JOBS = 1, """
        Number of worker processes used for window featurization and for
        leave-one-out folds.
        """


settings = ConfigClass()


# ==========================================================================
# Per-run configuration

PROTOCOLS = ("single", "loo")

FINETUNE_MODES = ("full", "top")

KERNELS = ("linear", "rbf", "polynomial", "sigmoid")

CLASSIFIERS = ("knn", "cnn", "svm", "lr", "dbn")

# annotation file looked up next to the recordings when none is given
DEFAULT_LABELS_FILENAME = "labels.csv"


@dataclasses.dataclass
class RunConfig:
    """
    Everything one command needs: data locations, classifier selection and
    hyperparameters, split protocol and seed, output locations. The defaults
    are the values the DBN was originally tuned with (two hidden layers of 500
    nodes, 25 pretraining epochs at 0.001, 16 finetuning iterations at 0.1).
    """

    # data
    inputs: str = ""
    labels: str = ""
    features: str = ""
    # model whose embedded scaler `featurize` applies to the feature rows
    scaler: str = ""
    sample_rate: int = 256

    # classifier selection (comma-separated for `evaluate`)
    classifier: str = "dbn"

    # KNN
    k: int = 5

    # SVM (`gamma` of 0 means 1 / input dimension)
    kernel: str = "rbf"
    gamma: float = 0.0
    degree: int = 3
    coef0: float = 0.0
    c_reg: float = 1.0
    svm_tol: float = 1e-3

    # logistic regression
    lr_rate: float = 0.1
    lr_iters: int = 1000

    # DBN
    hidden_layers: str = "500,500"
    pretrain_epochs: int = 25
    pretrain_rate: float = 0.001
    finetune_iters: int = 16
    finetune_rate: float = 0.1
    finetune_mode: str = "full"
    batch_size: int = dataclasses.field(
        default_factory=lambda: settings.BATCH_SIZE)

    # protocol
    protocol: str = "single"
    test_patient: str = ""
    contiguous: bool = False
    seed: int = dataclasses.field(default_factory=lambda: settings.SEED)

    # outputs
    output_dir: str = "."
    model: str = ""
    jobs: int = dataclasses.field(default_factory=lambda: settings.JOBS)

    def __post_init__(self):
        self.validate()

    @classmethod
    def field_types(cls) -> typing.Dict[str, type]:
        """
        Returns the declared type of every field.
        """
        hints = typing.get_type_hints(cls)
        return {field.name: hints[field.name] for field in dataclasses.fields(cls)}

    def override(self, **kwargs) -> "RunConfig":
        """
        Returns a copy of this configuration in which every keyword that is
        not `None` replaces the matching field (command-line flags take
        precedence over the configuration file this way).
        """
        types = self.field_types()
        changes = dict()
        for key, value in kwargs.items():
            if value is None:
                continue
            if key not in types:
                raise seizure.exceptions.SeizureConfigException(
                    "unknown configuration field `{}`".format(key))
            try:
                changes[key] = ConfigHelper.parse(value, typ=types[key])
            except (TypeError, ValueError) as exc:
                raise seizure.exceptions.SeizureConfigException(
                    "invalid value {!r} for `{}`".format(value, key)) from exc
        return dataclasses.replace(self, **changes)

    @classmethod
    def parse_text(cls, text: str, source_name: str = "<config>") -> typing.Dict[str, str]:
        """
        Parses the flat `key=value` format: one assignment per line, blank
        lines and lines starting with `#` ignored, whitespace around keys and
        values stripped.
        """
        values = dict()
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise seizure.exceptions.SeizureConfigException(
                    "{}:{}: expected `key=value`, got {!r}".format(
                        source_name, lineno, stripped))
            key, value = stripped.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in cls.field_types():
                raise seizure.exceptions.SeizureConfigException(
                    "{}:{}: unknown configuration field `{}`".format(
                        source_name, lineno, key))
            values[key] = value.strip()
        return values

    @classmethod
    def load(
        cls,
        path: typing.Optional[seizure.typing.PathType] = None,
        **overrides,
    ) -> "RunConfig":
        """
        Returns the configuration read from the file at `path` (if any), with
        the non-`None` keyword `overrides` applied on top.
        """
        config = cls()
        if path is not None:
            with open(path, "r", encoding="utf-8") as stream:
                file_values = cls.parse_text(stream.read(), source_name=str(path))
            config = config.override(**file_values)
        return config.override(**overrides)

    def validate(self):
        """
        Checks the enumerated fields and the positivity of sizes and rates.
        """
        if self.protocol not in PROTOCOLS:
            raise seizure.exceptions.SeizureConfigException(
                "`protocol` must be one of {}, not {!r}".format(PROTOCOLS, self.protocol))
        if self.finetune_mode not in FINETUNE_MODES:
            raise seizure.exceptions.SeizureConfigException(
                "`finetune_mode` must be one of {}, not {!r}".format(
                    FINETUNE_MODES, self.finetune_mode))
        if self.kernel not in KERNELS:
            raise seizure.exceptions.SeizureConfigException(
                "`kernel` must be one of {}, not {!r}".format(KERNELS, self.kernel))
        for kind in self.classifiers:
            if kind not in CLASSIFIERS:
                raise seizure.exceptions.SeizureConfigException(
                    "`classifier` must list kinds among {}, not {!r}".format(
                        CLASSIFIERS, kind))
        for name in ("sample_rate", "k", "degree", "lr_iters", "batch_size", "jobs"):
            if getattr(self, name) <= 0:
                raise seizure.exceptions.SeizureConfigException(
                    "`{}` must be positive".format(name))
        for name in ("c_reg", "svm_tol", "lr_rate", "pretrain_rate", "finetune_rate"):
            if getattr(self, name) <= 0:
                raise seizure.exceptions.SeizureConfigException(
                    "`{}` must be positive".format(name))
        for name in ("pretrain_epochs", "finetune_iters"):
            if getattr(self, name) < 0:
                raise seizure.exceptions.SeizureConfigException(
                    "`{}` must not be negative".format(name))
        if self.gamma < 0:
            raise seizure.exceptions.SeizureConfigException(
                "`gamma` must not be negative (0 selects 1 / dimension)")
        # parses, or raises
        self.hidden_sizes

    @property
    def classifiers(self) -> typing.List[str]:
        """
        The classifier kinds listed in `classifier`, in order.
        """
        return [kind.strip() for kind in self.classifier.split(",") if kind.strip()]

    @property
    def hidden_sizes(self) -> typing.List[int]:
        """
        The DBN hidden layer sizes listed in `hidden_layers`.
        """
        try:
            sizes = [int(size) for size in self.hidden_layers.split(",") if size.strip()]
        except ValueError as exc:
            raise seizure.exceptions.SeizureConfigException(
                "`hidden_layers` must be a comma-separated list of integers, "
                "not {!r}".format(self.hidden_layers)) from exc
        if not sizes or min(sizes) <= 0:
            raise seizure.exceptions.SeizureConfigException(
                "`hidden_layers` must list at least one positive size")
        return sizes

    @property
    def input_paths(self) -> typing.List[str]:
        """
        The recording paths listed in `inputs` (a directory expands to the
        EDF and CSV files it contains, sorted by name).
        """
        paths = []
        for entry in (item.strip() for item in self.inputs.split(",")):
            if not entry:
                continue
            if os.path.isdir(entry):
                paths.extend(sorted(
                    os.path.join(entry, name)
                    for name in os.listdir(entry)
                    if os.path.splitext(name)[1].lower() in (".edf", ".csv")
                    and name not in (os.path.basename(self.labels), DEFAULT_LABELS_FILENAME)))
            else:
                paths.append(entry)
        return paths

    @property
    def labels_path(self) -> typing.Optional[str]:
        """
        The annotation file: `labels` when given, else a `labels.csv` found in
        the first input directory, else `None`.
        """
        if self.labels:
            return self.labels
        for entry in (item.strip() for item in self.inputs.split(",")):
            if entry and os.path.isdir(entry):
                candidate = os.path.join(entry, DEFAULT_LABELS_FILENAME)
                if os.path.isfile(candidate):
                    return candidate
                break
        return None
