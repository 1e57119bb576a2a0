"""
Memory and computation cost formulas for inference on a small embedded
target, per classifier, and reports of each classifier relative to logistic
regression.

Counts are evaluated exactly (as `fractions.Fraction`, built from the decimal
text of each parameter so that `0.125` stays `1/8`); ratios are floats.
"""

import dataclasses
import fractions
import typing

import seizure.exceptions
import seizure.typing


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "COST_KINDS",
    "CostParams",
    "CostRow",
    "CostReport",
    "sf_ops",
    "memory_bits",
    "computation_ops",
    "relative_report",
    "actual_costs",
]


# the simple-feature extraction step, then the classifiers
COST_KINDS = ("sf", "knn", "cnn", "svm", "lr", "dbn")

BASELINE_KIND = "lr"


@dataclasses.dataclass(frozen=True)
class CostParams:
    """
    The variables of the cost formulas, with their default values:

    - `W`: window size in samples (256)
    - `T`: training windows (10,000)
    - `C`: channels (23)
    - `M`: features per channel (9)
    - `R`: bit resolution (32)
    - `N`: neighbors (5)
    - `L`: DBN hidden layers (2)
    - `alpha_k`: peak ratio, peaks per sample (0.125)
    - `alpha_cnn`: condensed-to-full training set ratio (0.25)
    - `alpha_svm`: support-vector ratio (0.05)
    """

    W: float = 256
    T: float = 10000
    C: float = 23
    M: float = 9
    R: float = 32
    N: float = 5
    L: float = 2
    alpha_k: float = 0.125
    alpha_cnn: float = 0.25
    alpha_svm: float = 0.05

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, bool) or not isinstance(value, (int, float, fractions.Fraction)):
                raise seizure.exceptions.SeizureTypeError(
                    "cost parameter {} must be a number, not {!r}".format(field.name, value))
            if value < 0:
                raise seizure.exceptions.SeizureValueError(
                    "cost parameter {} must not be negative, got {}".format(field.name, value))

    def validate(self) -> "CostParams":
        """
        Checks that every parameter is positive and that every ratio lies in
        `(0, 1]`; returns the parameters.
        """
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not value > 0:
                raise seizure.exceptions.SeizureValueError(
                    "cost parameter {} must be positive, got {}".format(field.name, value))
            if field.name.startswith("alpha_") and value > 1:
                raise seizure.exceptions.SeizureValueError(
                    "ratio {} must be at most 1, got {}".format(field.name, value))
        return self

    def exact(self, name: str) -> fractions.Fraction:
        return _exact(getattr(self, name))

    @property
    def features(self) -> fractions.Fraction:
        """
        `C * M`, the length of a feature vector.
        """
        return self.exact("C") * self.exact("M")

    def override(self, **kwargs) -> "CostParams":
        """
        Returns a copy with the given parameters replaced; `None` values are
        ignored.
        """
        names = {field.name for field in dataclasses.fields(self)}
        changes = {}
        for key, value in kwargs.items():
            if value is None:
                continue
            if key not in names:
                raise seizure.exceptions.SeizureKeyError(
                    "unknown cost parameter {!r}".format(key))
            changes[key] = value
        return dataclasses.replace(self, **changes)


def _exact(value: typing.Union[int, float, fractions.Fraction]) -> fractions.Fraction:
    if isinstance(value, fractions.Fraction):
        return value
    if isinstance(value, int):
        return fractions.Fraction(value)
    return fractions.Fraction(repr(float(value)))


def _check_kind(kind: str):
    if kind not in COST_KINDS:
        raise seizure.exceptions.SeizureUnknownClassifierException(
            "unknown classifier kind {!r}, expected one of {}".format(kind, COST_KINDS))


def sf_ops(p: CostParams) -> fractions.Fraction:
    """
    Operations of the simple-feature extraction for one window:
    `19 W + 16 alpha_k W + 10`.
    """
    W = p.exact("W")
    return 19 * W + 16 * p.exact("alpha_k") * W + 10


def memory_bits(kind: str, p: CostParams) -> fractions.Fraction:
    """
    Bits a trained classifier needs to store:

    - `sf`: 0
    - `knn`: `T R (C M + 1)`
    - `cnn`: `alpha_cnn T R (C M + 1)`
    - `svm`: `alpha_svm T R (C M + 2)`
    - `lr`: `R (C M + 2)`
    - `dbn`: `lr` plus `L R (C M)^2`, assuming layers as wide as the input
    """
    _check_kind(kind)
    p.validate()

    T, R, L = p.exact("T"), p.exact("R"), p.exact("L")
    CM = p.features

    if kind == "sf":
        return fractions.Fraction(0)
    if kind == "knn":
        return T * R * (CM + 1)
    if kind == "cnn":
        return p.exact("alpha_cnn") * T * R * (CM + 1)
    if kind == "svm":
        return p.exact("alpha_svm") * T * R * (CM + 2)
    if kind == "lr":
        return R * (CM + 2)
    return R * (CM + 2) + L * R * CM * CM


def computation_ops(kind: str, p: CostParams) -> fractions.Fraction:
    """
    Operations to classify one window, feature extraction (`sf_ops()`)
    included:

    - `knn`: `3 T (C M + N) + (N + 1) + SF`
    - `cnn`: `3 alpha_cnn T (C M + N) + (N + 1) + SF`
    - `svm`: `2 C M + alpha_svm T + 5 + SF`
    - `lr`: `2 C M + 5 + SF`
    - `dbn`: `lr` plus `L C M (2 C M + 1)`
    """
    _check_kind(kind)
    p.validate()

    T, N, L = p.exact("T"), p.exact("N"), p.exact("L")
    CM = p.features
    SF = sf_ops(p)

    if kind == "sf":
        return SF
    if kind == "knn":
        return 3 * T * (CM + N) + (N + 1) + SF
    if kind == "cnn":
        return 3 * p.exact("alpha_cnn") * T * (CM + N) + (N + 1) + SF
    if kind == "svm":
        return 2 * CM + p.exact("alpha_svm") * T + 5 + SF
    if kind == "lr":
        return 2 * CM + 5 + SF
    return 2 * CM + 5 + SF + L * CM * (2 * CM + 1)


@dataclasses.dataclass(frozen=True)
class CostRow:
    kind: str
    memory_bits: fractions.Fraction
    computation_ops: fractions.Fraction
    memory_ratio: typing.Optional[float]
    computation_ratio: typing.Optional[float]
    label: str = ""

    @property
    def name(self) -> str:
        return self.label or self.kind

    def as_row(self) -> seizure.typing.CostRowType:
        return {
            "classifier": self.name,
            "memory_bits": _as_number(self.memory_bits),
            "computation_ops": _as_number(self.computation_ops),
            "memory_ratio": self.memory_ratio,
            "computation_ratio": self.computation_ratio,
        }


def _as_number(value: fractions.Fraction) -> typing.Union[int, float]:
    if value.denominator == 1:
        return int(value)
    return float(value)


def _ratio(value: fractions.Fraction, baseline: fractions.Fraction) -> typing.Optional[float]:
    if baseline == 0:
        return None
    return float(value / baseline)


@dataclasses.dataclass(frozen=True)
class CostReport:
    """
    Costs of every classifier, and their ratios to logistic regression.
    """

    params: CostParams
    rows: typing.Tuple[CostRow, ...]

    def __getitem__(self, kind: str) -> CostRow:
        for row in self.rows:
            if row.name == kind:
                return row
        raise seizure.exceptions.SeizureKeyError(
            "no row for classifier {!r} in the report".format(kind))

    def with_rows(self, rows: typing.Iterable[CostRow]) -> "CostReport":
        return dataclasses.replace(self, rows=self.rows + tuple(rows))

    def to_rows(self) -> typing.List[seizure.typing.CostRowType]:
        return [row.as_row() for row in self.rows]

    def format_table(self) -> str:
        """
        Returns the report as an aligned text table.
        """
        header = ["classifier", "memory (bits)", "computation (ops)",
                  "memory vs LR", "computation vs LR"]

        def ratio(value):
            return "-" if value is None else "{:,.3f}x".format(value)

        def count(value):
            number = _as_number(value)
            return "{:,}".format(number) if isinstance(number, int) else "{:,.2f}".format(number)

        lines = [header] + [
            [row.name, count(row.memory_bits), count(row.computation_ops),
             ratio(row.memory_ratio), ratio(row.computation_ratio)]
            for row in self.rows
        ]
        widths = [max(len(line[column]) for line in lines) for column in range(len(header))]

        def render(line):
            cells = [line[0].ljust(widths[0])]
            cells += [cell.rjust(width) for cell, width in zip(line[1:], widths[1:])]
            return "  ".join(cells).rstrip()

        rule = "  ".join("-" * width for width in widths)
        return "\n".join([render(lines[0]), rule] + [render(line) for line in lines[1:]])


def relative_report(p: typing.Optional[CostParams] = None) -> CostReport:
    """
    Evaluates the formulas of every classifier and divides them by those of
    logistic regression (feature extraction has no memory, so its memory
    ratio is 0).
    """
    p = (p or CostParams()).validate()

    baseline_memory = memory_bits(BASELINE_KIND, p)
    baseline_ops = computation_ops(BASELINE_KIND, p)

    rows = []
    for kind in COST_KINDS:
        memory = memory_bits(kind, p)
        ops = computation_ops(kind, p)
        rows.append(CostRow(
            kind=kind,
            memory_bits=memory,
            computation_ops=ops,
            memory_ratio=_ratio(memory, baseline_memory),
            computation_ratio=_ratio(ops, baseline_ops)))

    return CostReport(params=p, rows=tuple(rows))


def actual_costs(model: typing.Any, p: typing.Optional[CostParams] = None) -> CostRow:
    """
    Exact costs of a trained model from its real dimensions (stored vectors,
    support vectors, layer sizes), with ratios to a logistic regression over
    the same input dimension. `R` and the feature-extraction parameters come
    from `p`.
    """
    p = (p or CostParams()).validate()

    R = p.exact("R")
    SF = sf_ops(p)
    kind = getattr(model, "kind", None)
    if kind not in ("knn", "cnn", "svm", "lr", "dbn"):
        raise seizure.exceptions.SeizureUnknownClassifierException(
            "cannot compute the costs of a model of kind {!r}".format(kind))
    d = fractions.Fraction(int(model.dimension))

    if kind in ("knn", "cnn"):
        n = fractions.Fraction(int(model.vectors.shape[0]))
        k = fractions.Fraction(int(model.k))
        memory = n * R * (d + 1)
        ops = 3 * n * (d + k) + (k + 1) + SF
    elif kind == "svm":
        n = fractions.Fraction(int(model.support_vectors.shape[0]))
        memory = n * R * (d + 2)
        ops = 2 * d + n + 5 + SF
    elif kind == "lr":
        memory = R * (d + 2)
        ops = 2 * d + 5 + SF
    else:
        sizes = [fractions.Fraction(size) for size in model.layer_sizes]
        top = sizes[-1]
        parameters = sum(i * j + j for i, j in zip(sizes, sizes[1:]))
        memory = R * (parameters + 2 * top + 2)
        ops = sum(j * (2 * i + 1) for i, j in zip(sizes, sizes[1:])) + 2 * top + 5 + SF

    return CostRow(
        kind=kind,
        memory_bits=memory,
        computation_ops=ops,
        memory_ratio=_ratio(memory, R * (d + 2)),
        computation_ratio=_ratio(ops, 2 * d + 5 + SF),
        label="{} (actual)".format(kind))
