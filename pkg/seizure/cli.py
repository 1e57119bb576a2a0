"""
Command-line interface: `seizure synthgen | featurize | train | evaluate |
cost-report`.

Options are resolved in this order: command-line flags, then the `key=value`
file given with `--config`, then the defaults (some of which read `SEIZURE_*`
environment variables, such as `SEIZURE_SEED`).
"""

import argparse
import logging
import os
import sys
import typing
import warnings

import seizure
import seizure.config
import seizure.costmodel
import seizure.exceptions
import seizure.features
import seizure.helpers
import seizure.methods
import seizure.pipeline
import seizure.synth


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "build_parser",
    "configure_logging",
    "cmd_synthgen",
    "cmd_featurize",
    "cmd_train",
    "cmd_evaluate",
    "cmd_cost_report",
    "main",
]


logger = logging.getLogger(__name__)

PROGRAM = "seizure"

COST_REPORT_FILENAME = "cost_report.csv"

# flag name -> CostParams field
COST_FLAGS = [
    ("--w", "W", "window size in samples"),
    ("--t", "T", "training windows"),
    ("--c", "C", "channels"),
    ("--m", "M", "features per channel"),
    ("--r", "R", "bit resolution"),
    ("--n", "N", "neighbors"),
    ("--l", "L", "DBN hidden layers"),
    ("--alpha-k", "alpha_k", "peaks per sample"),
    ("--alpha-cnn", "alpha_cnn", "condensed training set ratio"),
    ("--alpha-svm", "alpha_svm", "support vector ratio"),
]

# RunConfig fields that can be set from the command line
RUN_OPTIONS = [
    "inputs", "labels", "features", "scaler", "sample_rate", "classifier", "k",
    "kernel", "gamma", "degree", "coef0", "c_reg", "svm_tol", "lr_rate", "lr_iters",
    "hidden_layers", "pretrain_epochs", "pretrain_rate", "finetune_iters",
    "finetune_rate", "finetune_mode", "batch_size", "protocol", "test_patient",
    "contiguous", "seed", "output_dir", "model", "jobs",
]


# ======================================================================
# Commands


def cmd_synthgen(
    config: seizure.config.RunConfig,
    patients: int = 5,
    seconds: int = 600,
    channels: int = 23,
    seizure_fraction: float = 0.1,
) -> typing.List[str]:
    """
    Writes synthetic recordings and their `labels.csv` into the output
    directory; returns the recording paths.
    """
    return seizure.synth.synthgen(
        config.output_dir,
        patients=patients,
        seconds=seconds,
        channels=channels,
        sample_rate=config.sample_rate,
        seizure_fraction=seizure_fraction,
        seed=config.seed)


def cmd_featurize(config: seizure.config.RunConfig) -> str:
    """
    Featurizes the input recordings into a feature file (`features`, or
    `features.csv` in the output directory); returns its path.
    """
    dataset = seizure.pipeline.featurize(config)
    path = config.features or os.path.join(config.output_dir, seizure.pipeline.FEATURES_FILENAME)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    seizure.features.write_feature_csv(path, dataset)
    logger.info("wrote %d windows of dimension %d to %s", len(dataset), dataset.dimension, path)
    return path


def cmd_train(config: seizure.config.RunConfig) -> str:
    """
    Trains the configured classifier and writes its model container; returns
    its path.
    """
    model, metrics, path = seizure.pipeline.train(config)
    if metrics is not None:
        print("{} validation: precision {:.4f}, recall {:.4f}, F1 {:.4f}, accuracy {:.4f}".format(
            model.kind, metrics.precision, metrics.recall, metrics.f1, metrics.accuracy))
    print("model written to {}".format(path))
    return path


def cmd_evaluate(config: seizure.config.RunConfig) -> seizure.pipeline.EvaluationResult:
    """
    Runs the configured protocol and writes `metrics.csv`, `predictions.csv`
    and `summary.txt` into the output directory.
    """
    result = seizure.pipeline.evaluate(config)
    paths = result.write(config.output_dir)
    sys.stdout.write(result.summary)
    logger.info("wrote %s", ", ".join(paths))
    return result


def cmd_cost_report(
    params: seizure.costmodel.CostParams,
    actual: typing.Optional[str] = None,
    csv_path: typing.Optional[str] = None,
) -> seizure.costmodel.CostReport:
    """
    Prints the cost table (with the exact costs of the model at `actual`, if
    given) and writes it as CSV to `csv_path` (`-` for standard output).
    """
    report = seizure.costmodel.relative_report(params)
    if actual:
        report = report.with_rows([
            seizure.costmodel.actual_costs(seizure.methods.load(actual), params)])

    print(report.format_table())

    if csv_path:
        header = ["classifier", "memory_bits", "computation_ops", "memory_ratio", "computation_ratio"]
        rows = (
            ["" if row[column] is None else row[column] for column in header]
            for row in report.to_rows()
        )
        if csv_path == "-":
            seizure.helpers.write_csv(sys.stdout, rows, header=header)
        else:
            with open(csv_path, "w", encoding="utf-8", newline="") as stream:
                seizure.helpers.write_csv(stream, rows, header=header)

    return report


# ======================================================================
# Argument parsing


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", metavar="FILE",
                        help="`key=value` configuration file")
    parser.add_argument("--seed", type=int,
                        help="seed of every random choice (default: $SEIZURE_SEED or 0)")
    parser.add_argument("--jobs", type=int,
                        help="worker processes for featurization and folds")
    parser.add_argument("--output-dir", dest="output_dir", metavar="DIR",
                        help="directory of the files written")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress (-v) or details (-vv) on standard error")


def _add_data(parser: argparse.ArgumentParser):
    parser.add_argument("--inputs", metavar="PATHS",
                        help="recordings (EDF or CSV) or directories, comma-separated")
    parser.add_argument("--labels", metavar="FILE",
                        help="seizure annotations `record_id,start_second,end_second`")
    parser.add_argument("--features", metavar="FILE",
                        help="feature file")
    parser.add_argument("--sample-rate", dest="sample_rate", type=int,
                        help="sampling rate of CSV recordings, in Hz")


def _add_model_options(parser: argparse.ArgumentParser, model_help: str):
    parser.add_argument("--classifier", help="knn, cnn, svm, lr or dbn (comma-separated for evaluate)")
    parser.add_argument("--protocol", choices=seizure.config.PROTOCOLS,
                        help="single-patient or leave-one-out split")
    parser.add_argument("--test-patient", dest="test_patient", metavar="ID",
                        help="patient to split (single) or to hold out (loo)")
    parser.add_argument("--contiguous", action="store_const", const=True,
                        help="split windows in recording order, without shuffling")
    parser.add_argument("--model", metavar="FILE", help=model_help)

    group = parser.add_argument_group("hyperparameters")
    group.add_argument("--k", type=int)
    group.add_argument("--kernel", choices=seizure.config.KERNELS)
    group.add_argument("--gamma", type=float)
    group.add_argument("--degree", type=int)
    group.add_argument("--coef0", type=float)
    group.add_argument("--c-reg", dest="c_reg", type=float)
    group.add_argument("--svm-tol", dest="svm_tol", type=float)
    group.add_argument("--lr-rate", dest="lr_rate", type=float)
    group.add_argument("--lr-iters", dest="lr_iters", type=int)
    group.add_argument("--hidden-layers", dest="hidden_layers", metavar="SIZES")
    group.add_argument("--pretrain-epochs", dest="pretrain_epochs", type=int)
    group.add_argument("--pretrain-rate", dest="pretrain_rate", type=float)
    group.add_argument("--finetune-iters", dest="finetune_iters", type=int)
    group.add_argument("--finetune-rate", dest="finetune_rate", type=float)
    group.add_argument("--finetune-mode", dest="finetune_mode", choices=seizure.config.FINETUNE_MODES)
    group.add_argument("--batch-size", dest="batch_size", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROGRAM,
        description="EEG seizure detection: features, classifiers, deep belief networks "
                    "and embedded cost estimates.")
    parser.add_argument("--version", action="version",
                        version="%(prog)s {}".format(seizure.__version__))

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    synthgen = commands.add_parser("synthgen", help="write synthetic EEG recordings and labels")
    _add_common(synthgen)
    synthgen.add_argument("--patients", type=int, default=5)
    synthgen.add_argument("--seconds", type=int, default=600)
    synthgen.add_argument("--channels", type=int, default=23)
    synthgen.add_argument("--sample-rate", dest="sample_rate", type=int)
    synthgen.add_argument("--seizure-fraction", dest="seizure_fraction", type=float, default=0.1)
    synthgen.set_defaults(handler=_run_synthgen)

    featurize = commands.add_parser("featurize", help="compute the feature file of recordings")
    _add_common(featurize)
    _add_data(featurize)
    featurize.add_argument("--scaler", metavar="MODEL",
                           help="scale the features with the embedded scaler of a stored model "
                                "(without it, raw features are written and `train` fits the scaler)")
    featurize.set_defaults(handler=_run_featurize)

    train = commands.add_parser("train", help="train a classifier and write its model")
    _add_common(train)
    _add_data(train)
    _add_model_options(train, model_help="model file to write")
    train.set_defaults(handler=_run_train)

    evaluate = commands.add_parser("evaluate", help="run an evaluation protocol")
    _add_common(evaluate)
    _add_data(evaluate)
    _add_model_options(evaluate, model_help="stored model to score instead of training")
    evaluate.set_defaults(handler=_run_evaluate)

    cost = commands.add_parser("cost-report", help="memory and computation cost table")
    _add_common(cost)
    for flag, field, description in COST_FLAGS:
        cost.add_argument(flag, dest=field, type=float, help="{} (default {})".format(
            description, getattr(seizure.costmodel.CostParams(), field)))
    cost.add_argument("--actual", metavar="MODEL", help="add the exact costs of a trained model")
    cost.add_argument("--csv", metavar="FILE", help="also write the table as CSV (`-` for stdout)")
    cost.set_defaults(handler=_run_cost_report)

    return parser


def _run_config(args: argparse.Namespace) -> seizure.config.RunConfig:
    overrides = {
        name: getattr(args, name)
        for name in RUN_OPTIONS
        if getattr(args, name, None) is not None
    }
    return seizure.config.RunConfig.load(args.config, **overrides)


def _run_synthgen(args: argparse.Namespace) -> int:
    config = _run_config(args)
    paths = cmd_synthgen(
        config,
        patients=args.patients,
        seconds=args.seconds,
        channels=args.channels,
        seizure_fraction=args.seizure_fraction)
    print("wrote {} recordings and {} to {}".format(
        len(paths), seizure.synth.LABELS_FILENAME, config.output_dir))
    return 0


def _run_featurize(args: argparse.Namespace) -> int:
    path = cmd_featurize(_run_config(args))
    print("features written to {}".format(path))
    return 0


def _run_train(args: argparse.Namespace) -> int:
    cmd_train(_run_config(args))
    return 0


def _run_evaluate(args: argparse.Namespace) -> int:
    cmd_evaluate(_run_config(args))
    return 0


def _run_cost_report(args: argparse.Namespace) -> int:
    params = seizure.costmodel.CostParams().override(**{
        field: getattr(args, field) for _, field, _ in COST_FLAGS})
    cmd_cost_report(params, actual=args.actual, csv_path=args.csv)
    return 0


# ======================================================================
# Entry point


def _format_warning(message, category, filename, lineno, line=None) -> str:
    return "{}: {}".format(category.__name__, message)


def configure_logging(verbosity: int = 0):
    """
    Sends log records and warnings, one line each, to standard error, at
    the level of `settings.LOG_LEVEL` lowered by each `-v`.
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(seizure.config.settings.LOG_LEVEL).upper(), logging.WARNING)

    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True)

    warnings.formatwarning = _format_warning
    logging.captureWarnings(True)


def _message(exc: BaseException) -> str:
    # KeyError quotes its message
    if isinstance(exc, KeyError) and exc.args:
        return str(exc.args[0])
    return str(exc)


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (seizure.exceptions.SeizureException, OSError) as exc:
        print("{}: error: {}".format(PROGRAM, _message(exc)), file=sys.stderr)
        return 1
