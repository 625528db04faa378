"""Command-line interface.

Exit status: 0 on success, 1 for usage or configuration errors, 2 for data
errors (malformed or inconsistent input files).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import modelio
from .errors import ConfigError, DataError, ParseError
from .evaluate import PipelineConfig, cross_validate, format_report, predict_dataset, train
from .grasp import format_archive
from .miner import FeatureSet, MiningConfig, mine
from .parsing import format_features, parse_dataset, parse_features
from .propmat import build_matrix, matrix_to_csv

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load(args):
    return parse_dataset(_read(args.facts), _read(args.bias))


def _positive_index(classes, label) -> int:
    if label is None:
        return 1
    if label not in classes:
        raise ConfigError(f"positive label {label!r} is not one of {list(classes)}")
    return classes.index(label) + 1


def _pipeline(args, classes=()) -> PipelineConfig:
    return PipelineConfig(
        min_support=getattr(args, "min_support", 0.1),
        max_length=getattr(args, "max_length", 6),
        maxiter=args.maxiter,
        ensemble_size=args.ensemble_size,
        smoothing=args.smoothing,
        seed=args.seed,
        combination=args.combination,
        positive=_positive_index(classes, getattr(args, "positive", None)) if classes else 1,
        max_subset_size=args.max_subset_size,
    )


def cmd_mine(args) -> None:
    dataset, bias = _load(args)
    features = mine(dataset, MiningConfig(args.min_support, args.max_length, tuple(bias)))
    _write(args.out, format_features(features.queries, features.supports))
    if args.matrix:
        _write(args.matrix, matrix_to_csv(build_matrix(dataset, features), dataset.classes))
    logging.info("mined %d frequent queries from %d examples", len(features), len(dataset))


def cmd_fit(args) -> None:
    dataset, _ = _load(args)
    cfg = _pipeline(args)
    queries, supports = parse_features(_read(args.features))
    model = train(dataset, FeatureSet(tuple(queries), tuple(supports)), cfg)
    _write(args.out, modelio.dumps(model))
    if args.archive:
        _write(args.archive, format_archive(model.ensemble.archive))
    ens = model.ensemble
    if ens.shortfall:
        logging.warning("GRASP archive holds %d solutions; ensemble has %d of %d requested members",
                        len(ens.archive), len(ens.members), ens.requested_size)


def cmd_predict(args) -> None:
    model = modelio.loads(_read(args.model))
    bias_text = "".join(f"decl({d.predicate}({','.join(d.arg_types)})).\n" for d in model.bias)
    dataset, _ = parse_dataset(_read(args.facts), bias_text, classes=model.classes,
                               strict_labels=False)
    pred, post = predict_dataset(model, dataset)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label", "predicted", *(f"p_{c}" for c in model.classes)])
    for e, c, p in zip(dataset.examples, pred, post):
        label = model.classes[e.label - 1] if e.label else ""
        w.writerow([e.id, label, model.classes[int(c) - 1], *(repr(float(x)) for x in p)])
    _write(args.out, buf.getvalue())


def cmd_cv(args) -> None:
    dataset, _ = _load(args)
    cfg = _pipeline(args, dataset.classes)
    report = cross_validate(dataset, args.folds, cfg)
    _write(args.report, format_report(report))
    logging.info("accuracy %.4f +/- %.4f", report.mean_accuracy, report.std_accuracy)


def _fit_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--maxiter", type=int, default=100, help="GRASP iterations")
    p.add_argument("--ensemble-size", type=int, default=40, help="requested ensemble members")
    p.add_argument("--smoothing", type=float, default=1.0, help="Laplace smoothing (0 = raw counts)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--combination", choices=("mean", "vote"), default="mean")
    p.add_argument("--max-subset-size", type=int, default=None)


def _mining_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--min-support", type=float, default=0.1)
    p.add_argument("--max-length", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relprop", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mine", help="mine frequent relational queries")
    p.add_argument("--facts", required=True)
    p.add_argument("--bias", required=True)
    _mining_flags(p)
    p.add_argument("--out", required=True, help="features file")
    p.add_argument("--matrix", help="also write the 0/1 feature matrix as CSV")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("fit", help="select subspaces with GRASP and train the ensemble")
    p.add_argument("--facts", required=True)
    p.add_argument("--bias", required=True)
    p.add_argument("--features", required=True)
    _fit_flags(p)
    p.add_argument("--out", required=True, help="model file")
    p.add_argument("--archive", help="also write the GRASP archive")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="classify examples with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--facts", required=True)
    p.add_argument("--out", required=True, help="CSV of per-example class and posterior")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation of the whole pipeline")
    p.add_argument("--facts", required=True)
    p.add_argument("--bias", required=True)
    p.add_argument("--folds", type=int, default=10)
    _mining_flags(p)
    _fit_flags(p)
    p.add_argument("--positive", help="label scored as positive for AUC (default: first declared)")
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_cv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"relprop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, DataError) as exc:
        print(f"relprop: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
