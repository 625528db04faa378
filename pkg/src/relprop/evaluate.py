"""Cross-validated evaluation of the mine / select / ensemble pipeline."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import bayes
from .ensemble import rsm_fit, rsm_predict_batch
from .errors import ConfigError, DataError
from .grasp import GraspConfig
from .logic import Dataset
from .metrics import PR_CONVENTION, UndefinedMetric, auc_pr, auc_roc
from .miner import DEFAULT_MAX_LENGTH, DEFAULT_MIN_SUPPORT, FeatureSet, MiningConfig, mine
from .modelio import TrainedModel
from .propmat import build_matrix

REPORT_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    min_support: float = DEFAULT_MIN_SUPPORT
    max_length: int = DEFAULT_MAX_LENGTH
    maxiter: int = 100
    ensemble_size: int = 40
    smoothing: float = 1.0
    seed: int = 0
    combination: str = "mean"
    positive: int = 1
    max_subset_size: int | None = None

    def __post_init__(self):
        # validate eagerly so bad flags fail before any work is done
        MiningConfig(self.min_support, self.max_length)
        self.grasp_config()
        if self.ensemble_size < 1:
            raise ConfigError("ensemble_size must be at least 1")
        if self.positive < 1:
            raise ConfigError("positive class index is 1-based")

    def grasp_config(self, seed: int | None = None) -> GraspConfig:
        return GraspConfig(self.maxiter, self.seed if seed is None else seed,
                           self.smoothing, self.max_subset_size)


def train(dataset: Dataset, features: FeatureSet, cfg: PipelineConfig,
          seed: int | None = None) -> TrainedModel:
    matrix = build_matrix(dataset, features)
    ens = rsm_fit(matrix, cfg.grasp_config(seed), cfg.ensemble_size, cfg.combination)
    return TrainedModel(dataset.classes, dataset.bias, features.queries, features.supports, ens)


def predict_dataset(model: TrainedModel, dataset: Dataset):
    """Ensemble classes and combined posteriors for every example."""
    matrix = build_matrix(dataset, model.queries)
    return rsm_predict_batch(model.ensemble, matrix.bits)


def stratified_folds(labels: Sequence[int], k: int, rng: np.random.Generator) -> list[list[int]]:
    """Seeded stratified assignment: shuffle each class, deal round-robin."""
    labels = np.asarray(labels)
    folds: list[list[int]] = [[] for _ in range(k)]
    dealt = 0
    for c in sorted(set(labels.tolist())):
        members = np.flatnonzero(labels == c)
        for idx in rng.permutation(members):
            folds[dealt % k].append(int(idx))
            dealt += 1
    return [sorted(f) for f in folds]


@dataclass
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    n_features: int
    archive_length: int
    ensemble_members: int
    accuracy: float
    single_accuracy: float
    auc_roc: float
    auc_pr: float
    test_ids: list[str] = field(default_factory=list)
    train_ids: list[str] = field(default_factory=list)


@dataclass
class EvalReport:
    config: dict
    classes: tuple[str, ...]
    folds: list[FoldResult]
    pooled_auc_roc: float
    pooled_auc_pr: float

    @property
    def accuracies(self) -> list[float]:
        return [f.accuracy for f in self.folds]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def std_accuracy(self) -> float:
        a = self.accuracies
        return float(np.std(a, ddof=1)) if len(a) > 1 else 0.0

    @property
    def mean_single_accuracy(self) -> float:
        return float(np.mean([f.single_accuracy for f in self.folds]))

    def mean_auc(self, which: str) -> float:
        vals = [getattr(f, which) for f in self.folds if not math.isnan(getattr(f, which))]
        return float(np.mean(vals)) if vals else math.nan

    def summary(self) -> dict[str, object]:
        out: dict[str, object] = {"report_version": REPORT_VERSION}
        out.update({f"config.{k}": v for k, v in self.config.items()})
        out["classes"] = ",".join(self.classes)
        out["folds"] = len(self.folds)
        for f in self.folds:
            for name in ("accuracy", "single_accuracy", "auc_roc", "auc_pr", "n_features",
                         "archive_length", "ensemble_members"):
                out[f"fold.{f.fold}.{name}"] = getattr(f, name)
        out["accuracy.mean"] = self.mean_accuracy
        out["accuracy.std"] = self.std_accuracy
        out["single_accuracy.mean"] = self.mean_single_accuracy
        out["auc_roc.mean"] = self.mean_auc("auc_roc")
        out["auc_pr.mean"] = self.mean_auc("auc_pr")
        out["auc_roc.pooled"] = self.pooled_auc_roc
        out["auc_pr.pooled"] = self.pooled_auc_pr
        return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def format_report(report: EvalReport) -> str:
    pos = report.classes[report.config["positive"] - 1]
    lines = [
        "relprop cross-validation report",
        f"classes: {', '.join(report.classes)} (positive: {pos})",
        f"PR curve: {PR_CONVENTION}",
        "AUC is undefined (nan) on folds whose test part lacks one of the two classes",
        "",
        "fold  train  test  features  archive  members  accuracy  single    auc_roc   auc_pr",
    ]
    for f in report.folds:
        lines.append(f"{f.fold:>4}  {f.n_train:>5}  {f.n_test:>4}  {f.n_features:>8}  "
                     f"{f.archive_length:>7}  {f.ensemble_members:>7}  {f.accuracy:8.4f}  "
                     f"{f.single_accuracy:8.4f}  {f.auc_roc:8.4f}  {f.auc_pr:8.4f}")
    lines += [
        "",
        f"ensemble accuracy: {100 * report.mean_accuracy:.1f} +/- {100 * report.std_accuracy:.1f}",
        f"single-model accuracy: {100 * report.mean_single_accuracy:.1f}",
        f"AUC ROC mean {report.mean_auc('auc_roc'):.4f}, pooled {report.pooled_auc_roc:.4f}",
        f"AUC PR mean {report.mean_auc('auc_pr'):.4f}, pooled {report.pooled_auc_pr:.4f}",
        "",
        "[summary]",
    ]
    lines += [f"{k}={_fmt(v)}" for k, v in report.summary().items()]
    return "\n".join(lines) + "\n"


def parse_summary(text: str) -> dict[str, str]:
    """The trailing ``key=value`` block of a report."""
    _, _, block = text.partition("[summary]\n")
    return dict(line.split("=", 1) for line in block.splitlines() if "=" in line)


def _safe(metric, scores, labels) -> float:
    try:
        return metric(scores, labels)
    except UndefinedMetric:
        return math.nan


def cross_validate(dataset: Dataset, folds: int, cfg: PipelineConfig = PipelineConfig()) -> EvalReport:
    if folds < 2:
        raise ConfigError(f"need at least 2 folds, got {folds}")
    if folds > len(dataset):
        raise ConfigError(f"{folds} folds for {len(dataset)} examples")
    if cfg.positive > dataset.num_classes:
        raise ConfigError(f"positive class {cfg.positive} out of range")
    labels = dataset.labels
    if any(lab is None for lab in labels):
        raise DataError("cross-validation needs every example labelled")

    seeds = np.random.SeedSequence(cfg.seed).spawn(folds + 1)
    assignment = stratified_folds(labels, folds, np.random.default_rng(seeds[0]))
    every = set(range(len(dataset)))
    for f, test_idx in enumerate(assignment):
        train_labels = {labels[i] for i in every.difference(test_idx)}
        missing = sorted(set(range(1, dataset.num_classes + 1)) - train_labels)
        if missing:
            raise DataError(f"fold {f}: training part has no examples of class(es) "
                            f"{[dataset.classes[c - 1] for c in missing]}")

    results = []
    pooled_scores: list[float] = []
    pooled_truth: list[bool] = []
    mcfg = MiningConfig(cfg.min_support, cfg.max_length, dataset.bias)
    for f, test_idx in enumerate(assignment):
        train_idx = sorted(every.difference(test_idx))
        train_set, test_set = dataset.subset(train_idx), dataset.subset(test_idx)
        features = mine(train_set, mcfg)
        grasp_seed = int(seeds[f + 1].generate_state(1, np.uint64)[0])
        model = train(train_set, features, cfg, grasp_seed)
        test_matrix = build_matrix(test_set, features.queries)
        pred, post = rsm_predict_batch(model.ensemble, test_matrix.bits)
        best = model.ensemble.members[-1]
        single = np.atleast_1d(bayes.predict(best, best.restrict(test_matrix.bits)))
        truth = test_matrix.labels
        scores = post[:, cfg.positive - 1]
        is_pos = truth == cfg.positive
        pooled_scores += scores.tolist()
        pooled_truth += is_pos.tolist()
        results.append(FoldResult(
            fold=f,
            n_train=len(train_idx),
            n_test=len(test_idx),
            n_features=len(features),
            archive_length=len(model.ensemble.archive),
            ensemble_members=len(model.ensemble.members),
            accuracy=float(np.mean(pred == truth)),
            single_accuracy=float(np.mean(single == truth)),
            auc_roc=_safe(auc_roc, scores, is_pos),
            auc_pr=_safe(auc_pr, scores, is_pos),
            test_ids=[e.id for e in test_set.examples],
            train_ids=[e.id for e in train_set.examples],
        ))
    config = asdict(cfg)
    config["folds"] = folds
    return EvalReport(config, dataset.classes, results,
                      _safe(auc_roc, pooled_scores, pooled_truth),
                      _safe(auc_pr, pooled_scores, pooled_truth))
