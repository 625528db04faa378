"""Boolean propositionalisation of a dataset against mined queries."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .logic import Dataset, Query
from .miner import FeatureSet
from .subsume import oi_subsumes


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """``bits[k, i]`` is True iff query i subsumes example k.

    Labels are 1-based class indices; a label of 0 marks an unlabelled row.
    """

    bits: np.ndarray
    labels: np.ndarray
    num_classes: int
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        self.bits.setflags(write=False)
        self.labels.setflags(write=False)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def take_rows(self, indices: Sequence[int]) -> "FeatureMatrix":
        idx = np.asarray(indices, dtype=int)
        return FeatureMatrix(self.bits[idx].copy(), self.labels[idx].copy(),
                             self.num_classes, tuple(self.ids[i] for i in idx) if self.ids else ())


def build_matrix(dataset: Dataset, features: FeatureSet | Sequence[Query]) -> FeatureMatrix:
    queries = features.queries if isinstance(features, FeatureSet) else tuple(features)
    bits = np.zeros((len(dataset), len(queries)), dtype=bool)
    for k, example in enumerate(dataset.examples):
        for i, q in enumerate(queries):
            bits[k, i] = oi_subsumes(q, example)
    labels = np.array([e.label or 0 for e in dataset.examples], dtype=int)
    return FeatureMatrix(bits, labels, dataset.num_classes, tuple(e.id for e in dataset.examples))


def matrix_to_csv(matrix: FeatureMatrix, class_names: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *(f"q{i}" for i in range(matrix.cols)), "label"])
    for k in range(matrix.rows):
        label = int(matrix.labels[k])
        shown = class_names[label - 1] if class_names and label else label
        rid = matrix.ids[k] if matrix.ids else k
        w.writerow([rid, *(int(b) for b in matrix.bits[k]), shown])
    return buf.getvalue()
