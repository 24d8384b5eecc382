"""Classification accuracy of reduced embeddings under several protocols.

For every fold the reduction is fitted on the training documents only,
the held-out documents are projected into it, and each held-out document
is assigned to the nearest category.  Accuracy is reported for every
requested number of leading dimensions ``k``.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ca import fit_ca
from .classify import GroupDistanceMethod, LabeledEmbedding, distance_table, predict
from .dtm import DocTermMatrix
from .errors import DimensionMismatch, EmptyMatrix, SingleCategory
from .lsa import fit_lsa
from .weighting import WeightSpec

MAX_DIMS = 450
# accuracy_by_dim key used for the unreduced count space
RAW_KEY = 0


@dataclass(frozen=True)
class TrainTest:
    test_docs: tuple[str, ...]


@dataclass(frozen=True)
class KFold:
    folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("need at least two folds")


@dataclass(frozen=True)
class LOOCV:
    pass


def parse_reduction(name: str, log_base: float = 2.0):
    """``raw``, ``ca`` or ``lsa-<kind>`` as used on the command line."""
    if name in ("raw", "ca"):
        return name
    if name.startswith("lsa-"):
        return WeightSpec(name[4:], log_base)
    raise ValueError(f"unknown reduction {name!r}")


def reduction_name(reduction) -> str:
    if isinstance(reduction, WeightSpec):
        return "lsa-" + reduction.kind.value
    return reduction


@dataclass(frozen=True)
class EvalSpec:
    reduction: object  # "raw", "ca" or a WeightSpec for LSA
    method: GroupDistanceMethod = GroupDistanceMethod.CENTROID
    dims: tuple[int, ...] | None = None
    protocol: TrainTest | KFold | LOOCV = field(default_factory=KFold)
    engine: str = "jacobi"

    def __post_init__(self):
        object.__setattr__(self, "method", GroupDistanceMethod(self.method))
        if isinstance(self.reduction, str) and self.reduction not in ("raw", "ca"):
            object.__setattr__(self, "reduction", parse_reduction(self.reduction))
        if self.dims is not None:
            dims = tuple(int(k) for k in self.dims)
            if not dims or list(dims) != sorted(set(dims)) or dims[0] < 1:
                raise ValueError("dims must be a nonempty ascending sequence of positive integers")
            object.__setattr__(self, "dims", dims)


@dataclass
class EvalReport:
    accuracy_by_dim: dict[int, float]
    max_accuracy: float
    min_optimal_k: int
    seed: int | None
    folds: list[list[str]] | None = None
    reduction: str = ""
    method: str = ""
    protocol: str = ""

    def to_json(self) -> dict:
        return {
            "reduction": self.reduction,
            "method": self.method,
            "protocol": self.protocol,
            "seed": self.seed,
            "max_accuracy": self.max_accuracy,
            "min_optimal_k": self.min_optimal_k,
            "accuracy_by_dim": {str(k): v for k, v in self.accuracy_by_dim.items()},
            "folds": self.folds,
        }


def fold_indices(m: DocTermMatrix, protocol) -> list[np.ndarray]:
    """Held-out row indices for every fold.

    K-fold splits shuffle the rows with the seed and cut the permutation
    into contiguous blocks, so assignments depend only on seed and size.
    """
    n = m.shape[0]
    if isinstance(protocol, LOOCV):
        return [np.array([i]) for i in range(n)]
    if isinstance(protocol, KFold):
        if protocol.folds > n:
            raise ValueError(f"{protocol.folds} folds for {n} documents")
        perm = np.random.default_rng(protocol.seed).permutation(n)
        return [np.sort(block) for block in np.array_split(perm, protocol.folds)]
    if isinstance(protocol, TrainTest):
        index = {d: i for i, d in enumerate(m.docs)}
        missing = [d for d in protocol.test_docs if d not in index]
        if missing:
            raise DimensionMismatch(f"test documents not in matrix, e.g. {missing[0]!r}")
        test = np.array(sorted(index[d] for d in protocol.test_docs), dtype=int)
        if len(test) == 0 or len(test) == n:
            raise EmptyMatrix("train/test split leaves one side empty")
        return [test]
    raise TypeError(f"unknown protocol {protocol!r}")


@dataclass(frozen=True, eq=False)
class FoldEmbedding:
    """Training coordinates and projected held-out coordinates of one fold."""

    train: np.ndarray
    test: np.ndarray
    # False for held-out documents with no training-vocabulary term
    test_ok: np.ndarray


def fit_fold(m: DocTermMatrix, train_idx, test_idx, reduction, engine: str = "jacobi") -> FoldEmbedding:
    """Fit ``reduction`` on the training rows and project the held-out rows.

    Terms absent from the training rows are dropped before fitting; the
    held-out counts never enter the fit.
    """
    train_counts = m.counts[train_idx]
    keep = train_counts.sum(axis=0) > 0
    train = DocTermMatrix(
        tuple(m.docs[i] for i in train_idx),
        tuple(t for t, k in zip(m.terms, keep) if k),
        train_counts[:, keep],
    )
    queries = m.counts[test_idx][:, keep].astype(np.float64)
    ok = queries.sum(axis=1) > 0

    if reduction == "raw":
        coords = train.counts.astype(np.float64)
        test = queries
    elif reduction == "ca":
        model = fit_ca(train, engine=engine)
        if model.rank == 0:
            raise DimensionMismatch("training table has no dependence to analyze")
        coords = model.coordinates("rows", "principal")
        test = np.zeros((len(queries), model.rank))
        if ok.any():
            test[ok] = model.project(queries[ok])
    else:
        model = fit_lsa(train, reduction, engine=engine)
        k = max(model.rank, 1)
        coords = model.doc_coordinates(k)
        test = np.zeros((len(queries), k))
        if ok.any():
            test[ok] = model.project(queries[ok], k)
    return FoldEmbedding(coords, test, ok)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DTMF_THREADS", "1")))
    except ValueError:
        return 1


def run_eval(m: DocTermMatrix, spec: EvalSpec) -> EvalReport:
    labels = np.array(m.label_list(), dtype=object)
    if len(set(labels)) < 2:
        raise SingleCategory("evaluation needs at least two categories")
    folds = fold_indices(m, spec.protocol)
    all_idx = np.arange(m.shape[0])
    splits = [(np.setdiff1d(all_idx, test), test) for test in folds]

    def work(split):
        return fit_fold(m, split[0], split[1], spec.reduction, spec.engine)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        embeddings = list(pool.map(work, splits))

    if spec.reduction == "raw":
        dims = [RAW_KEY]
    elif spec.dims is not None:
        dims = list(spec.dims)
    else:
        top = max(e.train.shape[1] for e in embeddings)
        dims = list(range(1, min(top, MAX_DIMS) + 1))

    fold_acc = np.zeros((len(folds), len(dims)))
    for f, ((train_idx, test_idx), emb) in enumerate(zip(splits, embeddings)):
        available = emb.train.shape[1]
        # dimensions beyond a fold's rank fall back to all it has
        used = [available if k == RAW_KEY else min(k, available) for k in dims]
        uniq = sorted(set(used))
        classes, table = distance_table(
            emb.test, LabeledEmbedding(emb.train, tuple(labels[train_idx])), spec.method, uniq
        )
        pred = predict(classes, table)  # (n_test, len(uniq))
        correct = (pred == labels[test_idx][:, None]) & emb.test_ok[:, None]
        acc = correct.mean(axis=0)
        fold_acc[f] = [acc[uniq.index(k)] for k in used]

    accuracy = fold_acc.mean(axis=0)
    by_dim = {k: float(a) for k, a in zip(dims, accuracy)}
    best = max(by_dim.values())
    protocol = spec.protocol
    return EvalReport(
        accuracy_by_dim=by_dim,
        max_accuracy=best,
        min_optimal_k=min(k for k, a in by_dim.items() if a == best),
        seed=protocol.seed if isinstance(protocol, KFold) else None,
        folds=[[m.docs[i] for i in test] for test in folds],
        reduction=reduction_name(spec.reduction),
        method=spec.method.value,
        protocol=type(protocol).__name__.lower(),
    )


def sweep_report(report: EvalReport) -> str:
    """CSV text with one ``k,accuracy`` row per evaluated dimension."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "accuracy"])
    for k in sorted(report.accuracy_by_dim):
        writer.writerow([k, f"{report.accuracy_by_dim[k]:.6f}"])
    return buf.getvalue()


def parse_sweep(text: str) -> dict[int, float]:
    rows = list(csv.reader(io.StringIO(text)))
    return {int(k): float(a) for k, a in rows[1:]}


def write_report(report: EvalReport, prefix: str) -> tuple[str, str]:
    """Write ``<prefix>.csv`` (sweep) and ``<prefix>.json`` (summary)."""
    csv_path, json_path = f"{prefix}.csv", f"{prefix}.json"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_report(report))
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path
