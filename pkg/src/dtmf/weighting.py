"""Term weighting as a product of row normalization, local and global weights.

A weighted matrix has entries ``w_ij = N(i) * L(i, j) * G(j)``.  Here the
local weight is always the raw count; the shipped kinds differ only in
the row factor ``N`` and the column factor ``G``:

======  ====================  ==========================
kind    N(i)                  G(j)
======  ====================  ==========================
RAW     1                     1
NROWL1  1 / sum_j f_ij        1
NROWL2  1 / sqrt(sum f_ij^2)  1
TFIDF   1                     1 + log_b(ndocs / df_j)
======  ====================  ==========================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dtm import DocTermMatrix
from .errors import DimensionMismatch, ZeroQuery


class WeightKind(enum.Enum):
    RAW = "raw"
    NROWL1 = "nrowl1"
    NROWL2 = "nrowl2"
    TFIDF = "tfidf"


@dataclass(frozen=True)
class WeightSpec:
    kind: WeightKind = WeightKind.RAW
    log_base: float = 2.0

    def __post_init__(self):
        kind = self.kind
        if isinstance(kind, str):
            kind = WeightKind[kind.upper()]
        object.__setattr__(self, "kind", kind)
        if not self.log_base > 1:
            raise ValueError(f"log_base must exceed 1, got {self.log_base}")

    def to_json(self) -> dict:
        return {"kind": self.kind.name, "log_base": self.log_base}

    @classmethod
    def from_json(cls, data: dict) -> WeightSpec:
        return cls(WeightKind[data["kind"]], float(data.get("log_base", 2.0)))


@dataclass(frozen=True, eq=False)
class FittedWeights:
    """Global term weights learned from a training matrix."""

    spec: WeightSpec
    global_weights: np.ndarray
    doc_frequencies: np.ndarray | None = None
    n_docs: int = 0


def fit_weights(m: DocTermMatrix, spec: WeightSpec) -> FittedWeights:
    n_docs, n_terms = m.shape
    if spec.kind is not WeightKind.TFIDF:
        return FittedWeights(spec, np.ones(n_terms), None, n_docs)
    df = np.count_nonzero(m.counts, axis=0)
    if np.any(df == 0):
        raise DimensionMismatch("TF-IDF needs every term to occur in at least one document")
    g = 1.0 + np.log(n_docs / df) / math.log(spec.log_base)
    return FittedWeights(spec, g, df, n_docs)


def _row_factor(f: np.ndarray, kind: WeightKind) -> np.ndarray:
    if kind is WeightKind.NROWL1:
        return 1.0 / f.sum(axis=-1)
    if kind is WeightKind.NROWL2:
        return 1.0 / np.sqrt((f * f).sum(axis=-1))
    return np.ones(f.shape[:-1])


def _check_terms(n_terms: int, w: FittedWeights) -> None:
    if n_terms != len(w.global_weights):
        raise DimensionMismatch(
            f"matrix has {n_terms} terms, weights were fitted on {len(w.global_weights)}"
        )


def apply_weights(m: DocTermMatrix, w: FittedWeights) -> np.ndarray:
    """The weighted matrix ``N @ F @ G`` for the kind in ``w``."""
    f = m.counts.astype(np.float64)
    _check_terms(f.shape[1], w)
    return _row_factor(f, w.spec.kind)[:, None] * f * w.global_weights


def weight_query(q, w: FittedWeights) -> np.ndarray:
    """Weight an aligned query vector exactly like a training row.

    A 2-D ``q`` is treated as a stack of queries, one per row.
    """
    q = np.asarray(q, dtype=np.float64)
    _check_terms(q.shape[-1], w)
    if not np.all(q.any(axis=-1)):
        raise ZeroQuery("query vector is all zeros")
    factor = _row_factor(q, w.spec.kind)
    if q.ndim == 2:
        factor = factor[:, None]
    return factor * q * w.global_weights


def framework_components(m: DocTermMatrix, w: FittedWeights):
    """Diagonals of ``N`` and ``G`` and the local-weight matrix ``L``."""
    f = m.counts.astype(np.float64)
    return _row_factor(f, w.spec.kind), f, w.global_weights.copy()
