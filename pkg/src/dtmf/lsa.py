"""Latent semantic analysis of (weighted) document-term matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .dtm import DocTermMatrix
from .errors import RankOutOfRange
from .weighting import FittedWeights, WeightSpec, apply_weights, fit_weights, weight_query


def _principal(kind) -> bool:
    kind = getattr(kind, "value", kind)
    if kind not in ("principal", "standard"):
        raise ValueError(f"kind must be 'principal' or 'standard', got {kind!r}")
    return kind == "principal"


@dataclass(frozen=True, eq=False)
class LsaModel:
    """Full SVD of a weighted matrix; ``k`` is only the default view size.

    Coordinates are ``U_k Sigma_k`` for documents and ``V_k Sigma_k`` for
    terms, so Euclidean distances between them approximate distances in
    the weighted matrix from below.
    """

    spec: WeightSpec
    weights: FittedWeights
    svd: linalg.SvdResult
    k: int
    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    labels: dict[str, str] | None = None

    @property
    def rank(self) -> int:
        return self.svd.effective_rank

    def _k(self, k: int | None) -> int:
        k = self.k if k is None else k
        if not 1 <= k <= self.svd.p:
            raise RankOutOfRange(f"k={k} outside 1..{self.svd.p}")
        return k

    def doc_coordinates(self, k: int | None = None, kind="principal") -> np.ndarray:
        k = self._k(k)
        u = self.svd.u[:, :k]
        return u * self.svd.sigma[:k] if _principal(kind) else u.copy()

    def term_coordinates(self, k: int | None = None, kind="principal") -> np.ndarray:
        k = self._k(k)
        v = self.svd.v[:, :k]
        return v * self.svd.sigma[:k] if _principal(kind) else v.copy()

    def project(self, q, k: int | None = None) -> np.ndarray:
        """Coordinates of out-of-sample document(s) ``q`` (aligned counts)."""
        k = self._k(k)
        return weight_query(q, self.weights) @ self.svd.v[:, :k]

    def explained_proportions(self) -> np.ndarray:
        return linalg.explained_proportions(self.svd)


def fit_lsa(
    m: DocTermMatrix,
    spec: WeightSpec = WeightSpec(),
    k: int | None = None,
    engine: str = "jacobi",
) -> LsaModel:
    weights = fit_weights(m, spec)
    s = linalg.svd(apply_weights(m, weights), engine=engine)
    if k is None:
        k = max(s.effective_rank, 1)
    if not 1 <= k <= s.p:
        raise RankOutOfRange(f"k={k} outside 1..{s.p}")
    return LsaModel(spec, weights, s, k, m.docs, m.terms, m.labels)
