"""Correspondence analysis of document-term matrices.

The counts are turned into proportions ``P``, the independence model
``E = r c^T`` is subtracted, and the standardized residuals
``D_r^{-1/2} (P - E) D_c^{-1/2}`` are decomposed.  Standard coordinates
``Phi = D_r^{-1/2} U`` and ``Gamma = D_c^{-1/2} V`` have weighted mean zero
and weighted sum of squares one; principal coordinates multiply them by
the singular values, which makes Euclidean distances between principal
row (column) points equal to chi-square distances between row (column)
profiles.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dtm import DocTermMatrix
from .errors import DimensionMismatch, RankOutOfRange, ZeroMargin, ZeroQuery

log = logging.getLogger(__name__)

# residual singular values never exceed 1, so the rank cut-off is absolute
RANK_ATOL = linalg.RANK_TOL


class CoordKind(enum.Enum):
    STANDARD = "standard"
    PRINCIPAL = "principal"


def _proportions(counts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    f = np.asarray(counts, dtype=np.float64)
    p = f / f.sum()
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    if np.any(r <= 0) or np.any(c <= 0):
        raise ZeroMargin("all row and column margins must be positive")
    return p, r, c


def standardized_residuals(m: DocTermMatrix) -> np.ndarray:
    """``(p_ij - r_i c_j) / sqrt(r_i c_j)`` for every cell."""
    p, r, c = _proportions(m.counts)
    e = np.outer(r, c)
    return (p - e) / np.sqrt(e)


def framework_components(m: DocTermMatrix):
    """Diagonals of ``N = D_r^{-1/2}``, ``G = D_c^{-1/2}`` and ``L = P - E``."""
    p, r, c = _proportions(m.counts)
    return 1.0 / np.sqrt(r), p - np.outer(r, c), 1.0 / np.sqrt(c)


@dataclass(frozen=True, eq=False)
class CaModel:
    """Fitted correspondence analysis; ``svd`` keeps only the nonnull dimensions."""

    p: np.ndarray
    row_masses: np.ndarray
    col_masses: np.ndarray
    svd: linalg.SvdResult
    total_inertia: float
    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    labels: dict[str, str] | None = None

    @property
    def rank(self) -> int:
        return self.svd.p

    @property
    def sigma(self) -> np.ndarray:
        return self.svd.sigma

    @property
    def phi(self) -> np.ndarray:
        return self.svd.u / np.sqrt(self.row_masses)[:, None]

    @property
    def gamma(self) -> np.ndarray:
        return self.svd.v / np.sqrt(self.col_masses)[:, None]

    @property
    def inertia(self) -> np.ndarray:
        return self.sigma**2

    @property
    def proportions(self) -> np.ndarray:
        return self.inertia / self.total_inertia

    def _k(self, k: int | None) -> int:
        k = self.rank if k is None else k
        if not 1 <= k <= self.rank:
            raise RankOutOfRange(f"k={k} outside 1..{self.rank}")
        return k

    def coordinates(self, side: str = "rows", kind=CoordKind.PRINCIPAL, k: int | None = None) -> np.ndarray:
        k = self._k(k)
        kind = CoordKind(kind)
        if side == "rows":
            std = self.phi[:, :k]
        elif side == "cols":
            std = self.gamma[:, :k]
        else:
            raise ValueError(f"side must be 'rows' or 'cols', got {side!r}")
        return std * self.sigma[:k] if kind is CoordKind.PRINCIPAL else std

    def project(self, q, k: int | None = None) -> np.ndarray:
        """Supplementary row: profile of ``q`` times the standard column coordinates.

        The result is on the principal-coordinate scale of the fitted rows.
        """
        k = self._k(k)
        q = np.asarray(q, dtype=np.float64)
        if q.shape[-1] != len(self.terms):
            raise DimensionMismatch(f"query has {q.shape[-1]} entries, model has {len(self.terms)} terms")
        total = q.sum(axis=-1, keepdims=True)
        if np.any(total <= 0):
            raise ZeroQuery("query has no mass")
        return (q / total) @ self.gamma[:, :k]

    def transition_check(self, k: int | None = None) -> float:
        """Largest violation of the two transition formulas over ``k`` dimensions."""
        k = self._k(k)
        phi, gamma, s = self.phi[:, :k], self.gamma[:, :k], self.sigma[:k]
        rows = (self.p @ gamma) / self.row_masses[:, None] - phi * s
        cols = (self.p.T @ phi) / self.col_masses[:, None] - gamma * s
        return float(max(np.abs(rows).max(), np.abs(cols).max()))

    def constraint_violation(self) -> float:
        """Largest deviation from centering and weighted orthonormality."""
        if self.rank == 0:
            return 0.0
        phi, gamma = self.phi, self.gamma
        eye = np.eye(self.rank)
        return float(
            max(
                np.abs(self.row_masses @ phi).max(),
                np.abs(self.col_masses @ gamma).max(),
                np.abs(phi.T @ (phi * self.row_masses[:, None]) - eye).max(),
                np.abs(gamma.T @ (gamma * self.col_masses[:, None]) - eye).max(),
            )
        )


def fit_ca(m: DocTermMatrix, engine: str = "jacobi") -> CaModel:
    """Fit CA; all-zero term columns are removed (with a warning) first."""
    m = m.drop_empty_terms()
    p, r, c = _proportions(m.counts)
    e = np.outer(r, c)
    residuals = (p - e) / np.sqrt(e)
    full = linalg.svd(residuals, atol=RANK_ATOL, engine=engine)
    rank = full.effective_rank
    kept = linalg.SvdResult(full.u[:, :rank], full.sigma[:rank], full.v[:, :rank], rank)
    model = CaModel(p, r, c, kept, float(np.sum(residuals**2)), m.docs, m.terms, m.labels)
    violation = model.constraint_violation()
    if violation > 1e-9:
        log.warning("CA constraints violated by %.3g; near-null dimensions are unstable", violation)
    return model


def chi2_distance(m: DocTermMatrix, side: str, a: int, b: int) -> float:
    """Chi-square distance between the profiles of rows (or columns) ``a`` and ``b``."""
    p, r, c = _proportions(m.counts)
    if side == "rows":
        diff = p[a] / r[a] - p[b] / r[b]
        weight = c
    elif side == "cols":
        diff = p[:, a] / c[a] - p[:, b] / c[b]
        weight = r
    else:
        raise ValueError(f"side must be 'rows' or 'cols', got {side!r}")
    return float(np.sqrt(np.sum(diff**2 / weight)))
