"""Nearest-group classification with Euclidean group distances."""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyGroup

# elements per temporary (points x train docs x dims) block
_CHUNK = 4_000_000


class GroupDistanceMethod(enum.Enum):
    CENTROID = "centroid"
    AVERAGE = "average"
    SINGLE = "single"
    COMPLETE = "complete"


@dataclass(frozen=True, eq=False)
class LabeledEmbedding:
    coords: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        coords = np.atleast_2d(np.asarray(self.coords, dtype=np.float64))
        if coords.shape[0] != len(self.labels):
            raise DimensionMismatch(f"{coords.shape[0]} points but {len(self.labels)} labels")
        if coords.shape[0] == 0 or coords.shape[1] < 1:
            raise EmptyGroup("embedding needs at least one point and one dimension")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def classes(self) -> list[str]:
        return sorted(set(self.labels))


def group_distance(point, group, method) -> float:
    """Distance from ``point`` to the rows of ``group``.

    CENTROID uses the coordinate-wise mean of the group, the other methods
    reduce the point-to-member distances by mean, min or max.
    """
    method = GroupDistanceMethod(method)
    point = np.asarray(point, dtype=np.float64)
    group = np.atleast_2d(np.asarray(group, dtype=np.float64))
    if group.shape[0] == 0:
        raise EmptyGroup("group has no members")
    if group.shape[1] != point.shape[-1]:
        raise DimensionMismatch(f"point has {point.shape[-1]} dims, group has {group.shape[1]}")
    if method is GroupDistanceMethod.CENTROID:
        return float(np.linalg.norm(point - group.mean(axis=0)))
    d = np.linalg.norm(group - point, axis=1)
    if method is GroupDistanceMethod.AVERAGE:
        return float(d.mean())
    if method is GroupDistanceMethod.SINGLE:
        return float(d.min())
    return float(d.max())


def classify(point, emb: LabeledEmbedding, method) -> tuple[str, dict[str, float]]:
    """Label of the nearest group; ties go to the lexicographically smallest label."""
    labels = np.array(emb.labels, dtype=object)
    table = {c: group_distance(point, emb.coords[labels == c], method) for c in emb.classes}
    best = min(table, key=lambda c: (table[c], c))
    return best, table


def _prefix(sq: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    # sq: (..., K) squared coordinate differences -> (..., len(dims)) distances
    if len(dims) == 1:
        return np.sqrt(sq[..., : dims[0]].sum(axis=-1))[..., None]
    return np.sqrt(np.cumsum(sq, axis=-1)[..., np.asarray(dims) - 1])


def distance_table(points, emb: LabeledEmbedding, method, dims: Sequence[int]):
    """Group distances for many points over leading-dimension prefixes.

    Returns ``(classes, table)`` where ``table[i, j, c]`` is the distance of
    point ``i`` to class ``classes[c]`` using the first ``dims[j]``
    coordinates.
    """
    method = GroupDistanceMethod(method)
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    dims = [int(k) for k in dims]
    kmax = max(dims)
    if kmax > emb.coords.shape[1] or kmax > points.shape[1] or min(dims) < 1:
        raise DimensionMismatch(f"dims must lie in 1..{min(emb.coords.shape[1], points.shape[1])}")
    classes = emb.classes
    labels = np.array(emb.labels, dtype=object)
    members = [np.flatnonzero(labels == c) for c in classes]
    coords = emb.coords[:, :kmax]
    points = points[:, :kmax]

    if method is GroupDistanceMethod.CENTROID:
        centroids = np.stack([coords[idx].mean(axis=0) for idx in members])
        sq = (points[:, None, :] - centroids[None, :, :]) ** 2
        return classes, np.moveaxis(_prefix(sq, dims), 1, 2)

    out = np.empty((len(points), len(dims), len(classes)))
    step = max(1, _CHUNK // max(1, coords.size))
    for start in range(0, len(points), step):
        block = points[start : start + step]
        d = _prefix((block[:, None, :] - coords[None, :, :]) ** 2, dims)
        for c, idx in enumerate(members):
            sub = d[:, idx, :]
            if method is GroupDistanceMethod.AVERAGE:
                out[start : start + step, :, c] = sub.mean(axis=1)
            elif method is GroupDistanceMethod.SINGLE:
                out[start : start + step, :, c] = sub.min(axis=1)
            else:
                out[start : start + step, :, c] = sub.max(axis=1)
    return classes, out


def predict(classes: Sequence[str], table: np.ndarray) -> np.ndarray:
    """Winning class per entry of a distance table (first minimum wins)."""
    return np.asarray(classes, dtype=object)[np.argmin(table, axis=-1)]
