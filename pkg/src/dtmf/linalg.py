"""Dense singular value decomposition and low-rank helpers.

The decomposition is a one-sided Jacobi method applied after a QR
reduction of the input.  Rotations are applied in round-robin order, so
that every step rotates a set of disjoint column pairs at once; all
arithmetic inside the sweep is elementwise, which keeps results
bit-identical from run to run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, EmptyMatrix, NonFinite, RankOutOfRange

RANK_TOL = 1e-10
JACOBI_TOL = 1e-14
MAX_SWEEPS = 60
_EPS2 = np.finfo(np.float64).eps ** 2


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = u @ diag(sigma) @ v.T``.

    ``u`` is ``(rows, p)``, ``v`` is ``(cols, p)`` and ``sigma`` holds the
    ``p = min(rows, cols)`` singular values in non-increasing order.  The
    entry of largest magnitude in every column of ``u`` is positive.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    effective_rank: int

    @property
    def p(self) -> int:
        return len(self.sigma)


def as_matrix(m) -> np.ndarray:
    """Validate ``m`` and return it as a 2-D float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise EmptyMatrix(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return a


def _jacobi_rows(w: np.ndarray, tol: float, max_sweeps: int):
    """Orthogonalize the rows of ``w`` by plane rotations.

    Returns the rotated rows and the accumulated orthogonal transform
    ``k`` with ``w_out = k @ w_in``.
    """
    n, cols = w.shape
    if n == 1:
        return w.copy(), np.eye(1)
    size = n + n % 2
    half = size // 2
    # rows of z are [w | k]; a zero dummy row never rotates
    z = np.zeros((size, cols + size))
    z[:n, :cols] = w
    z[:, cols:] = np.eye(size)
    # circle-method tournament: position i plays position size-1-i
    slot = np.arange(size)
    step = np.concatenate(([0, size - 1], np.arange(1, size - 1)))
    for _ in range(max_sweeps):
        rotated = False
        norms = np.einsum("ij,ij->i", z[:, :cols], z[:, :cols])
        # rows at rounding-noise level are numerically null; leave them alone
        floor = _EPS2 * norms.sum()
        for _ in range(size - 1):
            top = z[:half]
            bot = z[size - 1 : half - 1 : -1] if half > 1 else z[size - 1 :]
            alpha = norms[:half]
            beta = norms[size - 1 : half - 1 : -1] if half > 1 else norms[size - 1 :]
            gamma = np.einsum("ij,ij->i", top[:, :cols], bot[:, :cols])
            active = (np.abs(gamma) > tol * np.sqrt(np.maximum(alpha * beta, 0.0))) & (
                np.minimum(alpha, beta) > floor
            )
            if active.any():
                rotated = True
                with np.errstate(divide="ignore", invalid="ignore"):
                    zeta = (beta - alpha) / (2.0 * gamma)
                    t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                new_top = c[:, None] * top - s[:, None] * bot
                bot[...] = s[:, None] * top + c[:, None] * bot
                top[...] = new_top
                tg = t * gamma
                alpha -= tg
                beta += tg
            z = z[step]
            norms = norms[step]
            slot = slot[step]
        if not rotated:
            order = np.argsort(slot)
            z = z[order]
            return z[:n, :cols], z[:n, cols : cols + n]
    raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


def _complete_columns(basis: np.ndarray, missing: np.ndarray) -> np.ndarray:
    """Replace the columns flagged in ``missing`` by an orthonormal completion.

    Each new column starts from the standard basis vector with the largest
    component outside the current span and is orthogonalized twice.
    """
    out = basis.copy()
    kept = out[:, ~missing]
    for j in np.flatnonzero(missing):
        outside = 1.0 - np.einsum("ij,ij->i", kept, kept)
        e = np.zeros(out.shape[0])
        e[int(np.argmax(outside))] = 1.0
        for _ in range(2):
            e -= kept @ (kept.T @ e)
        e /= np.linalg.norm(e)
        out[:, j] = e
        kept = np.column_stack([kept, e])
    return out


def _jacobi_factors(a: np.ndarray):
    q, r = np.linalg.qr(a)
    w, k = _jacobi_rows(r, JACOBI_TOL, MAX_SWEEPS)
    sigma = np.sqrt(np.einsum("ij,ij->i", w, w))
    order = np.argsort(-sigma, kind="stable")
    return q @ k[order].T, sigma[order], w[order]


def _lapack_factors(a: np.ndarray):
    u, sigma, vt = np.linalg.svd(a, full_matrices=False)
    return u, sigma, vt * sigma[:, None]


ENGINES = {"jacobi": _jacobi_factors, "lapack": _lapack_factors}


def svd(m, rank_tol: float = RANK_TOL, atol: float = 0.0, engine: str = "jacobi") -> SvdResult:
    """Thin SVD of ``m`` with a deterministic sign convention.

    Singular values at or below ``max(rank_tol * sigma[0], atol)`` are
    treated as numerically zero: they do not count toward
    ``effective_rank`` and their right (or left) singular vectors are
    replaced by an orthonormal completion.

    ``engine="lapack"`` delegates the factorization to LAPACK for
    matrices too large for the Jacobi sweeps; conventions are identical.
    """
    a = as_matrix(m)
    try:
        factor = ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown SVD engine {engine!r}") from None
    transposed = a.shape[0] < a.shape[1]
    if transposed:
        a = a.T
    left, sigma, w = factor(a)

    thresh = max(rank_tol * sigma[0], atol)
    nonnull = sigma > thresh
    rank = int(np.count_nonzero(nonnull))
    right = np.zeros_like(w.T)
    right[:, nonnull] = (w[nonnull] / sigma[nonnull, None]).T
    if rank < len(sigma):
        right = _complete_columns(right, ~nonnull)

    if transposed:
        left, right = right, left
    pivot = np.argmax(np.abs(left), axis=0)
    flip = left[pivot, np.arange(left.shape[1])] < 0
    left[:, flip] *= -1.0
    right[:, flip] *= -1.0
    return SvdResult(u=left, sigma=sigma, v=right, effective_rank=rank)


def truncate(s: SvdResult, k: int) -> SvdResult:
    """Keep the leading ``k`` singular triplets."""
    if not 1 <= k <= s.p:
        raise RankOutOfRange(f"k={k} outside 1..{s.p}")
    return SvdResult(
        u=s.u[:, :k],
        sigma=s.sigma[:k],
        v=s.v[:, :k],
        effective_rank=min(s.effective_rank, k),
    )


def reconstruct(s: SvdResult) -> np.ndarray:
    return (s.u * s.sigma) @ s.v.T


def explained_proportions(s: SvdResult) -> np.ndarray:
    """Share of the total sum of squared singular values per dimension."""
    sq = s.sigma**2
    total = sq.sum()
    if total == 0:
        raise RankOutOfRange("all singular values are zero")
    return sq / total
