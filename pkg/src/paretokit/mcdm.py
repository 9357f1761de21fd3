"""Picking solutions from a non-dominated set."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .core import ContractError, domination_matrix
from .decomposition import decompose


@dataclass
class PseudoWeightResult:
    W: np.ndarray
    degenerate: np.ndarray  # rows where every objective sits at its worst value

    def closest(self, target) -> int:
        """Row whose pseudo-weight vector is nearest to ``target``."""
        target = np.asarray(target, dtype=float)
        return int(np.argmin(np.linalg.norm(self.W - target, axis=1)))


@dataclass
class TradeoffResult:
    mu: np.ndarray

    @property
    def best(self) -> int:
        return int(np.argmax(self.mu))


def pseudo_weights(F) -> PseudoWeightResult:
    """Normalized distance to the worst value per objective, rescaled to sum to one.

    Objectives with zero range are skipped. A row that is worst everywhere
    gets uniform weights and is flagged as degenerate.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n, m = F.shape
    fmin, fmax = F.min(axis=0), F.max(axis=0)
    span = fmax - fmin
    ok = span > 0
    dist = np.zeros_like(F)
    dist[:, ok] = (fmax[ok] - F[:, ok]) / span[ok]
    total = dist.sum(axis=1)
    degenerate = total <= 0
    W = np.full((n, m), 1.0 / m)
    W[~degenerate] = dist[~degenerate] / total[~degenerate, None]
    return PseudoWeightResult(W=W, degenerate=degenerate)


def tradeoff(fi, fj) -> float:
    """Aggregated sacrifice over aggregated gain when moving from ``fi`` to ``fj``."""
    fi = np.asarray(fi, dtype=float)
    fj = np.asarray(fj, dtype=float)
    sacrifice = np.maximum(0.0, fj - fi).sum()
    gain = np.maximum(0.0, fi - fj).sum()
    return float(sacrifice / gain)


def tradeoff_metric(F, neighbors: int | None = None, normalize: bool = False) -> TradeoffResult:
    """mu(x_i) = min_j T(x_i, x_j) over all others or the ``neighbors`` nearest ones.

    Duplicate rows are collapsed first and share one value; the input must be
    mutually non-dominated.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    uniq, inverse = np.unique(F, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    n = len(uniq)
    if n < 2:
        raise ContractError("trade-off needs at least two distinct solutions")
    if domination_matrix(uniq).any():
        raise ContractError("trade-off input must be mutually non-dominated")

    sacrifice = np.maximum(0.0, uniq[None, :, :] - uniq[:, None, :]).sum(axis=2)
    gain = np.maximum(0.0, uniq[:, None, :] - uniq[None, :, :]).sum(axis=2)
    np.fill_diagonal(gain, 1.0)
    T = sacrifice / gain
    np.fill_diagonal(T, np.inf)

    if neighbors is not None and neighbors < n - 1:
        if neighbors < 1:
            raise ContractError("neighbors must be positive")
        pts = uniq
        if normalize:
            span = np.ptp(uniq, axis=0)
            pts = (uniq - uniq.min(axis=0)) / np.where(span > 0, span, 1.0)
        D = cdist(pts, pts)
        np.fill_diagonal(D, np.inf)
        near = np.argsort(D, axis=1, kind="stable")[:, :neighbors]
        mask = np.zeros_like(T, dtype=bool)
        np.put_along_axis(mask, near, True, axis=1)
        T = np.where(mask, T, np.inf)

    return TradeoffResult(mu=T.min(axis=1)[inverse])


def compromise(F, method: str, weights, ideal=None, **kwargs) -> int:
    """Row minimizing the chosen scalarization; the lowest index wins ties."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if ideal is None:
        ideal = F.min(axis=0)
    values = decompose(F, weights, ideal, method=method, **kwargs)
    return int(np.argmin(values))
