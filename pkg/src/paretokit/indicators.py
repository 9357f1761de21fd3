"""Performance indicators for solution sets under minimization."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.spatial.distance import cdist

from .core import ContractError


class HypervolumeUnsupported(ContractError):
    pass


def _pair(S, PF) -> tuple[np.ndarray, np.ndarray]:
    S = np.atleast_2d(np.asarray(S, dtype=float))
    PF = np.atleast_2d(np.asarray(PF, dtype=float))
    if S.size == 0 or PF.size == 0:
        raise ContractError("indicator inputs must be non-empty")
    if S.shape[1] != PF.shape[1]:
        raise ContractError(f"objective counts differ: {S.shape[1]} vs {PF.shape[1]}")
    return S, PF


def plus_distances(A: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Matrix of d+(a, p) = || max(a - p, 0) || for every row pair."""
    diff = np.maximum(A[:, None, :] - P[None, :, :], 0.0)
    return np.sqrt((diff * diff).sum(axis=2))


def gd(S, PF) -> float:
    """Mean distance from each solution to its closest reference point."""
    S, PF = _pair(S, PF)
    return float(cdist(S, PF).min(axis=1).mean())


def igd(S, PF) -> float:
    """Mean distance from each reference point to its closest solution."""
    S, PF = _pair(S, PF)
    return float(cdist(PF, S).min(axis=1).mean())


def gd_plus(S, PF) -> float:
    S, PF = _pair(S, PF)
    return float(plus_distances(S, PF).min(axis=1).mean())


def igd_plus(S, PF) -> float:
    S, PF = _pair(S, PF)
    return float(plus_distances(S, PF).min(axis=0).mean())


def _hv2d(P: np.ndarray, ref: np.ndarray) -> float:
    if len(P) == 0:
        return 0.0
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    volume = 0.0
    best_f2 = ref[1]
    for f1, f2 in P:
        if f2 < best_f2:
            volume += (ref[0] - f1) * (best_f2 - f2)
            best_f2 = f2
    return volume


def _hv3d(P: np.ndarray, ref: np.ndarray) -> float:
    # Sweep along the third objective; each slab's cross-section is a 2-D union.
    P = P[np.argsort(P[:, 2], kind="stable")]
    levels = np.append(P[:, 2], ref[2])
    volume = 0.0
    for k in range(len(P)):
        thickness = levels[k + 1] - levels[k]
        if thickness > 0:
            volume += _hv2d(P[: k + 1, :2], ref[:2]) * thickness
    return volume


def hypervolume(S, ref_point) -> float:
    """Exact volume dominated by ``S`` and bounded by ``ref_point`` (2 or 3 objectives).

    Points that do not strictly dominate the reference point add nothing; a
    warning reports how many were discarded.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    ref = np.asarray(ref_point, dtype=float)
    if S.size == 0:
        return 0.0
    m = S.shape[1]
    if ref.shape != (m,):
        raise ContractError(f"reference point must have {m} entries")
    if m > 3:
        raise HypervolumeUnsupported("exact hypervolume unsupported above 3 objectives")
    inside = np.all(S < ref, axis=1)
    if not inside.all():
        warnings.warn(f"{int((~inside).sum())} point(s) do not dominate the reference point", stacklevel=2)
    P = S[inside]
    if len(P) == 0:
        return 0.0
    if m == 1:
        return float(ref[0] - P[:, 0].min())
    if m == 2:
        return float(_hv2d(P, ref))
    return float(_hv3d(P, ref))
