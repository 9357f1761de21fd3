"""Scalarization of objective vectors.

Weights are used exactly as supplied; normalizing objectives (and choosing
the ideal point) is up to the caller.
"""

from __future__ import annotations

import numpy as np

from .core import ContractError

METHODS = ("weighted_sum", "tchebysheff", "asf", "aasf", "pbi")


def decompose(
    f,
    weights,
    ideal=None,
    method: str = "tchebysheff",
    theta: float = 5.0,
    rho: float = 1e-4,
) -> np.ndarray | float:
    """Scalar value of ``f`` (a vector, or an ``n x M`` matrix row-wise).

    weighted_sum: sum w f
    tchebysheff:  max w |f - z|
    asf:          max (f - z) / w
    aasf:         asf + rho * sum (f - z) / w
    pbi:          d1 + theta d2, d1 the projection length of f - z on w, d2 the
                  perpendicular distance to that direction
    """
    F = np.asarray(f, dtype=float)
    single = F.ndim == 1
    F = np.atleast_2d(F)
    w = np.asarray(weights, dtype=float)
    m = F.shape[1]
    z = np.zeros(m) if ideal is None else np.asarray(ideal, dtype=float)
    if w.shape != (m,) or z.shape != (m,):
        raise ContractError(f"weights and ideal point must have {m} entries")
    if np.any(w < 0) or not np.any(w > 0):
        raise ContractError("weights must be non-negative and not all zero")

    if method == "weighted_sum":
        out = F @ w
    elif method == "tchebysheff":
        out = np.max(w * np.abs(F - z), axis=1)
    elif method in ("asf", "aasf"):
        if np.any(w == 0):
            raise ContractError(f"{method} requires strictly positive weights")
        ratio = (F - z) / w
        out = ratio.max(axis=1)
        if method == "aasf":
            out = out + rho * ratio.sum(axis=1)
    elif method == "pbi":
        diff = F - z
        # project with the raw weight vector so points on the ray give d2 = 0 exactly
        t = (diff @ w) / (w @ w)
        d1 = t * np.linalg.norm(w)
        d2 = np.linalg.norm(diff - t[:, None] * w, axis=1)
        out = d1 + theta * d2
    else:
        raise ContractError(f"unknown decomposition method {method!r}")
    return float(out[0]) if single else out
