"""Problem definition, populations, constraint handling and batch evaluation."""

from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

EPS_EQ = 1e-4


class ContractError(ValueError):
    """Raised when inputs violate a documented shape or value contract."""


class EvaluationError(RuntimeError):
    """Raised when a problem returns unusable values."""


class VarKind(str, enum.Enum):
    REAL = "real"
    INTEGER = "integer"
    BINARY = "binary"


class Problem:
    """Box-constrained problem with M objectives, J inequalities and K equalities.

    All objectives are minimized and all inequalities read ``g(x) <= 0``.
    Subclasses implement ``_evaluate(X)`` for an ``(n, n_var)`` matrix and
    return ``(F, G, H)``; missing constraint blocks may be returned as ``None``.
    """

    differentiable = False

    def __init__(
        self,
        n_var: int,
        n_obj: int,
        n_ieq: int = 0,
        n_eq: int = 0,
        lower: Sequence[float] | float | None = None,
        upper: Sequence[float] | float | None = None,
        var_kind: VarKind | str = VarKind.REAL,
        name: str | None = None,
    ):
        if n_var < 1 or n_obj < 1 or n_ieq < 0 or n_eq < 0:
            raise ContractError(
                f"invalid dimensions n_var={n_var} n_obj={n_obj} n_ieq={n_ieq} n_eq={n_eq}"
            )
        self.n_var = int(n_var)
        self.n_obj = int(n_obj)
        self.n_ieq = int(n_ieq)
        self.n_eq = int(n_eq)
        self.var_kind = VarKind(var_kind)
        self.name = name or type(self).__name__.lower()

        if self.var_kind is VarKind.BINARY:
            lower, upper = 0.0, 1.0
        if lower is None or upper is None:
            raise ContractError("lower and upper bounds are required")
        self.lower = np.broadcast_to(np.asarray(lower, dtype=float), (self.n_var,)).copy()
        self.upper = np.broadcast_to(np.asarray(upper, dtype=float), (self.n_var,)).copy()
        if np.any(self.lower >= self.upper):
            raise ContractError("every lower bound must be strictly below its upper bound")

    def evaluate(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_var:
            raise ContractError(f"expected a matrix with {self.n_var} columns, got shape {X.shape}")
        F, G, H = self._evaluate(X)
        n = X.shape[0]
        return (
            _as_block(F, n, self.n_obj, "F"),
            _as_block(G, n, self.n_ieq, "G"),
            _as_block(H, n, self.n_eq, "H"),
        )

    def _evaluate(self, X: np.ndarray):
        raise NotImplementedError

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n_var={self.n_var}, n_obj={self.n_obj}, "
            f"n_ieq={self.n_ieq}, n_eq={self.n_eq})"
        )


class FormulaProblem(Problem):
    """Problem written column-wise so the same formulas accept dual numbers.

    ``objectives``, ``inequalities`` and ``equalities`` receive a list with one
    entry per variable. During batch evaluation each entry is a numpy column;
    during differentiation each entry is a :class:`paretokit.autodiff.Dual`.
    Only numpy ufuncs and arithmetic operators may be used inside them.
    """

    differentiable = True

    def objectives(self, x: list) -> list:
        raise NotImplementedError

    def inequalities(self, x: list) -> list:
        return []

    def equalities(self, x: list) -> list:
        return []

    def _evaluate(self, X):
        cols = [X[:, i] for i in range(self.n_var)]
        n = X.shape[0]
        F = _stack_columns(self.objectives(cols), n)
        G = _stack_columns(self.inequalities(cols), n) if self.n_ieq else None
        H = _stack_columns(self.equalities(cols), n) if self.n_eq else None
        return F, G, H


def _stack_columns(values: list, n: int) -> np.ndarray:
    if len(values) == 0:
        return np.zeros((n, 0))
    return np.column_stack([np.broadcast_to(np.asarray(v, dtype=float), (n,)) for v in values])


def _as_block(values, n: int, width: int, label: str) -> np.ndarray:
    if values is None:
        if width == 0:
            return np.zeros((n, 0))
        raise ContractError(f"problem returned no {label} values but declares {width}")
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1 and width == 1:
        arr = arr[:, None]
    if arr.shape != (n, width):
        raise ContractError(f"{label} has shape {arr.shape}, expected {(n, width)}")
    return arr


def constraint_violation(g: Sequence[float], h: Sequence[float] = (), eps_eq: float = EPS_EQ) -> float:
    """Sum of inequality violations plus equality violations beyond ``eps_eq``."""
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    return float(np.maximum(g, 0.0).sum() + np.maximum(np.abs(h) - eps_eq, 0.0).sum())


def constraint_violation_batch(G: np.ndarray, H: np.ndarray, eps_eq: float = EPS_EQ) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    H = np.asarray(H, dtype=float)
    n = G.shape[0] if G.ndim == 2 else H.shape[0]
    cv = np.zeros(n)
    if G.size:
        cv += np.maximum(G, 0.0).sum(axis=1)
    if H.size:
        cv += np.maximum(np.abs(H) - eps_eq, 0.0).sum(axis=1)
    return cv


class Dominance(enum.Enum):
    A_DOMINATES = "a_dominates"
    B_DOMINATES = "b_dominates"
    INCOMPARABLE = "incomparable"


def pareto_dominates(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    return bool(np.all(a <= b) and np.any(a < b))


def constrained_dominates(a, b) -> Dominance:
    """Feasibility-first dominance between two evaluated individuals.

    Lower constraint violation wins outright; with equal violation the
    objective vectors decide by Pareto dominance.
    """
    if a.cv < b.cv:
        return Dominance.A_DOMINATES
    if b.cv < a.cv:
        return Dominance.B_DOMINATES
    if pareto_dominates(a.f, b.f):
        return Dominance.A_DOMINATES
    if pareto_dominates(b.f, a.f):
        return Dominance.B_DOMINATES
    return Dominance.INCOMPARABLE


def domination_matrix(F: np.ndarray, cv: np.ndarray | None = None) -> np.ndarray:
    """Boolean matrix ``D`` with ``D[i, j]`` true iff i constrained-dominates j."""
    F = np.asarray(F, dtype=float)
    n = F.shape[0]
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    D = le & lt
    if cv is not None:
        cv = np.asarray(cv, dtype=float)
        less = cv[:, None] < cv[None, :]
        equal = cv[:, None] == cv[None, :]
        D = less | (equal & D)
    D[np.arange(n), np.arange(n)] = False
    return D


@dataclass
class Individual:
    x: np.ndarray
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray
    cv: float
    rank: int | None = None
    crowding: float | None = None

    @property
    def feasible(self) -> bool:
        return self.cv <= 0.0


@dataclass
class Population:
    """Evaluated individuals stored column-wise.

    ``rank`` is -1 and ``crowding`` is NaN until a survival pass sets them.
    """

    X: np.ndarray
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    cv: np.ndarray
    rank: np.ndarray = None
    crowding: np.ndarray = None
    generation: int = 0

    def __post_init__(self):
        n = self.X.shape[0]
        for name in ("F", "G", "H", "cv"):
            if getattr(self, name).shape[0] != n:
                raise ContractError(f"population block {name} does not have {n} rows")
        if self.rank is None:
            self.rank = np.full(n, -1, dtype=int)
        if self.crowding is None:
            self.crowding = np.full(n, np.nan)

    def __len__(self) -> int:
        return self.X.shape[0]

    def __getitem__(self, i: int) -> Individual:
        rank = int(self.rank[i]) if self.rank[i] >= 0 else None
        crowding = None if np.isnan(self.crowding[i]) else float(self.crowding[i])
        return Individual(self.X[i], self.F[i], self.G[i], self.H[i], float(self.cv[i]), rank, crowding)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def feasible(self) -> np.ndarray:
        return self.cv <= 0.0

    def take(self, idx) -> "Population":
        idx = np.asarray(idx, dtype=int)
        return Population(
            self.X[idx], self.F[idx], self.G[idx], self.H[idx], self.cv[idx],
            self.rank[idx].copy(), self.crowding[idx].copy(), self.generation,
        )

    @staticmethod
    def merge(a: "Population", b: "Population") -> "Population":
        return Population(
            np.vstack([a.X, b.X]), np.vstack([a.F, b.F]), np.vstack([a.G, b.G]),
            np.vstack([a.H, b.H]), np.concatenate([a.cv, b.cv]),
            np.concatenate([a.rank, b.rank]), np.concatenate([a.crowding, b.crowding]),
            max(a.generation, b.generation),
        )


@dataclass
class Evaluator:
    """Counts evaluations and dispatches batches either at once or per row on threads."""

    problem: Problem
    mode: str = "vectorized"
    n_threads: int = 4
    eps_eq: float = EPS_EQ
    n_eval: int = field(default=0, init=False)

    def __post_init__(self):
        if self.mode not in ("vectorized", "threaded"):
            raise ContractError(f"unknown evaluation mode {self.mode!r}")
        if self.n_threads < 1:
            raise ContractError("n_threads must be positive")

    def evaluate(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.problem.n_var or X.shape[0] < 1:
            raise ContractError(
                f"expected a non-empty matrix with {self.problem.n_var} columns, got shape {X.shape}"
            )
        if self.mode == "vectorized":
            F, G, H = self.problem.evaluate(X)
        else:
            with ThreadPoolExecutor(max_workers=self.n_threads) as pool:
                rows = list(pool.map(lambda i: self.problem.evaluate(X[i : i + 1]), range(len(X))))
            F, G, H = (np.vstack([r[k] for r in rows]) for k in range(3))
        self.n_eval += X.shape[0]

        bad = ~(np.isfinite(F).all(axis=1) & np.isfinite(G).all(axis=1) & np.isfinite(H).all(axis=1))
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            raise EvaluationError(f"evaluation produced non-finite value in row {row}: x={X[row].tolist()}")
        return F, G, H

    def evaluate_population(self, X: np.ndarray, generation: int = 0) -> Population:
        F, G, H = self.evaluate(X)
        cv = constraint_violation_batch(G, H, self.eps_eq)
        return Population(np.array(X, dtype=float), F, G, H, cv, generation=generation)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def population_to_csv(pop: Population) -> str:
    """CSV text with header ``x1..xN,f1..fM,g1..gJ[,h1..hK],cv`` at full precision."""
    n_var, n_obj, n_ieq, n_eq = pop.X.shape[1], pop.F.shape[1], pop.G.shape[1], pop.H.shape[1]
    header = (
        [f"x{i + 1}" for i in range(n_var)]
        + [f"f{i + 1}" for i in range(n_obj)]
        + [f"g{i + 1}" for i in range(n_ieq)]
        + [f"h{i + 1}" for i in range(n_eq)]
        + ["cv"]
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for i in range(len(pop)):
        row = np.concatenate([pop.X[i], pop.F[i], pop.G[i], pop.H[i], [pop.cv[i]]])
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_population_csv(pop: Population, path: str | Path) -> None:
    Path(path).write_text(population_to_csv(pop))


def matrix_to_csv(M: np.ndarray, prefix: str = "f", extra: dict[str, np.ndarray] | None = None) -> str:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    header = [f"{prefix}{i + 1}" for i in range(M.shape[1])]
    cols = [M[:, j] for j in range(M.shape[1])]
    for name, values in (extra or {}).items():
        header.append(name)
        cols.append(np.asarray(values, dtype=float))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for i in range(M.shape[0]):
        writer.writerow([_fmt(c[i]) for c in cols])
    return buf.getvalue()


def read_csv_table(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ContractError(f"{path}: empty CSV file")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ContractError(f"{path}: non-numeric value ({exc})") from None
    if data.size == 0:
        data = np.zeros((0, len(header)))
    if data.shape[1] != len(header):
        raise ContractError(f"{path}: rows do not match header width {len(header)}")
    return header, data


def read_objectives_csv(path: str | Path) -> np.ndarray:
    """Objective matrix from the ``f1..fM`` columns of a CSV file.

    Files without any ``f<k>`` column are read whole as objective values.
    """
    header, data = read_csv_table(path)
    idx = [i for i, h in enumerate(header) if h.startswith("f") and h[1:].isdigit()]
    if not idx:
        return data
    idx.sort(key=lambda i: int(header[i][1:]))
    return data[:, idx]
