"""Sampling, crossover, mutation and mating selection.

The functions operate on plain arrays and take a ``numpy.random.Generator``
explicitly. The small dataclasses at the bottom bind parameters to them so an
algorithm can be assembled from named parts (see :class:`OperatorSet`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import ContractError, Population, Problem, VarKind

INT_EPS = 1e-9


def make_rng(seed: int | None) -> np.random.Generator:
    """PCG64 generator; the same seed yields the same stream on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


# --- sampling ---------------------------------------------------------------


def sample_random(problem: Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ContractError("sample size must be positive")
    if problem.var_kind is VarKind.BINARY:
        return (rng.random((n, problem.n_var)) < 0.5).astype(float)
    if problem.var_kind is VarKind.INTEGER:
        lo = np.ceil(problem.lower).astype(np.int64)
        hi = np.floor(problem.upper).astype(np.int64)
        return rng.integers(lo, hi + 1, size=(n, problem.n_var)).astype(float)
    return problem.lower + rng.random((n, problem.n_var)) * (problem.upper - problem.lower)


def sample_lhs(problem: Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    """Latin hypercube sample: each column hits every one of the ``n`` strata once."""
    if problem.var_kind is not VarKind.REAL:
        raise ContractError("Latin hypercube sampling requires real variables")
    if n < 1:
        raise ContractError("sample size must be positive")
    strata = np.column_stack([rng.permutation(n) for _ in range(problem.n_var)])
    unit = (strata + rng.random((n, problem.n_var))) / n
    return problem.lower + unit * (problem.upper - problem.lower)


# --- crossover ----------------------------------------------------------------


def crossover_point(
    parents: np.ndarray, kind: str, rng: np.random.Generator, cuts: tuple[int, ...] | None = None
) -> np.ndarray:
    """One- or two-point crossover of a ``2 x N`` parent matrix.

    A cut ``c`` splits the sequence before index ``c``. Cuts are drawn from
    ``1..N-1`` unless given explicitly.
    """
    parents = np.asarray(parents)
    n_var = parents.shape[1]
    if n_var < 2:
        raise ContractError("point crossover needs at least two variables")
    n_cuts = {"one_point": 1, "two_point": 2}.get(kind)
    if n_cuts is None:
        raise ContractError(f"unknown point crossover {kind!r}")
    if cuts is None:
        cuts = tuple(np.sort(rng.choice(np.arange(1, n_var), size=min(n_cuts, n_var - 1), replace=False)))
    swap = np.zeros(n_var, dtype=bool)
    bounds = list(cuts) + [n_var]
    for k in range(0, len(cuts), 2):
        swap[bounds[k] : bounds[k + 1]] = True
    children = parents.copy()
    children[0, swap] = parents[1, swap]
    children[1, swap] = parents[0, swap]
    return children


def crossover_ux(parents: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    parents = np.asarray(parents)
    swap = rng.random(parents.shape[1]) < 0.5
    children = parents.copy()
    children[0, swap] = parents[1, swap]
    children[1, swap] = parents[0, swap]
    return children


def crossover_hux(parents: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Exchange exactly floor(|D| / 2) of the D positions where the parents differ."""
    parents = np.asarray(parents)
    differ = np.flatnonzero(parents[0] != parents[1])
    chosen = rng.choice(differ, size=len(differ) // 2, replace=False) if len(differ) else differ
    children = parents.copy()
    children[0, chosen] = parents[1, chosen]
    children[1, chosen] = parents[0, chosen]
    return children


@dataclass(frozen=True)
class SbxParams:
    eta: float = 15.0
    prob_per_var: float = 0.5

    def __post_init__(self):
        if self.eta <= 0:
            raise ContractError("SBX distribution index must be positive")
        if not 0.0 <= self.prob_per_var <= 1.0:
            raise ContractError("prob_per_var must lie in [0, 1]")


def sbx_spread(u, eta: float):
    u = np.asarray(u, dtype=float)
    expo = 1.0 / (eta + 1.0)
    low = np.power(2.0 * u, expo)
    with np.errstate(divide="ignore"):
        high = np.power(1.0 / (2.0 * (1.0 - u)), expo)
    return np.where(u <= 0.5, low, high)


def sbx_children(p1, p2, u, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Unclamped SBX offspring for spread draws ``u``; their mean equals the parents' mean."""
    beta = sbx_spread(u, eta)
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return c1, c2


def crossover_sbx(
    parents: np.ndarray,
    params: SbxParams,
    bounds: tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator,
    clamp: bool = True,
) -> np.ndarray:
    parents = np.asarray(parents, dtype=float)
    n_var = parents.shape[1]
    lower, upper = (np.broadcast_to(np.asarray(b, dtype=float), (n_var,)) for b in bounds)
    active = rng.random(n_var) < params.prob_per_var
    u = rng.random(n_var)
    c1, c2 = sbx_children(parents[0], parents[1], u, params.eta)
    # which child receives which value is random per variable
    swap = rng.random(n_var) < 0.5
    c1, c2 = np.where(swap, c2, c1), np.where(swap, c1, c2)
    children = parents.copy()
    children[0, active] = c1[active]
    children[1, active] = c2[active]
    if clamp:
        children = np.clip(children, lower, upper)
    return children


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.where(x >= 0, np.floor(x + 0.5), np.ceil(x - 0.5))


def crossover_sbx_int(
    parents: np.ndarray, params: SbxParams, bounds: tuple[np.ndarray, np.ndarray], rng: np.random.Generator
) -> np.ndarray:
    """Integer SBX: recombine on [L - 0.5, U + 0.5 - eps], round, clamp to [L, U]."""
    n_var = np.asarray(parents).shape[1]
    lower, upper = (np.broadcast_to(np.asarray(b, dtype=float), (n_var,)) for b in bounds)
    widened = (lower - 0.5, upper + 0.5 - INT_EPS)
    children = crossover_sbx(parents, params, widened, rng)
    return np.clip(_round_half_away(children), lower, upper)


# --- mutation -------------------------------------------------------------------


@dataclass(frozen=True)
class PolyMutationParams:
    eta_m: float = 20.0
    prob_per_var: float | None = None  # None means 1 / n_var

    def __post_init__(self):
        if self.eta_m <= 0:
            raise ContractError("polynomial mutation index must be positive")
        if self.prob_per_var is not None and not 0.0 <= self.prob_per_var <= 1.0:
            raise ContractError("prob_per_var must lie in [0, 1]")


def polynomial_delta(u, x, lower, upper, eta_m: float):
    """Boundary-aware polynomial perturbation, as a fraction of the variable range."""
    u = np.asarray(u, dtype=float)
    span = np.asarray(upper, dtype=float) - np.asarray(lower, dtype=float)
    d1 = (np.asarray(x, dtype=float) - lower) / span
    d2 = (upper - np.asarray(x, dtype=float)) / span
    expo = 1.0 / (eta_m + 1.0)
    left = 2.0 * u + (1.0 - 2.0 * u) * np.power(1.0 - d1, eta_m + 1.0)
    right = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * np.power(1.0 - d2, eta_m + 1.0)
    return np.where(u <= 0.5, np.power(left, expo) - 1.0, 1.0 - np.power(right, expo))


def mutate_polynomial(
    x: np.ndarray,
    params: PolyMutationParams,
    bounds: tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator,
    integer: bool = False,
) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n_var = x.shape[-1]
    lower, upper = (np.broadcast_to(np.asarray(b, dtype=float), (n_var,)) for b in bounds)
    lo, hi = (lower - 0.5, upper + 0.5 - INT_EPS) if integer else (lower, upper)
    prob = 1.0 / n_var if params.prob_per_var is None else params.prob_per_var
    selected = rng.random(x.shape) < prob
    u = rng.random(x.shape)
    delta = polynomial_delta(u, np.clip(x, lo, hi), lo, hi, params.eta_m)
    y = np.where(selected, np.clip(x + delta * (hi - lo), lo, hi), x)
    if integer:
        y = np.clip(_round_half_away(y), lower, upper)
    return y


def mutate_bitflip(x: np.ndarray, prob: float, rng: np.random.Generator) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    flip = rng.random(x.shape) < prob
    return np.where(flip, 1.0 - x, x)


# --- selection ------------------------------------------------------------------

Comparator = Callable[[Population, int, int], "int | None"]


def compare_nsga2(pop: Population, a: int, b: int) -> int | None:
    """Lower CV, then lower rank, then larger crowding distance; None on a tie."""
    if pop.cv[a] != pop.cv[b]:
        return a if pop.cv[a] < pop.cv[b] else b
    if pop.rank[a] != pop.rank[b]:
        return a if pop.rank[a] < pop.rank[b] else b
    ca, cb = pop.crowding[a], pop.crowding[b]
    if ca != cb and not (np.isnan(ca) or np.isnan(cb)):
        return a if ca > cb else b
    return None


def compare_fitness(pop: Population, a: int, b: int) -> int | None:
    """Lower CV, then lower single objective value; None on a tie."""
    if pop.cv[a] != pop.cv[b]:
        return a if pop.cv[a] < pop.cv[b] else b
    fa, fb = pop.F[a, 0], pop.F[b, 0]
    if fa != fb:
        return a if fa < fb else b
    return None


def tournament_select(
    pop: Population, n_pairs: int, compare: Comparator, rng: np.random.Generator
) -> np.ndarray:
    """Binary tournaments producing ``n_pairs`` parent index pairs; ties are random."""
    n = len(pop)
    if n == 0:
        raise ContractError("cannot select from an empty population")
    contestants = rng.integers(0, n, size=(2 * n_pairs, 2))
    coins = rng.random(2 * n_pairs)
    winners = np.empty(2 * n_pairs, dtype=int)
    for k, (a, b) in enumerate(contestants):
        w = compare(pop, int(a), int(b))
        if w is None:
            w = int(a) if coins[k] < 0.5 else int(b)
        winners[k] = w
    return winners.reshape(n_pairs, 2)


# --- plug-and-play bindings ---------------------------------------------------


@dataclass(frozen=True)
class Sampling:
    kind: str = "random"

    def __call__(self, problem: Problem, n: int, rng) -> np.ndarray:
        if self.kind == "random":
            return sample_random(problem, n, rng)
        if self.kind == "lhs":
            return sample_lhs(problem, n, rng)
        raise ContractError(f"unknown sampling {self.kind!r}")


CROSSOVER_KINDS = ("sbx", "sbx_int", "one_point", "two_point", "ux", "hux")


@dataclass(frozen=True)
class Crossover:
    """Pairwise crossover applied with probability ``prob`` per mating."""

    kind: str = "sbx"
    prob: float = 0.9
    eta: float = 15.0
    prob_per_var: float = 0.5

    def __post_init__(self):
        if self.kind not in CROSSOVER_KINDS:
            raise ContractError(f"unknown crossover {self.kind!r}")

    def __call__(self, problem: Problem, parents: np.ndarray, rng) -> np.ndarray:
        if rng.random() >= self.prob:
            return np.array(parents, dtype=float)
        bounds = (problem.lower, problem.upper)
        if self.kind == "sbx":
            return crossover_sbx(parents, SbxParams(self.eta, self.prob_per_var), bounds, rng)
        if self.kind == "sbx_int":
            return crossover_sbx_int(parents, SbxParams(self.eta, self.prob_per_var), bounds, rng)
        if self.kind in ("one_point", "two_point"):
            return crossover_point(parents, self.kind, rng)
        if self.kind == "ux":
            return crossover_ux(parents, rng)
        return crossover_hux(parents, rng)


@dataclass(frozen=True)
class Mutation:
    kind: str = "polynomial"
    eta: float = 20.0
    prob: float | None = None  # per variable; None means 1 / n_var

    def __post_init__(self):
        if self.kind not in ("polynomial", "polynomial_int", "bitflip", "none"):
            raise ContractError(f"unknown mutation {self.kind!r}")

    def __call__(self, problem: Problem, X: np.ndarray, rng) -> np.ndarray:
        if self.kind == "none":
            return np.array(X, dtype=float)
        if self.kind == "bitflip":
            prob = 1.0 / problem.n_var if self.prob is None else self.prob
            return mutate_bitflip(X, prob, rng)
        params = PolyMutationParams(self.eta, self.prob)
        return mutate_polynomial(
            X, params, (problem.lower, problem.upper), rng, integer=self.kind == "polynomial_int"
        )


@dataclass(frozen=True)
class OperatorSet:
    sampling: Sampling = field(default_factory=Sampling)
    crossover: Crossover = field(default_factory=Crossover)
    mutation: Mutation = field(default_factory=Mutation)

    @classmethod
    def defaults_for(cls, problem: Problem) -> "OperatorSet":
        if problem.var_kind is VarKind.BINARY:
            return cls(Sampling("random"), Crossover("two_point"), Mutation("bitflip"))
        if problem.var_kind is VarKind.INTEGER:
            return cls(Sampling("random"), Crossover("sbx_int", eta=3.0), Mutation("polynomial_int"))
        return cls()
