"""NSGA-II, a single-objective GA and the shared run loop."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, TextIO

import numpy as np
from scipy.spatial.distance import cdist

from .core import ContractError, Evaluator, Population, Problem, domination_matrix, write_population_csv
from .operators import OperatorSet, compare_fitness, compare_nsga2, make_rng, sample_random, tournament_select
from .termination import MaxGen, RunState, Termination

MAX_MATING_ROUNDS = 100


@dataclass
class AlgorithmConfig:
    pop_size: int = 100
    n_offsprings: int | None = None  # None means pop_size
    operators: OperatorSet | None = None
    eliminate_duplicates: bool = True
    duplicate_tol: float = 1e-16
    seed: int | None = None
    eval_cap: int = 10_000_000

    def __post_init__(self):
        if self.pop_size < 1:
            raise ContractError("pop_size must be positive")
        if self.n_offsprings is None:
            self.n_offsprings = self.pop_size
        if self.n_offsprings < 1:
            raise ContractError("n_offsprings must be positive")


@dataclass
class RunResult:
    """Outcome of :func:`run`.

    ``final`` holds the feasible non-dominated solutions (GA: the single best
    one). When nothing feasible was found it holds the least-violating ones.
    """

    final: Population
    pop: Population
    history: list[Population]
    n_eval: int
    n_gen: int

    @property
    def X(self) -> np.ndarray:
        return self.final.X

    @property
    def F(self) -> np.ndarray:
        return self.final.F


# --- ranking ----------------------------------------------------------------


def fast_nondominated_sort(F: np.ndarray, cv: np.ndarray | None = None) -> list[list[int]]:
    """Partition indices into fronts under feasibility-first dominance."""
    F = np.asarray(F, dtype=float)
    n = F.shape[0]
    if n == 0:
        return []
    D = domination_matrix(F, cv)
    dominated_by_count = D.sum(axis=0)
    fronts = []
    current = [i for i in range(n) if dominated_by_count[i] == 0]
    while current:
        fronts.append(current)
        nxt = []
        for i in current:
            for j in np.flatnonzero(D[i]):
                dominated_by_count[j] -= 1
                if dominated_by_count[j] == 0:
                    nxt.append(int(j))
        current = sorted(nxt)
    return fronts


def crowding_distance(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    n, m = F.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for k in range(m):
        order = np.argsort(F[:, k], kind="stable")
        values = F[order, k]
        span = values[-1] - values[0]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (values[2:] - values[:-2]) / span
    return dist


def rank_and_crowding(pop: Population) -> None:
    """Assign front rank and crowding distance in place."""
    for r, front in enumerate(fast_nondominated_sort(pop.F, pop.cv)):
        pop.rank[front] = r
        pop.crowding[front] = crowding_distance(pop.F[front])


def nsga2_survival(pop: Population, n_survive: int) -> Population:
    fronts = fast_nondominated_sort(pop.F, pop.cv)
    survivors: list[int] = []
    for r, front in enumerate(fronts):
        front = np.asarray(front)
        cd = crowding_distance(pop.F[front])
        pop.rank[front] = r
        pop.crowding[front] = cd
        if len(survivors) + len(front) <= n_survive:
            survivors.extend(front.tolist())
        else:
            # stable sort on descending crowding keeps index order among ties
            order = np.argsort(-cd, kind="stable")
            survivors.extend(front[order[: n_survive - len(survivors)]].tolist())
        if len(survivors) >= n_survive:
            break
    return pop.take(survivors)


def ga_survival(pop: Population, n_survive: int) -> Population:
    """(mu + lambda) truncation by constraint violation, then objective value."""
    order = np.lexsort((pop.F[:, 0], pop.cv))[:n_survive]
    out = pop.take(order)
    out.rank[:] = np.arange(len(out))
    return out


# --- mating -------------------------------------------------------------------


def eliminate_duplicates(candidates: np.ndarray, existing: np.ndarray | None = None, tol: float = 1e-16) -> np.ndarray:
    """Drop candidates closer than ``tol`` to an existing member or an earlier candidate."""
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    if len(candidates) == 0:
        return candidates
    keep = np.ones(len(candidates), dtype=bool)
    if existing is not None and len(existing):
        keep &= cdist(candidates, np.atleast_2d(existing)).min(axis=1) >= tol
    within = cdist(candidates, candidates)
    for i in range(1, len(candidates)):
        if keep[i] and np.any(within[i, :i][keep[:i]] < tol):
            keep[i] = False
    return candidates[keep]


def mate(
    problem: Problem,
    pop: Population,
    n_offsprings: int,
    operators: OperatorSet,
    compare,
    rng: np.random.Generator,
    eliminate: bool = True,
    tol: float = 1e-16,
) -> np.ndarray:
    """Selection, crossover and mutation until ``n_offsprings`` new rows exist.

    With duplicate elimination, mating is repeated for up to 100 rounds; a
    remaining shortfall is filled with fresh random samples.
    """
    offspring = np.zeros((0, problem.n_var))
    for _ in range(MAX_MATING_ROUNDS):
        need = n_offsprings - len(offspring)
        n_pairs = (need + 1) // 2
        pairs = tournament_select(pop, n_pairs, compare, rng)
        children = np.vstack([operators.crossover(problem, pop.X[pair], rng) for pair in pairs])
        children = operators.mutation(problem, children, rng)
        if eliminate:
            children = eliminate_duplicates(children, np.vstack([pop.X, offspring]), tol)
        offspring = np.vstack([offspring, children])[:n_offsprings]
        if len(offspring) >= n_offsprings:
            return offspring
    while len(offspring) < n_offsprings:
        fresh = sample_random(problem, n_offsprings - len(offspring), rng)
        if eliminate:
            fresh = eliminate_duplicates(fresh, np.vstack([pop.X, offspring]), tol)
        offspring = np.vstack([offspring, fresh])
    return offspring


# --- algorithms ---------------------------------------------------------------


@dataclass
class AlgorithmState:
    pop: Population
    n_gen: int = 0
    prev_pop: Population | None = None


def initialize(problem: Problem, config: AlgorithmConfig, evaluator: Evaluator, rng, survival) -> AlgorithmState:
    operators = config.operators or OperatorSet.defaults_for(problem)
    X = operators.sampling(problem, config.pop_size, rng)
    if config.eliminate_duplicates:
        X = eliminate_duplicates(X, None, config.duplicate_tol)
        while len(X) < config.pop_size:
            extra = eliminate_duplicates(sample_random(problem, config.pop_size - len(X), rng), X, config.duplicate_tol)
            X = np.vstack([X, extra])
    pop = evaluator.evaluate_population(X, generation=0)
    pop = survival(pop, config.pop_size)
    return AlgorithmState(pop=pop, n_gen=0)


def _step(state, config, evaluator, rng, survival, compare) -> AlgorithmState:
    problem = evaluator.problem
    operators = config.operators or OperatorSet.defaults_for(problem)
    X = mate(
        problem, state.pop, config.n_offsprings, operators, compare, rng,
        eliminate=config.eliminate_duplicates, tol=config.duplicate_tol,
    )
    n_gen = state.n_gen + 1
    offspring = evaluator.evaluate_population(X, generation=n_gen)
    merged = Population.merge(state.pop, offspring)
    survivors = survival(merged, config.pop_size)
    survivors.generation = n_gen
    return AlgorithmState(pop=survivors, n_gen=n_gen, prev_pop=state.pop)


def nsga2_step(state: AlgorithmState, config: AlgorithmConfig, evaluator: Evaluator, rng) -> AlgorithmState:
    return _step(state, config, evaluator, rng, nsga2_survival, compare_nsga2)


def ga_step(state: AlgorithmState, config: AlgorithmConfig, evaluator: Evaluator, rng) -> AlgorithmState:
    return _step(state, config, evaluator, rng, ga_survival, compare_fitness)


ALGORITHMS: dict[str, tuple[Callable, Callable]] = {
    "nsga2": (nsga2_step, nsga2_survival),
    "ga": (ga_step, ga_survival),
}


def select_final(pop: Population, algorithm: str) -> Population:
    if len(pop) == 0:
        return pop
    feasible = np.flatnonzero(pop.feasible)
    if algorithm == "ga":
        best = int(np.lexsort((pop.F[:, 0], pop.cv))[0])
        return pop.take([best])
    pool = feasible if len(feasible) else np.flatnonzero(pop.cv == pop.cv.min())
    sub = pop.take(pool)
    front = fast_nondominated_sort(sub.F, sub.cv)[0]
    return sub.take(front)


def run(
    problem: Problem,
    algorithm: str = "nsga2",
    config: AlgorithmConfig | None = None,
    termination: Termination | None = None,
    rng: np.random.Generator | None = None,
    evaluator: Evaluator | None = None,
    verbose: bool = False,
    save_history: bool = False,
    history_dir: str | Path | None = None,
    reference_front: np.ndarray | None = None,
    log: TextIO | None = None,
) -> RunResult:
    """Initialize, then step until ``termination`` (or the evaluation cap) says stop.

    Verbose mode writes ``gen=<g> evals=<e>`` per generation, with ``igd=<v>``
    appended for multi-objective runs when a reference front is known.
    """
    if algorithm not in ALGORITHMS:
        raise ContractError(f"unknown algorithm {algorithm!r}")
    if algorithm == "ga" and problem.n_obj != 1:
        raise ContractError("the GA handles single-objective problems only")
    config = config or AlgorithmConfig()
    termination = termination or MaxGen(100)
    rng = rng or make_rng(config.seed)
    evaluator = evaluator or Evaluator(problem)
    log = log or sys.stderr
    step, survival = ALGORITHMS[algorithm]

    if verbose and reference_front is None and problem.n_obj > 1 and hasattr(problem, "pareto_front"):
        reference_front = problem.pareto_front(500)

    history: list[Population] = []
    state = initialize(problem, config, evaluator, rng, survival)

    def record(st: AlgorithmState) -> None:
        if save_history:
            history.append(st.pop)
        if history_dir is not None:
            out = Path(history_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_population_csv(st.pop, out / f"gen_{st.n_gen:04d}.csv")
        if verbose:
            line = f"gen={st.n_gen} evals={evaluator.n_eval}"
            if reference_front is not None and problem.n_obj > 1:
                from .indicators import igd

                line += f" igd={igd(select_final(st.pop, algorithm).F, reference_front):.6g}"
            print(line, file=log)

    record(state)
    while not termination.should_stop(RunState(state.n_gen, evaluator.n_eval, state.pop, state.prev_pop)):
        if evaluator.n_eval >= config.eval_cap:
            break
        state = step(state, config, evaluator, rng)
        record(state)

    return RunResult(
        final=select_final(state.pop, algorithm),
        pop=state.pop,
        history=history,
        n_eval=evaluator.n_eval,
        n_gen=state.n_gen,
    )
