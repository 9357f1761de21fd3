"""Stopping rules: evaluation and generation budgets, and movement-based convergence."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .core import ContractError, Population


@dataclass
class RunState:
    """What a termination criterion may look at after each generation."""

    n_gen: int
    n_eval: int
    pop: Population | None = None
    prev_pop: Population | None = None


def movement(current: np.ndarray, previous: np.ndarray) -> float:
    """Largest distance from a current member to its nearest previous member."""
    if len(current) == 0 or len(previous) == 0:
        return 0.0
    return float(cdist(current, previous).min(axis=1).max())


class Termination:
    def should_stop(self, state: RunState) -> bool:
        raise NotImplementedError


@dataclass
class MaxEvals(Termination):
    n: int

    def should_stop(self, state):
        return state.n_eval >= self.n


@dataclass
class MaxGen(Termination):
    """Stops once ``n`` generations have been produced after initialization."""

    n: int

    def should_stop(self, state):
        return state.n_gen >= self.n


@dataclass
class _Movement(Termination):
    tol: float = 0.005
    k: int = 10
    window: deque = field(init=False, repr=False)
    _last_gen: int = field(default=-1, init=False, repr=False)

    def __post_init__(self):
        if self.k < 1 or self.tol < 0:
            raise ContractError("movement criterion needs k >= 1 and tol >= 0")
        self.window = deque(maxlen=self.k)

    def _coords(self, pop: Population) -> np.ndarray:
        raise NotImplementedError

    def should_stop(self, state):
        if state.pop is None or state.prev_pop is None or state.n_gen < 1:
            return False
        if state.n_gen != self._last_gen:
            self._last_gen = state.n_gen
            self.window.append(movement(self._coords(state.pop), self._coords(state.prev_pop)))
        return len(self.window) == self.k and max(self.window) < self.tol


@dataclass
class XMovement(_Movement):
    """Design-space movement with every coordinate divided by its bound range."""

    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def _coords(self, pop):
        if self.lower is None or self.upper is None:
            return pop.X
        return (pop.X - self.lower) / (self.upper - self.lower)


@dataclass
class FMovement(_Movement):
    def _coords(self, pop):
        return pop.F


def make_termination(spec: dict, problem=None) -> Termination:
    """Build a criterion from a config mapping such as ``{"kind": "max_gen", "n": 40}``."""
    kind = spec.get("kind")
    if kind == "max_gen":
        return MaxGen(int(spec["n"]))
    if kind == "max_evals":
        return MaxEvals(int(spec["n"]))
    if kind in ("x_movement", "f_movement"):
        tol = float(spec.get("tol", 0.005))
        k = int(spec.get("k", 10))
        if kind == "f_movement":
            return FMovement(tol, k)
        lower = None if problem is None else problem.lower
        upper = None if problem is None else problem.upper
        return XMovement(tol, k, lower=lower, upper=upper)
    raise ContractError(f"unknown termination kind {kind!r}")
