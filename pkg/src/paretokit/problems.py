"""Built-in test problems and their analytic Pareto fronts.

Formulas follow the standard literature definitions of the ZDT suite and
the classic single-objective benchmarks. Each problem is written column-wise
(see :class:`paretokit.core.FormulaProblem`) so it is differentiable with
dual numbers.
"""

from __future__ import annotations

import numpy as np

from .core import ContractError, FormulaProblem, Problem


class UnknownProblem(ContractError):
    pass


class NoAnalyticFront(ContractError):
    pass


class DemoBiObjective(FormulaProblem):
    """Two-variable, two-constraint demo problem in normalized minimization form.

    f1 = x1^2 + x2^2, f2 = (x1 - 1)^2 + x2^2,
    g1 = 2 (x1 - 0.1)(x1 - 0.9) / 0.18 <= 0,
    g2 = -20 (x1 - 0.4)(x1 - 0.6) / 4.8 <= 0, on [-2, 2]^2.
    """

    def __init__(self):
        super().__init__(n_var=2, n_obj=2, n_ieq=2, lower=-2.0, upper=2.0, name="demo")

    def objectives(self, x):
        x1, x2 = x
        return [x1 * x1 + x2 * x2, (x1 - 1.0) * (x1 - 1.0) + x2 * x2]

    def inequalities(self, x):
        x1 = x[0]
        return [
            2.0 * (x1 - 0.1) * (x1 - 0.9) / 0.18,
            -20.0 * (x1 - 0.4) * (x1 - 0.6) / 4.8,
        ]

    def pareto_front(self, n_points: int) -> np.ndarray:
        # Pareto set: x2 = 0, x1 in [0.1, 0.4] or [0.6, 0.9]; both pieces have equal length.
        n_left = (n_points + 1) // 2
        x1 = np.concatenate([np.linspace(0.1, 0.4, n_left), np.linspace(0.6, 0.9, n_points - n_left)])
        return np.column_stack([x1**2, (x1 - 1.0) ** 2])


class _ZDT(FormulaProblem):
    default_n_var = 30

    def __init__(self, n_var: int | None = None):
        n_var = self.default_n_var if n_var is None else n_var
        if n_var < 2:
            raise ContractError("ZDT problems need at least 2 variables")
        lower, upper = self._bounds(n_var)
        super().__init__(n_var=n_var, n_obj=2, lower=lower, upper=upper, name=type(self).__name__.lower())

    def _bounds(self, n_var):
        return 0.0, 1.0

    def _g(self, x):
        return 1.0 + 9.0 * sum(x[1:]) / (len(x) - 1)


class ZDT1(_ZDT):
    def objectives(self, x):
        f1 = x[0]
        g = self._g(x)
        return [f1, g * (1.0 - np.sqrt(f1 / g))]

    def pareto_front(self, n_points):
        f1 = np.linspace(0.0, 1.0, n_points)
        return np.column_stack([f1, 1.0 - np.sqrt(f1)])


class ZDT2(_ZDT):
    def objectives(self, x):
        f1 = x[0]
        g = self._g(x)
        return [f1, g * (1.0 - (f1 / g) ** 2)]

    def pareto_front(self, n_points):
        f1 = np.linspace(0.0, 1.0, n_points)
        return np.column_stack([f1, 1.0 - f1**2])


# Non-dominated f1 intervals of the ZDT3 front. Left ends are rounded up so that
# no segment start is weakly dominated by the previous segment's end.
ZDT3_SEGMENTS = (
    (0.0, 0.0830015349),
    (0.1822287281, 0.2577623634),
    (0.4093136749, 0.4538821041),
    (0.6183967945, 0.6525117038),
    (0.8233317984, 0.8518328654),
)


class ZDT3(_ZDT):
    def objectives(self, x):
        f1 = x[0]
        g = self._g(x)
        r = f1 / g
        return [f1, g * (1.0 - np.sqrt(r) - r * np.sin(10.0 * np.pi * f1))]

    @staticmethod
    def front_f2(f1):
        return 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)

    def pareto_front(self, n_points):
        lengths = np.array([b - a for a, b in ZDT3_SEGMENTS])
        # Largest-remainder split keeps at least one point per segment.
        counts = np.maximum(1, np.floor(lengths / lengths.sum() * n_points).astype(int))
        while counts.sum() < n_points:
            counts[np.argmax(lengths / counts)] += 1
        while counts.sum() > n_points:
            counts[np.argmax(counts)] -= 1
        f1 = np.concatenate(
            [np.linspace(a, b, c) if c > 1 else np.array([a]) for (a, b), c in zip(ZDT3_SEGMENTS, counts) if c > 0]
        )
        F = np.column_stack([f1, self.front_f2(f1)])
        return _drop_dominated(F)


class ZDT4(_ZDT):
    default_n_var = 10

    def _bounds(self, n_var):
        lower = np.full(n_var, -5.0)
        upper = np.full(n_var, 5.0)
        lower[0], upper[0] = 0.0, 1.0
        return lower, upper

    def _g(self, x):
        return 1.0 + 10.0 * (len(x) - 1) + sum(xi * xi - 10.0 * np.cos(4.0 * np.pi * xi) for xi in x[1:])

    def objectives(self, x):
        f1 = x[0]
        g = self._g(x)
        return [f1, g * (1.0 - np.sqrt(f1 / g))]

    def pareto_front(self, n_points):
        return ZDT1.pareto_front(self, n_points)


class ZDT6(_ZDT):
    default_n_var = 10
    F1_MIN = 0.2807753191

    def _g(self, x):
        return 1.0 + 9.0 * (sum(x[1:]) / (len(x) - 1)) ** 0.25

    def objectives(self, x):
        x1 = x[0]
        s = np.sin(6.0 * np.pi * x1)
        s2 = s * s
        f1 = 1.0 - np.exp(-4.0 * x1) * s2 * s2 * s2
        g = self._g(x)
        return [f1, g * (1.0 - (f1 / g) ** 2)]

    def pareto_front(self, n_points):
        f1 = np.linspace(self.F1_MIN, 1.0, n_points)
        return np.column_stack([f1, 1.0 - f1**2])


class _SingleObjective(FormulaProblem):
    bounds = (-5.0, 5.0)
    default_n_var = 10

    def __init__(self, n_var: int | None = None):
        n_var = self.default_n_var if n_var is None else n_var
        super().__init__(n_var=n_var, n_obj=1, lower=self.bounds[0], upper=self.bounds[1],
                         name=type(self).__name__.lower())


class Sphere(_SingleObjective):
    bounds = (-5.12, 5.12)

    def objectives(self, x):
        return [sum(xi * xi for xi in x)]


class Rastrigin(_SingleObjective):
    bounds = (-5.12, 5.12)

    def objectives(self, x):
        return [10.0 * len(x) + sum(xi * xi - 10.0 * np.cos(2.0 * np.pi * xi) for xi in x)]


class Rosenbrock(_SingleObjective):
    bounds = (-2.048, 2.048)

    def objectives(self, x):
        return [
            sum(100.0 * (x[i + 1] - x[i] * x[i]) ** 2 + (1.0 - x[i]) ** 2 for i in range(len(x) - 1))
        ]


class Ackley(_SingleObjective):
    bounds = (-32.768, 32.768)

    def objectives(self, x):
        n = len(x)
        mean_sq = sum(xi * xi for xi in x) / n
        mean_cos = sum(np.cos(2.0 * np.pi * xi) for xi in x) / n
        return [-20.0 * np.exp(-0.2 * np.sqrt(mean_sq)) - np.exp(mean_cos) + 20.0 + np.e]


class Zakharov(_SingleObjective):
    bounds = (-5.0, 10.0)

    def objectives(self, x):
        s1 = sum(xi * xi for xi in x)
        s2 = sum(0.5 * (i + 1) * xi for i, xi in enumerate(x))
        return [s1 + s2**2 + s2**4]


class Himmelblau(FormulaProblem):
    def __init__(self):
        super().__init__(n_var=2, n_obj=1, lower=-5.0, upper=5.0, name="himmelblau")

    def objectives(self, x):
        x1, x2 = x
        return [(x1 * x1 + x2 - 11.0) ** 2 + (x1 + x2 * x2 - 7.0) ** 2]


PROBLEMS: dict[str, type[Problem]] = {
    "demo": DemoBiObjective,
    "zdt1": ZDT1,
    "zdt2": ZDT2,
    "zdt3": ZDT3,
    "zdt4": ZDT4,
    "zdt6": ZDT6,
    "sphere": Sphere,
    "rastrigin": Rastrigin,
    "rosenbrock": Rosenbrock,
    "ackley": Ackley,
    "himmelblau": Himmelblau,
    "zakharov": Zakharov,
}

SCALABLE = frozenset(
    {"zdt1", "zdt2", "zdt3", "zdt4", "zdt6", "sphere", "rastrigin", "rosenbrock", "ackley", "zakharov"}
)


def problem_names() -> list[str]:
    return list(PROBLEMS)


def make_problem(name: str, n_var: int | None = None) -> Problem:
    key = name.lower()
    if key not in PROBLEMS:
        raise UnknownProblem(f"unknown problem {name!r}")
    if n_var is not None:
        if key not in SCALABLE:
            raise ContractError(f"problem {name!r} has a fixed number of variables")
        return PROBLEMS[key](n_var)
    return PROBLEMS[key]()


def analytic_front(name: str | Problem, n_points: int) -> np.ndarray:
    """Evenly parameterized sample of a known Pareto front, ``n_points`` x M."""
    if n_points < 2:
        raise ContractError("n_points must be at least 2")
    problem = make_problem(name) if isinstance(name, str) else name
    sampler = getattr(problem, "pareto_front", None)
    if sampler is None:
        raise NoAnalyticFront(f"no analytic front for {problem.name!r}")
    return sampler(n_points)


def _drop_dominated(F: np.ndarray) -> np.ndarray:
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dominated = (le & lt).any(axis=0)
    return F[~dominated]
