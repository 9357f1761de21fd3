"""Forward-mode automatic differentiation with vector-seeded dual numbers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import FormulaProblem, Problem


class GradientsUnavailable(TypeError):
    pass


class Dual:
    """Scalar value carrying a gradient vector with respect to all seeds at once.

    Supports arithmetic operators and the numpy ufuncs used by built-in
    problem formulas (sqrt, exp, log, sin, cos, power, square).
    """

    __slots__ = ("value", "partials")

    def __init__(self, value: float, partials):
        self.value = float(value)
        self.partials = np.asarray(partials, dtype=float)

    @classmethod
    def variables(cls, x: Iterable[float]) -> list["Dual"]:
        x = np.asarray(list(x), dtype=float)
        eye = np.eye(len(x))
        return [cls(v, eye[i]) for i, v in enumerate(x)]

    def _lift(self, other) -> "Dual":
        if isinstance(other, Dual):
            return other
        return Dual(float(other), np.zeros_like(self.partials))

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.value + o.value, self.partials + o.partials)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Dual(self.value - o.value, self.partials - o.partials)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(self.value * o.value, self.value * o.partials + o.value * self.partials)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return Dual(
            self.value / o.value,
            (self.partials * o.value - self.value * o.partials) / (o.value * o.value),
        )

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __neg__(self):
        return Dual(-self.value, -self.partials)

    def __pos__(self):
        return self

    def __pow__(self, other):
        if isinstance(other, Dual):
            # a**b = exp(b log a)
            return (other * self.log()).exp()
        p = float(other)
        if p == 0.0:
            return Dual(1.0, np.zeros_like(self.partials))
        return Dual(self.value**p, p * self.value ** (p - 1.0) * self.partials)

    def __rpow__(self, other):
        base = float(other)
        v = base**self.value
        return Dual(v, v * np.log(base) * self.partials)

    def sqrt(self):
        r = np.sqrt(self.value)
        return Dual(r, self.partials / (2.0 * r))

    def exp(self):
        e = np.exp(self.value)
        return Dual(e, e * self.partials)

    def log(self):
        return Dual(np.log(self.value), self.partials / self.value)

    def sin(self):
        return Dual(np.sin(self.value), np.cos(self.value) * self.partials)

    def cos(self):
        return Dual(np.cos(self.value), -np.sin(self.value) * self.partials)

    _UFUNCS = {
        np.add: lambda a, b: a + b,
        np.subtract: lambda a, b: a - b,
        np.multiply: lambda a, b: a * b,
        np.true_divide: lambda a, b: a / b,
        np.power: lambda a, b: a**b,
        np.negative: lambda a: -a,
        np.positive: lambda a: a,
        np.square: lambda a: a * a,
        np.sqrt: lambda a: a.sqrt(),
        np.exp: lambda a: a.exp(),
        np.log: lambda a: a.log(),
        np.sin: lambda a: a.sin(),
        np.cos: lambda a: a.cos(),
    }

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs or ufunc not in self._UFUNCS:
            return NotImplemented
        args = [a if isinstance(a, Dual) else self._lift(a) for a in inputs]
        return self._UFUNCS[ufunc](*args)

    def __float__(self):
        return self.value

    def __repr__(self) -> str:
        return f"Dual({self.value!r}, {self.partials.tolist()!r})"


@dataclass
class GradientBundle:
    """Jacobians of objectives (``dF``, M x N) and inequalities (``dG``, J x N)."""

    dF: np.ndarray | None = None
    dG: np.ndarray | None = None


def _jacobian(outputs: list, n_var: int) -> np.ndarray:
    rows = []
    for out in outputs:
        if isinstance(out, Dual):
            rows.append(out.partials)
        else:
            rows.append(np.zeros(n_var))
    return np.array(rows, dtype=float).reshape(len(outputs), n_var)


def gradients(problem: Problem, x, want: Iterable[str] = ("dF",)) -> GradientBundle:
    """Exact first derivatives of a differentiable problem at ``x``.

    Only the requested blocks are computed; asking for ``dF`` alone never
    touches the constraint formulas.
    """
    want = set(want)
    if not want <= {"dF", "dG"}:
        raise ValueError(f"unknown gradient request {sorted(want - {'dF', 'dG'})}")
    if not (problem.differentiable and isinstance(problem, FormulaProblem)):
        raise GradientsUnavailable(f"gradients unavailable for {problem.name}")
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n_var,):
        raise ValueError(f"x must have shape ({problem.n_var},), got {x.shape}")

    duals = Dual.variables(x)
    bundle = GradientBundle()
    if "dF" in want:
        bundle.dF = _jacobian(problem.objectives(duals), problem.n_var)
    if "dG" in want:
        bundle.dG = _jacobian(problem.inequalities(duals), problem.n_var)
    return bundle


def finite_difference_oracle(
    problem: Problem, x, h: float = 1e-6, want: Iterable[str] = ("dF", "dG")
) -> GradientBundle:
    """Central-difference Jacobians computed through the ordinary evaluation path.

    If ``x +- h`` leaves the box for some coordinate, that coordinate of the
    expansion point is shifted inward by the missing amount.
    """
    want = set(want)
    x = np.array(x, dtype=float)
    x = np.clip(x, problem.lower + h, problem.upper - h)
    n = problem.n_var
    plus = x + h * np.eye(n)
    minus = x - h * np.eye(n)
    Fp, Gp, _ = problem.evaluate(plus)
    Fm, Gm, _ = problem.evaluate(minus)
    bundle = GradientBundle()
    if "dF" in want:
        bundle.dF = ((Fp - Fm) / (2.0 * h)).T
    if "dG" in want:
        bundle.dG = ((Gp - Gm) / (2.0 * h)).T
    return bundle
