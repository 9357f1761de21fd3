import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from paretokit.core import ContractError, domination_matrix
from paretokit.problems import (
    PROBLEMS,
    SCALABLE,
    NoAnalyticFront,
    UnknownProblem,
    analytic_front,
    make_problem,
    problem_names,
)


class TestMakeProblem:
    @pytest.mark.parametrize(
        "name, n_var, n_obj, n_ieq",
        [("zdt1", 30, 2, 0), ("zdt2", 30, 2, 0), ("zdt3", 30, 2, 0), ("zdt4", 10, 2, 0), ("zdt6", 10, 2, 0),
         ("demo", 2, 2, 2), ("himmelblau", 2, 1, 0)],
    )
    def test_default_dimensions(self, name, n_var, n_obj, n_ieq):
        p = make_problem(name)
        assert (p.n_var, p.n_obj, p.n_ieq) == (n_var, n_obj, n_ieq)

    def test_scalable_override(self):
        p = make_problem("sphere", n_var=5)
        assert (p.n_var, p.n_obj) == (5, 1)

    def test_unknown_name(self):
        with pytest.raises(UnknownProblem, match="unknown problem"):
            make_problem("dtlz2")

    @pytest.mark.parametrize("name", ["demo", "himmelblau"])
    def test_n_var_rejected_for_fixed_problems(self, name):
        assert name not in SCALABLE
        with pytest.raises(ContractError):
            make_problem(name, n_var=4)

    def test_names_listed_in_order(self):
        assert problem_names() == list(PROBLEMS)
        assert len(problem_names()) == 12

    def test_demo_bounds(self):
        p = make_problem("demo")
        assert p.lower.tolist() == [-2, -2] and p.upper.tolist() == [2, 2]


class TestZdt1Values:
    def test_examples(self):
        p = make_problem("zdt1")
        x = np.zeros((3, 30))
        x[0, 0] = 0.5
        x[2] = 1.0
        F, _, _ = p.evaluate(x)
        np.testing.assert_allclose(F[0], [0.5, 1 - np.sqrt(0.5)], atol=1e-15)
        np.testing.assert_allclose(F[1], [0.0, 1.0], atol=1e-15)
        np.testing.assert_allclose(F[2], [1.0, 10 - np.sqrt(10)], atol=1e-12)

    def test_out_of_bounds_still_evaluated(self):
        F, _, _ = make_problem("zdt1").evaluate(np.full((1, 30), 0.5) * 3)
        assert np.all(np.isfinite(F))


FRONT_EQUATIONS = {
    "zdt1": lambda f1: 1 - np.sqrt(f1),
    "zdt2": lambda f1: 1 - f1**2,
    "zdt3": lambda f1: 1 - np.sqrt(f1) - f1 * np.sin(10 * np.pi * f1),
    "zdt4": lambda f1: 1 - np.sqrt(f1),
}


class TestFronts:
    def test_demo_point(self):
        front = analytic_front("demo", 400)
        # f1 = 0.04 lies in the first segment
        assert np.sqrt(0.04) - 1 == pytest.approx(-0.8)
        sel = front[np.argmin(np.abs(front[:, 0] - 0.04))]
        assert sel[1] == pytest.approx((np.sqrt(sel[0]) - 1) ** 2, abs=1e-15)

    def test_demo_front_equation_and_range(self):
        front = analytic_front("demo", 500)
        np.testing.assert_allclose(front[:, 1], (np.sqrt(front[:, 0]) - 1) ** 2, atol=1e-14)
        f1 = front[:, 0]
        in_range = ((f1 >= 0.01 - 1e-12) & (f1 <= 0.16 + 1e-12)) | ((f1 >= 0.36 - 1e-12) & (f1 <= 0.81 + 1e-12))
        assert in_range.all()

    def test_zdt1_point(self):
        assert FRONT_EQUATIONS["zdt1"](0.25) == 0.5

    @pytest.mark.parametrize("name", ["demo", "zdt1", "zdt2", "zdt3", "zdt4", "zdt6"])
    @pytest.mark.parametrize("n_points", [2, 3, 17, 100])
    def test_size_and_mutual_nondominance(self, name, n_points):
        front = analytic_front(name, n_points)
        assert front.shape == (n_points, 2)
        assert not domination_matrix(front).any()

    @pytest.mark.parametrize("name", list(FRONT_EQUATIONS))
    def test_front_equations(self, name):
        front = analytic_front(name, 200)
        np.testing.assert_allclose(front[:, 1], FRONT_EQUATIONS[name](front[:, 0]), atol=1e-12)

    def test_too_few_points(self):
        with pytest.raises(ContractError):
            analytic_front("zdt1", 1)

    def test_single_objective_has_no_front(self):
        with pytest.raises(NoAnalyticFront, match="no analytic front"):
            analytic_front("sphere", 10)


class TestParetoSets:
    @given(st.one_of(st.floats(0.1, 0.4), st.floats(0.6, 0.9)))
    def test_demo_pareto_set_maps_onto_front(self, x1):
        F, G, _ = make_problem("demo").evaluate(np.array([[x1, 0.0]]))
        assert np.all(G <= 0)
        assert F[0, 1] == pytest.approx((np.sqrt(F[0, 0]) - 1) ** 2, abs=1e-12)

    @pytest.mark.parametrize("name", ["zdt1", "zdt2", "zdt3"])
    @given(x1=st.floats(0, 1))
    def test_zdt_g_equals_one(self, name, x1):
        x = np.zeros((1, 30))
        x[0, 0] = x1
        F, _, _ = make_problem(name).evaluate(x)
        assert F[0, 0] == x1
        assert F[0, 1] == pytest.approx(FRONT_EQUATIONS[name](x1), abs=1e-12)


class TestSingleObjectiveOptima:
    @pytest.mark.parametrize(
        "name, x_star",
        [("sphere", 0.0), ("rastrigin", 0.0), ("ackley", 0.0), ("zakharov", 0.0), ("rosenbrock", 1.0)],
    )
    @pytest.mark.parametrize("n_var", [2, 5, 10])
    def test_scalable_optimum(self, name, x_star, n_var):
        p = make_problem(name, n_var=n_var)
        F, _, _ = p.evaluate(np.full((1, n_var), x_star))
        assert abs(F[0, 0]) <= 1e-9

    def test_himmelblau(self):
        F, _, _ = make_problem("himmelblau").evaluate(np.array([[3.0, 2.0]]))
        assert abs(F[0, 0]) <= 1e-9

    @pytest.mark.parametrize("name", ["sphere", "rastrigin", "ackley", "rosenbrock", "zakharov", "himmelblau"])
    def test_optimum_is_minimal(self, name, rng):
        p = make_problem(name)
        X = p.lower + rng.random((500, p.n_var)) * (p.upper - p.lower)
        F, _, _ = p.evaluate(X)
        assert F.min() >= -1e-12
