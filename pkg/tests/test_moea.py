import io

import numpy as np
import pytest
from conftest import IntegerSphere, OneMax
from oracles import brute_force_fronts
from hypothesis import given
from hypothesis import strategies as st

from paretokit.core import ContractError, Dominance, Evaluator, Individual, Population, constrained_dominates
from paretokit.moea import (
    AlgorithmConfig,
    AlgorithmState,
    crowding_distance,
    eliminate_duplicates,
    fast_nondominated_sort,
    ga_step,
    initialize,
    nsga2_step,
    nsga2_survival,
    ga_survival,
    run,
)
from paretokit.operators import make_rng
from paretokit.problems import make_problem
from paretokit.termination import MaxGen


def random_population(rng, n, m, infeasible=0.2):
    F = rng.integers(0, 6, size=(n, m)).astype(float) if rng.random() < 0.5 else rng.random((n, m))
    cv = np.where(rng.random(n) < infeasible, rng.integers(1, 4, n) / 2.0, 0.0)
    return F, cv


def make_pop(F, cv=None):
    F = np.asarray(F, dtype=float)
    n = len(F)
    return Population(
        X=np.arange(n, dtype=float)[:, None], F=F, G=np.zeros((n, 0)), H=np.zeros((n, 0)),
        cv=np.zeros(n) if cv is None else np.asarray(cv, dtype=float),
    )


class TestSorting:
    def test_examples(self):
        assert fast_nondominated_sort([[1, 2], [2, 1], [3, 3]]) == [[0, 1], [2]]
        assert fast_nondominated_sort(np.ones((4, 2))) == [[0, 1, 2, 3]]
        fronts = fast_nondominated_sort([[5, 5], [0, 0], [6, 6]], cv=[0, 1.0, 0])
        rank = {i: r for r, fr in enumerate(fronts) for i in fr}
        assert rank[1] > max(rank[0], rank[2])

    def test_all_infeasible_orders_by_cv(self):
        fronts = fast_nondominated_sort(np.zeros((3, 2)), cv=[0.3, 0.1, 0.2])
        assert fronts == [[1], [2], [0]]

    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 40), m=st.integers(1, 5))
    def test_matches_brute_force(self, seed, n, m):
        rng = np.random.default_rng(seed)
        F, cv = random_population(rng, n, m)
        assert fast_nondominated_sort(F, cv) == brute_force_fronts(F, cv)


class TestCrowding:
    def test_examples(self):
        assert crowding_distance(np.array([[0.0, 2], [1, 1], [2, 0]])).tolist() == [np.inf, 2.0, np.inf]
        assert crowding_distance(np.array([[1.0, 1]])).tolist() == [np.inf]
        assert crowding_distance(np.array([[1.0, 1], [0, 2]])).tolist() == [np.inf, np.inf]

    def test_zero_range_objective(self):
        cd = crowding_distance(np.array([[0.0, 1], [1, 1], [3, 1]]))
        assert cd[1] == pytest.approx(1.0)


class TestSurvival:
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 30), m=st.integers(1, 3))
    def test_elitism_brute_force(self, seed, n, m):
        rng = np.random.default_rng(seed)
        F, cv = random_population(rng, n, m)
        k = int(rng.integers(1, n + 1))
        survivors = nsga2_survival(make_pop(F, cv), k)
        assert len(survivors) == k
        D = np.array([[constrained_dominates(Individual(None, F[i], None, None, cv[i]),
                                             Individual(None, F[j], None, None, cv[j])) is Dominance.A_DOMINATES
                       for j in range(n)] for i in range(n)])
        for idx in survivors.X[:, 0].astype(int):
            assert D[:, idx].sum() < k

    def test_last_front_by_descending_crowding(self):
        F = np.array([[0.0, 4], [1, 3], [1.5, 2.5], [3, 1], [4, 0]])
        # interior crowding: 0.75, 1.0, 1.25 -> index 1 is the most crowded
        np.testing.assert_allclose(crowding_distance(F)[1:4], [0.75, 1.0, 1.25])
        out = nsga2_survival(make_pop(F), 4)
        assert sorted(out.X[:, 0].astype(int)) == [0, 2, 3, 4]

    def test_ga_survival_order(self):
        out = ga_survival(make_pop([[3.0], [1.0], [0.0], [2.0]], cv=[0, 0, 1, 0]), 3)
        assert out.X[:, 0].tolist() == [1, 3, 0]


class TestDuplicates:
    def test_examples(self):
        existing = np.array([[0.0, 0.0]])
        assert len(eliminate_duplicates(np.array([[0.0, 0.0]]), existing)) == 0
        assert len(eliminate_duplicates(np.array([[1.0, 1.0], [1.0, 1.0]]), existing)) == 1
        assert len(eliminate_duplicates(np.array([[1.0, 0.0], [2.0, 0.0]]), existing, tol=1e-16)) == 2

    def test_tolerance(self):
        c = np.array([[0.0], [0.05], [0.3]])
        assert eliminate_duplicates(c, None, tol=0.1).ravel().tolist() == [0.0, 0.3]

    def test_binary_population_has_no_duplicates(self):
        res = run(OneMax(6), "ga", AlgorithmConfig(pop_size=20, seed=0), MaxGen(15))
        X = res.pop.X
        assert len(np.unique(X, axis=0)) == len(X)
        assert res.F[0, 0] == 0


class TestSteps:
    def setup_problem(self, n_off, dup=True):
        p = make_problem("demo")
        cfg = AlgorithmConfig(pop_size=20, n_offsprings=n_off, seed=0, eliminate_duplicates=dup)
        ev = Evaluator(p)
        rng = make_rng(0)
        return cfg, ev, rng, initialize(p, cfg, ev, rng, nsga2_survival)

    @pytest.mark.parametrize("n_off", [1, 7, 20, 35])
    def test_bookkeeping(self, n_off):
        cfg, ev, rng, state = self.setup_problem(n_off)
        for g in range(1, 6):
            before = ev.n_eval
            state = nsga2_step(state, cfg, ev, rng)
            assert state.n_gen == g
            assert ev.n_eval - before == n_off
            assert len(state.pop) == 20

    def test_full_replacement_without_duplicate_check(self):
        cfg, ev, rng, state = self.setup_problem(20, dup=False)
        for _ in range(10):
            state = nsga2_step(state, cfg, ev, rng)
            assert len(state.pop) == 20

    def test_nsga2_front_never_regresses(self):
        cfg, ev, rng, state = self.setup_problem(10, dup=False)
        for _ in range(25):
            old = state.pop
            old_front = old.take([i for i in fast_nondominated_sort(old.F, old.cv)[0] if old.cv[i] == 0])
            state = nsga2_step(state, cfg, ev, rng)
            new = state.pop
            new_front = new.take([i for i in fast_nondominated_sort(new.F, new.cv)[0] if new.cv[i] == 0])
            if len(old_front):
                assert len(new_front)
            for a in old_front:
                for b in new_front:
                    assert constrained_dominates(a, b) is not Dominance.A_DOMINATES

    def test_ga_best_never_regresses(self):
        p = make_problem("rastrigin", n_var=4)
        cfg = AlgorithmConfig(pop_size=10, seed=2, eliminate_duplicates=False)
        ev, rng = Evaluator(p), make_rng(2)
        state = initialize(p, cfg, ev, rng, ga_survival)
        best = state.pop.F[:, 0].min()
        for _ in range(30):
            state = ga_step(state, cfg, ev, rng)
            assert state.pop.F[:, 0].min() <= best
            best = state.pop.F[:, 0].min()

    def test_state_type(self):
        *_, state = self.setup_problem(5)
        assert isinstance(state, AlgorithmState) and state.n_gen == 0 and state.prev_pop is None


class TestRun:
    def test_getting_started_budget(self):
        res = run(make_problem("demo"), "nsga2", AlgorithmConfig(40, 10, seed=1), MaxGen(40))
        assert res.n_eval == 440 and res.n_gen == 40

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_final_set_properties(self, seed):
        res = run(make_problem("demo"), "nsga2", AlgorithmConfig(40, 10, seed=seed), MaxGen(20))
        assert np.all(res.final.cv == 0)
        for a in res.final:
            for b in res.final:
                assert constrained_dominates(a, b) is not Dominance.A_DOMINATES

    def test_ga_on_sphere(self):
        res = run(make_problem("sphere", n_var=5), "ga", AlgorithmConfig(pop_size=20, seed=1), MaxGen(200))
        assert len(res.final) == 1 and res.F[0, 0] < 1e-3

    def test_integer_ga(self):
        res = run(IntegerSphere(), "ga", AlgorithmConfig(pop_size=20, seed=0), MaxGen(40))
        assert res.F[0, 0] == 0 and res.X[0].tolist() == [7, 7, 7]

    def test_same_seed_same_result(self):
        a = run(make_problem("zdt1", n_var=8), "nsga2", AlgorithmConfig(30, seed=5), MaxGen(10))
        b = run(make_problem("zdt1", n_var=8), "nsga2", AlgorithmConfig(30, seed=5), MaxGen(10))
        assert np.array_equal(a.pop.X, b.pop.X) and np.array_equal(a.F, b.F)

    def test_history_and_verbose(self, tmp_path):
        log = io.StringIO()
        res = run(make_problem("demo"), "nsga2", AlgorithmConfig(12, 4, seed=0), MaxGen(3),
                  verbose=True, save_history=True, history_dir=tmp_path, log=log)
        lines = log.getvalue().splitlines()
        assert len(res.history) == 4 and len(lines) == 4
        assert lines[0].startswith("gen=0 evals=12 igd=")
        assert lines[-1].startswith("gen=3 evals=24")
        assert sorted(p.name for p in tmp_path.iterdir()) == [f"gen_{g:04d}.csv" for g in range(4)]

    def test_eval_cap_guards_endless_runs(self):
        class Never(MaxGen):
            def should_stop(self, state):
                return False

        res = run(make_problem("sphere"), "ga", AlgorithmConfig(pop_size=10, eval_cap=100, seed=0), Never(0))
        assert res.n_eval >= 100 and res.n_eval < 120

    def test_contract_errors(self):
        with pytest.raises(ContractError):
            run(make_problem("demo"), "ga")
        with pytest.raises(ContractError):
            run(make_problem("demo"), "moead")
        with pytest.raises(ContractError):
            AlgorithmConfig(pop_size=0)
