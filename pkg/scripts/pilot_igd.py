"""IGD of the Getting Started run (demo problem, pop 40, 10 offspring, 40 generations) per seed.

Prints one line per seed and the share of seeds below the 0.01 threshold,
together with the chance that 10 independent seeds give at least 9 hits
at that rate.

Usage: python scripts/pilot_igd.py --first 1000 --count 150
"""

import argparse

import numpy as np
from scipy.stats import binom

from paretokit.indicators import igd
from paretokit.moea import AlgorithmConfig, run
from paretokit.problems import analytic_front, make_problem
from paretokit.termination import MaxGen


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--first", type=int, default=1000)
    parser.add_argument("--count", type=int, default=150)
    parser.add_argument("--threshold", type=float, default=0.01)
    args = parser.parse_args()

    problem = make_problem("demo")
    front = analytic_front(problem, 500)
    values = []
    for seed in range(args.first, args.first + args.count):
        res = run(problem, "nsga2", AlgorithmConfig(pop_size=40, n_offsprings=10, seed=seed), MaxGen(40))
        values.append(igd(res.F, front))
        print(f"seed={seed} n_eval={res.n_eval} igd={values[-1]:.5f}")

    values = np.array(values)
    rate = float(np.mean(values < args.threshold))
    print(f"median igd {np.median(values):.5f}, below {args.threshold}: {rate:.3f}")
    print(f"P(at least 9 of 10 seeds) at this rate: {binom.sf(8, 10, rate):.3f}")


if __name__ == "__main__":
    main()
