"""Run the two-objective demo with NSGA-II and report what came out.

Usage: python scripts/getting_started.py [--seed 1] [--out out/getting_started]
"""

import argparse
from pathlib import Path

from paretokit.indicators import igd
from paretokit.moea import AlgorithmConfig, run
from paretokit.problems import analytic_front, make_problem
from paretokit.termination import MaxGen
from paretokit.viz import PlotSpec, layout, render_svg


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", default="out/getting_started")
    args = parser.parse_args()

    problem = make_problem("demo")
    config = AlgorithmConfig(pop_size=40, n_offsprings=10, seed=args.seed)
    res = run(problem, "nsga2", config, MaxGen(40), verbose=True)

    front = analytic_front(problem, 500)
    print(f"evaluations: {res.n_eval}  generations: {res.n_gen}  final set: {len(res.final)}")
    print(f"feasible: {bool((res.final.cv == 0).all())}  igd: {igd(res.F, front):.5f}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    render_svg(layout(PlotSpec("scatter2d", res.F)), out / "front.svg")
    render_svg(layout(PlotSpec("pcp", res.F, normalize=True)), out / "pcp.svg")
    print(f"plots written to {out}")


if __name__ == "__main__":
    main()
