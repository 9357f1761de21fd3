"""Command-line front end.

Exit codes: 0 success, 2 user error (bad flags, config or input files),
3 runtime failure (for example a non-finite evaluation).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import indicators, mcdm, viz
from .autodiff import GradientsUnavailable, gradients
from .core import (
    ContractError,
    EvaluationError,
    Evaluator,
    matrix_to_csv,
    population_to_csv,
    read_csv_table,
    read_objectives_csv,
)
from .moea import AlgorithmConfig, run
from .operators import CROSSOVER_KINDS, Crossover, Mutation, OperatorSet, Sampling, make_rng
from .problems import analytic_front, make_problem, problem_names
from .termination import make_termination

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3


class UserError(Exception):
    pass


CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["problem", "algorithm", "termination"],
    "properties": {
        "problem": {
            "type": "object",
            "additionalProperties": False,
            "required": ["name"],
            "properties": {"name": {"type": "string"}, "n_var": {"type": "integer", "minimum": 1}},
        },
        "algorithm": {"enum": ["nsga2", "ga"]},
        "pop_size": {"type": "integer", "minimum": 1},
        "n_offsprings": {"type": "integer", "minimum": 1},
        "eliminate_duplicates": {"type": "boolean"},
        "duplicate_tol": {"type": "number", "minimum": 0},
        "eval_cap": {"type": "integer", "minimum": 1},
        "operators": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "sampling": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {"kind": {"enum": ["random", "lhs"]}},
                },
                "crossover": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": list(CROSSOVER_KINDS)},
                        "prob": {"type": "number", "minimum": 0, "maximum": 1},
                        "eta": {"type": "number", "exclusiveMinimum": 0},
                        "prob_per_var": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                },
                "mutation": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["polynomial", "polynomial_int", "bitflip", "none"]},
                        "eta": {"type": "number", "exclusiveMinimum": 0},
                        "prob": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                },
            },
        },
        "termination": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["max_gen", "max_evals", "x_movement", "f_movement"]},
                "n": {"type": "integer", "minimum": 0},
                "tol": {"type": "number", "minimum": 0},
                "k": {"type": "integer", "minimum": 1},
            },
            "if": {"properties": {"kind": {"enum": ["max_gen", "max_evals"]}}},
            "then": {"required": ["n"]},
        },
        "seed": {"type": "integer"},
        "verbose": {"type": "boolean"},
        "output_dir": {"type": "string"},
        "history": {"type": "boolean"},
        "eval_mode": {
            "oneOf": [
                {"const": "vectorized"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["vectorized", "threaded"]},
                        "n_threads": {"type": "integer", "minimum": 1},
                    },
                },
            ]
        },
    },
}


@dataclass
class RunConfig:
    problem: str
    algorithm: str
    termination: dict
    n_var: int | None = None
    pop_size: int = 100
    n_offsprings: int | None = None
    eliminate_duplicates: bool = True
    duplicate_tol: float = 1e-16
    eval_cap: int = 10_000_000
    operators: dict = field(default_factory=dict)
    seed: int = 0
    verbose: bool = False
    output_dir: str = "out"
    history: bool = False
    eval_mode: str = "vectorized"
    n_threads: int = 4

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
        if errors:
            msgs = []
            for err in errors:
                where = ".".join(str(p) for p in err.absolute_path) or "<root>"
                msgs.append(f"{where}: {err.message}")
            raise UserError("invalid config:\n  " + "\n  ".join(msgs))
        mode = doc.get("eval_mode", "vectorized")
        if isinstance(mode, dict):
            n_threads = mode.get("n_threads", 4)
            mode = mode["kind"]
        else:
            n_threads = 4
        return cls(
            problem=doc["problem"]["name"],
            n_var=doc["problem"].get("n_var"),
            algorithm=doc["algorithm"],
            termination=doc["termination"],
            pop_size=doc.get("pop_size", 100),
            n_offsprings=doc.get("n_offsprings"),
            eliminate_duplicates=doc.get("eliminate_duplicates", True),
            duplicate_tol=doc.get("duplicate_tol", 1e-16),
            eval_cap=doc.get("eval_cap", 10_000_000),
            operators=doc.get("operators", {}),
            seed=doc.get("seed", 0),
            verbose=doc.get("verbose", False),
            output_dir=doc.get("output_dir", "out"),
            history=doc.get("history", False),
            eval_mode=mode,
            n_threads=n_threads,
        )

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise UserError(f"cannot read config {path}: {exc.strerror or exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise UserError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return cls.from_dict(doc)

    def operator_set(self, problem) -> OperatorSet:
        base = OperatorSet.defaults_for(problem)
        ops = self.operators
        sampling = Sampling(**ops["sampling"]) if "sampling" in ops else base.sampling
        crossover = Crossover(**ops["crossover"]) if "crossover" in ops else base.crossover
        mutation = Mutation(**ops["mutation"]) if "mutation" in ops else base.mutation
        return OperatorSet(sampling, crossover, mutation)


def _floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise UserError(f"expected comma-separated numbers, got {text!r}") from None


def _fmt(v: float, digits: int = 17) -> str:
    return format(float(v), f".{digits}g")


# --- subcommands ----------------------------------------------------------------


def cmd_run(args) -> int:
    cfg = RunConfig.load(args.config)
    try:
        problem = make_problem(cfg.problem, cfg.n_var)
    except ContractError as exc:
        raise UserError(str(exc)) from None
    config = AlgorithmConfig(
        pop_size=cfg.pop_size,
        n_offsprings=cfg.n_offsprings,
        operators=cfg.operator_set(problem),
        eliminate_duplicates=cfg.eliminate_duplicates,
        duplicate_tol=cfg.duplicate_tol,
        seed=cfg.seed,
        eval_cap=cfg.eval_cap,
    )
    out = Path(args.output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    evaluator = Evaluator(problem, mode=cfg.eval_mode, n_threads=cfg.n_threads)
    start = time.perf_counter()
    result = run(
        problem,
        cfg.algorithm,
        config,
        make_termination(cfg.termination, problem),
        rng=make_rng(cfg.seed),
        evaluator=evaluator,
        verbose=cfg.verbose,
        history_dir=out / "history" if cfg.history else None,
    )
    wall = time.perf_counter() - start
    (out / "result.csv").write_text(population_to_csv(result.final))
    summary = {
        "problem": problem.name,
        "algorithm": cfg.algorithm,
        "n_eval": result.n_eval,
        "n_gen": result.n_gen,
        "n_final": len(result.final),
        "seed": cfg.seed,
        "wall_time": wall,
    }
    (out / "run.json").write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_indicator(args) -> int:
    S = read_objectives_csv(args.set)
    kind = args.kind
    if kind == "hv":
        if args.ref_point is None:
            raise UserError("--ref-point is required for hv")
        value = indicators.hypervolume(S, _floats(args.ref_point))
    else:
        if args.front is None:
            raise UserError(f"--front is required for {kind}")
        PF = read_objectives_csv(args.front)
        fn = {"gd": indicators.gd, "igd": indicators.igd, "gd_plus": indicators.gd_plus,
              "igd_plus": indicators.igd_plus}[kind]
        value = fn(S, PF)
    print(_fmt(value, 12))
    return EXIT_OK


def cmd_decide(args) -> int:
    header, table = read_csv_table(args.input)
    F = read_objectives_csv(args.input)
    if len(F) == 0:
        raise UserError(f"{args.input}: no rows")
    extra_names: list[str] = []
    extra_cols: list[np.ndarray] = []
    if args.action == "pseudo-weights":
        res = mcdm.pseudo_weights(F)
        target = _floats(args.weights) if args.weights else np.full(F.shape[1], 1.0 / F.shape[1])
        chosen = res.closest(target)
        extra_names = [f"w{j + 1}" for j in range(F.shape[1])]
        extra_cols = [res.W[:, j] for j in range(F.shape[1])]
    elif args.action == "tradeoff":
        res = mcdm.tradeoff_metric(F, neighbors=args.neighbors)
        chosen = res.best
        extra_names, extra_cols = ["mu"], [res.mu]
    else:
        if not args.weights:
            raise UserError("--weights is required for compromise")
        ideal = _floats(args.ideal) if args.ideal else None
        chosen = mcdm.compromise(F, args.method, _floats(args.weights), ideal)
    if args.out:
        lines = [",".join(header + extra_names)]
        for i, row in enumerate(table):
            vals = [_fmt(v) for v in row] + [_fmt(c[i]) for c in extra_cols]
            lines.append(",".join(vals))
        Path(args.out).write_text("\n".join(lines) + "\n")
    print(chosen)
    return EXIT_OK


def cmd_plot(args) -> int:
    F = read_objectives_csv(args.input)
    if len(F) == 0:
        raise UserError(f"{args.input}: no rows")
    spec = viz.PlotSpec(
        kind=args.kind,
        data=F,
        normalize=args.normalize,
        ideal=_floats(args.ideal) if args.ideal else None,
        nadir=_floats(args.nadir) if args.nadir else None,
        highlight=[int(i) for i in args.highlight.split(",")] if args.highlight else (),
        row=args.row,
        sort_lexicographic=args.sort,
        colors=tuple(args.colors.split(",")) if args.colors else viz.DEFAULT_COLORS,
    )
    viz.render_svg(viz.layout(spec), args.out)
    return EXIT_OK


def cmd_problems(args) -> int:
    if args.action == "list":
        for name in problem_names():
            print(name)
        return EXIT_OK
    if not args.name:
        raise UserError("problems front needs a problem name")
    F = analytic_front(make_problem(args.name), args.n_points)
    text = matrix_to_csv(F, "f")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gradient(args) -> int:
    problem = make_problem(args.problem, args.n_var)
    x = _floats(args.at)
    want = ["dF", "dG"] if args.constraints else ["dF"]
    bundle = gradients(problem, x, want)
    for row in bundle.dF:
        print("dF," + ",".join(repr(float(v)) for v in row))
    if args.constraints:
        for row in bundle.dG:
            print("dG," + ",".join(repr(float(v)) for v in row))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paretokit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an optimization from a JSON config")
    p.add_argument("config")
    p.add_argument("--output-dir", help="overrides output_dir from the config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("indicator", help="compute a performance indicator")
    p.add_argument("--kind", required=True, choices=["gd", "igd", "gd_plus", "igd_plus", "hv"])
    p.add_argument("--set", required=True, help="CSV with f1..fM columns")
    p.add_argument("--front", help="reference front CSV")
    p.add_argument("--ref-point", help="comma-separated reference point for hv")
    p.set_defaults(func=cmd_indicator)

    p = sub.add_parser("decide", help="multi-criteria decision making on a result CSV")
    p.add_argument("action", choices=["pseudo-weights", "tradeoff", "compromise"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", help="annotated CSV to write")
    p.add_argument("--weights")
    p.add_argument("--method", default="tchebysheff", choices=["weighted_sum", "tchebysheff", "asf", "aasf", "pbi"])
    p.add_argument("--ideal")
    p.add_argument("--neighbors", type=int)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("plot", help="export a plot as SVG")
    p.add_argument("--kind", required=True, choices=viz.PLOT_KINDS)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--ideal")
    p.add_argument("--nadir")
    p.add_argument("--highlight", help="comma-separated row indices")
    p.add_argument("--row", type=int, default=0, help="solution drawn by petal/radar")
    p.add_argument("--sort", action="store_true", help="lexicographic row sort for heatmap")
    p.add_argument("--colors", help="comma-separated hex colors")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("problems", help="list problems or export an analytic front")
    p.add_argument("action", choices=["list", "front"])
    p.add_argument("name", nargs="?")
    p.add_argument("--n-points", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_problems)

    p = sub.add_parser("gradient", help="print dF (and dG) at a point")
    p.add_argument("--problem", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--n-var", type=int)
    p.add_argument("--constraints", action="store_true")
    p.set_defaults(func=cmd_gradient)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UserError, ValueError, GradientsUnavailable, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvaluationError, OSError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
