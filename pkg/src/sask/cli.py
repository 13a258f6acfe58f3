"""Benchmark command-line harness.

Two subcommands:

* ``run``     -- execute one solver on a preset (or ad-hoc flags) and report
                 error metrics and wall time.
* ``compare`` -- run both solvers on one preset and report normalized times.

Records are written as CSV (fixed column order, see CSV_COLUMNS) or JSON.
``--dump-solution`` writes a plot-ready CSV of the final state and
``--figure`` renders it to an image file alongside.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import statistics
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import rk4, solver
from .exceptions import ConfigError, SaskError
from .pde import PdeProblem, error_metrics
from .presets import PRESETS, BenchmarkPreset, build_problem, get_preset

CSV_COLUMNS = ["preset", "problem", "solver", "m", "T", "rel_L2", "L_inf",
               "wall_time_s", "update_count", "timestamp", "config"]

EXIT_USAGE = 2
EXIT_SOLVER_FAILURE = 3


@dataclass
class RunRecord:
    preset: str
    problem: str
    solver: str
    m: int
    T: float
    rel_L2: float
    L_inf: float
    wall_time_s: float
    update_count: int
    timestamp: str
    config: dict

    def row(self) -> list:
        data = asdict(self)
        data["config"] = json.dumps(data["config"], sort_keys=True)
        return [data[c] for c in CSV_COLUMNS]


def execute(preset: BenchmarkPreset, solver_name: str,
            repeat: int = 1) -> tuple[RunRecord, PdeProblem, np.ndarray]:
    """Run one solver on one preset; wall time is the median over repeats
    and covers the solve call only."""
    problem = preset.make_problem()
    x0 = problem.initial_state

    if solver_name == "sask":
        cfg = preset.solver_config()

        def solve_once():
            return solver.solve(problem.system, x0, cfg)
    elif solver_name == "rk4":
        rk_cfg = rk4.Rk4Config(dt=preset.rk4_dt, T=preset.T)

        def solve_once():
            return rk4.rk4_solve(problem.system, x0, rk_cfg), None
    else:
        raise ConfigError(f"unknown solver {solver_name!r}")

    times = []
    final, trace = None, None
    for _ in range(max(1, repeat)):
        tic = time.perf_counter()
        final, trace = solve_once()
        times.append(time.perf_counter() - tic)

    rel_l2, l_inf = error_metrics(final, problem.reference(preset.T))
    record = RunRecord(
        preset=preset.name, problem=preset.problem, solver=solver_name,
        m=preset.m, T=preset.T, rel_L2=rel_l2, L_inf=l_inf,
        wall_time_s=statistics.median(times),
        update_count=trace.update_count if trace is not None else 0,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
        config=_config_echo(preset, solver_name))
    return record, problem, final


def _config_echo(preset: BenchmarkPreset, solver_name: str) -> dict:
    echo = {"problem": preset.problem, "m": preset.m, "T": preset.T,
            "solver": solver_name, **preset.params}
    if solver_name == "sask":
        echo.update(n=preset.n, r=preset.r, kappa=preset.kappa,
                    gamma=preset.gamma)
    else:
        echo.update(dt=preset.rk4_dt)
    return echo


def format_records(records: list[RunRecord], fmt: str) -> str:
    if fmt == "json":
        payload = []
        for r in records:
            data = asdict(r)
            payload.append(data)
        return json.dumps(payload, indent=2)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump_solution(path: str, problem: PdeProblem, final: np.ndarray,
                   t: float):
    reference = problem.reference(t)
    with open(path, "w") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "computed", "reference"])
        for xi, ci, ri in zip(problem.x, final, reference):
            writer.writerow([repr(float(xi)), repr(float(ci)),
                             repr(float(ri))])


def _ad_hoc_preset(args) -> BenchmarkPreset:
    if args.problem is None:
        raise ConfigError("either --preset or --problem is required")
    params = {}
    if args.problem == "burgers" and args.nu is not None:
        params["nu"] = args.nu
    build_problem(args.problem, args.m, **params)  # validate early
    return BenchmarkPreset(
        name=f"custom-{args.problem}", problem=args.problem, m=args.m,
        T=args.T, n=args.n, r=args.r, gamma=args.gamma, kappa=args.kappa,
        rk4_dt=args.dt, params=params)


def _run_presets(args) -> list[tuple[RunRecord, PdeProblem, np.ndarray]]:
    if args.preset:
        presets = [get_preset(name) for name in args.preset.split(",")]
    else:
        presets = [_ad_hoc_preset(args)]
    jobs = [(p, args.solver, args.repeat) for p in presets]
    if args.parallel and len(jobs) > 1:
        with concurrent.futures.ThreadPoolExecutor() as pool:
            return list(pool.map(lambda j: execute(*j), jobs))
    return [execute(*j) for j in jobs]


def cmd_run(args) -> int:
    results = _run_presets(args)
    _emit(format_records([r for r, _, _ in results], args.output), args.out)
    record, problem, final = results[-1]
    if args.dump_solution:
        _dump_solution(args.dump_solution, problem, final, record.T)
    if args.figure:
        from .plots import render_solution_figure
        render_solution_figure(
            problem.x, final, problem.reference(record.T), args.figure,
            title=f"{record.preset} / {record.solver} (T={record.T:g})")
    return 0


def cmd_compare(args) -> int:
    preset = get_preset(args.preset)
    records, solutions = [], {}
    problem = None
    for solver_name in ("sask", "rk4"):
        record, problem, final = execute(preset, solver_name,
                                         repeat=args.repeat)
        records.append(record)
        solutions[solver_name] = final
    base = records[0].wall_time_s
    summary = {r.solver: {"normalized_time": r.wall_time_s / base,
                          "rel_L2": r.rel_L2, "L_inf": r.L_inf}
               for r in records}
    _emit(format_records(records, args.output), args.out)
    sys.stdout.write("# normalized time (sask = 1.00): "
                     + json.dumps(summary, sort_keys=True) + "\n")
    if args.figure:
        from .plots import render_comparison_figure
        render_comparison_figure(
            problem.x, solutions, problem.reference(preset.T), args.figure,
            title=f"{preset.name} (T={preset.T:g})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sask-bench", description="PDE benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one solver on a preset")
    run.add_argument("--preset", help="preset name(s), comma separated; "
                     f"known: {', '.join(sorted(PRESETS))}")
    run.add_argument("--problem",
                     choices=["advection", "heat", "kdv", "burgers"])
    run.add_argument("--solver", choices=["sask", "rk4"], default="sask")
    run.add_argument("--m", type=int, default=32)
    run.add_argument("--T", type=float, default=10.0)
    run.add_argument("--n", type=int, default=10)
    run.add_argument("--r", type=float, default=0.1)
    run.add_argument("--kappa", type=int, default=1)
    run.add_argument("--gamma", type=float, default=0.2)
    run.add_argument("--dt", type=float, default=1e-3)
    run.add_argument("--nu", type=float, default=None)
    run.add_argument("--output", choices=["csv", "json"], default="csv")
    run.add_argument("--out", help="write records to this file")
    run.add_argument("--dump-solution", help="write final state CSV")
    run.add_argument("--figure", help="render the final state to this image")
    run.add_argument("--repeat", type=int, default=1,
                     help="repetitions; wall time is the median")
    run.add_argument("--seed", type=int, default=None,
                     help="reserved for future stochastic features")
    run.add_argument("--parallel", action="store_true",
                     help="run multiple presets concurrently")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="run both solvers on one preset")
    cmp_.add_argument("--preset", required=True)
    cmp_.add_argument("--output", choices=["csv", "json"], default="csv")
    cmp_.add_argument("--out")
    cmp_.add_argument("--figure")
    cmp_.add_argument("--repeat", type=int, default=1)
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SaskError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
