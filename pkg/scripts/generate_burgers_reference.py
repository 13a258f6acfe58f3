#!/usr/bin/env python
"""Regenerate the stored Burgers reference trajectory.

The reference is the semi-discrete Burgers system (m grid points, viscosity
nu) integrated by RK4 with a very small fixed step.  The final state is stored
under src/sask/data/ with a JSON header so benchmark runs can validate it.
"""

import argparse

from sask.pde import make_burgers, reference_path, write_reference
from sask.rk4 import Rk4Config, rk4_solve


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=64)
    parser.add_argument("--nu", type=float, default=0.005)
    parser.add_argument("--T", type=float, default=1.0)
    parser.add_argument("--dt", type=float, default=1e-5)
    args = parser.parse_args()

    problem = make_burgers(args.m, nu=args.nu)
    final = rk4_solve(problem.system, problem.initial_state,
                      Rk4Config(dt=args.dt, T=args.T))
    path = reference_path("burgers", args.m, nu=args.nu)
    header = {"problem": "burgers", "m": args.m, "T": args.T,
              "dt_ref": args.dt, "params": {"nu": args.nu}}
    write_reference(path, header, final)
    print(f"wrote {path} ({args.m} rows)")


if __name__ == "__main__":
    main()
