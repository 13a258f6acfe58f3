"""Sparse-grid adaptive spectral Koopman solver.

Solves autonomous ODE systems dx/dt = f(x) by locally approximating the
Koopman generator on a Smolyak sparse grid of Chebyshev points, solving the
resulting generalized eigenproblem, and reconstructing the state from the
spectral expansion.  Includes a Fourier pseudospectral benchmark harness for
periodic PDEs (advection, heat, KdV, Burgers) and a fixed-step RK4 baseline.
"""

from .chebyshev import (
    BasisSet,
    InterpolationOperators,
    build_basis,
    build_operators,
    cheb_deriv,
    cheb_eval,
    interpolate,
)
from .grid import SparseGrid, build_grid, disjoint_set, nested_set, smolyak_combinations
from .koopman import (
    KoopmanDecomposition,
    NeighborhoodBox,
    SemiDiscreteSystem,
    assemble_generator,
    decompose,
    eigendecompose,
    evaluate_solution,
    linear_eigenpairs,
    perturbation_bound_check,
    rescale_to_box,
    solve_modes,
)
from .pde import (
    FourierOps,
    PdeProblem,
    error_metrics,
    fourier_diff_matrices,
    make_advection,
    make_burgers,
    make_heat,
    make_kdv,
)
from .rk4 import Rk4Config, rk4_solve
from .solver import SolverConfig, SolveTrace, acceptable_range, dense_output, solve

__version__ = "0.1.0"

__all__ = [
    "BasisSet", "InterpolationOperators", "build_basis", "build_operators",
    "cheb_deriv", "cheb_eval", "interpolate",
    "SparseGrid", "build_grid", "disjoint_set", "nested_set",
    "smolyak_combinations",
    "KoopmanDecomposition", "NeighborhoodBox", "SemiDiscreteSystem",
    "assemble_generator", "decompose", "eigendecompose", "evaluate_solution",
    "linear_eigenpairs", "perturbation_bound_check", "rescale_to_box",
    "solve_modes",
    "FourierOps", "PdeProblem", "error_metrics", "fourier_diff_matrices",
    "make_advection", "make_burgers", "make_heat", "make_kdv",
    "Rk4Config", "rk4_solve",
    "SolverConfig", "SolveTrace", "acceptable_range", "dense_output", "solve",
]
