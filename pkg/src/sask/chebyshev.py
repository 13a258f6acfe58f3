"""Multivariate Chebyshev basis matched to the sparse grid.

Each basis function is a product of first-kind Chebyshev polynomials,
Psi(x) = prod_j T_{k_j}(x_j).  The univariate degrees are grouped into blocks
F_i of the same size as the grid increments A_i (F_1 -> degree 0, F_2 ->
degrees 1 and 2, F_i -> degrees 2^(i-2)+1 .. 2^(i-1) for i >= 3), and the
multivariate functions follow the grid's index-combination order, so the
interpolation matrix is square.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .exceptions import ConditioningError, ConfigError
from .grid import SparseGrid, set_size, smolyak_combinations

logger = logging.getLogger(__name__)

_COND_LIMIT = 1e15
_CLAMP_TOL = 1e-12


def cheb_eval(k: int, x):
    """T_k(x) by the three-term recurrence; vectorized over x."""
    x = _clamp(x)
    if k == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), x
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def cheb_deriv(k: int, x):
    """T_k'(x) = k * U_{k-1}(x), with U the second-kind recurrence."""
    x = _clamp(x)
    if k == 0:
        return np.zeros_like(x)
    # U_0 = 1, U_1 = 2x, U_{n+1} = 2x U_n - U_{n-1}
    prev, cur = np.ones_like(x), 2.0 * x
    if k == 1:
        return prev
    for _ in range(k - 2):
        prev, cur = cur, 2.0 * x * cur - prev
    return k * cur


def _clamp(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _CLAMP_TOL):
        raise ConfigError("argument outside [-1, 1]")
    return np.clip(x, -1.0, 1.0)


def degree_block(i: int) -> list[int]:
    """Chebyshev degrees in the univariate function block F_i."""
    if i < 1:
        raise ConfigError(f"block index must be >= 1, got {i}")
    if i == 1:
        return [0]
    if i == 2:
        return [1, 2]
    return list(range(2 ** (i - 2) + 1, 2 ** (i - 1) + 1))


@dataclass(frozen=True)
class BasisSet:
    """Enumerated multivariate basis functions; row l of ``degrees`` holds
    the per-dimension Chebyshev degrees of the l-th function."""

    dim: int
    degrees: np.ndarray  # (N, d) ints

    @property
    def size(self) -> int:
        return self.degrees.shape[0]


def build_basis(d: int, kappa: int) -> BasisSet:
    """Enumerate basis functions block-by-block, mirroring the grid order."""
    combos = smolyak_combinations(d, kappa)
    rows = []
    for combo in combos:
        axes = [degree_block(i) for i in combo]
        rows.extend(itertools.product(*axes))
    degrees = np.array(rows, dtype=int)
    degrees.setflags(write=False)
    return BasisSet(dim=d, degrees=degrees)


@dataclass(frozen=True)
class InterpolationOperators:
    """Dense interpolation matrix M and per-dimension derivative matrices.

    M[l, j] = Psi_j(xi_l); G[i, l, j] = dPsi_j/dx_i(xi_l), both on the
    reference domain [-1, 1]^d.
    """

    M: np.ndarray          # (N, N)
    G: np.ndarray          # (d, N, N)
    condition: float
    _lu: tuple

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve M w = rhs via the cached LU factorization."""
        return lu_solve(self._lu, rhs)


def build_operators(grid: SparseGrid, basis: BasisSet) -> InterpolationOperators:
    """Evaluate the basis and its first derivatives at all grid points."""
    if grid.dim != basis.dim or grid.size != basis.size:
        raise ConfigError("grid and basis do not match")
    pts = grid.points
    n, d = pts.shape

    max_deg = int(basis.degrees.max())
    # Per-dimension tables: vals[j][k] = T_k evaluated at column j of the grid.
    vals = np.empty((d, max_deg + 1, n))
    ders = np.empty((d, max_deg + 1, n))
    for j in range(d):
        for k in range(max_deg + 1):
            vals[j, k] = cheb_eval(k, pts[:, j])
            ders[j, k] = cheb_deriv(k, pts[:, j])

    M = np.ones((n, n))
    G = np.zeros((d, n, n))
    for col, degs in enumerate(basis.degrees):
        active = np.nonzero(degs)[0]
        for j in active:
            M[:, col] *= vals[j, degs[j]]
        # T_0' = 0, so only active dimensions contribute derivative columns.
        for i in active:
            column = ders[i, degs[i]].copy()
            for j in active:
                if j != i:
                    column *= vals[j, degs[j]]
            G[i, :, col] = column

    condition = float(np.linalg.cond(M))
    logger.debug("interpolation matrix: N=%d cond=%.3e", n, condition)
    lu = lu_factor(M)
    M.setflags(write=False)
    G.setflags(write=False)
    return InterpolationOperators(M=M, G=G, condition=condition, _lu=lu)


def interpolate(ops: InterpolationOperators, values: np.ndarray) -> np.ndarray:
    """Coefficients w with M w = values (dense LU with partial pivoting)."""
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ConfigError("interpolation values must be finite")
    if ops.condition > _COND_LIMIT:
        raise ConditioningError("interpolation matrix is singular to tolerance",
                                ops.condition)
    return ops.solve(values)
