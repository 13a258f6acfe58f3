"""Local Koopman-generator approximation on one neighborhood.

Given a sparse grid rescaled to a box around the current state, the generator
is approximated by U = sum_i diag(f_i at grid points) G_i.  The generalized
eigenproblem U W = M W Lambda yields approximate eigenvalues and eigenfunction
values Phi = M W, the Koopman modes C solve Phi C = Xi for the identity
observable, and the local solution is

    x(t) = sum_j C[j, :] * Phi[0, j] * exp(lambda_j * (t - t0)),

using that the first grid point is the box center x0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chebyshev import InterpolationOperators
from .exceptions import (
    ConditioningError,
    ConditioningWarning,
    ConfigError,
    DecompositionError,
    EvaluationError,
    ImagResidualWarning,
)
from .grid import SparseGrid

_COND_WARN_DEFAULT = 1e12


@dataclass(frozen=True)
class SemiDiscreteSystem:
    """An autonomous ODE system dx/dt = f(x).

    ``dynamics`` must accept arrays of shape (..., dim) and operate on the
    last axis, so all grid points can be evaluated in one call.  Set
    ``vectorized=False`` for evaluators that only accept single states.
    """

    dim: int
    dynamics: Callable[[np.ndarray], np.ndarray]
    name: str = "system"
    vectorized: bool = True

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.dynamics(np.asarray(x, dtype=float)), dtype=float)

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate f at each row of an (N, dim) array."""
        if self.vectorized:
            out = self(points)
        else:
            out = np.array([self(p) for p in points])
        if out.shape != points.shape:
            raise EvaluationError(
                f"dynamics returned shape {out.shape}, expected {points.shape}")
        if not np.all(np.isfinite(out)):
            bad = int(np.where(~np.isfinite(out).all(axis=1))[0][0])
            raise EvaluationError(
                f"non-finite dynamics value at grid point {points[bad]}")
        return out


@dataclass(frozen=True)
class NeighborhoodBox:
    """An isotropic box [lower, upper] = [center - r, center + r]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        widths = upper - lower
        if np.any(widths <= 0):
            raise ConfigError("box must have positive width")
        if not np.allclose(widths, widths[0], rtol=1e-12, atol=0):
            raise ConfigError("box must be isotropic (equal widths)")

    @classmethod
    def from_center(cls, center: np.ndarray, radius: float) -> "NeighborhoodBox":
        if radius <= 0:
            raise ConfigError(f"radius must be positive, got {radius}")
        center = np.atleast_1d(np.asarray(center, dtype=float))
        return cls(lower=center - radius, upper=center + radius)

    @property
    def center(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    @property
    def radius(self) -> float:
        return float((self.upper[0] - self.lower[0]) / 2.0)


@dataclass(frozen=True)
class ScaledOperators:
    """Grid points and derivative matrices mapped onto a physical box.

    The derivative scaling 2/(U_i - L_i) is kept as a per-dimension factor;
    ``G`` materializes the scaled matrices on demand.
    """

    points: np.ndarray      # (N, d), physical coordinates
    g_reference: np.ndarray  # (d, N, N), reference-domain derivatives
    g_scale: np.ndarray     # (d,)
    ops: InterpolationOperators

    @property
    def G(self) -> np.ndarray:
        return self.g_reference * self.g_scale[:, None, None]


def rescale_to_box(grid: SparseGrid, ops: InterpolationOperators,
                   box: NeighborhoodBox) -> ScaledOperators:
    """Affinely map the reference grid and derivative matrices onto ``box``.

    Points: xi -> (U - L)/2 * (xi + 1) + L per dimension; G_i picks up the
    factor 2/(U_i - L_i).  M is invariant under the affine map.
    """
    if box.lower.shape[0] != grid.dim:
        raise ConfigError("box dimension does not match grid")
    widths = box.upper - box.lower
    points = widths / 2.0 * (grid.points + 1.0) + box.lower
    return ScaledOperators(points=points, g_reference=ops.G,
                           g_scale=2.0 / widths, ops=ops)


def assemble_generator(system: SemiDiscreteSystem,
                       scaled: ScaledOperators) -> np.ndarray:
    """U = sum_i diag(f_i(xi_1), ..., f_i(xi_N)) G_i on the physical box."""
    f_values = system.eval_batch(scaled.points)  # (N, d)
    weighted = f_values * scaled.g_scale  # fold the affine derivative scaling
    return np.einsum("ni,inm->nm", weighted, scaled.g_reference)


def eigendecompose(generator: np.ndarray, ops: InterpolationOperators,
                   cond_warn: float = _COND_WARN_DEFAULT):
    """Solve U W = M W Lambda; return (eigenvalues, Phi = M W).

    Solved by reduction: eigendecomposition of M^{-1} U.  Eigenvector columns
    are normalized to unit 2-norm and eigenpairs sorted by (Re desc, Im desc).
    """
    if ops.condition > cond_warn:
        warnings.warn(
            f"interpolation matrix condition {ops.condition:.3e} exceeds "
            f"{cond_warn:.1e}", ConditioningWarning, stacklevel=2)
    try:
        reduced = ops.solve(generator)
        eigenvalues, w = np.linalg.eig(reduced)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"eigenvalue solver failed: {exc}") from exc
    w = w / np.linalg.norm(w, axis=0)
    order = np.lexsort((-eigenvalues.imag, -eigenvalues.real))
    eigenvalues = eigenvalues[order]
    phi = ops.M @ w[:, order]
    return eigenvalues, phi


def solve_modes(phi: np.ndarray, points: np.ndarray,
                rcond: float | None = None) -> np.ndarray:
    """Koopman modes C solving Phi C = Xi (identity observable).

    Solved by rank-revealing least squares: repeated eigenvalues of the
    approximate generator can make Phi rank-deficient even though the system
    stays consistent (the deficient directions pair columns that share an
    eigenvalue, so the reconstruction is unaffected).  An inconsistent system
    raises a mode-solve error with the condition estimate.
    """
    n = phi.shape[0]
    if phi.shape != (n, n) or not np.all(np.isfinite(phi)):
        raise ConfigError("Phi must be a finite square matrix")
    d = points.shape[1]
    rhs = points.astype(complex)
    modes, _, rank, sing = np.linalg.lstsq(phi, rhs, rcond=rcond)
    cond = float(sing[0] / sing[-1]) if sing[-1] > 0 else float("inf")
    scale = np.linalg.norm(rhs)
    residual = np.linalg.norm(phi @ modes - rhs)
    if residual > 1e-8 * max(scale, 1.0):
        raise ConditioningError(
            "mode system is inconsistent to tolerance", cond)
    # Mode-error hypothesis: with perturbation scale eps at the level of the
    # solve's roundoff, ||Phi^{-1}|| * d * eps must stay below 1.
    eps = np.finfo(float).eps * np.linalg.norm(phi, np.inf)
    hypothesis = (d * eps / sing[-1]) if sing[-1] > 0 else float("inf")
    if rank < n or hypothesis >= 1.0:
        warnings.warn(
            "mode solve conditioning violates the perturbation hypothesis "
            f"(rank {rank}/{n}, ||Phi^-1|| * d * eps = {hypothesis:.3e})",
            ConditioningWarning, stacklevel=2)
    return modes


@dataclass(frozen=True)
class KoopmanDecomposition:
    """Spectral data of one local neighborhood, anchored at ``anchor_time``."""

    eigenvalues: np.ndarray  # (N,) complex
    phi: np.ndarray          # (N, N) complex, column j = phi_j at grid points
    modes: np.ndarray        # (N, d) complex
    anchor_time: float
    condition: float = field(default=float("nan"))

    @property
    def dim(self) -> int:
        return self.modes.shape[1]


def decompose(system: SemiDiscreteSystem, grid: SparseGrid,
              ops: InterpolationOperators, box: NeighborhoodBox,
              anchor_time: float = 0.0,
              cond_warn: float = _COND_WARN_DEFAULT) -> KoopmanDecomposition:
    """Full local pipeline: rescale, assemble, eigen-solve, modes."""
    scaled = rescale_to_box(grid, ops, box)
    generator = assemble_generator(system, scaled)
    eigenvalues, phi = eigendecompose(generator, ops, cond_warn=cond_warn)
    modes = solve_modes(phi, scaled.points)
    return KoopmanDecomposition(
        eigenvalues=eigenvalues, phi=phi, modes=modes,
        anchor_time=anchor_time, condition=float(np.linalg.cond(phi)))


def _evaluate(dec: KoopmanDecomposition, t: float):
    """Complex reconstruction split into (real state, imaginary magnitude)."""
    weights = dec.phi[0, :] * np.exp(dec.eigenvalues * (t - dec.anchor_time))
    state = weights @ dec.modes
    return state.real, float(np.max(np.abs(state.imag), initial=0.0))


def evaluate_solution(dec: KoopmanDecomposition, t: float,
                      imag_tol: float = 1e-6) -> np.ndarray:
    """Reconstructed state at time t >= anchor_time (real part).

    Warns if the discarded imaginary part exceeds imag_tol * ||x||.
    """
    if t < dec.anchor_time:
        raise ConfigError(
            f"evaluation time {t} precedes anchor time {dec.anchor_time}")
    state, imag_mag = _evaluate(dec, t)
    scale = np.linalg.norm(state)
    if imag_mag > imag_tol * max(scale, 1e-300):
        warnings.warn(
            f"imaginary residual {imag_mag:.3e} exceeds {imag_tol:.1e} * ||x||",
            ImagResidualWarning, stacklevel=2)
    return state


def linear_eigenpairs(a: np.ndarray):
    """Exact Koopman eigenpairs of dx/dt = A x.

    The eigenvalues of A are Koopman eigenvalues, with linear eigenfunctions
    phi_j(x) = w_j . x where w_j are unit eigenvectors of A^T.  Requires
    distinct eigenvalues.
    """
    a = np.asarray(a, dtype=float)
    eigenvalues, w = np.linalg.eig(a.T)
    if len(np.unique(np.round(eigenvalues, 12))) < len(eigenvalues):
        raise ConfigError("matrix has repeated eigenvalues")
    w = w / np.linalg.norm(w, axis=0)
    return eigenvalues, w


def perturbation_bound_check(a: np.ndarray, x0: np.ndarray, t: float,
                        eps_lambda: float, eps_phi0: float,
                        rng: np.random.Generator,
                        observable: np.ndarray | None = None):
    """Error of a perturbed linear-system reconstruction vs its a-priori bound.

    For dx/dt = A x with exact eigenpairs, the scalar observable g(x) = a . x
    is expanded in the linear eigenfunctions.  Eigenvalues and the initial
    eigenfunction values are then perturbed by complex amounts of magnitude at
    most eps_lambda and eps_phi0, and the observed deviation |g - g_tilde| is
    returned together with the bound

        d ||c||_inf e^{Re lambda_max t}
          (max_j |phi_j(x0)| |1 - e^{eps_lambda t}| + eps_phi0 e^{eps_lambda t}).
    """
    a = np.asarray(a, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    d = a.shape[0]
    eigenvalues, w = linear_eigenpairs(a)
    if observable is None:
        observable = np.ones(d)
    # g(x) = obs . x = sum_j c_j (w_j . x)  =>  obs = W c.
    coeffs = np.linalg.solve(w, observable.astype(complex))
    phi0 = w.T @ x0  # phi_j(x0)

    def unit_disk(size):
        radii = np.sqrt(rng.uniform(0.0, 1.0, size))
        angles = rng.uniform(0.0, 2.0 * np.pi, size)
        return radii * np.exp(1j * angles)

    lam_pert = eigenvalues + eps_lambda * unit_disk(d)
    phi0_pert = phi0 + eps_phi0 * unit_disk(d)

    g_exact = np.sum(coeffs * phi0 * np.exp(eigenvalues * t))
    g_pert = np.sum(coeffs * phi0_pert * np.exp(lam_pert * t))
    observed = abs(g_exact - g_pert)

    re_max = float(np.max(eigenvalues.real))
    bound = (d * np.max(np.abs(coeffs)) * np.exp(re_max * t)
             * (np.max(np.abs(phi0)) * abs(1.0 - np.exp(eps_lambda * t))
                + eps_phi0 * np.exp(eps_lambda * t)))
    return observed, float(bound)
