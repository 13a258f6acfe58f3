"""Adaptive spectral Koopman solver.

Check points tau_k = k*T/(n+1) divide the time span; at each one the current
local decomposition is evaluated and, if any state component leaves the
acceptable range [L_i + gamma*r, U_i - gamma*r], the neighborhood is recentered
at the current state and the spectral data rebuilt with the anchor time reset
to tau_k.  The reference grid, interpolation matrix, and reference derivative
matrices depend only on (d, kappa) and are cached; a restart only rescales.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .chebyshev import BasisSet, InterpolationOperators, build_basis, build_operators
from .exceptions import ConfigError, DivergenceError, SaskError
from .grid import SparseGrid, build_grid
from .koopman import (
    KoopmanDecomposition,
    NeighborhoodBox,
    SemiDiscreteSystem,
    _evaluate,
    decompose,
)


@dataclass(frozen=True)
class SolverConfig:
    """Adaptive solver parameters.

    n: number of check points; T: final time; r: neighborhood radius;
    kappa: sparse-grid approximation level; gamma in (0, 1] controls how
    strictly the acceptable range shrinks the neighborhood.
    """

    n: int
    T: float
    r: float
    kappa: int
    gamma: float
    imag_tol: float = 1e-6
    cond_warn: float = 1e12

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"check-point count must be >= 1, got {self.n}")
        if self.T <= 0:
            raise ConfigError(f"final time must be positive, got {self.T}")
        if self.r <= 0:
            raise ConfigError(f"radius must be positive, got {self.r}")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.kappa < 0:
            raise ConfigError(f"level must be >= 0, got {self.kappa}")


@dataclass
class SolveTrace:
    """Diagnostics collected over one adaptive solve."""

    checkpoint_states: list = field(default_factory=list)
    update_count: int = 0
    condition_log: list = field(default_factory=list)
    imag_residual_max: float = 0.0


@functools.lru_cache(maxsize=32)
def reference_operators(d: int, kappa: int) -> tuple[SparseGrid, BasisSet,
                                                     InterpolationOperators]:
    """Shared reference-domain grid, basis, and operators for (d, kappa)."""
    grid = build_grid(d, kappa)
    basis = build_basis(d, kappa)
    return grid, basis, build_operators(grid, basis)


def acceptable_range(box: NeighborhoodBox, gamma: float) -> np.ndarray:
    """Per-dimension intervals [L_i + gamma*r, U_i - gamma*r] as a (d, 2) array."""
    if not 0.0 < gamma <= 1.0:
        raise ConfigError(f"gamma must be in (0, 1], got {gamma}")
    shrink = gamma * box.radius
    return np.column_stack((box.lower + shrink, box.upper - shrink))


def _in_range(x: np.ndarray, ranges: np.ndarray) -> bool:
    # Closed intervals: a state exactly on the boundary counts as valid.
    return bool(np.all(x >= ranges[:, 0]) and np.all(x <= ranges[:, 1]))


class _AdaptiveRun:
    """One pass of the adaptive algorithm; shared by solve and dense_output."""

    def __init__(self, system: SemiDiscreteSystem, x0: np.ndarray,
                 cfg: SolverConfig):
        self.system = system
        self.cfg = cfg
        self.trace = SolveTrace()
        self.grid, _, self.ops = reference_operators(system.dim, cfg.kappa)
        self._rebuild(np.atleast_1d(np.asarray(x0, dtype=float)), 0.0,
                      count_update=False)

    def _rebuild(self, center: np.ndarray, anchor_time: float,
                 count_update: bool = True):
        self.box = NeighborhoodBox.from_center(center, self.cfg.r)
        self.ranges = acceptable_range(self.box, self.cfg.gamma)
        self.dec = decompose(self.system, self.grid, self.ops, self.box,
                             anchor_time=anchor_time,
                             cond_warn=self.cfg.cond_warn)
        self.trace.condition_log.append(self.dec.condition)
        if count_update:
            self.trace.update_count += 1

    def evaluate(self, t: float) -> np.ndarray:
        state, imag_mag = _evaluate(self.dec, t)
        self.trace.imag_residual_max = max(self.trace.imag_residual_max,
                                           imag_mag)
        if not np.all(np.isfinite(state)):
            raise DivergenceError(f"non-finite state at t={t}")
        return state

    def advance_through(self, tau: float):
        """Process the check point at time tau."""
        state = self.evaluate(tau)
        self.trace.checkpoint_states.append((tau, state))
        if not _in_range(state, self.ranges):
            try:
                self._rebuild(state, tau)
            except SaskError as exc:
                exc.args = (f"at check point tau={tau}: {exc}",)
                raise


def checkpoint_times(cfg: SolverConfig) -> np.ndarray:
    """Uniform check points tau_k = k*T/(n+1), k = 1..n."""
    return np.arange(1, cfg.n + 1) * (cfg.T / (cfg.n + 1))


def solve(system: SemiDiscreteSystem, x0: np.ndarray,
          cfg: SolverConfig) -> tuple[np.ndarray, SolveTrace]:
    """Integrate to t = T; returns (x(T), trace)."""
    run = _AdaptiveRun(system, x0, cfg)
    for tau in checkpoint_times(cfg):
        run.advance_through(tau)
    return run.evaluate(cfg.T), run.trace


def dense_output(system: SemiDiscreteSystem, x0: np.ndarray, cfg: SolverConfig,
                 ts) -> tuple[list[np.ndarray], SolveTrace]:
    """States at each requested time, using the decomposition active there.

    ``ts`` must be sorted and within [0, T].  Because the local solution is a
    continuous-time expansion, evaluation between check points needs no time
    stepping.
    """
    ts = np.asarray(ts, dtype=float)
    if np.any(np.diff(ts) < 0):
        raise ConfigError("requested times must be sorted")
    if ts.size and (ts[0] < 0 or ts[-1] > cfg.T):
        raise ConfigError("requested times must lie in [0, T]")
    run = _AdaptiveRun(system, x0, cfg)
    out: list[np.ndarray] = []
    idx = 0
    for tau in checkpoint_times(cfg):
        while idx < ts.size and ts[idx] <= tau:
            out.append(run.evaluate(ts[idx]))
            idx += 1
        run.advance_through(tau)
    while idx < ts.size:
        out.append(run.evaluate(ts[idx]))
        idx += 1
    return out, run.trace
