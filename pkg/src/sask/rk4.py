"""Classical fixed-step fourth-order Runge-Kutta baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DivergenceError
from .koopman import SemiDiscreteSystem


@dataclass(frozen=True)
class Rk4Config:
    dt: float
    T: float

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigError(f"step must be positive, got {self.dt}")
        if self.dt > self.T:
            raise ConfigError(f"step {self.dt} exceeds final time {self.T}")


def rk4_solve(system: SemiDiscreteSystem, x0: np.ndarray,
              cfg: Rk4Config) -> np.ndarray:
    """Integrate dx/dt = f(x) to t = T with fixed steps of size dt.

    The final step is shortened so the integration lands exactly on T.
    """
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    f = system.__call__
    n_full = int(np.floor(cfg.T / cfg.dt + 1e-12))
    remainder = cfg.T - n_full * cfg.dt
    steps = [cfg.dt] * n_full
    if remainder > 1e-12 * cfg.T:
        steps.append(remainder)
    for i, h in enumerate(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(f"non-finite state at step {i}")
    return x
