"""Named benchmark presets for the CLI harness.

``advection-a`` .. ``burgers-d`` are the timing-comparison configurations;
the ``-n10`` / ``-n50`` variants are the alternative accuracy-study
configurations that use a different check-point count (and, for heat, a
different gamma).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import ConfigError
from .pde import PdeProblem, make_advection, make_burgers, make_heat, make_kdv
from .solver import SolverConfig


@dataclass(frozen=True)
class BenchmarkPreset:
    name: str
    problem: str
    m: int
    T: float
    n: int
    r: float
    gamma: float
    kappa: int = 1
    rk4_dt: float = 1e-3
    params: dict = field(default_factory=dict)

    def make_problem(self) -> PdeProblem:
        return build_problem(self.problem, self.m, **self.params)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(n=self.n, T=self.T, r=self.r, kappa=self.kappa,
                            gamma=self.gamma)


def build_problem(problem: str, m: int, **params) -> PdeProblem:
    factories = {
        "advection": make_advection,
        "heat": make_heat,
        "kdv": make_kdv,
        "burgers": make_burgers,
    }
    if problem not in factories:
        raise ConfigError(f"unknown problem {problem!r}; "
                          f"choose from {sorted(factories)}")
    return factories[problem](m, **params)


_KDV_PARAMS = {"c": 0.5, "beta": 3.0, "mu": 9.0, "p": 45.0}

PRESETS: dict[str, BenchmarkPreset] = {p.name: p for p in [
    BenchmarkPreset(name="advection-a", problem="advection", m=32, T=100.0,
                    n=1, r=1.0, gamma=0.2, rk4_dt=5e-4),
    BenchmarkPreset(name="heat-b", problem="heat", m=32, T=10.0,
                    n=10, r=0.1, gamma=0.5, rk4_dt=2e-3),
    BenchmarkPreset(name="kdv-c", problem="kdv", m=100, T=10.0,
                    n=100, r=0.1, gamma=0.8, rk4_dt=1e-3,
                    params=dict(_KDV_PARAMS)),
    BenchmarkPreset(name="burgers-d", problem="burgers", m=64, T=1.0,
                    n=100, r=0.1, gamma=1.0, rk4_dt=2e-3,
                    params={"nu": 0.005}),
    # Accuracy-study variants with alternative check-point settings.
    BenchmarkPreset(name="advection-n10", problem="advection", m=32, T=10.0,
                    n=10, r=1.0, gamma=0.2, rk4_dt=5e-4),
    BenchmarkPreset(name="heat-n10", problem="heat", m=32, T=10.0,
                    n=10, r=0.1, gamma=0.2, rk4_dt=2e-3),
    BenchmarkPreset(name="burgers-n50", problem="burgers", m=64, T=1.0,
                    n=50, r=0.1, gamma=1.0, rk4_dt=2e-3,
                    params={"nu": 0.005}),
]}


def get_preset(name: str) -> BenchmarkPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; "
                          f"choose from {sorted(PRESETS)}") from None
