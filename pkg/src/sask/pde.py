"""Periodic Fourier semi-discretizations of the benchmark PDEs.

Each problem is reduced to an autonomous ODE system on the values at m
equispaced grid points, using dense spectral differentiation matrices built by
transform diagonalization.  Problems on [0, 1] fold the domain length into the
matrices ((2*pi)^p per derivative order p); the KdV problem is posed on
[-p, p] and mapped to [0, 2*pi] by a change of variable that rescales its
coefficients instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .exceptions import ConfigError
from .koopman import SemiDiscreteSystem

_DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class FourierOps:
    """Dense differentiation matrices for the 2*pi-periodic grid x_j = j*h."""

    m: int
    h: float
    D1: np.ndarray
    D2: np.ndarray
    D3: np.ndarray


def fourier_diff_matrices(m: int) -> FourierOps:
    """Spectral D1, D2, D3 for m equispaced points on [0, 2*pi).

    Built from the wavenumber symbols (ik)^p applied in Fourier space (not as
    matrix powers); the Nyquist mode is zeroed for odd derivative orders.
    """
    if m < 4 or m % 2 != 0:
        raise ConfigError(f"grid size must be even and >= 4, got {m}")
    k = np.fft.fftfreq(m, d=1.0 / m)  # 0, 1, ..., m/2-1, -m/2, ..., -1
    eye_hat = np.fft.fft(np.eye(m), axis=0)

    def matrix(order: int) -> np.ndarray:
        symbol = (1j * k) ** order
        if order % 2 == 1:
            symbol[m // 2] = 0.0
        d = np.fft.ifft(symbol[:, None] * eye_hat, axis=0).real
        d.setflags(write=False)
        return d

    return FourierOps(m=m, h=2.0 * np.pi / m,
                      D1=matrix(1), D2=matrix(2), D3=matrix(3))


@dataclass(frozen=True)
class PdeProblem:
    """A semi-discretized benchmark problem with its reference solution."""

    name: str
    m: int
    x: np.ndarray                      # physical grid points
    system: SemiDiscreteSystem
    initial_state: np.ndarray
    reference: Callable[[float], np.ndarray]
    params: dict = field(default_factory=dict)


def make_advection(m: int) -> PdeProblem:
    """u_t + u_x = 0 on [0, 1], u(x, 0) = 0.2 + sin(cos(4*pi*x))."""
    ops = fourier_diff_matrices(m)
    d1 = 2.0 * np.pi * ops.D1  # fold [0, 1] -> [0, 2*pi]
    x = np.arange(m) / m

    def ic(xx):
        return 0.2 + np.sin(np.cos(4.0 * np.pi * xx))

    system = SemiDiscreteSystem(
        dim=m, dynamics=lambda u: -(u @ d1.T), name="advection")
    return PdeProblem(
        name="advection", m=m, x=x, system=system, initial_state=ic(x),
        reference=lambda t: ic((x - t) % 1.0), params={})


def make_heat(m: int) -> PdeProblem:
    """u_t = u_xx / (80*pi^2) on [0, 1], u(x, 0) = sin(4*pi*x)."""
    ops = fourier_diff_matrices(m)
    d2 = (2.0 * np.pi) ** 2 / (80.0 * np.pi ** 2) * ops.D2
    x = np.arange(m) / m
    system = SemiDiscreteSystem(
        dim=m, dynamics=lambda u: u @ d2.T, name="heat")
    return PdeProblem(
        name="heat", m=m, x=x, system=system,
        initial_state=np.sin(4.0 * np.pi * x),
        reference=lambda t: np.sin(4.0 * np.pi * x) * np.exp(-0.2 * t),
        params={})


def make_kdv(m: int, c: float = 0.5, beta: float = 3.0, mu: float = 9.0,
             p: float = 45.0) -> PdeProblem:
    """u_t + beta*u*u_x + mu*u_xxx = 0 on [-p, p], single-soliton solution.

    The change of variable x -> pi*x/p + pi maps the domain to [0, 2*pi] and
    replaces beta, mu by beta*pi/p and mu*pi^3/p^3.
    """
    ops = fourier_diff_matrices(m)
    beta_t = beta * np.pi / p
    mu_t = mu * np.pi ** 3 / p ** 3
    d1, d3 = ops.D1, ops.D3
    x = p * (2.0 * np.arange(m) / m - 1.0)  # physical grid on [-p, p)

    def soliton(xx, t):
        # Periodized over the 2p cell so the reference is consistent with the
        # periodic semi-discretization.
        total = np.zeros_like(xx)
        for shift in range(-3, 4):
            arg = 0.5 * np.sqrt(c / mu) * (xx - c * t + 2.0 * p * shift)
            total += 3.0 * c / beta / np.cosh(arg) ** 2
        return total

    system = SemiDiscreteSystem(
        dim=m,
        dynamics=lambda u: -beta_t * u * (u @ d1.T) - mu_t * (u @ d3.T),
        name="kdv")
    return PdeProblem(
        name="kdv", m=m, x=x, system=system, initial_state=soliton(x, 0.0),
        reference=lambda t: soliton(x, t),
        params={"c": c, "beta": beta, "mu": mu, "p": p})


def make_burgers(m: int, nu: float = 0.005) -> PdeProblem:
    """u_t + (u^2/2)_x = nu*u_xx on [0, 1], u(x, 0) = 0.2 + sin(2*pi*x).

    The advection term is kept in conservation form.  The reference is a
    stored high-accuracy trajectory (see ``load_reference``), regenerated by
    ``scripts/generate_burgers_reference.py``.
    """
    ops = fourier_diff_matrices(m)
    d1 = 2.0 * np.pi * ops.D1
    d2 = (2.0 * np.pi) ** 2 * ops.D2
    x = np.arange(m) / m

    system = SemiDiscreteSystem(
        dim=m,
        dynamics=lambda u: -0.5 * ((u * u) @ d1.T) + nu * (u @ d2.T),
        name="burgers")

    def reference(t: float) -> np.ndarray:
        header, values = load_reference("burgers", m=m, nu=nu)
        if abs(t - header["T"]) > 1e-12:
            raise ConfigError(
                f"stored burgers reference is for T={header['T']}, not t={t}")
        return values

    return PdeProblem(
        name="burgers", m=m, x=x, system=system,
        initial_state=0.2 + np.sin(2.0 * np.pi * x),
        reference=reference, params={"nu": nu})


def error_metrics(y: np.ndarray, y_star: np.ndarray) -> tuple[float, float]:
    """(relative L2 error, L-infinity error) against the reference."""
    y = np.asarray(y, dtype=float)
    y_star = np.asarray(y_star, dtype=float)
    rel_l2 = float(np.linalg.norm(y - y_star) / np.linalg.norm(y_star))
    l_inf = float(np.max(np.abs(y - y_star)))
    return rel_l2, l_inf


def reference_path(problem: str, m: int, **params) -> Path:
    tag = "_".join(f"{k}{v:g}" for k, v in sorted(params.items()))
    name = f"{problem}_m{m}" + (f"_{tag}" if tag else "") + ".csv"
    return _DATA_DIR / name


def write_reference(path: Path, header: dict, values: np.ndarray) -> None:
    """Store a reference state: JSON header line, then one value per row."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(header, sort_keys=True) + "\n")
        for v in values:
            fh.write(f"{float(v)!r}\n")


def load_reference(problem: str, m: int, **params) -> tuple[dict, np.ndarray]:
    """Load a stored reference state; returns (header, values)."""
    path = reference_path(problem, m, **params)
    if not path.exists():
        raise ConfigError(f"missing reference file {path}; run "
                          "scripts/generate_burgers_reference.py")
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ConfigError(f"malformed reference file {path}")
        header = json.loads(first[1:])
        values = np.array([float(line) for line in fh if line.strip()])
    if header.get("m") != m or values.size != m:
        raise ConfigError(f"reference file {path} does not match m={m}")
    return header, values
