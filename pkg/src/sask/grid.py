"""Smolyak sparse grids built from nested Chebyshev-extrema point sets.

The one-dimensional building blocks are the extrema of Chebyshev polynomials,
cos(j*pi/(n-1)).  Level ``i`` uses m(i) = 2^(i-1) + 1 points (m(1) = 1) and the
sets are nested.  A d-dimensional grid at approximation level ``kappa``
collects tensor products of the *disjoint* increments of these sets over all
index combinations (i_1, ..., i_d) with d <= sum(i_j) <= d + kappa.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

_SQRT2_HALF = math.sqrt(2.0) / 2.0
_SNAP_TOL = 1e-15


def _snap(value: float) -> float:
    # cos() of the special angles does not hit 0 / +-1 / +-sqrt(2)/2 exactly in
    # floating point; snapping keeps set differences and dedup exact.
    for target in (0.0, 1.0, -1.0, _SQRT2_HALF, -_SQRT2_HALF):
        if abs(value - target) <= _SNAP_TOL:
            return target
    return value


def level_point_count(kappa: int) -> int:
    """Number of one-dimensional points n for approximation level kappa."""
    if kappa < 0:
        raise ConfigError(f"approximation level must be >= 0, got {kappa}")
    return 1 if kappa == 0 else 2**kappa + 1


def set_size(i: int) -> int:
    """m(i): number of points in the i-th nested set."""
    if i < 1:
        raise ConfigError(f"set index must be >= 1, got {i}")
    return 1 if i == 1 else 2 ** (i - 1) + 1


def nested_set(i: int) -> np.ndarray:
    """The i-th nested Chebyshev-extrema set, ordered so nesting is by prefix.

    The first element is always 0; each set extends the previous one by its
    new points in ascending order.
    """
    if i < 1:
        raise ConfigError(f"set index must be >= 1, got {i}")
    parts = [np.array([0.0])]
    parts.extend(disjoint_set(j) for j in range(2, i + 1))
    return np.concatenate(parts)


def disjoint_set(i: int) -> np.ndarray:
    """The increment A_i = N_i \\ N_{i-1} (A_1 = N_1), ascending."""
    if i < 1:
        raise ConfigError(f"set index must be >= 1, got {i}")
    if i == 1:
        return np.array([0.0])
    if i == 2:
        return np.array([-1.0, 1.0])
    # New points of level i are the odd-numerator extrema cos(j*pi/2^(i-1)).
    denom = 2 ** (i - 1)
    values = [_snap(math.cos(j * math.pi / denom)) for j in range(1, denom, 2)]
    return np.array(sorted(values))


def smolyak_combinations(d: int, kappa: int) -> list[tuple[int, ...]]:
    """All index combinations (i_1, ..., i_d) with d <= sum <= d + kappa.

    Ordered by increasing total; within a total, combinations sharing the
    larger sorted index pattern come first, then by descending lexicographic
    order, so the all-ones combination is always first.
    """
    if d < 1:
        raise ConfigError(f"dimension must be >= 1, got {d}")
    if kappa < 0:
        raise ConfigError(f"approximation level must be >= 0, got {kappa}")
    # Distribute each excess 0..kappa over the d dimensions (stars and bars);
    # enumerating the full index product would be exponential in d.
    combos = []
    for excess in range(kappa + 1):
        seen = set()
        for positions in itertools.combinations_with_replacement(
                range(d), excess):
            combo = [1] * d
            for pos in positions:
                combo[pos] += 1
            combo = tuple(combo)
            if combo not in seen:
                seen.add(combo)
                combos.append(combo)

    def key(combo: tuple[int, ...]):
        return (
            sum(combo),
            tuple(-v for v in sorted(combo, reverse=True)),
            tuple(-v for v in combo),
        )

    return sorted(combos, key=key)


@dataclass(frozen=True)
class SparseGrid:
    """A Smolyak sparse grid on the reference domain [-1, 1]^d.

    ``points`` is an (N, d) array whose first row is the center (0, ..., 0).
    ``point_offsets`` maps each index combination to the half-open row range
    of its tensor-product block.
    """

    dim: int
    kappa: int
    points: np.ndarray
    combos: tuple[tuple[int, ...], ...]
    point_offsets: dict[tuple[int, ...], tuple[int, int]]

    @property
    def size(self) -> int:
        return self.points.shape[0]


def build_grid(d: int, kappa: int) -> SparseGrid:
    """Build the sparse grid for dimension d at approximation level kappa.

    Within each index combination the tensor product is enumerated with the
    last dimension varying fastest, so the first point of the first (all-ones)
    block is the domain center.
    """
    combos = smolyak_combinations(d, kappa)
    blocks = []
    offsets: dict[tuple[int, ...], tuple[int, int]] = {}
    start = 0
    for combo in combos:
        axes = [disjoint_set(i) for i in combo]
        block = np.array(list(itertools.product(*axes)))
        blocks.append(block)
        offsets[combo] = (start, start + len(block))
        start += len(block)
    points = np.vstack(blocks)
    points.setflags(write=False)
    return SparseGrid(
        dim=d,
        kappa=kappa,
        points=points,
        combos=tuple(combos),
        point_offsets=offsets,
    )
