"""Sparse grid construction tests."""

import itertools
import math

import numpy as np
import pytest

from sask.exceptions import ConfigError
from sask.grid import (
    build_grid,
    disjoint_set,
    nested_set,
    set_size,
    smolyak_combinations,
)

SQRT2_HALF = math.sqrt(2.0) / 2.0

# Counts for (d, kappa) in {2..5} x {1..3}.
GROWTH_TABLE = {
    (2, 1): 5, (2, 2): 13, (2, 3): 29,
    (3, 1): 7, (3, 2): 25, (3, 3): 69,
    (4, 1): 9, (4, 2): 41, (4, 3): 137,
    (5, 1): 11, (5, 2): 61, (5, 3): 241,
}


class TestNestedSet:
    def test_first_three_sets(self):
        assert nested_set(1).tolist() == [0.0]
        assert nested_set(2).tolist() == [0.0, -1.0, 1.0]
        assert nested_set(3).tolist() == [0.0, -1.0, 1.0, -SQRT2_HALF,
                                          SQRT2_HALF]

    def test_sizes(self):
        for i in range(1, 7):
            assert len(nested_set(i)) == set_size(i)

    def test_nesting_is_by_prefix(self):
        for i in range(1, 6):
            smaller, larger = nested_set(i), nested_set(i + 1)
            assert larger[: len(smaller)].tolist() == smaller.tolist()

    def test_zero_index_rejected(self):
        with pytest.raises(ConfigError):
            nested_set(0)
        with pytest.raises(ConfigError):
            disjoint_set(0)


class TestDisjointSet:
    def test_small_sets(self):
        assert disjoint_set(1).tolist() == [0.0]
        assert disjoint_set(2).tolist() == [-1.0, 1.0]
        assert disjoint_set(3).tolist() == [-SQRT2_HALF, SQRT2_HALF]

    def test_level_four_against_enumeration(self):
        # Oracle: all extrema cos(j*pi/8) minus the level-3 nested set.
        extrema = {round(math.cos(j * math.pi / 8), 12) for j in range(9)}
        expected = sorted(
            extrema - {round(v, 12) for v in nested_set(3)})
        got = sorted(round(v, 12) for v in disjoint_set(4))
        assert got == expected
        assert len(got) == 4

    def test_sizes(self):
        assert len(disjoint_set(1)) == 1
        assert len(disjoint_set(2)) == 2
        for i in range(3, 8):
            assert len(disjoint_set(i)) == 2 ** (i - 2)

    def test_disjoint_from_previous_nested(self):
        for i in range(2, 6):
            previous = set(nested_set(i - 1).tolist())
            assert previous.isdisjoint(disjoint_set(i).tolist())


class TestSmolyakCombinations:
    def test_d2_kappa2(self):
        assert smolyak_combinations(2, 2) == [
            (1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2)]

    def test_d1_kappa0(self):
        assert smolyak_combinations(1, 0) == [(1,)]

    def test_d3_kappa1(self):
        assert smolyak_combinations(3, 1) == [
            (1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)]

    def test_constraint_holds(self):
        for d, kappa in [(2, 3), (4, 2), (6, 1)]:
            combos = smolyak_combinations(d, kappa)
            assert combos[0] == (1,) * d
            for combo in combos:
                assert d <= sum(combo) <= d + kappa
            assert len(set(combos)) == len(combos)

    def test_totals_nondecreasing(self):
        combos = smolyak_combinations(3, 3)
        totals = [sum(c) for c in combos]
        assert totals == sorted(totals)


class TestBuildGrid:
    def test_d2_kappa1_points(self):
        grid = build_grid(2, 1)
        assert grid.points.tolist() == [
            [0.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]]

    def test_growth_table(self):
        for (d, kappa), count in GROWTH_TABLE.items():
            assert build_grid(d, kappa).size == count

    def test_kappa1_count_is_2d_plus_1(self):
        for d in range(1, 12):
            assert build_grid(d, 1).size == 2 * d + 1

    def test_center_first_and_no_duplicates(self):
        for d, kappa in [(1, 3), (2, 2), (3, 2), (4, 1)]:
            grid = build_grid(d, kappa)
            assert grid.points[0].tolist() == [0.0] * d
            assert len({tuple(p) for p in grid.points}) == grid.size

    def test_coordinates_in_reference_domain(self):
        grid = build_grid(3, 3)
        assert np.all(np.abs(grid.points) <= 1.0)

    def test_symmetry_under_negation_and_permutation(self):
        grid = build_grid(3, 2)
        points = {tuple(p) for p in grid.points}
        assert {tuple(-p) for p in grid.points} == points
        assert {(p[1], p[2], p[0]) for p in grid.points} == points

    def test_point_offsets_partition(self):
        grid = build_grid(2, 2)
        covered = []
        for combo in grid.combos:
            start, stop = grid.point_offsets[combo]
            covered.extend(range(start, stop))
        assert covered == list(range(grid.size))

    def test_disjoint_union_equals_nested_union(self):
        # The disjoint construction must give the same point set as the
        # union over full nested tensor products.
        for d, kappa in [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3)]:
            grid = build_grid(d, kappa)
            nested_union = set()
            for combo in smolyak_combinations(d, kappa):
                axes = [nested_set(i).tolist() for i in combo]
                nested_union.update(itertools.product(*axes))
            assert {tuple(p) for p in grid.points} == nested_union
