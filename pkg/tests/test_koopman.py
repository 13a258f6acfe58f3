"""Local Koopman decomposition tests."""

import numpy as np
import pytest
from scipy.linalg import expm

from sask.chebyshev import build_basis, build_operators
from sask.exceptions import ConfigError, EvaluationError
from sask.grid import build_grid
from sask.koopman import (
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


def _reference(d, kappa):
    grid = build_grid(d, kappa)
    basis = build_basis(d, kappa)
    return grid, build_operators(grid, basis)


def _decompose_linear(a, x0, r=1.0, kappa=2):
    d = a.shape[0]
    grid, ops = _reference(d, kappa)
    box = NeighborhoodBox.from_center(np.asarray(x0, dtype=float), r)
    system = SemiDiscreteSystem(dim=d, dynamics=lambda x: x @ a.T,
                                name="linear")
    return decompose(system, grid, ops, box)


class TestNeighborhoodBox:
    def test_from_center(self):
        box = NeighborhoodBox.from_center(np.array([1.0, -2.0]), 0.5)
        np.testing.assert_allclose(box.lower, [0.5, -2.5])
        np.testing.assert_allclose(box.upper, [1.5, -1.5])
        np.testing.assert_allclose(box.center, [1.0, -2.0])
        assert box.radius == pytest.approx(0.5)

    def test_invalid_boxes_rejected(self):
        with pytest.raises(ConfigError):
            NeighborhoodBox.from_center(np.array([0.0]), -1.0)
        with pytest.raises(ConfigError):
            NeighborhoodBox(lower=np.array([0.0, 0.0]),
                            upper=np.array([1.0, 2.0]))
        with pytest.raises(ConfigError):
            NeighborhoodBox(lower=np.array([1.0]), upper=np.array([1.0]))


class TestRescaling:
    def test_points_map_affinely(self):
        grid, ops = _reference(2, 1)
        box = NeighborhoodBox.from_center(np.array([3.0, -1.0]), 0.25)
        scaled = rescale_to_box(grid, ops, box)
        # Center of the reference grid maps to the box center.
        np.testing.assert_allclose(scaled.points[0], box.center)
        assert np.all(scaled.points >= box.lower - 1e-15)
        assert np.all(scaled.points <= box.upper + 1e-15)

    def test_derivative_scaling(self):
        grid, ops = _reference(1, 1)
        box = NeighborhoodBox.from_center(np.array([0.0]), 0.5)
        scaled = rescale_to_box(grid, ops, box)
        # Chain rule: d/dx = (2 / width) d/dxi with width = 2r = 1.
        np.testing.assert_allclose(scaled.G[0], 2.0 * ops.G[0])

    def test_dimension_mismatch(self):
        grid, ops = _reference(2, 1)
        with pytest.raises(ConfigError):
            rescale_to_box(grid, ops,
                           NeighborhoodBox.from_center(np.zeros(3), 1.0))


class TestGenerator:
    def test_1d_decay_eigenvalues(self):
        # Oracle: for f(x) = -x on [-1, 1] the collocation of U = -x d/dx in
        # the monomial basis {1, x, ..., x^4} is lower triangular with
        # diagonal (0, -1, ..., -4); the Chebyshev collocation is similar to
        # it (same nodes, same polynomial space), so the spectra agree.
        grid, ops = _reference(1, 2)
        nodes = grid.points[:, 0]
        vand = np.vander(nodes, 5, increasing=True)
        dvand = np.column_stack(
            [np.zeros_like(nodes)] +
            [k * nodes ** (k - 1) for k in range(1, 5)])
        u_monomial = np.linalg.solve(vand, -nodes[:, None] * dvand)
        oracle = np.sort(np.linalg.eigvals(u_monomial).real)
        np.testing.assert_allclose(oracle, [-4, -3, -2, -1, 0], atol=1e-10)

        system = SemiDiscreteSystem(dim=1, dynamics=lambda x: -x)
        box = NeighborhoodBox.from_center(np.array([0.0]), 1.0)
        generator = assemble_generator(system, rescale_to_box(grid, ops, box))
        eigenvalues, _ = eigendecompose(generator, ops)
        np.testing.assert_allclose(np.sort(eigenvalues.real), oracle,
                                   atol=1e-10)
        np.testing.assert_allclose(eigenvalues.imag, 0.0, atol=1e-10)

    def test_eigenvalues_sorted_by_real_part(self):
        dec = _decompose_linear(np.array([[0.0, 1.0], [-1.0, 0.0]]),
                                [0.3, -0.2])
        real = dec.eigenvalues.real
        assert np.all(np.diff(real) <= 1e-12)

    def test_non_finite_dynamics_reported(self):
        grid, ops = _reference(1, 1)
        system = SemiDiscreteSystem(dim=1, dynamics=lambda x: 1.0 / x)
        box = NeighborhoodBox.from_center(np.array([0.0]), 1.0)
        with pytest.raises(EvaluationError):
            assemble_generator(system, rescale_to_box(grid, ops, box))

    def test_shape_mismatch_reported(self):
        grid, ops = _reference(2, 1)
        system = SemiDiscreteSystem(dim=2,
                                    dynamics=lambda x: x[..., :1])
        box = NeighborhoodBox.from_center(np.zeros(2), 1.0)
        with pytest.raises(EvaluationError):
            assemble_generator(system, rescale_to_box(grid, ops, box))


class TestLinearSystems:
    def test_spectrum_contains_matrix_eigenvalues(self):
        rng = np.random.default_rng(42)
        for d in (2, 3):
            for _ in range(5):
                a = rng.normal(size=(d, d))
                x0 = rng.uniform(-1.0, 1.0, size=d)
                dec = _decompose_linear(a, x0)
                oracle = np.linalg.eigvals(a)
                for lam in oracle:
                    dist = np.min(np.abs(dec.eigenvalues - lam))
                    assert dist < 1e-8

    def test_reconstruction_matches_matrix_exponential(self):
        rng = np.random.default_rng(123)
        for _ in range(5):
            a = rng.normal(size=(2, 2))
            x0 = rng.uniform(-0.5, 0.5, size=2)
            dec = _decompose_linear(a, x0)
            for t in (0.0, 0.1, 0.5):
                expected = expm(a * t) @ x0
                got = evaluate_solution(dec, t)
                np.testing.assert_allclose(got, expected, atol=1e-10,
                                           rtol=1e-8)

    def test_rotation_quarter_turn(self):
        a = np.array([[0.0, 1.0], [-1.0, 0.0]])
        dec = _decompose_linear(a, [1.0, 0.0], r=1.5)
        got = evaluate_solution(dec, np.pi / 2.0)
        np.testing.assert_allclose(got, [0.0, -1.0], atol=1e-10)

    def test_defective_system_still_reconstructs(self):
        # The collocated generator of a rotation has repeated eigenvalues,
        # which makes Phi rank deficient; the minimum-norm mode solve must
        # still reproduce the trajectory.
        a = np.array([[0.0, 2.0], [-2.0, 0.0]])
        x0 = np.array([0.4, -0.1])
        dec = _decompose_linear(a, x0, r=1.0, kappa=2)
        for t in (0.2, 0.7):
            np.testing.assert_allclose(evaluate_solution(dec, t),
                                       expm(a * t) @ x0, atol=1e-9)


class TestModesAndEvaluation:
    def test_modes_reproduce_grid_at_anchor(self):
        dec = _decompose_linear(np.array([[-1.0, 0.3], [0.1, -2.0]]),
                                [0.2, 0.5])
        # At t = anchor_time the reconstruction returns the box center.
        np.testing.assert_allclose(evaluate_solution(dec, 0.0), [0.2, 0.5],
                                   atol=1e-12)

    def test_inconsistent_mode_system_raises(self):
        phi = np.zeros((3, 3), dtype=complex)
        phi[:, 0] = 1.0  # rank one, inconsistent with generic rhs
        points = np.arange(6.0).reshape(3, 2)
        from sask.exceptions import ConditioningError
        with pytest.raises(ConditioningError):
            solve_modes(phi, points)

    def test_evaluation_before_anchor_rejected(self):
        dec = KoopmanDecomposition(
            eigenvalues=np.array([0.0 + 0j]),
            phi=np.array([[1.0 + 0j]]),
            modes=np.array([[1.0 + 0j]]),
            anchor_time=2.0)
        with pytest.raises(ConfigError):
            evaluate_solution(dec, 1.0)


class TestExactLinearEigenpairs:
    def test_eigenfunction_property(self):
        # phi_j(x) = w_j . x satisfies d/dt phi_j(x(t)) = lambda_j phi_j.
        a = np.array([[-0.5, 1.2], [0.3, -1.5]])
        eigenvalues, w = linear_eigenpairs(a)
        rng = np.random.default_rng(5)
        for _ in range(5):
            x = rng.normal(size=2)
            lhs = w.T @ (a @ x)          # gradient . f(x)
            rhs = eigenvalues * (w.T @ x)
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_unit_norm_and_matching_spectrum(self):
        a = np.array([[0.0, 1.0], [-2.0, -0.1]])
        eigenvalues, w = linear_eigenpairs(a)
        np.testing.assert_allclose(np.linalg.norm(w, axis=0), 1.0)
        np.testing.assert_allclose(np.sort_complex(eigenvalues),
                                   np.sort_complex(np.linalg.eigvals(a)),
                                   atol=1e-12)

    def test_repeated_eigenvalues_rejected(self):
        with pytest.raises(ConfigError):
            linear_eigenpairs(np.eye(2))


class TestPerturbationBound:
    SYSTEMS = [
        np.array([[-1.0, 0.5], [0.0, -2.0]]),
        np.array([[0.0, 1.0], [-1.0, -0.2]]),
        np.array([[-0.3, 0.8, 0.0], [0.1, -1.1, 0.4], [0.0, 0.2, -2.5]]),
    ]

    def test_zero_perturbation_gives_zero_error(self):
        rng = np.random.default_rng(0)
        observed, bound = perturbation_bound_check(
            self.SYSTEMS[0], np.array([1.0, -1.0]), 1.0, 0.0, 0.0, rng)
        assert observed == pytest.approx(0.0, abs=1e-14)
        assert bound == pytest.approx(0.0, abs=1e-14)

    def test_bound_dominates_observed_error(self):
        rng = np.random.default_rng(2024)
        for a in self.SYSTEMS:
            d = a.shape[0]
            x0 = rng.uniform(-1.0, 1.0, size=d)
            for eps in (1e-6, 1e-4):
                for t in (0.5, 1.0, 2.0):
                    for _ in range(10):
                        observed, bound = perturbation_bound_check(
                            a, x0, t, eps, eps, rng)
                        assert observed <= bound

    def test_bound_scales_with_epsilon(self):
        rng = np.random.default_rng(9)
        _, b_small = perturbation_bound_check(
            self.SYSTEMS[0], np.array([1.0, 0.5]), 1.0, 1e-8, 1e-8, rng)
        _, b_large = perturbation_bound_check(
            self.SYSTEMS[0], np.array([1.0, 0.5]), 1.0, 1e-4, 1e-4, rng)
        assert b_large > b_small
