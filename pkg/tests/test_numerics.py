"""Unit tests for the linear-algebra kernels."""

import numpy as np
import pytest

from align_bench.errors import DimensionError, ParameterError, SingularDiagonalError, SingularMatrixError
from align_bench.numerics import (
    condition_indicator,
    diag_apply,
    diag_inverse,
    matrix_rank,
    solve_square,
    span_inclusion_ranks,
    subspace_included,
    unit_columns,
)

from conftest import gauss_rank


class TestDiagApply:
    def test_identity_operator_is_noop(self):
        a = np.arange(6, dtype=complex).reshape(3, 2)
        assert np.array_equal(diag_apply(np.ones(3), a), a)

    def test_scales_rows(self):
        d = np.array([2.0, 3.0j])
        a = np.ones((2, 2), dtype=complex)
        out = diag_apply(d, a)
        assert np.array_equal(out, np.array([[2.0, 2.0], [3.0j, 3.0j]]))

    def test_vector_argument(self):
        d = np.array([1.0j, 2.0])
        assert np.array_equal(diag_apply(d, np.array([1.0, 1.0])), d)

    def test_round_trip_with_inverse(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            d = rng.normal(size=4) + 1j * rng.normal(size=4) + 2.0
            a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
            back = diag_apply(d, diag_apply(diag_inverse(d), a))
            assert np.linalg.norm(back - a) <= 1e-12 * np.linalg.norm(a)

    def test_composition_is_entrywise_product(self):
        rng = np.random.default_rng(4)
        d1 = rng.normal(size=5) + 1j * rng.normal(size=5)
        d2 = rng.normal(size=5) + 1j * rng.normal(size=5)
        a = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
        lhs = diag_apply(d1, diag_apply(d2, a))
        rhs = diag_apply(d1 * d2, a)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            diag_apply(np.ones(3), np.ones((4, 2)))

    def test_rejects_2d_operator(self):
        with pytest.raises(DimensionError):
            diag_apply(np.ones((2, 2)), np.ones((2, 2)))

    def test_rejects_non_finite(self):
        with pytest.raises(ParameterError):
            diag_apply(np.array([1.0, np.inf]), np.ones((2, 1)))


class TestDiagInverse:
    def test_identity(self):
        assert np.array_equal(diag_inverse(np.ones(4)), np.ones(4))

    def test_scalar_value(self):
        assert np.allclose(diag_inverse(np.array([2.0j])), np.array([-0.5j]))

    def test_involution(self):
        rng = np.random.default_rng(5)
        d = rng.uniform(0.5, 2.0, size=6) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=6))
        assert np.linalg.norm(diag_inverse(diag_inverse(d)) - d) <= 1e-14 * np.linalg.norm(d)

    def test_near_zero_entry_names_index(self):
        d = np.array([1.0, 1.0, 1e-13, 1.0])
        with pytest.raises(SingularDiagonalError) as err:
            diag_inverse(d)
        assert err.value.index == 2
        assert "2" in str(err.value)

    def test_eps_is_configurable(self):
        d = np.array([1.0, 1e-13])
        assert np.isfinite(diag_inverse(d, eps=1e-15)).all()


class TestMatrixRank:
    def test_zero_matrix(self):
        assert matrix_rank(np.zeros((4, 3), dtype=complex)) == 0

    def test_empty_matrix(self):
        assert matrix_rank(np.zeros((4, 0), dtype=complex)) == 0

    def test_identity(self):
        assert matrix_rank(np.eye(5, dtype=complex)) == 5

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(6)
        q = np.linalg.qr(rng.normal(size=(8, 5)) + 1j * rng.normal(size=(8, 5)))[0]
        assert matrix_rank(q) == 5

    def test_dependent_columns_match_elimination_oracle(self):
        rng = np.random.default_rng(7)
        v = rng.normal(size=5) + 1j * rng.normal(size=5)
        w = rng.normal(size=5) + 1j * rng.normal(size=5)
        a = np.column_stack([v, 2.0 * v, w])
        assert matrix_rank(a) == 2
        assert gauss_rank(a) == 2

    @pytest.mark.parametrize("seed", range(8))
    def test_random_low_rank_matches_elimination_oracle(self, seed):
        rng = np.random.default_rng(seed)
        m, n = rng.integers(2, 9), rng.integers(2, 9)
        r = int(rng.integers(1, min(m, n) + 1))
        a = (rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))) @ (
            rng.normal(size=(r, n)) + 1j * rng.normal(size=(r, n))
        )
        assert matrix_rank(a) == r == gauss_rank(a)

    def test_invariant_under_column_scaling(self):
        rng = np.random.default_rng(9)
        a = rng.normal(size=(6, 4)) + 1j * rng.normal(size=(6, 4))
        scales = np.array([1e-8, 1e8, -3.0, 1e5j])
        assert matrix_rank(a * scales) == matrix_rank(a) == 4

    def test_bounded_by_min_dimension(self):
        rng = np.random.default_rng(10)
        for m, n in [(3, 7), (7, 3), (1, 1)]:
            a = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
            assert matrix_rank(a) <= min(m, n)

    def test_tolerance_controls_decision(self):
        a = np.diag([1.0, 1e-6]).astype(complex)
        assert matrix_rank(a, tol_rel=1e-9) == 2
        # normalization rescales both columns to unit norm, so drop the
        # small direction by mixing it into a large column instead
        b = np.array([[1.0, 1.0], [0.0, 1e-6]], dtype=complex)
        assert matrix_rank(b, tol_rel=1e-3) == 1
        assert matrix_rank(b, tol_rel=1e-9) == 2


class TestSubspaceIncluded:
    def test_reflexive(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        assert subspace_included(a, a)

    def test_column_of_basis(self):
        basis = np.eye(4, dtype=complex)
        assert subspace_included(basis[:, 1:2], basis)

    def test_orthogonal_direction_excluded(self):
        basis = np.eye(4, dtype=complex)[:, :2]
        probe = np.eye(4, dtype=complex)[:, 3:4]
        assert not subspace_included(probe, basis)

    def test_scaled_copy_included(self):
        rng = np.random.default_rng(12)
        b = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
        assert subspace_included(b * 1e7, b)

    def test_transitive_chain(self):
        rng = np.random.default_rng(13)
        c = rng.normal(size=(8, 5)) + 1j * rng.normal(size=(8, 5))
        mix_b = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        b = c @ mix_b
        mix_a = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        a = b @ mix_a
        assert subspace_included(a, b)
        assert subspace_included(b, c)
        assert subspace_included(a, c)

    def test_rank_witness(self):
        basis = np.eye(4, dtype=complex)[:, :2]
        probe = np.eye(4, dtype=complex)[:, 3:4]
        included, rank_b, rank_joint = span_inclusion_ranks(probe, basis)
        assert (included, rank_b, rank_joint) == (False, 2, 3)

    def test_row_mismatch(self):
        with pytest.raises(DimensionError):
            subspace_included(np.ones((3, 1)), np.ones((4, 1)))


class TestSolveSquare:
    def test_identity(self):
        rhs = np.array([1.0 + 2j, 3.0, -1j])
        assert np.array_equal(solve_square(np.eye(3, dtype=complex), rhs), rhs)

    def test_diagonal_system(self):
        a = np.diag([2.0, 4.0]).astype(complex)
        x = solve_square(a, np.array([2.0, 4.0], dtype=complex))
        assert np.allclose(x, np.ones(2))

    def test_matrix_rhs_shape(self):
        rng = np.random.default_rng(14)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rhs = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
        x = solve_square(a, rhs)
        assert x.shape == (4, 2)

    @pytest.mark.parametrize("seed", range(6))
    def test_residual_relative_bound(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
        rhs = rng.normal(size=20) + 1j * rng.normal(size=20)
        x = solve_square(a, rhs)
        assert np.linalg.norm(a @ x - rhs) <= 1e-8 * np.linalg.norm(rhs)

    def test_singular_raises_with_condition(self):
        a = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
        with pytest.raises(SingularMatrixError) as err:
            solve_square(a, np.ones(2, dtype=complex))
        assert err.value.condition > 1e9

    def test_rectangular_rejected(self):
        with pytest.raises(DimensionError):
            solve_square(np.ones((3, 2)), np.ones(3))

    def test_rhs_mismatch_rejected(self):
        with pytest.raises(DimensionError):
            solve_square(np.eye(3), np.ones(4))


class TestHelpers:
    def test_unit_columns_norms(self):
        rng = np.random.default_rng(15)
        a = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        norms = np.linalg.norm(unit_columns(a), axis=0)
        assert np.allclose(norms, 1.0)

    def test_unit_columns_keeps_zero_columns(self):
        a = np.zeros((4, 2), dtype=complex)
        a[:, 0] = 1.0
        out = unit_columns(a)
        assert np.allclose(np.linalg.norm(out[:, 0]), 1.0)
        assert np.array_equal(out[:, 1], np.zeros(4))

    def test_condition_indicator_identity(self):
        assert condition_indicator(np.eye(4, dtype=complex)) == pytest.approx(1.0)

    def test_condition_indicator_singular(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
        assert condition_indicator(a) == float("inf")
