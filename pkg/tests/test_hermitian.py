import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptd import hermitian as H
from gptd.discrimination import A3_M0, A3_M1, A3_RHO0, A3_RHO1
from gptd.errors import NotHermitianError

from support import eigvalsh, exact_trace_product, fractions_matrix, trace_norm_oracle

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)


def random_herm(seed, d, scale=1.0):
    return H.random_hermitian(d, np.random.default_rng(seed), scale)


class TestAsHermitian:
    def test_rejects_asymmetric(self):
        with pytest.raises(NotHermitianError):
            H.as_hermitian([[1, 1], [0, 1]])

    def test_symmetrizes_roundoff(self):
        m = H.as_hermitian([[1, 1 + 1e-14], [1, 1]])
        assert m[0, 1] == m[1, 0]

    def test_rejects_non_square_and_nan(self):
        with pytest.raises(NotHermitianError):
            H.as_hermitian(np.ones((2, 3)))
        with pytest.raises(NotHermitianError):
            H.as_hermitian([[np.nan, 0], [0, 1]])

    def test_result_is_read_only(self):
        m = H.as_hermitian(np.eye(2))
        with pytest.raises(ValueError):
            m[0, 0] = 2


class TestSpectral:
    def test_identity_single_group(self):
        dec = H.spectral_decompose(np.eye(4))
        np.testing.assert_allclose(dec.eigenvalues, [1, 1, 1, 1], atol=1e-15)
        assert len(dec.groups) == 1

    def test_swap_eigenvalues(self):
        np.testing.assert_allclose(H.eigvalsh(A3_M0), [-1, 1, 1, 1], atol=1e-14)

    def test_swap_extreme_eigenspaces(self):
        dec = H.spectral_decompose(A3_M0)
        assert dec.min_eigenspace().shape == (4, 1)
        assert dec.max_eigenspace().shape == (4, 3)
        singlet = np.array([0, 1, -1, 0]) / np.sqrt(2)
        assert abs(abs(np.vdot(dec.min_eigenspace()[:, 0], singlet)) - 1) < 1e-12

    def test_random_5x5_reconstruction(self):
        m = random_herm(7, 5)
        dec = H.spectral_decompose(m)
        assert np.max(np.abs(dec.reconstruct() - m)) <= 5e-10

    @settings(max_examples=60, deadline=None)
    @given(seeds, dims)
    def test_jacobi_matches_lapack(self, seed, d):
        m = random_herm(seed, d, scale=10.0)
        w, v = H.jacobi_eigh(m)
        np.testing.assert_allclose(w, eigvalsh(m), atol=1e-10 * max(1.0, np.linalg.norm(m)))
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-12)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-10 * max(1.0, np.linalg.norm(m)))

    def test_degenerate_groups(self):
        u = H.random_density_matrix(4, np.random.default_rng(1), rank=1)
        m = 2 * np.eye(4) - 3 * u
        dec = H.spectral_decompose(m)
        assert [len(g) for g in dec.groups] == [1, 3]
        assert dec.lambda_min == pytest.approx(-1, abs=1e-12)

    def test_jacobi_handles_16x16(self):
        m = random_herm(3, 16)
        np.testing.assert_allclose(H.eigvalsh(m), eigvalsh(m), atol=1e-10)

    def test_zero_matrix(self):
        w, v = H.jacobi_eigh(np.zeros((3, 3)))
        assert np.all(w == 0)
        np.testing.assert_array_equal(v, np.eye(3))


class TestParts:
    def test_diag_example(self):
        plus, minus = H.positive_negative_parts(np.diag([3.0, -1.0]))
        np.testing.assert_allclose(plus, np.diag([3, 0]), atol=1e-15)
        np.testing.assert_allclose(minus, np.diag([0, -1]), atol=1e-15)

    def test_a3_difference_parts_rank_one(self):
        plus, minus = H.positive_negative_parts(A3_RHO0 - A3_RHO1)
        assert H.trace(plus) == pytest.approx(1 / 8, abs=1e-14)
        assert H.trace(minus) == pytest.approx(-1 / 8, abs=1e-14)
        assert np.linalg.matrix_rank(plus, tol=1e-10) == 1
        assert np.linalg.matrix_rank(minus, tol=1e-10) == 1
        # positive part points along the symmetric vector (0, 1, 1, 0)
        sym = np.array([0, 1, 1, 0]) / np.sqrt(2)
        assert np.vdot(sym, plus @ sym).real == pytest.approx(1 / 8, abs=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(seeds, dims)
    def test_trace_identities(self, seed, d):
        m = random_herm(seed, d)
        plus, minus = H.positive_negative_parts(m)
        assert H.trace(plus) + H.trace(minus) == pytest.approx(H.trace(m), abs=1e-10)
        assert H.trace_norm(m) == pytest.approx(H.trace(plus) - H.trace(minus), abs=1e-10)
        assert np.all(eigvalsh(plus) > -1e-10)
        assert np.all(eigvalsh(minus) < 1e-10)
        assert np.max(np.abs(plus @ minus)) < 1e-10


class TestTraceNorm:
    def test_diag_half(self):
        assert H.trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1.0, abs=1e-15)

    def test_a3_half_difference(self):
        assert H.trace_norm(0.5 * A3_RHO0 - 0.5 * A3_RHO1) == pytest.approx(1 / 8, abs=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(seeds, dims)
    def test_matches_absolute_eigenvalue_sum(self, seed, d):
        m = random_herm(seed, d)
        assert H.trace_norm(m) == pytest.approx(trace_norm_oracle(m), abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(seeds, dims)
    def test_triangle_inequality(self, seed, d):
        a, b = random_herm(seed, d), random_herm(seed + 1, d)
        assert H.trace_norm(a + b) <= H.trace_norm(a) + H.trace_norm(b) + 1e-10


class TestTensorAndPartialTranspose:
    def test_identities(self):
        np.testing.assert_array_equal(H.tensor_product(np.eye(2), np.eye(2)), np.eye(4))
        e0, e1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        np.testing.assert_array_equal(H.tensor_product(e0, e1), np.diag([0, 1, 0, 0]))

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_product_spectrum(self, seed):
        a, b = random_herm(seed, 2), random_herm(seed + 1, 3)
        expected = np.sort(np.outer(eigvalsh(a), eigvalsh(b)).ravel())
        np.testing.assert_allclose(eigvalsh(H.tensor_product(a, b)), expected, atol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_partial_transpose_of_product(self, seed):
        a, b = random_herm(seed, 2), random_herm(seed + 1, 3)
        np.testing.assert_allclose(H.partial_transpose(np.kron(a, b), 2, 3), np.kron(a, b.T), atol=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_involution(self, seed):
        m = random_herm(seed, 4)
        np.testing.assert_array_equal(H.partial_transpose(H.partial_transpose(m, 2, 2), 2, 2), m)

    def test_swap_partial_transpose_spectrum(self):
        # index permutation by hand: (i j | k l) -> (i l | k j)
        pt = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        pt[2 * i + j, 2 * k + l] = A3_M0[2 * i + l, 2 * k + j]
        np.testing.assert_array_equal(H.partial_transpose(A3_M0, 2, 2), pt)
        np.testing.assert_allclose(eigvalsh(pt), [0, 0, 0, 2], atol=1e-14)

    def test_preserves_hs_norm(self):
        m = random_herm(5, 4)
        assert H.hs_norm(H.partial_transpose(m, 2, 2)) == pytest.approx(H.hs_norm(m), rel=1e-14)


class TestInnerProduct:
    rho0 = fractions_matrix([[2, 0, 0, 0], [0, 2, 1, 0], [0, 1, 2, 0], [0, 0, 0, 2]], 8)
    rho1 = fractions_matrix(np.eye(4, dtype=int), 4)
    m0 = fractions_matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    m1 = fractions_matrix([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]])

    def test_identity_pairing(self):
        assert H.hs_inner(np.eye(4), np.eye(4) / 4) == pytest.approx(1.0, abs=1e-15)

    def test_rho1_m0(self):
        assert exact_trace_product(self.rho1, self.m0) == 0.5
        assert H.hs_inner(A3_RHO1, A3_M0) == pytest.approx(0.5, abs=1e-15)

    def test_rho0_m1(self):
        assert exact_trace_product(self.rho0, self.m1) == 0.25
        assert H.hs_inner(A3_RHO0, A3_M1) == pytest.approx(0.25, abs=1e-15)


class TestCoordinates:
    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_basis_is_orthonormal(self, d):
        basis = H.orthonormal_hermitian_basis(d)
        gram = np.array([[H.hs_inner(a, b) for b in basis] for a in basis])
        np.testing.assert_allclose(gram, np.eye(d * d), atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(seeds, dims)
    def test_round_trip_and_isometry(self, seed, d):
        a, b = random_herm(seed, d), random_herm(seed + 1, d)
        np.testing.assert_allclose(H.from_coords(H.to_coords(a), d), a, atol=1e-14)
        assert H.to_coords(a) @ H.to_coords(b) == pytest.approx(H.hs_inner(a, b), abs=1e-12)

    def test_random_density_matrix_is_state(self):
        rho = H.random_density_matrix(3, np.random.default_rng(0), rank=2)
        assert H.trace(rho) == pytest.approx(1.0, abs=1e-14)
        w = eigvalsh(rho)
        assert w[0] > -1e-14 and np.sum(w > 1e-12) == 2
