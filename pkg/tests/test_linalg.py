import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockdiag import linalg as la
from blockdiag.errors import DimensionMismatch, NotHermitian, Singular

from conftest import random_complex, random_hermitian

PHI = (1.0 + math.sqrt(5.0)) / 2.0


class TestHermitianEig:
    def test_identity(self):
        e = la.hermitian_eig(np.eye(2))
        assert np.array_equal(e.eigenvalues, [1.0, 1.0])
        assert np.array_equal(e.vectors, np.eye(2))

    def test_golden_matrix(self):
        # roots of lam^2 - lam - 1 = 0
        e = la.hermitian_eig([[0.0, 1.0], [1.0, 1.0]])
        assert abs(e.eigenvalues[0] - (1.0 - math.sqrt(5.0)) / 2.0) < 1e-13
        assert abs(e.eigenvalues[1] - PHI) < 1e-13

    def test_already_diagonal(self):
        e = la.hermitian_eig(np.diag([3.0, -2.0, 7.0]))
        assert np.array_equal(e.eigenvalues, [-2.0, 3.0, 7.0])
        # eigenvectors are a column permutation of the identity
        assert np.array_equal(np.abs(e.vectors), np.eye(3)[:, [1, 0, 2]])

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            la.hermitian_eig([[0.0, 1.0], [0.0, 0.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            la.hermitian_eig(np.zeros((2, 3)))

    def test_reconstruction_500_random(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            n = int(rng.integers(1, 21))
            m = random_hermitian(rng, n)
            e = la.hermitian_eig(m)
            scale = 1.0 + la.fro(m)
            rec = (e.vectors * e.eigenvalues) @ la.adj(e.vectors)
            assert la.fro(rec - m) <= 1e-11 * scale
            assert la.fro(m @ e.vectors - e.vectors * e.eigenvalues) <= 1e-12 * scale
            assert la.fro(la.adj(e.vectors) @ e.vectors - np.eye(n)) <= 1e-12
            assert np.all(np.diff(e.eigenvalues) >= 0)

    def test_matches_lapack(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            m = random_hermitian(rng, int(rng.integers(2, 16)))
            ours = la.hermitian_eig(m).eigenvalues
            ref = np.linalg.eigvalsh(m)
            assert np.max(np.abs(ours - ref)) <= 1e-11 * (1.0 + la.fro(m))


class TestPolar:
    def test_identity(self):
        u, p = la.polar_decompose(np.eye(3))
        assert np.allclose(u, np.eye(3), atol=1e-14)
        assert np.allclose(p, np.eye(3), atol=1e-14)

    def test_positive_scaling(self):
        u, p = la.polar_decompose(2.0 * np.eye(2))
        assert np.allclose(u, np.eye(2), atol=1e-13)
        assert np.allclose(p, 2.0 * np.eye(2), atol=1e-13)

    def test_golden_t_matrix(self):
        x = (1.0 - math.sqrt(5.0)) / 2.0
        t = np.array([[1.0, x], [-x, 1.0]], dtype=complex)
        # oracle: T*T = (1 + x^2) I, checked by direct multiplication
        assert np.allclose(t.conj().T @ t, (1 + x * x) * np.eye(2), atol=1e-15)
        u, p = la.polar_decompose(t)
        r = math.sqrt(1 + x * x)
        assert np.allclose(p, r * np.eye(2), atol=1e-12)
        assert np.allclose(u, t / r, atol=1e-12)

    def test_random_invertible(self):
        rng = np.random.default_rng(9)
        for _ in range(60):
            n = int(rng.integers(1, 15))
            m = random_complex(rng, n, n)
            u, p = la.polar_decompose(m)
            nm = la.fro(m)
            assert la.fro(u @ p - m) <= 1e-11 * nm
            assert la.fro(la.adj(u) @ u - np.eye(n)) <= 1e-11
            lam = la.hermitian_eig(p).eigenvalues
            assert lam[0] >= -1e-12 * nm

    def test_singular_input(self):
        with pytest.raises(Singular):
            la.polar_decompose(np.diag([1.0, 0.0]))


class TestSingularExtremes:
    def test_identity(self):
        assert la.singular_extremes(np.eye(3)) == (1.0, 1.0)

    def test_rank_deficient_diagonal(self):
        assert la.singular_extremes(np.diag([2.0, 0.0])) == (2.0, 0.0)

    def test_hermitian_abs_eigenvalues(self):
        smax, smin = la.singular_extremes([[0.0, 1.0], [1.0, 1.0]])
        assert abs(smax - PHI) < 1e-12
        assert abs(smin - (PHI - 1.0)) < 1e-12

    def test_consistency(self):
        rng = np.random.default_rng(10)
        for _ in range(40):
            m = random_complex(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
            smax, smin = la.singular_extremes(m)
            assert 0.0 <= smin <= smax
            smax_adj, _ = la.singular_extremes(la.adj(m))
            assert abs(smax - smax_adj) <= 1e-11 * (1.0 + smax)


class TestSolveLinear:
    def test_identity(self):
        r = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
        assert np.array_equal(la.solve_linear(np.eye(2), r), r)

    def test_scaled_identity(self):
        sol = la.solve_linear(2.0 * np.eye(2), np.eye(2))
        assert np.allclose(sol, 0.5 * np.eye(2), atol=1e-15)

    def test_two_by_two_inverse_formula(self):
        x = -0.6180339887498949
        m = np.array([[1.0, -x], [x, 1.0]])
        sol = la.solve_linear(m, np.eye(2))
        expect = np.array([[1.0, x], [-x, 1.0]]) / (1.0 + x * x)
        assert np.allclose(sol, expect, atol=1e-14)
        assert abs(sol[0, 0] - 0.7236068) < 1e-7
        assert abs(sol[0, 1] - (-0.4472136)) < 1e-7

    def test_round_trip_well_conditioned(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            n = int(rng.integers(1, 25))
            # build condition <= 1e6 explicitly from a singular value profile
            u, _ = la.polar_decompose(random_complex(rng, n, n))
            v, _ = la.polar_decompose(random_complex(rng, n, n))
            sigma = rng.uniform(1e-6, 1.0, size=n)
            m = (u * sigma) @ la.adj(v)
            xs = random_complex(rng, n, int(rng.integers(1, 4)))
            sol = la.solve_linear(m, m @ xs)
            assert la.fro(sol - xs) <= 1e-9 * (1.0 + la.fro(xs))

    def test_singular_raises_with_sigma(self):
        with pytest.raises(Singular) as err:
            la.solve_linear(np.diag([1.0, 0.0]), np.eye(2))
        assert err.value.sigma_min == 0.0

    def test_residual_postcondition(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            n = int(rng.integers(1, 40))
            m = random_complex(rng, n, n)
            rhs = random_complex(rng, n, 2)
            sol = la.solve_linear(m, rhs)
            assert la.fro(m @ sol - rhs) <= 1e-10 * (1.0 + la.fro(m) * la.fro(sol))


class TestHermitianPower:
    def test_square_root_squares_back(self):
        rng = np.random.default_rng(13)
        m = random_hermitian(rng, 6)
        g = la.adj(m) @ m  # positive semidefinite
        r = la.hermitian_power(g, 0.5, check=False)
        assert la.fro(r @ r - g) <= 1e-11 * (1.0 + la.fro(g))

    def test_clamps_roundoff_negatives(self):
        g = np.diag([1.0, -1e-16])
        r = la.hermitian_power(g, 0.5, check=False)
        assert np.allclose(r, np.diag([1.0, 0.0]), atol=1e-12)

    def test_negative_power_of_singular_raises(self):
        with pytest.raises(Singular):
            la.hermitian_power(np.diag([1.0, 0.0]), -0.5, check=False)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_eig_reconstruction_property(n, seed):
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, n)
    e = la.hermitian_eig(m)
    rec = (e.vectors * e.eigenvalues) @ la.adj(e.vectors)
    assert la.fro(rec - m) <= 1e-11 * (1.0 + la.fro(m))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_lu_solve_matches_numpy(n, seed):
    rng = np.random.default_rng(seed)
    m = random_complex(rng, n, n)
    rhs = random_complex(rng, n, 1)
    smax, smin = la.singular_extremes(m)
    if smin <= 1e-6 * smax:  # solution comparison is meaningful up to cond 1e6
        return
    ours = la.solve_linear(m, rhs)
    ref = np.linalg.solve(m, rhs)
    assert la.fro(ours - ref) <= 1e-8 * (1.0 + la.fro(ref))
