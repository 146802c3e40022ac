import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockdiag import model, subspace
from blockdiag.errors import GapViolation, NotAGraph, RankMismatch
from blockdiag.linalg import adj, fro

from conftest import GOLDEN_X, make_instance, random_complex, spectral_x


class TestSpectralProjection:
    def test_diagonal_split(self):
        pr = subspace.spectral_projection(
            np.diag([-1.0, 2.0]), subspace.SpectralSplit(threshold=0.0)
        )
        assert np.allclose(pr.p, np.diag([1.0, 0.0]), atol=1e-14)
        assert np.allclose(pr.p + pr.complement, np.eye(2), atol=1e-14)
        assert pr.gap == 3.0

    def test_golden_projection_matches_hand_values(self, golden):
        # eigenvector (1, x)/sqrt(1+x^2) for the low eigenvalue, so
        # P = [[1, x], [x, x^2]] / (1 + x^2)
        x = GOLDEN_X
        expect = np.array([[1.0, x], [x, x * x]]) / (1.0 + x * x)
        pr = subspace.spectral_projection(golden.B, subspace.SpectralSplit(threshold=0.0))
        assert np.allclose(pr.p, expect, atol=1e-12)
        assert abs(pr.p[0, 0].real - 0.7236068) < 1e-7
        assert abs(pr.p[0, 1].real - (-0.4472136)) < 1e-7

    def test_empty_selection(self):
        pr = subspace.spectral_projection(np.eye(2), subspace.SpectralSplit(threshold=0.0))
        assert np.array_equal(pr.p, np.zeros((2, 2)))
        assert np.allclose(pr.complement, np.eye(2), atol=1e-14)
        assert pr.gap == math.inf

    def test_threshold_on_eigenvalue_raises(self):
        with pytest.raises(GapViolation):
            subspace.spectral_projection(
                np.diag([0.0, 1.0]), subspace.SpectralSplit(threshold=1.0)
            )

    def test_index_split(self):
        pr = subspace.spectral_projection(
            np.diag([3.0, -2.0, 7.0]), subspace.SpectralSplit(indices=(0, 1))
        )
        assert int(round(np.trace(pr.p).real)) == 2
        assert pr.gap == 4.0

    def test_rank_equals_selection(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            p = make_instance(rng)
            pr = subspace.spectral_projection(
                p.B, subspace.SpectralSplit(indices=tuple(range(p.n0))), eigen=p.eig_B
            )
            assert int(round(np.trace(pr.p).real)) == p.n0
            assert fro(pr.p @ pr.p - pr.p) <= 1e-11


class TestGraphProjection:
    def test_zero_angular(self):
        g = subspace.graph_projection(np.zeros((2, 3)))
        assert np.allclose(g.q, np.diag([1.0, 1.0, 1.0, 0.0, 0.0]), atol=1e-14)

    def test_forty_five_degree_line(self):
        g = subspace.graph_projection([[1.0]])
        assert np.allclose(g.q, 0.5 * np.ones((2, 2)), atol=1e-14)

    def test_same_subspace_two_ways(self, golden):
        pr = subspace.spectral_projection(golden.B, subspace.SpectralSplit(threshold=0.0))
        g = subspace.graph_projection([[GOLDEN_X]])
        assert fro(pr.p - g.q) <= 1e-12

    def test_projector_properties(self):
        rng = np.random.default_rng(32)
        for _ in range(20):
            x = random_complex(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), 2.0)
            g = subspace.graph_projection(x)
            assert fro(g.q - adj(g.q)) <= 1e-12
            assert fro(g.q @ g.q - g.q) <= 1e-11
            n0 = x.shape[1]
            stack = np.vstack([np.eye(n0), x])
            assert fro((np.eye(g.q.shape[0]) - g.q) @ stack) <= 1e-11 * (1.0 + fro(x))
            assert fro(adj(g.basis) @ g.basis - np.eye(n0)) <= 1e-12

    def test_complement_identity(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            x = random_complex(rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), 2.0)
            q = subspace.graph_projection(x).q
            qc = subspace.complement_graph_projection(x)
            assert fro(q + qc - np.eye(q.shape[0])) <= 1e-11


class TestAngularFromProjection:
    def test_h0_itself(self):
        x = subspace.angular_from_projection(np.diag([1.0, 0.0]), 1)
        assert np.allclose(x, [[0.0]], atol=1e-14)

    def test_golden(self, golden):
        pr = subspace.spectral_projection(golden.B, subspace.SpectralSplit(threshold=0.0))
        x = subspace.angular_from_projection(pr.p, 1)
        assert abs(x[0, 0] - GOLDEN_X) < 1e-12

    def test_orthogonal_subspace_is_not_a_graph(self):
        with pytest.raises(NotAGraph):
            subspace.angular_from_projection(np.diag([0.0, 1.0]), 1)

    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            subspace.angular_from_projection(np.diag([1.0, 1.0, 0.0]), 1)

    def test_round_trip(self):
        rng = np.random.default_rng(34)
        for _ in range(25):
            n1, n0 = int(rng.integers(1, 11)), int(rng.integers(1, 11))
            x = random_complex(rng, n1, n0, 1.5)
            q = subspace.graph_projection(x).q
            back = subspace.angular_from_projection(q, n0)
            assert fro(back - x) <= 1e-9 * (1.0 + fro(x))


class TestInvarianceResiduals:
    def test_zero_coupling_zero_angular(self):
        p = model.assemble(np.diag([1.0, 2.0]), [[5.0]], np.zeros((2, 1)))
        res = subspace.invariance_residuals(p, np.zeros((1, 2)))
        assert res.r0 == 0.0 and res.r1 == 0.0

    def test_golden_solution(self, golden):
        # x - x^2 + 1 = 0 because x^2 = x + 1
        res = subspace.invariance_residuals(golden, [[GOLDEN_X]])
        assert res.r0 <= 1e-12 and res.r1 <= 1e-12

    def test_zero_angular_leaves_coupling(self, golden):
        res = subspace.invariance_residuals(golden, [[0.0]])
        assert abs(res.r0 - 1.0) < 1e-15  # ||W*|| = 1, unnormalized
        assert res.r0_normalized < res.r0

    def test_spectral_instances_have_tiny_residuals(self):
        rng = np.random.default_rng(35)
        for _ in range(15):
            p = make_instance(rng)
            x = spectral_x(p)
            res = subspace.invariance_residuals(p, x)
            assert res.r0_normalized <= 1e-10
            assert res.r1_normalized <= 1e-10


class TestReducingCheck:
    def test_golden_both_roots_reduce(self, golden):
        assert subspace.reducing_check(golden, [[GOLDEN_X]]).reducing
        other = (1.0 + math.sqrt(5.0)) / 2.0
        assert subspace.reducing_check(golden, [[other]]).reducing

    def test_zero_angular_does_not_reduce(self, golden):
        verdict = subspace.reducing_check(golden, [[0.0]])
        assert not verdict.reducing
        assert verdict.domain_splitting_automatic

    def test_matches_full_riccati(self):
        from blockdiag.riccati import riccati_residual

        rng = np.random.default_rng(36)
        for _ in range(20):
            p = make_instance(rng)
            for x in (spectral_x(p), random_complex(rng, p.n1, p.n0, 0.5)):
                verdict = subspace.reducing_check(p, x)
                report = riccati_residual(p, x)
                assert verdict.reducing == report.strong_solution


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_complement_property(seed):
    rng = np.random.default_rng(seed)
    x = random_complex(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)), 3.0)
    q = subspace.graph_projection(x).q
    qc = subspace.complement_graph_projection(x)
    assert fro(q + qc - np.eye(q.shape[0])) <= 1e-11
