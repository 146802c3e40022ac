import math
from fractions import Fraction

import numpy as np
import pytest

from blockdiag import model, riccati
from blockdiag.errors import NoConvergence, SpectraOverlap
from blockdiag.linalg import fro

from conftest import GOLDEN_X, make_instance, random_complex, spectral_x


class TestRiccatiResidual:
    def test_zero_everything(self):
        p = model.assemble(np.diag([1.0, 2.0]), [[5.0]], np.zeros((2, 1)))
        rep = riccati.riccati_residual(p, np.zeros((1, 2)))
        assert rep.full_residual == 0.0
        assert rep.split_residuals == (0.0, 0.0)
        assert rep.intertwining == (0.0, 0.0)
        assert rep.strong_solution

    def test_golden_solution(self, golden):
        rep = riccati.riccati_residual(golden, [[GOLDEN_X]])
        assert rep.full_residual <= 1e-12
        assert max(rep.split_residuals) <= 1e-12
        assert max(rep.intertwining) <= 1e-12
        assert rep.strong_solution

    def test_half_is_not_a_solution(self, golden):
        # -x^2 + x + 1 at x = 0.5 is 1.25 and lands in both off-diagonal blocks
        rep = riccati.riccati_residual(golden, [[0.5]])
        assert rep.full_residual > 0.1
        assert not rep.strong_solution
        y = riccati.skew_companion(np.array([[0.5]]))
        r_full = golden.A @ y - y @ golden.A - y @ golden.V @ y + golden.V
        assert abs(abs(r_full[0, 1]) - 1.25) < 1e-14
        assert abs(abs(r_full[1, 0]) - 1.25) < 1e-14

    def test_full_residual_is_split_pair(self):
        # the full residual matrix is off-diagonal with exactly the two
        # split residual blocks, so ||full||^2 = r0^2 + r1^2
        rng = np.random.default_rng(41)
        for _ in range(20):
            p = make_instance(rng)
            x = random_complex(rng, p.n1, p.n0)
            rep = riccati.riccati_residual(p, x)
            r0, r1 = rep.split_residuals
            assert abs(rep.full_residual - math.hypot(r0, r1)) <= 1e-12 * (1.0 + rep.full_residual)

    def test_equivalence_chain_200_instances(self):
        rng = np.random.default_rng(42)
        tol = 1e-9
        for _ in range(200):
            p = make_instance(rng, n0=int(rng.integers(1, 5)), n1=int(rng.integers(1, 5)))
            solved = rng.random() < 0.5
            x = spectral_x(p) if solved else random_complex(rng, p.n1, p.n0, 0.3)
            rep = riccati.riccati_residual(p, x, tol=tol)
            verdicts = {
                rep.full_residual_normalized <= tol,
                max(rep.split_residuals_normalized) <= tol,
                max(rep.intertwining_normalized) <= tol,
            }
            assert len(verdicts) == 1


class TestSylvester:
    def test_scalar(self):
        z = riccati.sylvester_solve([[2.0]], [[0.0]], [[1.0]])
        assert np.allclose(z, [[0.5]], atol=1e-15)

    def test_decoupled_diagonal(self):
        z = riccati.sylvester_solve(np.diag([1.0, 2.0]), [[0.0]], [[1.0], [1.0]])
        assert np.allclose(z, [[1.0], [0.5]], atol=1e-14)

    def test_overlapping_spectra(self):
        with pytest.raises(SpectraOverlap):
            riccati.sylvester_solve([[1.0]], [[1.0]], [[1.0]])

    def test_random_residual(self):
        rng = np.random.default_rng(43)
        for _ in range(25):
            m, k = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            l = random_complex(rng, m, m) + 3.0 * np.eye(m)
            r = random_complex(rng, k, k) - 3.0 * np.eye(k)
            c = random_complex(rng, m, k)
            z = riccati.sylvester_solve(l, r, c)
            assert fro(l @ z - z @ r - c) <= 1e-9 * (1.0 + fro(c))


class TestNewton:
    def test_zero_coupling_returns_immediately(self):
        p = model.assemble(np.diag([1.0, 2.0]), [[5.0]], np.zeros((2, 1)))
        x, info = riccati.newton_solve(p)
        assert np.array_equal(x, np.zeros((1, 2)))
        assert info.iterations == 0 and info.converged

    def test_golden_iterates_match_scalar_newton(self, golden):
        # scalar oracle: f(x) = -x^2 + x + 1, f'(x) = 1 - 2x, iterated in
        # exact rational arithmetic from x0 = 0
        oracle = [Fraction(0)]
        for _ in range(3):
            xk = oracle[-1]
            oracle.append(xk + (xk * xk - xk - 1) / (1 - 2 * xk))
        assert [float(v) for v in oracle] == [0.0, -1.0, -2.0 / 3.0, -13.0 / 21.0]

        x, info = riccati.newton_solve(golden)
        assert abs(x[0, 0] - GOLDEN_X) <= 1e-12
        for got, want in zip(info.iterates[1:4], oracle[1:4]):
            assert abs(got[0, 0] - float(want)) <= 1e-14

    def test_other_basin(self, golden):
        x, _ = riccati.newton_solve(golden, riccati.NewtonOptions(x0=np.array([[2.0]])))
        other = (1.0 + math.sqrt(5.0)) / 2.0
        assert abs(x[0, 0] - other) <= 1e-12
        # verify the root against the quadratic directly
        val = -other * other + other + 1.0
        assert abs(val) <= 1e-12

    def test_quadratic_convergence_on_golden(self, golden):
        _, info = riccati.newton_solve(golden)
        errs = [abs(it[0, 0] - GOLDEN_X) for it in info.iterates]
        tail = [e for e in errs if e > 1e-14]
        for prev, curr in list(zip(tail, tail[1:]))[-3:]:
            assert curr <= 2.0 * prev * prev

    def test_cross_validation_with_spectral_route(self):
        rng = np.random.default_rng(44)
        for _ in range(25):
            gap = float(rng.uniform(0.5, 1.5))
            p = make_instance(rng, gap=gap, coupling=float(rng.uniform(0.01, gap / 2.2)))
            xs = spectral_x(p)
            xn, info = riccati.newton_solve(p)
            assert info.converged
            assert fro(xs - xn) <= 1e-8 * (1.0 + fro(xs))

    def test_unsolvable_raises(self):
        # A0 = A1 = 0 makes the first Newton system L Z - Z R = C with
        # identical (zero) spectra on both sides
        p = model.assemble([[0.0]], [[0.0]], [[1.0]])
        with pytest.raises(SpectraOverlap):
            riccati.newton_solve(p)

    def test_budget_exhaustion_reports_best(self, golden):
        with pytest.raises(NoConvergence) as err:
            riccati.newton_solve(golden, riccati.NewtonOptions(max_iter=1, residual_tol=1e-14))
        assert err.value.best is not None
        assert err.value.residual > 0

    def test_options_validation(self):
        with pytest.raises(ValueError):
            riccati.NewtonOptions(step_tol=0.0)

    def test_warm_start_from_solution(self):
        rng = np.random.default_rng(45)
        p = make_instance(rng, n0=3, n1=3, coupling=0.4)
        x0 = spectral_x(p)
        x, info = riccati.newton_solve(p, riccati.NewtonOptions(x0=x0))
        assert info.converged and info.iterations <= 1
        assert fro(x - x0) <= 1e-8


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_sylvester_residual_property(seed):
    rng = np.random.default_rng(seed)
    m, k = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    # shift the spectra apart so the Kronecker pencil stays regular
    l = random_complex(rng, m, m) + 4.0 * np.eye(m)
    r = random_complex(rng, k, k) - 4.0 * np.eye(k)
    c = random_complex(rng, m, k)
    z = riccati.sylvester_solve(l, r, c)
    assert fro(l @ z - z @ r - c) <= 1e-9 * (1.0 + fro(c))
