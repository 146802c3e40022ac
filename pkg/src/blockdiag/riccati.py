"""Riccati residuals in their equivalent forms and a Newton-Sylvester solver.

For a candidate angular operator X, the skew-symmetric companion is

    Y = [[0, -X*], [X, 0]],     T = I + Y,

and X solves the problem when A Y - Y A - Y V Y + V = 0.  Equivalently the
two split quadratic equations hold, or T (respectively T*) intertwines B
with the block-diagonal operators A + VY (respectively A - YV).  All four
residuals are computed here on full matrices; nothing is assumed about
their simultaneous vanishing, which is what the test suite checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, SpectraOverlap
from .linalg import adj, as_matrix, fro, lu_factor, lu_solve, pivot_floor, singular_extremes
from .model import BlockProblem, residual_scale

DEFAULT_TOL = 1e-9
SYLVESTER_SING_TOL = 1e-12


def skew_companion(x: np.ndarray) -> np.ndarray:
    """Y = [[0, -X*], [X, 0]]; exactly skew-Hermitian by construction."""
    x = as_matrix(x)
    n1, n0 = x.shape
    y = np.zeros((n0 + n1, n0 + n1), dtype=np.complex128)
    y[:n0, n0:] = -adj(x)
    y[n0:, :n0] = x
    return y


@dataclass(frozen=True)
class RiccatiReport:
    """All residual forms for one candidate X, raw and normalized by
    (1 + ||B||)(1 + ||X||)^2."""

    full_residual: float
    full_residual_normalized: float
    split_residuals: tuple[float, float]
    split_residuals_normalized: tuple[float, float]
    intertwining: tuple[float, float]
    intertwining_normalized: tuple[float, float]
    strong_solution: bool
    tol: float


def riccati_residual(
    p: BlockProblem, x, tol: float = DEFAULT_TOL, scale: float | None = None
) -> RiccatiReport:
    """Evaluate every residual form on full matrices.

    full:          ||A Y - Y A - Y V Y + V||
    split:         the two quadratic block equations for X and X*
    intertwining:  ||B T - T (A + VY)||  and  ||T* B - (A - YV) T*||

    ``strong_solution`` is the normalized full residual at or below tol; at
    finite dimension the range condition of a strong solution is automatic.
    """
    x = as_matrix(x, shape=(p.n1, p.n0))
    if scale is None:
        scale = residual_scale(p, x)
    y = skew_companion(x)
    n = p.n
    eye = np.eye(n, dtype=np.complex128)
    t = eye + y
    tstar = eye - y
    a, v, b = p.A, p.V, p.B

    full = fro(a @ y - y @ a - y @ v @ y + v)
    xs = adj(x)
    r0 = fro(p.a1 @ x - x @ p.a0 - x @ p.w @ x + adj(p.w))
    r1 = fro(p.a0 @ xs - xs @ p.a1 + xs @ adj(p.w) @ xs - p.w)
    first = a + v @ y  # block diagonal identically: (A0 + WX, A1 - W*X*)
    second = a - y @ v  # block diagonal identically: (A0 + X*W*, A1 - XW)
    i0 = fro(b @ t - t @ first)
    i1 = fro(tstar @ b - second @ tstar)

    return RiccatiReport(
        full_residual=full,
        full_residual_normalized=full / scale,
        split_residuals=(r0, r1),
        split_residuals_normalized=(r0 / scale, r1 / scale),
        intertwining=(i0, i1),
        intertwining_normalized=(i0 / scale, i1 / scale),
        strong_solution=full / scale <= tol,
        tol=tol,
    )


def sylvester_solve(l, r, c) -> np.ndarray:
    """Solve L Z - Z R = C as one dense linear system on the row-major
    vectorized unknown.

    The Kronecker system matrix is kron(L, I) - kron(I, R^T); SpectraOverlap
    is raised when it is singular to working precision, i.e. when the
    spectra of L and R (numerically) intersect.
    """
    l = as_matrix(l)
    r = as_matrix(r)
    c = as_matrix(c)
    m, k = l.shape[0], r.shape[0]
    if l.shape != (m, m) or r.shape != (k, k) or c.shape != (m, k):
        raise SpectraOverlap(f"incompatible shapes {l.shape}, {r.shape}, {c.shape}")
    kron = np.kron(l, np.eye(k, dtype=np.complex128)) - np.kron(
        np.eye(m, dtype=np.complex128), r.T
    )
    lu, perm = lu_factor(kron)
    floor = pivot_floor(lu)
    threshold = SYLVESTER_SING_TOL * (1.0 + fro(l) + fro(r))
    if floor <= threshold:
        raise SpectraOverlap(
            f"spectra of the coefficients overlap (pivot floor {floor:.3e})",
            sigma_min=floor,
        )
    z = lu_solve(lu, perm, c.reshape(m * k, 1))
    return z.reshape(m, k)


@dataclass(frozen=True)
class NewtonOptions:
    max_iter: int = 50
    step_tol: float = 1e-12
    residual_tol: float = 1e-11
    x0: np.ndarray | None = None

    def __post_init__(self):
        if self.max_iter < 0 or self.step_tol <= 0 or self.residual_tol <= 0:
            raise ValueError("Newton options must be positive")


@dataclass
class NewtonInfo:
    iterations: int
    converged: bool
    residuals: list[float] = field(default_factory=list)
    iterates: list[np.ndarray] = field(default_factory=list)


def newton_solve(p: BlockProblem, opts: NewtonOptions | None = None) -> tuple[np.ndarray, NewtonInfo]:
    """Newton's method on F(X) = A1 X - X A0 - X W X + W*.

    Each step solves the Sylvester equation
    (A1 - X W) D - D (A0 + W X) = -F(X) and updates X <- X + D.  The default
    start X = 0 homes in on the small (contractive, when one exists)
    solution.  Raises NoConvergence with the best iterate attached when the
    budget runs out.
    """
    if opts is None:
        opts = NewtonOptions()
    if opts.x0 is None:
        x = np.zeros((p.n1, p.n0), dtype=np.complex128)
    else:
        x = as_matrix(opts.x0, shape=(p.n1, p.n0)).copy()
    norm_b = p.norm_B
    info = NewtonInfo(iterations=0, converged=False)

    def normalized_residual(xk):
        res = p.a1 @ xk - xk @ p.a0 - xk @ p.w @ xk + adj(p.w)
        scale = (1.0 + norm_b) * (1.0 + singular_extremes(xk)[0]) ** 2
        return fro(res) / scale, res

    rnorm, res = normalized_residual(x)
    info.iterates.append(x.copy())
    info.residuals.append(rnorm)
    if rnorm <= opts.residual_tol:
        info.converged = True
        return x, info

    for it in range(1, opts.max_iter + 1):
        delta = sylvester_solve(p.a1 - x @ p.w, p.a0 + p.w @ x, -res)
        x = x + delta
        info.iterations = it
        rnorm, res = normalized_residual(x)
        info.iterates.append(x.copy())
        info.residuals.append(rnorm)
        if rnorm <= opts.residual_tol:
            info.converged = True
            return x, info
        if fro(delta) <= opts.step_tol * (1.0 + fro(x)):
            break

    if rnorm <= opts.residual_tol:
        info.converged = True
        return x, info
    raise NoConvergence(
        f"Newton stalled after {info.iterations} iterations (residual {rnorm:.3e})",
        best=x,
        residual=rnorm,
    )
