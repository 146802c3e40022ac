"""Dense complex linear-algebra kernels built from scratch.

All higher layers (block assembly, Riccati residuals, the diagonalization
pipeline) run on plain ``numpy.ndarray`` values of dtype complex128.  The
kernels here are deliberately self-contained: the Hermitian eigensolver is a
cyclic Jacobi iteration, linear systems go through partial-pivoted LU, and
the polar decomposition is assembled from the eigendecomposition of the Gram
matrix.  numpy supplies array arithmetic only, never factorizations.

Norm conventions used throughout the package:

* ``fro`` (Frobenius) for residual norms and scale factors.  It upper-bounds
  the operator norm, so residual acceptance in Frobenius norm is the safe
  direction.
* the operator 2-norm (via :func:`singular_extremes`) wherever a value is
  compared against a sharp analytic constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, Singular

# Jacobi sweep budget and the off-diagonal stopping threshold, relative to
# the Frobenius norm of the input.
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-13

HERMITIAN_TOL = 1e-12
POLAR_SINGULAR_TOL = 1e-12
SOLVE_SINGULAR_TOL = 1e-13

_LU_BLOCK = 32


def as_matrix(entries, shape=None) -> np.ndarray:
    """Coerce to a fresh 2-d complex128 array with finite entries."""
    m = np.array(entries, dtype=np.complex128, order="C")
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    if shape is not None and m.shape != tuple(shape):
        raise DimensionMismatch(f"expected shape {tuple(shape)}, got {m.shape}")
    return m


def adj(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def fro(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def _require_square(m: np.ndarray) -> int:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"square matrix required, got {m.shape}")
    return m.shape[0]


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues (real, ascending) and matching orthonormal eigenvectors.

    Column ``vectors[:, k]`` pairs with ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray


def _round_robin_schedule(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Round-robin cyclic ordering of the index pairs (p, q), p < q.

    Every sweep visits each unordered pair exactly once, grouped into n-1
    rounds of mutually disjoint pairs, so all rotations of a round commute
    and can be applied as a single unitary.
    """
    m = n if n % 2 == 0 else n + 1
    idx = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            x, y = idx[i], idx[m - 1 - i]
            if x < n and y < n:
                ps.append(min(x, y))
                qs.append(max(x, y))
        rounds.append((np.array(ps), np.array(qs)))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return rounds


_SCHEDULE_CACHE: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}


def hermitian_eig(m, check: bool = True) -> HermitianEig:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Sweeps all off-diagonal pivots in a fixed round-robin cyclic order,
    annihilating each with a unitary plane rotation, until the off-diagonal
    Frobenius norm drops below ``1e-13 * ||M||_F`` (at most 100 sweeps).
    Rotations of one round act on disjoint planes and are applied together.

    Raises NotHermitian if the symmetry check fails, NoConvergence if the
    sweep budget is exhausted.
    """
    a = as_matrix(m)
    n = _require_square(a)
    scale = fro(a)
    if check and fro(a - adj(a)) > HERMITIAN_TOL * (1.0 + scale):
        raise NotHermitian(f"matrix is not Hermitian within {HERMITIAN_TOL:g}*(1+||M||)")
    # Fold round-off asymmetry; exact for genuinely Hermitian input.
    a = 0.5 * (a + adj(a))
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return HermitianEig(a.real.reshape(1).copy(), v)

    threshold = JACOBI_OFF_TOL * scale
    # Pivots at or below skip_tol are left alone: even with every
    # off-diagonal entry at skip_tol the off-diagonal norm stays below
    # threshold, so skipping cannot stall convergence.
    skip_tol = threshold / (2.0 * n)
    schedule = _SCHEDULE_CACHE.get(n)
    if schedule is None:
        schedule = _SCHEDULE_CACHE[n] = _round_robin_schedule(n)

    converged = False
    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) <= threshold:
            converged = True
            break
        for ps, qs in schedule:
            beta = a[ps, qs]
            absb = np.abs(beta)
            live = absb > skip_tol
            if not live.any():
                continue
            ps_l, qs_l = ps[live], qs[live]
            absb = absb[live]
            phase = beta[live] / absb
            tau = (a[qs_l, qs_l].real - a[ps_l, ps_l].real) / (2.0 * absb)
            t = np.where(
                tau == 0.0,
                1.0,
                np.sign(tau) / (np.abs(tau) + np.hypot(1.0, tau)),
            )
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            sp = s * phase
            spc = s * phase.conj()
            # a <- a @ G, with G the direct sum of the round's rotations
            colp = a[:, ps_l]
            colq = a[:, qs_l]
            a[:, ps_l] = colp * c - colq * spc
            a[:, qs_l] = colp * sp + colq * c
            # a <- adj(G) @ a
            rowp = a[ps_l, :]
            rowq = a[qs_l, :]
            a[ps_l, :] = c[:, None] * rowp - sp[:, None] * rowq
            a[qs_l, :] = spc[:, None] * rowp + c[:, None] * rowq
            a[ps_l, qs_l] = 0.0
            a[qs_l, ps_l] = 0.0
            # accumulate eigenvectors: v <- v @ G
            vcolp = v[:, ps_l]
            vcolq = v[:, qs_l]
            v[:, ps_l] = vcolp * c - vcolq * spc
            v[:, qs_l] = vcolp * sp + vcolq * c
    else:
        converged = _offdiag_norm(a) <= threshold
    if not converged:
        raise NoConvergence("Jacobi sweep budget exhausted")
    lam = np.diag(a).real.copy()
    order = np.argsort(lam, kind="stable")
    return HermitianEig(lam[order], np.ascontiguousarray(v[:, order]))


def _offdiag_norm(a: np.ndarray) -> float:
    off = np.abs(a) ** 2
    np.fill_diagonal(off, 0.0)
    return math.sqrt(float(off.sum()))


def hermitian_power(m, power: float, check: bool = True) -> np.ndarray:
    """``M**power`` for Hermitian positive semidefinite M via its eigensystem.

    Eigenvalues below zero (round-off) are clamped to zero.  Negative powers
    raise Singular when a clamped eigenvalue makes the power undefined.
    """
    eig = hermitian_eig(m, check=check)
    lam = np.clip(eig.eigenvalues, 0.0, None)
    if power < 0 and lam[0] <= 0.0:
        raise Singular("matrix power with negative exponent on singular input", sigma_min=0.0)
    powered = lam**power
    return (eig.vectors * powered) @ adj(eig.vectors)


def singular_extremes(m) -> tuple[float, float]:
    """Largest and smallest singular values.

    Computed from the Hermitian eigendecomposition of the smaller Gram
    matrix, clamping round-off negatives to zero.
    """
    a = as_matrix(m)
    if a.shape[0] >= a.shape[1]:
        gram = adj(a) @ a
    else:
        gram = a @ adj(a)
    lam = hermitian_eig(gram, check=False).eigenvalues
    lam = np.clip(lam, 0.0, None)
    return float(math.sqrt(lam[-1])), float(math.sqrt(lam[0]))


def opnorm(m) -> float:
    """Operator 2-norm (largest singular value)."""
    return singular_extremes(m)[0]


def polar_decompose(m) -> tuple[np.ndarray, np.ndarray]:
    """Polar factors (U, P) with M = U P, U unitary, P Hermitian positive.

    P is the square root of the Gram matrix M*M; U is M P^{-1} followed by a
    single orthogonality polish.  Raises Singular when the smallest singular
    value is at or below ``1e-12 * ||M||``.
    """
    a = as_matrix(m)
    _require_square(a)
    gram = adj(a) @ a
    eig = hermitian_eig(gram, check=False)
    sigma = np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    smax, smin = float(sigma[-1]), float(sigma[0])
    if smin <= POLAR_SINGULAR_TOL * smax:
        raise Singular("polar decomposition of a (numerically) singular matrix", sigma_min=smin)
    q = eig.vectors
    p = (q * sigma) @ adj(q)
    p = 0.5 * (p + adj(p))
    u = a @ ((q / sigma) @ adj(q))
    # One polish pass; the Gram matrix of u is within round-off of I, so the
    # inverse square root is benign and restores unitarity to machine level.
    u = u @ hermitian_power(adj(u) @ u, -0.5, check=False)
    return u, p


def mgs_orthonormalize(cols) -> np.ndarray:
    """Orthonormalize the columns by modified Gram-Schmidt (two passes)."""
    q = as_matrix(cols).copy()
    n, k = q.shape
    if k > n:
        raise DimensionMismatch("more columns than rows cannot be orthonormal")
    for j in range(k):
        for _ in range(2):
            for i in range(j):
                q[:, j] -= np.vdot(q[:, i], q[:, j]) * q[:, i]
        nrm = float(np.linalg.norm(q[:, j]))
        if nrm <= 1e-12:
            raise Singular("rank-deficient columns in Gram-Schmidt", sigma_min=nrm)
        q[:, j] /= nrm
    return q


def lu_factor(m) -> tuple[np.ndarray, np.ndarray]:
    """Blocked LU with partial pivoting; returns (packed LU, row permutation).

    ``lu[perm]`` is not the factorization; rather A[perm] = L @ U where L is
    unit lower triangular and U upper triangular, both packed into ``lu``.
    """
    a = as_matrix(m).copy()
    n = _require_square(a)
    perm = np.arange(n)
    for k0 in range(0, n, _LU_BLOCK):
        k1 = min(k0 + _LU_BLOCK, n)
        for k in range(k0, k1):
            r = k + int(np.argmax(np.abs(a[k:, k])))
            if r != k:
                a[[k, r]] = a[[r, k]]
                perm[[k, r]] = perm[[r, k]]
            piv = a[k, k]
            if piv != 0.0 and k + 1 < n:
                a[k + 1 :, k] /= piv
                if k + 1 < k1:
                    a[k + 1 :, k + 1 : k1] -= np.outer(a[k + 1 :, k], a[k, k + 1 : k1])
        if k1 < n:
            # forward-substitute the panel rows into the right block, then
            # one GEMM update of the trailing submatrix
            for k in range(k0, k1):
                if k > k0:
                    a[k, k1:] -= a[k, k0:k] @ a[k0:k, k1:]
            a[k1:, k1:] -= a[k1:, k0:k1] @ a[k0:k1, k1:]
    return a, perm


def lu_solve(lu: np.ndarray, perm: np.ndarray, rhs) -> np.ndarray:
    """Solve A x = rhs given the packed factorization of A."""
    b = as_matrix(rhs)
    n = lu.shape[0]
    if b.shape[0] != n:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, expected {n}")
    x = b[perm].astype(np.complex128)
    for j in range(n - 1):  # forward, unit lower triangle
        x[j + 1 :] -= np.outer(lu[j + 1 :, j], x[j])
    for j in range(n - 1, -1, -1):  # backward
        x[j] /= lu[j, j]
        if j:
            x[:j] -= np.outer(lu[:j, j], x[j])
    return x


def pivot_floor(lu: np.ndarray) -> float:
    """Smallest |U_ii| of a packed factorization.

    A cheap singularity witness: sigma_min(A) <= ||L|| * min_i |U_ii|, so a
    tiny pivot certifies near-singularity.  (The converse can fail on
    contrived matrices; for gating it errs on the permissive side while the
    solve itself stays backward stable.)
    """
    return float(np.min(np.abs(np.diag(lu))))


def solve_linear(m, rhs) -> np.ndarray:
    """Solve M X = RHS by partial-pivoted elimination.

    Raises Singular (with the offending pivot-based sigma_min estimate) when
    the factorization exposes a pivot at or below ``1e-13 * (1 + ||M||)``.
    """
    a = as_matrix(m)
    n = _require_square(a)
    b = as_matrix(rhs)
    if b.shape[0] != n:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, expected {n}")
    lu, perm = lu_factor(a)
    floor = pivot_floor(lu)
    if floor <= SOLVE_SINGULAR_TOL * (1.0 + fro(a)):
        raise Singular("linear system is singular to working precision", sigma_min=floor)
    return lu_solve(lu, perm, b)


def inverse(m) -> np.ndarray:
    """Matrix inverse through :func:`solve_linear`."""
    a = as_matrix(m)
    n = _require_square(a)
    return solve_linear(a, np.eye(n, dtype=np.complex128))
