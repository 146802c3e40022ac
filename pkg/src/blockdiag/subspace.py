"""Spectral projections, graph subspaces, and invariance checks.

A graph subspace over H0 with angular operator X: H0 -> H1 is
{f (+) Xf : f in H0}.  This module extracts X from an orthogonal
projection, builds the projection back from X, and measures how far a
candidate X is from making the graph (and its orthogonal complement,
the graph of -X* over H1) invariant under the full block matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, GapViolation, NotAGraph, RankMismatch
from .linalg import (
    HermitianEig,
    adj,
    as_matrix,
    fro,
    hermitian_eig,
    hermitian_power,
    mgs_orthonormalize,
    singular_extremes,
    solve_linear,
)
from .model import BlockProblem, residual_scale

GAP_TOL = 1e-10
GRAPH_MIN_SING = 1e-8
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SpectralSplit:
    """Selects part of a Hermitian spectrum: everything at or below a
    threshold, or an explicit index set into the ascending eigenvalues."""

    threshold: float | None = None
    indices: tuple[int, ...] | None = None

    def __post_init__(self):
        if (self.threshold is None) == (self.indices is None):
            raise ValueError("exactly one of threshold / indices must be given")

    def select(self, eigenvalues: np.ndarray) -> np.ndarray:
        if self.threshold is not None:
            return np.nonzero(eigenvalues <= self.threshold)[0]
        idx = np.array(sorted(set(self.indices)), dtype=int)
        if len(idx) and (idx[0] < 0 or idx[-1] >= len(eigenvalues)):
            raise GapViolation(f"index set out of range for {len(eigenvalues)} eigenvalues")
        return idx


@dataclass(frozen=True)
class Projectors:
    """Result of a spectral split: the projection, its complement, and the
    spectral gap that separates the two groups."""

    p: np.ndarray
    complement: np.ndarray
    gap: float
    selected: tuple[int, ...]
    eigen: HermitianEig


def spectral_projection(h, split: SpectralSplit, eigen: HermitianEig | None = None) -> Projectors:
    """Orthogonal projection onto the selected eigenvectors of a Hermitian
    matrix, plus the complementary projection.

    Raises GapViolation when the split is numerically ambiguous: for
    thresholds, an eigenvalue within 1e-10*(1+||H||) of the threshold; for
    index sets, a gap between the groups at or below the same tolerance.
    """
    if eigen is None:
        eigen = hermitian_eig(h)
    lam = eigen.eigenvalues
    n = len(lam)
    scale = GAP_TOL * (1.0 + float(np.max(np.abs(lam))))
    sel = split.select(lam)
    if split.threshold is not None and np.any(np.abs(lam - split.threshold) <= scale):
        raise GapViolation(
            f"eigenvalue within {scale:g} of threshold {split.threshold}",
            gap=float(np.min(np.abs(lam - split.threshold))),
        )
    mask = np.zeros(n, dtype=bool)
    mask[sel] = True
    if mask.any() and (~mask).any():
        gap = float(np.min(np.abs(lam[mask][:, None] - lam[~mask][None, :])))
    else:
        gap = math.inf
    if gap <= scale:
        raise GapViolation(f"spectral gap {gap:g} below tolerance {scale:g}", gap=gap)
    vsel = eigen.vectors[:, mask]
    vrest = eigen.vectors[:, ~mask]
    p = vsel @ adj(vsel)
    comp = vrest @ adj(vrest)
    return Projectors(
        p=p, complement=comp, gap=gap, selected=tuple(int(i) for i in sel), eigen=eigen
    )


@dataclass(frozen=True, eq=False)
class GraphSubspace:
    """Angular operator X together with the orthogonal projection onto its
    graph and an orthonormal basis of the graph."""

    x: np.ndarray
    q: np.ndarray
    basis: np.ndarray


def graph_projection(x) -> GraphSubspace:
    """Projection onto the graph of X: Q = [I; X] (I + X*X)^(-1) [I; X]*."""
    x = as_matrix(x)
    n1, n0 = x.shape
    stack = np.vstack([np.eye(n0, dtype=np.complex128), x])
    gram_inv_half = hermitian_power(np.eye(n0) + adj(x) @ x, -0.5, check=False)
    basis = stack @ gram_inv_half
    q = basis @ adj(basis)
    q = 0.5 * (q + adj(q))
    return GraphSubspace(x=x, q=q, basis=basis)


def complement_graph_projection(x) -> np.ndarray:
    """Projection onto the orthogonal complement: the graph of -X* over H1,
    embedded as {(-X* g) (+) g : g in H1}."""
    x = as_matrix(x)
    n1, n0 = x.shape
    stack = np.vstack([-adj(x), np.eye(n1, dtype=np.complex128)])
    gram_inv = hermitian_power(np.eye(n1) + x @ adj(x), -1.0, check=False)
    q = stack @ gram_inv @ adj(stack)
    return 0.5 * (q + adj(q))


def angular_from_projection(p_matrix, n0: int) -> np.ndarray:
    """Extract the angular operator X from a rank-n0 orthogonal projection
    whose range is a graph over H0.

    Writing an orthonormal basis of the range as stacked blocks [F; G]
    (F holding the first n0 rows), X = G F^(-1).  Raises RankMismatch when
    the trace-rank disagrees with n0, NotAGraph when F is numerically
    singular (the subspace tilts away from H0).
    """
    p_matrix = as_matrix(p_matrix)
    n = p_matrix.shape[0]
    if p_matrix.shape[0] != p_matrix.shape[1] or n0 < 0 or n0 > n:
        raise DimensionMismatch(f"projection {p_matrix.shape} incompatible with n0={n0}")
    rank = int(round(float(np.trace(p_matrix).real)))
    if rank != n0:
        raise RankMismatch(f"projection has rank {rank}, expected {n0}")
    eigen = hermitian_eig(p_matrix)
    basis = eigen.vectors[:, n - n0 :]
    if np.any(np.abs(eigen.eigenvalues[n - n0 :] - 1.0) > 1e-7) or (
        n0 < n and np.any(np.abs(eigen.eigenvalues[: n - n0]) > 1e-7)
    ):
        raise ValueError("input is not an orthogonal projection")
    basis = mgs_orthonormalize(basis)
    f = basis[:n0, :]
    g = basis[n0:, :]
    sigma_min = singular_extremes(f)[1]
    if sigma_min < GRAPH_MIN_SING:
        raise NotAGraph(
            f"subspace is not a graph over H0 (sigma_min(F) = {sigma_min:.3e})",
            sigma_min=sigma_min,
        )
    x = solve_linear(f.T, g.T).T
    check = graph_projection(x)
    if fro(p_matrix - check.q) > 1e-9 * (1.0 + fro(p_matrix)):
        raise ValueError("projection range is not reproduced by its angular operator")
    return x


@dataclass(frozen=True)
class InvarianceResiduals:
    """Residuals of the two coupled quadratic equations that make the graph
    of X and the graph of -X* invariant under B = A + V.

    r0 = ||A1 X - X A0 - X W X + W*||   (graph of X over H0)
    r1 = ||A0 X* - X* A1 + X* W* X* - W||   (graph of -X* over H1)

    Raw Frobenius norms plus the values normalized by
    (1 + ||B||)(1 + ||X||)^2.
    """

    r0: float
    r1: float
    r0_normalized: float
    r1_normalized: float


def invariance_residuals(p: BlockProblem, x, scale: float | None = None) -> InvarianceResiduals:
    x = as_matrix(x, shape=(p.n1, p.n0))
    if scale is None:
        scale = residual_scale(p, x)
    xs = adj(x)
    r0 = fro(p.a1 @ x - x @ p.a0 - x @ p.w @ x + adj(p.w))
    r1 = fro(p.a0 @ xs - xs @ p.a1 + xs @ adj(p.w) @ xs - p.w)
    return InvarianceResiduals(r0=r0, r1=r1, r0_normalized=r0 / scale, r1_normalized=r1 / scale)


@dataclass(frozen=True)
class ReducingVerdict:
    """Whether the graph of X reduces B.

    At finite dimension the domain-splitting requirement holds
    automatically (T maps the whole space onto itself), so reducing is
    equivalent to both invariance residuals vanishing; the flag records
    that explicitly.
    """

    reducing: bool
    residuals: InvarianceResiduals
    tol: float
    domain_splitting_automatic: bool = True


def reducing_check(
    p: BlockProblem, x, tol: float = DEFAULT_TOL, scale: float | None = None
) -> ReducingVerdict:
    res = invariance_residuals(p, x, scale=scale)
    ok = res.r0_normalized <= tol and res.r1_normalized <= tol
    return ReducingVerdict(reducing=ok, residuals=res, tol=tol)
