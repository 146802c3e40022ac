"""Relative-bound certificates, resolvent estimates, and subordination checks.

A pair (a, b) certifies ||V x|| <= a ||x|| + b ||A x|| through the quadratic
form inequality V*V <= a^2 I + b^2 A*A, which reduces the fit to a
generalized eigenvalue computation and soundly implies the additive form.
From a certified pair with b < 1, every purely imaginary shift i*lambda with
|lambda| > k = a / (1 - b) is a regular point of A + V, which
spectral_enclosure_check probes by smallest singular values.

davis_kahan_check covers the subordinated regime sup spec(A0) < inf spec(A1):
the spectral projection of B = A + V below the gap differs from the
projection onto H0 by at most sqrt(2)/2 in operator norm, and the extracted
angular operator is a contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadPair, NotHermitian, ZeroLambda
from .linalg import adj, as_matrix, fro, hermitian_eig, singular_extremes
from .model import BlockProblem
from .subspace import SpectralSplit, angular_from_projection, spectral_projection

DAVIS_KAHAN_BOUND = math.sqrt(2.0) / 2.0
CERT_TOL = 1e-10


@dataclass(frozen=True)
class RelativePair:
    """One point of the relative-bound profile b(a).

    ``b`` is ``math.inf`` (and ``certified`` False) when no finite b works,
    i.e. when V does not vanish on the kernel of A and a is too small.
    """

    a: float
    b: float
    certified: bool
    margin: float  # largest eigenvalue of V*V - a^2 I - b^2 A*A (<= 0 is ideal)


def relative_bound_fit(a_mat, v_mat, a_grid) -> list[RelativePair]:
    """For each a in the grid, the smallest b with V*V <= a^2 I + b^2 A*A.

    b(a)^2 is the clamped largest generalized eigenvalue of (V*V - a^2 I)
    against A*A + delta I, delta = 1e-12 (1 + ||A||^2) guarding a singular A.
    On ker(A*A) the inequality degenerates to V*V <= a^2; when that fails the
    pair is infeasible and reported as b = inf rather than the regularization
    artifact.  Every finite pair is re-checked against the unregularized
    certificate.
    """
    a_mat = as_matrix(a_mat)
    v_mat = as_matrix(v_mat, shape=a_mat.shape)
    n = a_mat.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    gram_a = adj(a_mat) @ a_mat
    gram_v = adj(v_mat) @ v_mat
    eig_a = hermitian_eig(gram_a, check=False)
    norm_a2 = float(eig_a.eigenvalues[-1])
    norm_v2 = float(hermitian_eig(gram_v, check=False).eigenvalues[-1])
    delta = 1e-12 * (1.0 + norm_a2)
    lam_reg = np.clip(eig_a.eigenvalues, 0.0, None) + delta
    whitener = (eig_a.vectors / np.sqrt(lam_reg)) @ adj(eig_a.vectors)
    kernel = eig_a.vectors[:, eig_a.eigenvalues <= 1e-12 * (1.0 + norm_a2)]
    base_scale = 1.0 + norm_v2 + norm_a2

    pairs = []
    for a in a_grid:
        a = float(a)
        if a < 0:
            raise BadPair(f"grid value a = {a} is negative")
        if kernel.shape[1]:
            obstruction = float(
                hermitian_eig(
                    adj(kernel) @ (gram_v - a * a * eye) @ kernel, check=False
                ).eigenvalues[-1]
            )
            if obstruction > CERT_TOL * base_scale:
                pairs.append(
                    RelativePair(a=a, b=math.inf, certified=False, margin=obstruction)
                )
                continue
        pencil = whitener @ (gram_v - a * a * eye) @ whitener
        top = float(hermitian_eig(pencil, check=False).eigenvalues[-1])
        b = math.sqrt(max(top, 0.0))
        margin = float(
            hermitian_eig(gram_v - a * a * eye - b * b * gram_a, check=False).eigenvalues[-1]
        )
        certified = margin <= CERT_TOL * (base_scale + a * a + b * b * norm_a2)
        pairs.append(RelativePair(a=a, b=b, certified=certified, margin=margin))
    return pairs


def select_enclosure(pairs: list[RelativePair]) -> tuple[float | None, RelativePair | None]:
    """k = a / (1 - b) minimized over certified pairs with b safely below 1."""
    best_k, best = None, None
    for pair in pairs:
        if not pair.certified or not pair.b < 1.0 - 1e-9:
            continue
        k = pair.a / (1.0 - pair.b)
        if best_k is None or k < best_k:
            best_k, best = k, pair
    return best_k, best


@dataclass(frozen=True)
class ResolventCheck:
    lam: float
    norm_resolvent: float
    norm_a_resolvent: float
    passed: bool


def resolvent_estimate_check(a_mat, lambdas) -> list[ResolventCheck]:
    """Verify ||(A - i lambda)^-1|| <= 1/|lambda| and ||A (A - i lambda)^-1|| <= 1
    for Hermitian A at each real shift; both norms are exact functions of the
    spectrum."""
    a_mat = as_matrix(a_mat)
    mu = hermitian_eig(a_mat).eigenvalues
    checks = []
    for lam in lambdas:
        lam = float(lam)
        if lam == 0.0:
            raise ZeroLambda("resolvent estimate needs a nonzero shift")
        dist = np.sqrt(mu**2 + lam * lam)
        r = float(np.max(1.0 / dist))
        ar = float(np.max(np.abs(mu) / dist))
        ok = r <= 1.0 / abs(lam) + 1e-12 and ar <= 1.0 + 1e-12
        checks.append(ResolventCheck(lam=lam, norm_resolvent=r, norm_a_resolvent=ar, passed=ok))
    return checks


@dataclass(frozen=True)
class ShiftCheck:
    lam: float
    sigma_min: float
    passed: bool


def spectral_enclosure_check(a_mat, h_mat, a: float, b: float, samples: int = 8) -> list[ShiftCheck]:
    """Probe that i*lambda is regular for A + H whenever |lambda| > k = a/(1-b).

    Samples both signs of `samples` magnitudes spanning (k, 10k] (or (0, 10]
    when k = 0) and records sigma_min(A + H - i lambda).
    """
    if not (0.0 <= b < 1.0):
        raise BadPair(f"b = {b} must lie in [0, 1)")
    if a < 0.0:
        raise BadPair(f"a = {a} must be nonnegative")
    a_mat = as_matrix(a_mat)
    h_mat = as_matrix(h_mat, shape=a_mat.shape)
    k = a / (1.0 - b)
    hi = 10.0 * k if k > 0 else 10.0
    lo = k
    full = a_mat + h_mat
    eye = np.eye(a_mat.shape[0], dtype=np.complex128)
    checks = []
    for i in range(1, samples + 1):
        mag = lo + (hi - lo) * i / samples
        for lam in (mag, -mag):
            smin = singular_extremes(full - 1j * lam * eye)[1]
            checks.append(ShiftCheck(lam=lam, sigma_min=smin, passed=smin > 0.0))
    return checks


@dataclass(frozen=True)
class DavisKahanReport:
    """Subordination check and, when it applies, the projection-difference
    bound sqrt(2)/2 and the contractivity of the angular operator."""

    subordinated: bool
    sup_spec_a0: float
    inf_spec_a1: float
    bound: float = DAVIS_KAHAN_BOUND
    proj_diff: float | None = None
    x_norm: float | None = None
    contractive: bool | None = None
    bound_satisfied: bool | None = None
    x: np.ndarray | None = None


def davis_kahan_check(p: BlockProblem) -> DavisKahanReport:
    """Compare the spectral projection of B below the gap with the projection
    onto H0.

    The low spectral subspace of B is selected by rank (the lowest n0
    eigenvalues): off-diagonal coupling cannot move eigenvalues across the
    gap, and a rank selection stays well defined when W = 0 puts an
    eigenvalue exactly at the threshold sup spec(A0).
    """
    if not p.hermitian:
        raise NotHermitian("the subordination check needs Hermitian diagonal blocks")
    sup0 = float(hermitian_eig(p.a0).eigenvalues[-1])
    inf1 = float(hermitian_eig(p.a1).eigenvalues[0])
    if not sup0 < inf1:
        return DavisKahanReport(subordinated=False, sup_spec_a0=sup0, inf_spec_a1=inf1)

    split = SpectralSplit(indices=tuple(range(p.n0)))
    projectors = spectral_projection(p.B, split, eigen=p.eig_B)
    e_a = np.zeros((p.n, p.n), dtype=np.complex128)
    e_a[: p.n0, : p.n0] = np.eye(p.n0)
    proj_diff = singular_extremes(e_a - projectors.p)[0]
    x = angular_from_projection(projectors.p, p.n0)
    x_norm = singular_extremes(x)[0]
    return DavisKahanReport(
        subordinated=True,
        sup_spec_a0=sup0,
        inf_spec_a1=inf1,
        proj_diff=proj_diff,
        x_norm=x_norm,
        contractive=x_norm <= 1.0 + 1e-9,
        bound_satisfied=proj_diff <= DAVIS_KAHAN_BOUND + 1e-9,
        x=x,
    )


def halfline_regularity_probe(a_mat, direction: complex, radii) -> list[tuple[float, float]]:
    """Finite shadow of the half-line resolvent condition for closed,
    possibly non-Hermitian A: reports (|mu|, |mu| / sigma_min(A - mu)) along
    the ray mu = r * direction.  Boundedness of the second coordinate as r
    grows is the observable trend; no infinite-dimensional claim is made."""
    a_mat = as_matrix(a_mat)
    d = complex(direction)
    if d == 0:
        raise ZeroLambda("direction must be nonzero")
    d /= abs(d)
    eye = np.eye(a_mat.shape[0], dtype=np.complex128)
    out = []
    for r in radii:
        mu = d * float(r)
        smin = singular_extremes(a_mat - mu * eye)[1]
        out.append((abs(mu), math.inf if smin == 0.0 else abs(mu) / smin))
    return out


@dataclass(frozen=True)
class BoundsReport:
    pairs: list[RelativePair]
    k: float | None
    selected: RelativePair | None
    resolvent_checks: list[ResolventCheck]
    shift_checks: list[ShiftCheck]
    davis_kahan: DavisKahanReport | None


def bounds_report(
    p: BlockProblem,
    a_grid,
    resolvent_lambdas=(0.5, 1.0, 2.0, 5.0, 10.0, 100.0),
    samples: int = 8,
) -> BoundsReport:
    """Full relative-bound study of one problem: the b(a) profile on the
    grid, the best enclosure radius k, resolvent estimates on the diagonal
    part, the imaginary-shift regularity probes, and the subordination check
    (the Hermitian-only parts are skipped in non-Hermitian mode)."""
    pairs = relative_bound_fit(p.A, p.V, a_grid)
    k, selected = select_enclosure(pairs)
    resolvent_checks = []
    davis_kahan = None
    if p.hermitian:
        resolvent_checks = resolvent_estimate_check(p.A, resolvent_lambdas)
        davis_kahan = davis_kahan_check(p)
    shift_checks = []
    if selected is not None:
        shift_checks = spectral_enclosure_check(
            p.A, p.V, selected.a, selected.b, samples=samples
        )
    return BoundsReport(
        pairs=pairs,
        k=k,
        selected=selected,
        resolvent_checks=resolvent_checks,
        shift_checks=shift_checks,
        davis_kahan=davis_kahan,
    )


def truncation_sweep(family, sizes, tol: float = 1e-9, a_grid=None) -> list[dict]:
    """Run the whole verification web on growing finite sections of a family.

    Per size: certified (a, b(a)) pairs, the angular operator via both the
    spectral and the Newton route and their gap, every diagonalization
    residual, ||X||, and the projection difference.  Trends across sizes are
    reported, not judged.
    """
    from .generate import family_problem

    rows = []
    for n in sizes:
        p = family_problem(family, int(n))
        row = sweep_row(p, int(n), tol=tol, a_grid=a_grid)
        rows.append(row)
    return rows


def sweep_row(p: BlockProblem, n: int, tol: float = 1e-9, a_grid=None) -> dict:
    """One truncation-sweep entry (separated out so sizes can run in parallel)."""
    from .report import analyze
    from .riccati import newton_solve
    from .subspace import angular_from_projection as extract

    norm_w = singular_extremes(p.w)[0]
    if a_grid is None:
        base = max(norm_w, 1.0)
        a_grid = [0.0, 0.5 * base, base, 2.0 * base]
    pairs = relative_bound_fit(p.A, p.V, a_grid)
    k, _ = select_enclosure(pairs)

    dk = davis_kahan_check(p)
    split = SpectralSplit(indices=tuple(range(p.n0)))
    projectors = spectral_projection(p.B, split, eigen=p.eig_B)
    x_spectral = extract(projectors.p, p.n0)
    x_newton, newton_info = newton_solve(p)
    solver_gap = fro(x_spectral - x_newton)

    analysis = analyze(p, x_spectral, tol=tol)
    return {
        "n": n,
        "pairs": [
            (pair.a, pair.b if math.isfinite(pair.b) else None, pair.certified)
            for pair in pairs
        ],
        "k": k,
        "x_norm": analysis.ad.norm_x,
        "proj_diff": dk.proj_diff,
        "solver_gap": solver_gap,
        "newton_iterations": newton_info.iterations,
        "max_residual": analysis.max_normalized_residual,
        "all_pass": analysis.all_pass,
    }
