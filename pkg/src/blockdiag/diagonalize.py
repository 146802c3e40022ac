"""Similarity and unitary block diagonalizations driven by an angular operator.

Given X, the transformations are built from

    Y = [[0, -X*], [X, 0]],  T = I + Y,  T* = I - Y,  |T| = (T*T)^(1/2),
    T = U |T| (polar),       T*T = blockdiag(I + X*X, I + XX*) = TT*.

When X solves the Riccati equation, B = A + V is carried to block-diagonal
form three ways:

    T^-1 B T   = A + VY = blockdiag(A0 + WX,    A1 - W*X*)
    T* B T*^-1 = A - YV = blockdiag(A0 + X*W*,  A1 - XW)
    U* B U     = blockdiag(B0, B1),  B_i the |T|-block conjugates of the first form.

Every operation below returns the transformed blocks together with the
residual of the identity it realizes; nothing is asserted, failure is
conveyed by the residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import adj, as_matrix, fro, hermitian_eig, singular_extremes, solve_linear
from .model import BlockProblem
from .riccati import skew_companion

DEFAULT_TOL = 1e-9


class AngularData:
    """X and everything derived from it, computed lazily and cached.

    |T| and U come from the block factorization of T*T (the two Hermitian
    blocks I + X*X and I + XX*), which is the polar decomposition of T
    written out blockwise.
    """

    def __init__(self, x):
        self.x = as_matrix(x)
        self.n1, self.n0 = self.x.shape
        self.n = self.n0 + self.n1

    @cached_property
    def y(self) -> np.ndarray:
        return skew_companion(self.x)

    @cached_property
    def t(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.complex128) + self.y

    @cached_property
    def tstar(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.complex128) - self.y

    @cached_property
    def tinv(self) -> np.ndarray:
        return solve_linear(self.t, np.eye(self.n, dtype=np.complex128))

    @cached_property
    def tstar_inv(self) -> np.ndarray:
        return solve_linear(self.tstar, np.eye(self.n, dtype=np.complex128))

    @cached_property
    def _eig_gram0(self):
        return hermitian_eig(
            np.eye(self.n0, dtype=np.complex128) + adj(self.x) @ self.x, check=False
        )

    @cached_property
    def _eig_gram1(self):
        return hermitian_eig(
            np.eye(self.n1, dtype=np.complex128) + self.x @ adj(self.x), check=False
        )

    def _gram_power(self, which: int, power: float) -> np.ndarray:
        eig = self._eig_gram0 if which == 0 else self._eig_gram1
        lam = np.clip(eig.eigenvalues, 1.0, None)  # I + X*X >= I always
        return (eig.vectors * lam**power) @ adj(eig.vectors)

    @cached_property
    def gram0(self) -> np.ndarray:
        return self._gram_power(0, 1.0)

    @cached_property
    def gram1(self) -> np.ndarray:
        return self._gram_power(1, 1.0)

    @cached_property
    def root0(self) -> np.ndarray:
        return self._gram_power(0, 0.5)

    @cached_property
    def root1(self) -> np.ndarray:
        return self._gram_power(1, 0.5)

    @cached_property
    def root0_inv(self) -> np.ndarray:
        return self._gram_power(0, -0.5)

    @cached_property
    def root1_inv(self) -> np.ndarray:
        return self._gram_power(1, -0.5)

    @cached_property
    def gram0_inv(self) -> np.ndarray:
        return self._gram_power(0, -1.0)

    @cached_property
    def gram1_inv(self) -> np.ndarray:
        return self._gram_power(1, -1.0)

    def _blockdiag(self, top: np.ndarray, bottom: np.ndarray) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.complex128)
        out[: self.n0, : self.n0] = top
        out[self.n0 :, self.n0 :] = bottom
        return out

    @cached_property
    def abst(self) -> np.ndarray:
        """|T| = (T*T)^(1/2) = blockdiag((I+X*X)^(1/2), (I+XX*)^(1/2))."""
        return self._blockdiag(self.root0, self.root1)

    @cached_property
    def abst_inv(self) -> np.ndarray:
        return self._blockdiag(self.root0_inv, self.root1_inv)

    @cached_property
    def u(self) -> np.ndarray:
        """Unitary polar factor of T."""
        return self.t @ self.abst_inv

    @cached_property
    def norm_x(self) -> float:
        top = float(self._eig_gram0.eigenvalues[-1])
        return float(np.sqrt(max(top - 1.0, 0.0)))


def build_angular(x) -> AngularData:
    return AngularData(x)


def _scale(p: BlockProblem, ad: AngularData) -> float:
    return (1.0 + p.norm_B) * (1.0 + ad.norm_x) ** 2


def _offdiag_block_norm(p: BlockProblem, m: np.ndarray) -> float:
    _, tr, bl, _ = p.blocks_of(m)
    return float(np.sqrt(fro(tr) ** 2 + fro(bl) ** 2))


@dataclass(frozen=True)
class SimilarityForm:
    """One similarity block diagonalization: the two diagonal blocks, the
    residual against the transformed full matrix, and the off-diagonal
    leakage of the transform."""

    block0: np.ndarray
    block1: np.ndarray
    residual: float
    residual_normalized: float
    offdiag_norm: float


def first_diagonalization(p: BlockProblem, ad: AngularData) -> SimilarityForm:
    """T^-1 B T against A + VY = blockdiag(A0 + WX, A1 - W*X*)."""
    d0 = p.a0 + p.w @ ad.x
    d1 = p.a1 - adj(p.w) @ adj(ad.x)
    transformed = ad.tinv @ p.B @ ad.t
    target = ad._blockdiag(d0, d1)
    r = fro(transformed - target)
    return SimilarityForm(
        block0=d0,
        block1=d1,
        residual=r,
        residual_normalized=r / _scale(p, ad),
        offdiag_norm=_offdiag_block_norm(p, transformed),
    )


def second_diagonalization(p: BlockProblem, ad: AngularData) -> SimilarityForm:
    """T* B (T*)^-1 against A - YV = blockdiag(A0 + X*W*, A1 - XW)."""
    e0 = p.a0 + adj(ad.x) @ adj(p.w)
    e1 = p.a1 - ad.x @ p.w
    transformed = ad.tstar @ p.B @ ad.tstar_inv
    target = ad._blockdiag(e0, e1)
    r = fro(transformed - target)
    return SimilarityForm(
        block0=e0,
        block1=e1,
        residual=r,
        residual_normalized=r / _scale(p, ad),
        offdiag_norm=_offdiag_block_norm(p, transformed),
    )


@dataclass(frozen=True)
class UnitaryForm:
    """The unitary block diagonalization U* B U = blockdiag(B0, B1).

    ``middle_residual`` measures |T|(A+VY)|T|^-1 - |T|^-1(A-YV)|T|, the
    identity that welds the two similarity forms into the single unitary
    one; ``coherence_residual`` measures |T|(A+VY)|T|^-1 - U* B U.
    """

    u: np.ndarray
    b0: np.ndarray
    b1: np.ndarray
    residual: float
    residual_normalized: float
    middle_residual: float
    middle_residual_normalized: float
    coherence_residual: float
    coherence_residual_normalized: float
    offdiag_norm: float


def unitary_diagonalization(p: BlockProblem, ad: AngularData) -> UnitaryForm:
    b0 = ad.root0 @ (p.a0 + p.w @ ad.x) @ ad.root0_inv
    b1 = ad.root1 @ (p.a1 - adj(p.w) @ adj(ad.x)) @ ad.root1_inv
    transformed = adj(ad.u) @ p.B @ ad.u
    target = ad._blockdiag(b0, b1)
    r = fro(transformed - target)

    first_form = p.A + p.V @ ad.y
    second_form = p.A - ad.y @ p.V
    left = ad.abst @ first_form @ ad.abst_inv
    right = ad.abst_inv @ second_form @ ad.abst
    middle = fro(left - right)
    coherence = fro(left - transformed)

    s = _scale(p, ad)
    return UnitaryForm(
        u=ad.u,
        b0=b0,
        b1=b1,
        residual=r,
        residual_normalized=r / s,
        middle_residual=middle,
        middle_residual_normalized=middle / s,
        coherence_residual=coherence,
        coherence_residual_normalized=coherence / s,
        offdiag_norm=_offdiag_block_norm(p, transformed),
    )


def similarity_audit(p: BlockProblem, ad: AngularData) -> dict[str, tuple[float, float]]:
    """Residuals (raw, normalized) of the T*T similarity and its two block
    versions:

        (T*T)(A+VY)(T*T)^-1 = A - YV
        (I+X*X)(A0+WX)(I+X*X)^-1 = A0 + X*W*
        (I+XX*)(A1-W*X*)(I+XX*)^-1 = A1 - XW
    """
    s = _scale(p, ad)
    gram_full = ad._blockdiag(ad.gram0, ad.gram1)
    gram_full_inv = ad._blockdiag(ad.gram0_inv, ad.gram1_inv)
    first_form = p.A + p.V @ ad.y
    second_form = p.A - ad.y @ p.V
    r_full = fro(gram_full @ first_form @ gram_full_inv - second_form)
    r0 = fro(
        ad.gram0 @ (p.a0 + p.w @ ad.x) @ ad.gram0_inv - (p.a0 + adj(ad.x) @ adj(p.w))
    )
    r1 = fro(
        ad.gram1 @ (p.a1 - adj(p.w) @ adj(ad.x)) @ ad.gram1_inv - (p.a1 - ad.x @ p.w)
    )
    return {
        "gram_full": (r_full, r_full / s),
        "gram_block0": (r0, r0 / s),
        "gram_block1": (r1, r1 / s),
    }


@dataclass(frozen=True)
class RegularityProbe:
    """Smallest singular values of B - lambda, (A - YV) - lambda, and
    (A + VY) - lambda.  At finite dimension a positive value certifies that
    the shifted operator is bijective."""

    lam: complex
    sigma_b: float
    sigma_second: float
    sigma_first: float

    @property
    def all_regular(self) -> bool:
        return self.sigma_b > 0 and self.sigma_second > 0 and self.sigma_first > 0


def regularity_check(p: BlockProblem, ad: AngularData, lam: complex) -> RegularityProbe:
    lam = complex(lam)
    eye = np.eye(p.n, dtype=np.complex128)
    sigma_b = singular_extremes(p.B - lam * eye)[1]
    sigma_second = singular_extremes(p.A - ad.y @ p.V - lam * eye)[1]
    sigma_first = singular_extremes(p.A + p.V @ ad.y - lam * eye)[1]
    return RegularityProbe(
        lam=lam, sigma_b=sigma_b, sigma_second=sigma_second, sigma_first=sigma_first
    )


@dataclass(frozen=True)
class DiagonalizationResult:
    """The two similarity forms, the unitary form, and the named residuals.

    ``spectrum_mismatch`` is the elementwise gap between the sorted
    eigenvalues of blockdiag(D0, D1) and those of B (Hermitian problems on
    which the transforms succeed; None otherwise).  The block spectra are
    read off the unitary form, whose blocks are exactly similar to D0, D1.
    """

    first: SimilarityForm
    second: SimilarityForm
    unitary: UnitaryForm
    residuals: dict[str, float]
    offdiag_norms: dict[str, float]
    hermitian_defect: tuple[float, float] | None
    spectrum_mismatch: float | None


def diagonalize_all(p: BlockProblem, ad: AngularData) -> DiagonalizationResult:
    first = first_diagonalization(p, ad)
    second = second_diagonalization(p, ad)
    unitary = unitary_diagonalization(p, ad)
    audit = similarity_audit(p, ad)

    residuals = {
        "first": first.residual_normalized,
        "second": second.residual_normalized,
        "unitary": unitary.residual_normalized,
        "unitary_middle": unitary.middle_residual_normalized,
        "unitary_coherence": unitary.coherence_residual_normalized,
    }
    for key, (_, rn) in audit.items():
        residuals[key] = rn
    offdiag_norms = {
        "first": first.offdiag_norm,
        "second": second.offdiag_norm,
        "unitary": unitary.offdiag_norm,
    }

    hermitian_defect = None
    spectrum_mismatch = None
    if p.hermitian:
        dev0 = fro(unitary.b0 - adj(unitary.b0))
        dev1 = fro(unitary.b1 - adj(unitary.b1))
        hermitian_defect = (dev0, dev1)
        # spec(B0) = spec(D0) exactly (similarity by construction), so the
        # multiset comparison with spec(B) is meaningful whenever B0, B1 are
        # Hermitian enough to eigendecompose.
        herm_ok = dev0 <= 1e-8 * (1.0 + fro(unitary.b0)) and dev1 <= 1e-8 * (
            1.0 + fro(unitary.b1)
        )
        if herm_ok:
            lam_blocks = np.sort(
                np.concatenate(
                    [
                        hermitian_eig(unitary.b0, check=False).eigenvalues,
                        hermitian_eig(unitary.b1, check=False).eigenvalues,
                    ]
                )
            )
            lam_b = p.eig_B.eigenvalues
            spectrum_mismatch = float(np.max(np.abs(lam_blocks - lam_b)))

    return DiagonalizationResult(
        first=first,
        second=second,
        unitary=unitary,
        residuals=residuals,
        offdiag_norms=offdiag_norms,
        hermitian_defect=hermitian_defect,
        spectrum_mismatch=spectrum_mismatch,
    )
