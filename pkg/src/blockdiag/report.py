"""One-stop verification of a (problem, X) pair and machine-readable reports.

``analyze`` evaluates every identity the package knows about on full
matrices and groups them into four verdicts (split Riccati, full Riccati,
intertwining, diagonalization) that are expected to pass or fail together;
``run_report`` renders the result as a stable-key JSON document tagged
``blockdiag-report/1``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .diagonalize import (
    AngularData,
    DiagonalizationResult,
    RegularityProbe,
    diagonalize_all,
    regularity_check,
)
from .linalg import fro
from .model import BlockProblem
from .riccati import RiccatiReport, riccati_residual
from .subspace import ReducingVerdict, reducing_check

DEFAULT_TOL = 1e-9


@dataclass
class Analysis:
    problem: BlockProblem
    x: np.ndarray
    ad: AngularData
    tol: float
    riccati: RiccatiReport
    reducing: ReducingVerdict
    diag: DiagonalizationResult
    regularity: RegularityProbe
    verdicts: dict[str, bool]

    @property
    def agreement(self) -> bool:
        """The four equivalent-residual verdicts agree."""
        values = set(self.verdicts.values())
        return len(values) == 1

    @property
    def max_normalized_residual(self) -> float:
        r = self.riccati
        return max(
            r.full_residual_normalized,
            *r.split_residuals_normalized,
            *r.intertwining_normalized,
            *self.diag.residuals.values(),
        )

    @property
    def all_pass(self) -> bool:
        return (
            self.riccati.strong_solution
            and self.reducing.reducing
            and all(v <= self.tol for v in self.diag.residuals.values())
        )


def analyze(p: BlockProblem, x, tol: float = DEFAULT_TOL) -> Analysis:
    ad = AngularData(x)
    scale = (1.0 + p.norm_B) * (1.0 + ad.norm_x) ** 2
    ric = riccati_residual(p, ad.x, tol=tol, scale=scale)
    red = reducing_check(p, ad.x, tol=tol, scale=scale)
    diag = diagonalize_all(p, ad)
    probe = regularity_check(p, ad, 1j * (1.0 + p.norm_B))
    verdicts = {
        "split_riccati": max(ric.split_residuals_normalized) <= tol,
        "full_riccati": ric.full_residual_normalized <= tol,
        "intertwining": max(ric.intertwining_normalized) <= tol,
        "diagonalization": max(diag.residuals["first"], diag.residuals["second"]) <= tol,
    }
    return Analysis(
        problem=p,
        x=ad.x,
        ad=ad,
        tol=tol,
        riccati=ric,
        reducing=red,
        diag=diag,
        regularity=probe,
        verdicts=verdicts,
    )


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def _split_to_json(split) -> dict | None:
    if split is None:
        return None
    if split.threshold is not None:
        return {"type": "threshold", "value": float(split.threshold)}
    return {"type": "indices", "values": [int(i) for i in split.indices]}


def run_report(
    analysis: Analysis,
    provenance: str,
    split=None,
    spectral_gap: float | None = None,
    wall_time_s: float | None = None,
) -> dict:
    """JSON-ready report; every residual is re-derivable from the problem
    and X alone (wall time is informational and excluded from determinism)."""
    p = analysis.problem
    ric = analysis.riccati
    diag = analysis.diag
    report = {
        "schema": "blockdiag-report/1",
        "tool_version": __version__,
        "problem": {
            "n0": p.n0,
            "n1": p.n1,
            "hermitian": p.hermitian,
            "norm_b": p.norm_B,
            "norm_w": fro(p.w),
            "spectral_gap": spectral_gap,
        },
        "split": _split_to_json(split),
        "x_provenance": provenance,
        "x": matrix_to_json(analysis.x),
        "x_norm": analysis.ad.norm_x,
        "tolerance": analysis.tol,
        "residuals": {
            "riccati_full": {
                "raw": ric.full_residual,
                "normalized": ric.full_residual_normalized,
            },
            "riccati_split": {
                "raw": list(ric.split_residuals),
                "normalized": list(ric.split_residuals_normalized),
            },
            "intertwining": {
                "raw": list(ric.intertwining),
                "normalized": list(ric.intertwining_normalized),
            },
            "diagonalization_first": {
                "raw": diag.first.residual,
                "normalized": diag.first.residual_normalized,
            },
            "diagonalization_second": {
                "raw": diag.second.residual,
                "normalized": diag.second.residual_normalized,
            },
            "unitary": {
                "raw": diag.unitary.residual,
                "normalized": diag.unitary.residual_normalized,
            },
            "unitary_middle": {
                "raw": diag.unitary.middle_residual,
                "normalized": diag.unitary.middle_residual_normalized,
            },
            "unitary_coherence": {
                "raw": diag.unitary.coherence_residual,
                "normalized": diag.unitary.coherence_residual_normalized,
            },
            "similarity_audit": {
                key: diag.residuals[key]
                for key in ("gram_full", "gram_block0", "gram_block1")
            },
        },
        "offdiag_norms": diag.offdiag_norms,
        "diagonal_blocks": {
            "first": [matrix_to_json(diag.first.block0), matrix_to_json(diag.first.block1)],
            "second": [matrix_to_json(diag.second.block0), matrix_to_json(diag.second.block1)],
            "unitary": [matrix_to_json(diag.unitary.b0), matrix_to_json(diag.unitary.b1)],
        },
        "spectrum_mismatch": diag.spectrum_mismatch,
        "hermitian_defect": list(diag.hermitian_defect) if diag.hermitian_defect else None,
        "regularity_probe": {
            "lambda": [analysis.regularity.lam.real, analysis.regularity.lam.imag],
            "sigma_b": analysis.regularity.sigma_b,
            "sigma_second": analysis.regularity.sigma_second,
            "sigma_first": analysis.regularity.sigma_first,
        },
        "verdicts": {
            **analysis.verdicts,
            "strong_solution": ric.strong_solution,
            "reducing": analysis.reducing.reducing,
            "domain_splitting_automatic": analysis.reducing.domain_splitting_automatic,
            "all_pass": analysis.all_pass,
        },
        "wall_time_s": wall_time_s,
    }
    return report


def timed_report(p: BlockProblem, x, tol: float, provenance: str, split=None, gap=None) -> tuple[dict, Analysis]:
    start = time.perf_counter()
    analysis = analyze(p, x, tol=tol)
    elapsed = time.perf_counter() - start
    return (
        run_report(
            analysis,
            provenance,
            split=split,
            spectral_gap=gap,
            wall_time_s=elapsed,
        ),
        analysis,
    )
