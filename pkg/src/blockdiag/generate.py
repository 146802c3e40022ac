"""Problem generators: seeded random instances and growing truncation families."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, ParseError
from .linalg import mgs_orthonormalize, singular_extremes
from .model import BlockProblem, assemble


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(int(seed_or_rng))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return mgs_orthonormalize(g)


def random_hermitian_with_spectrum(
    rng: np.random.Generator, n: int, low: float, high: float
) -> np.ndarray:
    lam = np.sort(rng.uniform(low, high, size=n))
    u = random_unitary(rng, n)
    h = (u * lam) @ u.conj().T
    return 0.5 * (h + h.conj().T)


def random_subordinated_problem(
    seed_or_rng, n0: int, n1: int, gap: float, coupling_scale: float
) -> BlockProblem:
    """Random Hermitian problem with spec(A0) in [-2, -gap/2], spec(A1) in
    [gap/2, 2], and ||W|| = coupling_scale.  Deterministic per seed."""
    if n0 < 1 or n1 < 1:
        raise BadParams("dimensions must be positive")
    if not (0.0 < gap < 4.0):
        raise BadParams(f"gap must lie in (0, 4), got {gap}")
    if coupling_scale < 0.0:
        raise BadParams("coupling scale must be nonnegative")
    rng = _rng(seed_or_rng)
    a0 = random_hermitian_with_spectrum(rng, n0, -2.0, -gap / 2.0)
    a1 = random_hermitian_with_spectrum(rng, n1, gap / 2.0, 2.0)
    w = rng.normal(size=(n0, n1)) + 1j * rng.normal(size=(n0, n1))
    if coupling_scale == 0.0:
        w = np.zeros((n0, n1), dtype=np.complex128)
    else:
        w = w * (coupling_scale / singular_extremes(w)[0])
    from .subspace import SpectralSplit

    return assemble(a0, a1, w, hermitian=True, sigma0=SpectralSplit(threshold=0.0))


# ---------------------------------------------------------------------------
# truncation families (finite sections of a growing problem)
# ---------------------------------------------------------------------------

_FAMILY_KINDS = ("diag-power",)


@dataclass(frozen=True)
class FamilySpec:
    """Per-size recipe for a growing family.

    diag-power: A0(n) = diag(-(j**p)), A1(n) = diag(+(j**p)), j = 1..n.
    Coupling "identity" is scale * I; "banded" has entries
    scale * j**q on the band |i - j| < band (1-based j), so column norms
    grow or decay like j**q.
    """

    kind: str = "diag-power"
    p: float = 1.0
    q: float = 0.0
    coupling: str = "identity"
    band: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in _FAMILY_KINDS:
            raise BadParams(f"unknown family kind {self.kind!r}")
        if self.coupling not in ("identity", "banded"):
            raise BadParams(f"unknown coupling {self.coupling!r}")
        if self.band < 1:
            raise BadParams("band must be at least 1")


def parse_family(text: str) -> FamilySpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("family spec must be an object with a kind", field="kind")
    known = {"kind", "p", "q", "coupling", "band", "scale"}
    unknown = set(doc) - known
    if unknown:
        raise ParseError(f"unknown family fields {sorted(unknown)}")
    try:
        return FamilySpec(**doc)
    except BadParams:
        raise
    except TypeError as exc:
        raise ParseError(str(exc)) from exc


def family_problem(spec: FamilySpec, n: int) -> BlockProblem:
    if n < 1:
        raise BadParams("family size must be positive")
    j = np.arange(1, n + 1, dtype=float)
    growth = j**spec.p
    a0 = np.diag(-growth).astype(np.complex128)
    a1 = np.diag(growth).astype(np.complex128)
    if spec.coupling == "identity":
        w = spec.scale * np.eye(n, dtype=np.complex128)
    else:
        w = np.zeros((n, n), dtype=np.complex128)
        for col in range(n):
            lo = max(0, col - spec.band + 1)
            hi = min(n, col + spec.band)
            w[lo:hi, col] = spec.scale * (col + 1.0) ** spec.q
    from .subspace import SpectralSplit

    return assemble(a0, a1, w, hermitian=True, sigma0=SpectralSplit(threshold=0.0))
