"""Problem container for 2x2 block operator matrices and its file format.

A problem is the data (A0, A1, W) on H = H0 (+) H1.  The assembled
operators are

    A = blockdiag(A0, A1)          diagonal part
    V = [[0, W], [W*, 0]]          off-diagonal coupling, Hermitian by construction
    B = A + V                      the full block matrix

together with the signature operator J = blockdiag(I, -I) and its
unimodular generalization J_theta = blockdiag(I, theta*I).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnimodular, ParseError
from .linalg import adj, as_matrix, fro, singular_extremes

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BlockProblem:
    """Immutable problem data; derived operators are cached on first use."""

    a0: np.ndarray
    a1: np.ndarray
    w: np.ndarray
    hermitian: bool = True
    sigma0: "object | None" = None  # optional SpectralSplit carried by the file

    @property
    def n0(self) -> int:
        return self.a0.shape[0]

    @property
    def n1(self) -> int:
        return self.a1.shape[0]

    @property
    def n(self) -> int:
        return self.n0 + self.n1

    @cached_property
    def A(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.complex128)
        a[: self.n0, : self.n0] = self.a0
        a[self.n0 :, self.n0 :] = self.a1
        return a

    @cached_property
    def V(self) -> np.ndarray:
        v = np.zeros((self.n, self.n), dtype=np.complex128)
        v[: self.n0, self.n0 :] = self.w
        v[self.n0 :, : self.n0] = adj(self.w)
        return v

    @cached_property
    def B(self) -> np.ndarray:
        return self.A + self.V

    @cached_property
    def J(self) -> np.ndarray:
        return j_theta(self.n0, self.n1, -1.0)

    @cached_property
    def eig_B(self):
        """Eigendecomposition of the full matrix (Hermitian problems only)."""
        from .linalg import hermitian_eig

        if not self.hermitian:
            raise NotHermitian("eig_B is only available in hermitian mode")
        return hermitian_eig(self.B)

    @cached_property
    def norm_B(self) -> float:
        """Operator 2-norm of the full matrix (cached; used in residual scales)."""
        if self.hermitian:
            return float(np.max(np.abs(self.eig_B.eigenvalues)))
        return singular_extremes(self.B)[0]

    def blocks_of(self, m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Split an n x n matrix into (top-left, top-right, bottom-left, bottom-right)."""
        k = self.n0
        return m[:k, :k], m[:k, k:], m[k:, :k], m[k:, k:]


def j_theta(n0: int, n1: int, theta: complex) -> np.ndarray:
    """blockdiag(I_{n0}, theta * I_{n1}) for unimodular theta."""
    theta = complex(theta)
    if abs(abs(theta) - 1.0) > UNIMODULAR_TOL:
        raise NotUnimodular(f"|theta| = {abs(theta)!r} is not 1")
    d = np.ones(n0 + n1, dtype=np.complex128)
    d[n0:] = theta
    return np.diag(d)


@dataclass(frozen=True)
class ThetaRotation:
    """A point on the unit circle; conjugation by J_theta maps W to conj(theta)*W."""

    theta: complex

    def __post_init__(self):
        if abs(abs(complex(self.theta)) - 1.0) > UNIMODULAR_TOL:
            raise NotUnimodular(f"|theta| = {abs(complex(self.theta))!r} is not 1")

    def matrix(self, n0: int, n1: int) -> np.ndarray:
        return j_theta(n0, n1, self.theta)

    @property
    def conjugate(self) -> "ThetaRotation":
        return ThetaRotation(complex(self.theta).conjugate())


def assemble(a0, a1, w, hermitian: bool = True, sigma0=None) -> BlockProblem:
    """Validate dimensions (and Hermiticity of the diagonal blocks) and build
    the problem."""
    a0 = as_matrix(a0)
    a1 = as_matrix(a1)
    w = as_matrix(w)
    if a0.shape[0] != a0.shape[1]:
        raise DimensionMismatch(f"A0 must be square, got {a0.shape}")
    if a1.shape[0] != a1.shape[1]:
        raise DimensionMismatch(f"A1 must be square, got {a1.shape}")
    if w.shape != (a0.shape[0], a1.shape[0]):
        raise DimensionMismatch(
            f"W must be {a0.shape[0]} x {a1.shape[0]} (H1 -> H0), got {w.shape}"
        )
    if hermitian:
        for name, blk in (("A0", a0), ("A1", a1)):
            if fro(blk - adj(blk)) > 1e-12 * (1.0 + fro(blk)):
                raise NotHermitian(f"{name} is not Hermitian")
    return BlockProblem(a0=a0, a1=a1, w=w, hermitian=hermitian, sigma0=sigma0)


def conjugate_theta(p: BlockProblem, rotation) -> BlockProblem:
    """The problem conjugated by J_theta: W maps to conj(theta) * W.

    The full matrix of the result equals J_theta B J_theta*; the diagonal
    blocks are untouched.
    """
    if not isinstance(rotation, ThetaRotation):
        rotation = ThetaRotation(complex(rotation))
    theta = complex(rotation.theta)
    return BlockProblem(
        a0=p.a0.copy(),
        a1=p.a1.copy(),
        w=theta.conjugate() * p.w,
        hermitian=p.hermitian,
        sigma0=p.sigma0,
    )


def residual_scale(p: BlockProblem, x, norm_x: float | None = None) -> float:
    """Common residual normalization (1 + ||B||) * (1 + ||X||)^2."""
    if norm_x is None:
        norm_x = singular_extremes(x)[0]
    return (1.0 + p.norm_B) * (1.0 + norm_x) ** 2


# ---------------------------------------------------------------------------
# problem file format (JSON)
# ---------------------------------------------------------------------------
#
# {"n0": int, "n1": int, "hermitian": bool,
#  "A0": [[c, ...], ...], "A1": [[...]], "W": [[...]],
#  "sigma0": {"type": "threshold", "value": r} | {"type": "indices", "values": [..]}}
#
# where each entry c is [re, im] or a bare real.  Serialization always emits
# [re, im] pairs with 17 significant digits, in the key order above.


def _entry_to_complex(value, field_name: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value), 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(float(value[0]), float(value[1]))
    raise ParseError(f"bad entry in {field_name}: {value!r}", field=field_name)


def _parse_matrix(doc: dict, field_name: str, shape: tuple[int, int]) -> np.ndarray:
    if field_name not in doc:
        raise ParseError(f"missing field {field_name}", field=field_name)
    rows = doc[field_name]
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ParseError(
            f"{field_name} must be a list of {shape[0]} rows", field=field_name
        )
    out = np.zeros(shape, dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ParseError(
                f"{field_name} row {i} must have {shape[1]} entries", field=field_name
            )
        for j, value in enumerate(row):
            out[i, j] = _entry_to_complex(value, field_name)
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise ParseError(f"non-finite entry in {field_name}", field=field_name)
    return out


def parse_problem(text: str) -> BlockProblem:
    """Parse the JSON problem format; raises ParseError / DimensionMismatch."""
    from .subspace import SpectralSplit

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    for key in ("n0", "n1"):
        if key not in doc:
            raise ParseError(f"missing field {key}", field=key)
        if not isinstance(doc[key], int) or isinstance(doc[key], bool) or doc[key] < 1:
            raise ParseError(f"{key} must be a positive integer", field=key)
    n0, n1 = doc["n0"], doc["n1"]
    hermitian = doc.get("hermitian", True)
    if not isinstance(hermitian, bool):
        raise ParseError("hermitian must be a boolean", field="hermitian")
    a0 = _parse_matrix(doc, "A0", (n0, n0))
    a1 = _parse_matrix(doc, "A1", (n1, n1))
    w = _parse_matrix(doc, "W", (n0, n1))

    sigma0 = None
    if "sigma0" in doc and doc["sigma0"] is not None:
        raw = doc["sigma0"]
        if not isinstance(raw, dict) or "type" not in raw:
            raise ParseError("sigma0 must be an object with a type", field="sigma0")
        if raw["type"] == "threshold":
            if "value" not in raw or not isinstance(raw["value"], (int, float)):
                raise ParseError("sigma0.value must be a real number", field="sigma0")
            sigma0 = SpectralSplit(threshold=float(raw["value"]))
        elif raw["type"] == "indices":
            values = raw.get("values")
            if not isinstance(values, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in values
            ):
                raise ParseError("sigma0.values must be a list of integers", field="sigma0")
            sigma0 = SpectralSplit(indices=tuple(values))
        else:
            raise ParseError(f"unknown sigma0 type {raw['type']!r}", field="sigma0")

    return assemble(a0, a1, w, hermitian=hermitian, sigma0=sigma0)


def _fmt_real(x: float) -> str:
    return "%.17g" % float(x)


def _fmt_matrix(m: np.ndarray) -> str:
    rows = []
    for i in range(m.shape[0]):
        cells = ", ".join(
            f"[{_fmt_real(m[i, j].real)}, {_fmt_real(m[i, j].imag)}]"
            for j in range(m.shape[1])
        )
        rows.append(f"[{cells}]")
    return "[" + ", ".join(rows) + "]"


def serialize_problem(p: BlockProblem) -> str:
    """Emit the canonical byte-stable form: fixed key order, [re, im] entries,
    17 significant digits."""
    parts = [
        f'"n0": {p.n0}',
        f'"n1": {p.n1}',
        f'"hermitian": {"true" if p.hermitian else "false"}',
        f'"A0": {_fmt_matrix(p.a0)}',
        f'"A1": {_fmt_matrix(p.a1)}',
        f'"W": {_fmt_matrix(p.w)}',
    ]
    if p.sigma0 is not None:
        if p.sigma0.threshold is not None:
            parts.append(
                f'"sigma0": {{"type": "threshold", "value": {_fmt_real(p.sigma0.threshold)}}}'
            )
        else:
            idx = ", ".join(str(i) for i in p.sigma0.indices)
            parts.append(f'"sigma0": {{"type": "indices", "values": [{idx}]}}')
    return "{" + ", ".join(parts) + "}\n"
