"""Block diagonalization of 2x2 block operator matrices.

Compute angular operators X for B = A + V (Hermitian diagonal part,
off-diagonal coupling), verify the Riccati / invariance / intertwining
identities, perform the two similarity block diagonalizations and the
unitary one, and check relative-bound and subordination estimates at finite
dimension.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    BadPair,
    BadParams,
    BlockdiagError,
    DimensionMismatch,
    GapViolation,
    NoConvergence,
    NotAGraph,
    NotHermitian,
    NotUnimodular,
    ParseError,
    RankMismatch,
    Singular,
    SpectraOverlap,
    ZeroLambda,
)
from .model import BlockProblem, ThetaRotation, assemble, conjugate_theta, parse_problem, serialize_problem  # noqa: F401
from .subspace import SpectralSplit  # noqa: F401
