import numpy as np
import pytest
from hypothesis import settings

from blockdiag import model

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")
from blockdiag.generate import random_subordinated_problem
from blockdiag.subspace import SpectralSplit, angular_from_projection, spectral_projection


@pytest.fixture
def golden():
    """A0 = [0], A1 = [1], W = [1]; B = [[0,1],[1,1]], X = (1 - sqrt 5)/2."""
    return model.assemble([[0.0]], [[1.0]], [[1.0]])


GOLDEN_X = (1.0 - np.sqrt(5.0)) / 2.0


def make_instance(rng, n0=None, n1=None, gap=None, coupling=None):
    """Seeded subordinated Hermitian instance."""
    n0 = n0 or int(rng.integers(1, 9))
    n1 = n1 or int(rng.integers(1, 9))
    gap = gap if gap is not None else float(rng.uniform(0.2, 1.5))
    coupling = coupling if coupling is not None else float(rng.uniform(0.05, 2.0))
    return random_subordinated_problem(rng, n0, n1, gap, coupling)


def spectral_x(p):
    """Angular operator of the low spectral subspace (lowest n0 eigenvalues)."""
    projectors = spectral_projection(
        p.B, SpectralSplit(indices=tuple(range(p.n0))), eigen=p.eig_B
    )
    return angular_from_projection(projectors.p, p.n0)


def random_complex(rng, rows, cols, scale=1.0):
    return scale * (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols)))


def random_hermitian(rng, n, scale=1.0):
    m = random_complex(rng, n, n, scale)
    return m + m.conj().T
