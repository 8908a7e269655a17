import numpy as np
import pytest

from clusterfuse.densmat import DensityMatrix


def random_density(q: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    dim = 1 << q
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


P_GRID = [round(0.1 * k, 1) for k in range(11)]
