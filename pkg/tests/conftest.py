import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_density_matrix(rng, dim, rank=None):
    """Random positive unit-trace matrix (Ginibre construction)."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian_unit_trace(rng, dim):
    """Random hermitian matrix with trace exactly 1 (not necessarily positive)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (g + g.conj().T)
    h -= (np.trace(h) / dim) * np.eye(dim)
    return h + np.eye(dim) / dim
