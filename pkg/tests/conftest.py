import numpy as np
import pytest

from entquant import pure_to_density

SQ2 = 1.0 / np.sqrt(2.0)


@pytest.fixture
def singlet():
    return pure_to_density(np.array([0, SQ2, -SQ2, 0], dtype=complex))


@pytest.fixture
def bell_phi_plus():
    return pure_to_density(np.array([SQ2, 0, 0, SQ2], dtype=complex))


@pytest.fixture
def rho_hh():
    return pure_to_density(np.array([1, 0, 0, 0], dtype=complex))


@pytest.fixture
def maximally_mixed():
    return np.eye(4, dtype=complex) / 4.0


def random_qubit_density(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = g @ g.conj().T
    return m / np.trace(m).real
