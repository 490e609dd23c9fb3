"""Density-matrix reconstruction from a full 36-setting counts table.

Linear inversion of the (overcomplete) Pauli expectation matrix, followed by
a deterministic restoration of physicality: the eigenvalues of the raw
estimate are Euclidean-projected onto the probability simplex. This gives an
independent concurrence estimate to compare against the covariance-sum
route.
"""

from __future__ import annotations

import numpy as np

from .algebra import validate_density
from .counts import FULL_SETTINGS, CountsTable, joint_expectation, marginal_expectation
from .measures import _PAULI_TENSOR, concurrence


def pauli_vector_from_counts(table: CountsTable) -> np.ndarray:
    """4x4 matrix t[i, j] = <sigma_i (x) sigma_j> estimated from counts.

    t[0, 0] = 1 exactly; marginals t[i, 0] and t[0, j] use the diagonal
    (i, i) and (j, j) groups, matching the covariance estimator convention.
    """
    table.require(FULL_SETTINGS)
    t = np.empty((4, 4))
    t[0, 0] = 1.0
    for i in (1, 2, 3):
        t[i, 0] = marginal_expectation(table, "A", i).value
        t[0, i] = marginal_expectation(table, "B", i).value
        for j in (1, 2, 3):
            t[i, j] = joint_expectation(table, i, j).value
    return t


def linear_inversion(t: np.ndarray) -> np.ndarray:
    """rho_raw = (1/4) sum_ij t[i, j] sigma_i (x) sigma_j.

    Hermitian with unit trace by construction; eigenvalues may be negative
    when t was estimated from noisy counts.
    """
    coeffs = np.asarray(t, dtype=float).reshape(16)
    return np.einsum("k,kij->ij", coeffs, _PAULI_TENSOR) / 4.0


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of v onto {x >= 0, sum x = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, v.size + 1)
    rho = ks[u + (1.0 - css) / ks > 0][-1]
    theta = (1.0 - css[rho - 1]) / rho
    return np.maximum(v + theta, 0.0)


def project_to_physical(rho_raw: np.ndarray) -> np.ndarray:
    """Nearest density matrix: Hermitize, then simplex-project the spectrum.

    Idempotent, and the identity on inputs that are already physical.
    """
    m = np.asarray(rho_raw, dtype=complex)
    m = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    w = _project_simplex(w)
    out = (v * w) @ v.conj().T
    return validate_density(out)


def reconstruct(table: CountsTable) -> np.ndarray:
    """Full pipeline: counts -> Pauli expectations -> inversion -> projection."""
    return project_to_physical(linear_inversion(pauli_vector_from_counts(table)))


def tomo_concurrence(table: CountsTable) -> float:
    """Concurrence of the reconstructed physical state."""
    return concurrence(reconstruct(table))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    if w[-1] > 0:
        # eigenvalue noise ~1e-16 turns into ~1e-8 after the square root;
        # zero it out rather than let it inflate the rank
        w[w < w[-1] * 1e-13] = 0.0
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Evaluated as the squared sum of the singular values of
    sqrt(rho) sqrt(sigma), which is the same quantity without an eigensolve
    of a nearly singular product.
    """
    a = _psd_sqrt(np.asarray(rho, dtype=complex)) @ _psd_sqrt(np.asarray(sigma, dtype=complex))
    return float(np.linalg.svd(a, compute_uv=False).sum() ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """(1/2) tr |rho - sigma|."""
    w = np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))
    return float(0.5 * np.sum(np.abs(w)))
