"""Entanglement quantities computed exactly from a known two-qubit state.

The central object is the covariance of a Pauli pair,

    C(i, j) = <s_i (x) s_j> - <s_i (x) I><I (x) s_j>,

summed in squares over the nine pairs to give the measure g = sum C(i,j)^2.
For pure states g relates to the concurrence c by g = c^2 (c^2 + 2); for
mixed states g acts as a witness bracketed by c^2(c^2+2) <= g <= 2c^2 + 1
(tested empirically, not asserted). The module also provides the
local-uncertainty variance sum and the nonlocal variance measure k built
from four projectors onto a Schmidt-form basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    expectation_value,
    is_hermitian,
    pauli_operator,
    tensor_product,
)
from .errors import IdentityIndexNotAllowed, NonHermitianObservable, OutOfRange

# sigma_i (x) sigma_j for i, j in 0..3, stacked for one-shot expectation sweeps
_PAULI_TENSOR = np.stack(
    [tensor_product(pauli_operator(i), pauli_operator(j)) for i in range(4) for j in range(4)]
)
_SIGMA_YY = tensor_product(pauli_operator(2), pauli_operator(2))


def pauli_expectation_matrix(rho: np.ndarray) -> np.ndarray:
    """4x4 matrix t with t[i, j] = <sigma_i (x) sigma_j>; t[0, 0] = 1."""
    t = np.einsum("kij,ji->k", _PAULI_TENSOR, np.asarray(rho)).real
    return t.reshape(4, 4)


def covariance(rho: np.ndarray, i: int, j: int) -> float:
    """C(s_i, s_j) = <s_i s_j> - <s_i><s_j> for Pauli indices i, j in {1, 2, 3}."""
    for name, idx in (("i", i), ("j", j)):
        if idx == 0:
            raise IdentityIndexNotAllowed(f"covariance index {name} must be 1..3, not 0")
        if idx not in (1, 2, 3):
            raise ValueError(f"covariance index {name} must be in 1..3, got {idx!r}")
    si, sj = pauli_operator(i), pauli_operator(j)
    ident = pauli_operator(0)
    joint = expectation_value(rho, tensor_product(si, sj))
    marg_a = expectation_value(rho, tensor_product(si, ident))
    marg_b = expectation_value(rho, tensor_product(ident, sj))
    return joint - marg_a * marg_b


def covariance_matrix(rho: np.ndarray) -> np.ndarray:
    """3x3 matrix of C(s_i, s_j) over i, j in {1, 2, 3}."""
    t = pauli_expectation_matrix(rho)
    return t[1:, 1:] - np.outer(t[1:, 0], t[0, 1:])


@dataclass
class GResult:
    """Covariance-sum measure with its covariance matrix and optional error bar."""

    g: float
    covariance: np.ndarray
    delta_g: float | None = None


def g_measure(rho: np.ndarray) -> GResult:
    """Sum of the nine squared Pauli covariances of rho."""
    cov = covariance_matrix(rho)
    return GResult(g=float(np.sum(cov * cov)), covariance=cov)


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence c = max(0, l1 - l2 - l3 - l4).

    The l_k are the descending square roots of the eigenvalues of
    rho (YY) rho* (YY). They are computed here as the singular values of
    sqrt(rho) (YY) sqrt(rho)*, which is exact at rank deficiency where the
    non-normal product's eigensolve loses half its digits.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    sq = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sq @ _SIGMA_YY @ sq.conj()
    s = np.linalg.svd(m, compute_uv=False)
    return float(min(1.0, max(0.0, s[0] - s[1] - s[2] - s[3])))


def g_from_concurrence(c: float) -> float:
    """Pure-state map g = c^2 (c^2 + 2)."""
    if not -1e-12 <= c <= 1.0 + 1e-12:
        raise OutOfRange(f"concurrence must be in [0, 1], got {c!r}")
    c = min(1.0, max(0.0, c))
    return c * c * (c * c + 2.0)


def concurrence_from_g(g: float) -> float:
    """Inverse of the pure-state map: c = sqrt(sqrt(g + 1) - 1)."""
    if not -1e-12 <= g <= 3.0 + 1e-12:
        raise OutOfRange(f"g must be in [0, 3], got {g!r}")
    g = min(3.0, max(0.0, g))
    return float(np.sqrt(np.sqrt(g + 1.0) - 1.0))


def mixed_state_bounds(rho: np.ndarray) -> tuple[float, float, float]:
    """(c^2(c^2+2), g, 2c^2+1) with c the concurrence of rho.

    The ordering lower <= g <= upper is a witness property without a known
    general proof; callers and tests assert it, this function does not.
    """
    c = concurrence(rho)
    g = g_measure(rho).g
    return (c * c * (c * c + 2.0), g, 2.0 * c * c + 1.0)


@dataclass(frozen=True)
class LurSpec:
    """Paired local observable lists with the separable variance bound."""

    observables_a: tuple
    observables_b: tuple
    bound: float

    def __post_init__(self):
        a = tuple(np.asarray(m, dtype=complex) for m in self.observables_a)
        b = tuple(np.asarray(m, dtype=complex) for m in self.observables_b)
        if len(a) != len(b) or len(a) < 1:
            raise ValueError("observable lists must have equal length >= 1")
        object.__setattr__(self, "observables_a", a)
        object.__setattr__(self, "observables_b", b)


# Variance sum of the three Paulis on one qubit is 3 - |bloch|^2 >= 2.
PAULI_LUR_BOUND = 4.0


def pauli_lur_spec() -> LurSpec:
    """The three-Pauli spec A_i = B_i = sigma_i with separable bound 2 + 2."""
    paulis = tuple(pauli_operator(i) for i in (1, 2, 3))
    return LurSpec(observables_a=paulis, observables_b=paulis, bound=PAULI_LUR_BOUND)


def lur_sum(rho: np.ndarray, spec: LurSpec) -> tuple[float, bool]:
    """Sum of variances of A_i (x) I + I (x) B_i on rho, and whether it
    undercuts the separable bound (a local-uncertainty violation)."""
    ident = pauli_operator(0)
    total = 0.0
    for a, b in zip(spec.observables_a, spec.observables_b):
        for name, m in (("A", a), ("B", b)):
            if not is_hermitian(m, 1e-10):
                raise NonHermitianObservable(f"{name} observable is not Hermitian")
        op = tensor_product(a, ident) + tensor_product(ident, b)
        mean = expectation_value(rho, op)
        total += expectation_value(rho, op @ op) - mean * mean
    return total, total < spec.bound - 1e-10


@dataclass(frozen=True)
class SchmidtCoeffs:
    """Real amplitudes (a, b) with a, b >= 0 and a^2 + b^2 = 1.

    The Schmidt normal form orders a >= b, but the projector family below is
    well defined for any normalized pair, and the sweep over preparation
    angles runs (a, b) = (cos 2t, sin 2t) across the whole quadrant.
    """

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError(f"Schmidt coefficients must be nonnegative, got ({self.a}, {self.b})")
        if abs(self.a**2 + self.b**2 - 1.0) > 1e-12:
            raise ValueError(f"a^2 + b^2 must be 1 within 1e-12, got {self.a**2 + self.b**2!r}")


@dataclass(frozen=True)
class KObservables:
    """Orthonormal rank-1 projector family M_1..M_4 built from (a, b).

    The target states are a|00>+b|11>, a|01>+b|10>, b|01>-a|10>, b|00>-a|11>
    in that order; the first projects onto the state whose variance sum
    vanishes, the rest span its orthocomplement.
    """

    coeffs: SchmidtCoeffs
    projectors: tuple = field(repr=False)


def k_observables(s: SchmidtCoeffs) -> KObservables:
    a, b = s.a, s.b
    kets = (
        np.array([a, 0, 0, b], dtype=complex),
        np.array([0, a, b, 0], dtype=complex),
        np.array([0, b, -a, 0], dtype=complex),
        np.array([b, 0, 0, -a], dtype=complex),
    )
    return KObservables(coeffs=s, projectors=tuple(np.outer(k, k.conj()) for k in kets))


def k_separable_bound(s: SchmidtCoeffs) -> float:
    """Minimum variance sum 2 a^2 b^2 attainable by separable states."""
    return 2.0 * (s.a * s.b) ** 2


@dataclass
class KResult:
    """Nonlocal variance sum with its projector expectations and bound."""

    k: float
    expectations: tuple[float, float, float, float]
    bound: float
    delta_k: float | None = None


def k_measure(rho: np.ndarray, s: SchmidtCoeffs) -> KResult:
    """k = sum_i (<M_i> - <M_i>^2), using the projector identity M_i^2 = M_i."""
    obs = k_observables(s)
    exps = tuple(expectation_value(rho, m) for m in obs.projectors)
    k = max(0.0, float(sum(e - e * e for e in exps)))  # rounding can leave -1e-16
    return KResult(k=k, expectations=exps, bound=k_separable_bound(s))
