"""Coincidence-count tables: simulation, CSV serialization, and estimators.

A setting is one analyzer pair (basis_a, basis_b); a full table holds all 36
pairs over {H, V, D, A, R, L}. Expectations are estimated per 4-setting
eigenbasis group, normalizing counts within the group, so no equal-flux
assumption is needed across groups:

* <s_i (x) s_j> comes from the group {(p_i, p_j), (p_i, m_j), (m_i, p_j),
  (m_i, m_j)} with signs equal to eigenvalue products,
* <s_i (x) I> and <I (x) s_j> come from the diagonal groups (i, i) and
  (j, j) with signs on one side only.

Error bars are first-order Poisson propagation with var(count) = count,
treating all settings as independent; the measure-level derivatives are
taken numerically with step max(1, sqrt(count)).
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from importlib import resources
from itertools import product
from typing import Iterable, NamedTuple

import numpy as np

from .algebra import expectation_value
from .errors import DuplicateSetting, MissingSetting, ParseError
from .measures import GResult, KResult, SchmidtCoeffs, k_separable_bound
from .optics import PAULI_EIGENBASIS, BasisLabel, joint_projector


class Setting(NamedTuple):
    """One analyzer configuration: basis label on arm A and on arm B."""

    a: BasisLabel
    b: BasisLabel

    def __str__(self) -> str:
        return f"{self.a}{self.b}"


_LABEL_ORDER = (BasisLabel.H, BasisLabel.V, BasisLabel.D, BasisLabel.A, BasisLabel.R, BasisLabel.L)

#: All 36 analyzer pairs in canonical order; the ordinal in this list seeds
#: the per-setting random substream.
FULL_SETTINGS: tuple[Setting, ...] = tuple(
    Setting(a, b) for a, b in product(_LABEL_ORDER, repeat=2)
)
_ORDINAL = {s: n for n, s in enumerate(FULL_SETTINGS)}

_KMODE_SET = {
    Setting(a, b)
    for pair in PAULI_EIGENBASIS.values()
    for a, b in product(pair, repeat=2)
}
#: The 12-setting subset (three complete eigenbasis groups) sufficient for k.
KMODE_SETTINGS: tuple[Setting, ...] = tuple(s for s in FULL_SETTINGS if s in _KMODE_SET)


@dataclass
class CountsTable:
    """Map from settings to nonnegative coincidence counts.

    source is 'exact' for noiseless expected counts (error bars are zero),
    'poisson' for sampled counts, and 'file' for parsed data of unknown
    provenance (treated as Poisson). seed records the sampling seed.
    """

    counts: dict[Setting, float]
    source: str = "file"
    seed: int | None = None

    def __post_init__(self):
        for s, n in self.counts.items():
            if n < 0:
                raise ValueError(f"count for {s} is negative: {n!r}")

    @property
    def is_exact(self) -> bool:
        return self.source == "exact"

    def require(self, settings: Iterable[Setting]) -> None:
        for s in settings:
            if s not in self.counts:
                raise MissingSetting(f"counts table is missing setting {s.a},{s.b}")


@dataclass(frozen=True)
class SimConfig:
    """Mean pair flux per setting, noise mode ('exact' or 'poisson'), seed."""

    n_per_setting: float
    noise: str = "exact"
    seed: int = 0

    def __post_init__(self):
        if self.n_per_setting <= 0:
            raise ValueError(f"n_per_setting must be positive, got {self.n_per_setting!r}")
        if self.noise not in ("exact", "poisson"):
            raise ValueError(f"noise must be 'exact' or 'poisson', got {self.noise!r}")


@dataclass(frozen=True)
class EstimatedValue:
    """A point estimate with one standard deviation of Poisson noise."""

    value: float
    sigma: float = 0.0


def simulate_counts(rho: np.ndarray, settings: Iterable[Setting], cfg: SimConfig) -> CountsTable:
    """Expected (exact) or Poisson-sampled counts for each requested setting.

    Poisson draws use one independent substream per setting, keyed by the
    setting's canonical ordinal, so results are seed-reproducible no matter
    how the settings are ordered or distributed across workers.
    """
    out: dict[Setting, float] = {}
    for s in settings:
        p = max(0.0, expectation_value(rho, joint_projector(s.a, s.b)))
        mean = cfg.n_per_setting * p
        if cfg.noise == "exact":
            out[s] = mean
        else:
            sub = np.random.default_rng([cfg.seed, _ORDINAL[s]])
            out[s] = float(sub.poisson(mean))
    seed = cfg.seed if cfg.noise == "poisson" else None
    return CountsTable(counts=out, source=cfg.noise, seed=seed)


# ---------------------------------------------------------------------------
# CSV serialization
# ---------------------------------------------------------------------------

_HEADER = "basis_a,basis_b,count"


def parse_counts_csv(text: str) -> CountsTable:
    """Parse the counts CSV format.

    Lines starting with '#' are comments; '# source:' and '# seed:' comments
    written by write_counts_csv are recognized so a round trip preserves the
    table's provenance. The header line must read 'basis_a,basis_b,count'.
    """
    source = "file"
    seed: int | None = None
    counts: dict[Setting, float] = {}
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("source:"):
                source = body.split(":", 1)[1].strip()
            elif body.startswith("seed:"):
                try:
                    seed = int(body.split(":", 1)[1].strip())
                except ValueError:
                    raise ParseError(f"line {lineno}: malformed seed comment {line!r}")
            continue
        if not saw_header:
            if line != _HEADER:
                raise ParseError(f"line {lineno}: expected header {_HEADER!r}, got {line!r}")
            saw_header = True
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 3 fields, got {len(parts)}")
        try:
            a = BasisLabel.parse(parts[0])
            b = BasisLabel.parse(parts[1])
        except ParseError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        try:
            n = float(parts[2])
        except ValueError:
            raise ParseError(f"line {lineno}: count {parts[2]!r} is not a number")
        if not np.isfinite(n) or n < 0:
            raise ParseError(f"line {lineno}: count must be a nonnegative number, got {parts[2]!r}")
        s = Setting(a, b)
        if s in counts:
            raise DuplicateSetting(f"line {lineno}: duplicate setting {s.a},{s.b}")
        counts[s] = n
    if not saw_header:
        raise ParseError("line 1: missing header line")
    return CountsTable(counts=counts, source=source, seed=seed)


def write_counts_csv(table: CountsTable) -> str:
    """Render a table in canonical setting order with provenance comments."""
    buf = io.StringIO()
    if table.source in ("exact", "poisson"):
        buf.write(f"# source: {table.source}\n")
    if table.seed is not None:
        buf.write(f"# seed: {table.seed}\n")
    buf.write(_HEADER + "\n")
    ordered = sorted(table.counts, key=lambda s: _ORDINAL[s])
    for s in ordered:
        n = table.counts[s]
        text = str(int(n)) if float(n).is_integer() else repr(float(n))
        buf.write(f"{s.a},{s.b},{text}\n")
    return buf.getvalue()


def data_file(name: str) -> str:
    """Absolute path of a bundled counts fixture (e.g. 'tableII_block1.csv')."""
    return str(resources.files("entquant").joinpath("data", name))


# ---------------------------------------------------------------------------
# Expectation estimators
# ---------------------------------------------------------------------------

_JOINT_SIGNS = np.array([1.0, -1.0, -1.0, 1.0])
_SIDE_A_SIGNS = np.array([1.0, 1.0, -1.0, -1.0])
_SIDE_B_SIGNS = np.array([1.0, -1.0, 1.0, -1.0])


def group_settings(i: int, j: int) -> tuple[Setting, ...]:
    """The four settings measuring the sigma_i (x) sigma_j eigenbasis."""
    pa, ma = PAULI_EIGENBASIS[i]
    pb, mb = PAULI_EIGENBASIS[j]
    return (Setting(pa, pb), Setting(pa, mb), Setting(ma, pb), Setting(ma, mb))


def _group_counts(table: CountsTable, i: int, j: int) -> np.ndarray:
    group = group_settings(i, j)
    table.require(group)
    return np.array([table.counts[s] for s in group], dtype=float)


def _signed_estimate(counts: np.ndarray, signs: np.ndarray, exact: bool) -> EstimatedValue:
    total = counts.sum()
    if total <= 0:
        raise ValueError("settings group has zero total counts")
    value = float((signs * counts).sum() / total)
    if exact:
        return EstimatedValue(value=value, sigma=0.0)
    # delta method: d value / d n_k = (sign_k - value) / total, var(n_k) = n_k
    var = float((((signs - value) / total) ** 2 * counts).sum())
    return EstimatedValue(value=value, sigma=float(np.sqrt(var)))


def joint_expectation(table: CountsTable, i: int, j: int) -> EstimatedValue:
    """<sigma_i (x) sigma_j> from the (i, j) eigenbasis group."""
    counts = _group_counts(table, i, j)
    return _signed_estimate(counts, _JOINT_SIGNS, table.is_exact)


def marginal_expectation(table: CountsTable, side: str, i: int) -> EstimatedValue:
    """<sigma_i (x) I> (side 'A') or <I (x) sigma_i> (side 'B') from group (i, i)."""
    if side.upper() not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    counts = _group_counts(table, i, i)
    signs = _SIDE_A_SIGNS if side.upper() == "A" else _SIDE_B_SIGNS
    return _signed_estimate(counts, signs, table.is_exact)


# ---------------------------------------------------------------------------
# Measure estimators with propagated uncertainty
# ---------------------------------------------------------------------------

_G_GROUP_INDEX = {
    (i, j): np.array([_ORDINAL[s] for s in group_settings(i, j)])
    for i in (1, 2, 3)
    for j in (1, 2, 3)
}


def _cov_from_vec(vec: np.ndarray) -> np.ndarray:
    """Covariance matrix as a pure function of the 36-count vector."""
    marg_a = {}
    marg_b = {}
    for i in (1, 2, 3):
        c = vec[_G_GROUP_INDEX[i, i]]
        t = c.sum()
        if t <= 0:
            raise ValueError(f"settings group ({i}, {i}) has zero total counts")
        marg_a[i] = (_SIDE_A_SIGNS * c).sum() / t
        marg_b[i] = (_SIDE_B_SIGNS * c).sum() / t
    cov = np.empty((3, 3))
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            c = vec[_G_GROUP_INDEX[i, j]]
            t = c.sum()
            if t <= 0:
                raise ValueError(f"settings group ({i}, {j}) has zero total counts")
            cov[i - 1, j - 1] = (_JOINT_SIGNS * c).sum() / t - marg_a[i] * marg_b[j]
    return cov


def _propagate_poisson(vec: np.ndarray, func, group_of: list[np.ndarray]) -> float:
    """First-order Poisson sigma of func(vec) by numeric differentiation.

    Central differences with step max(1, sqrt(n)); falls back to a forward
    difference when the downward step would empty the setting's group.
    """
    base = func(vec)
    var = 0.0
    for s in range(len(vec)):
        if vec[s] == 0.0:
            continue  # var(n) = 0 contributes nothing
        h = max(1.0, np.sqrt(vec[s]))
        up = vec.copy()
        up[s] += h
        fup = func(up)
        group_total = vec[group_of[s]].sum()
        if group_total - h > 0 and vec[s] - h >= 0:
            down = vec.copy()
            down[s] -= h
            deriv = (fup - func(down)) / (2 * h)
        else:
            deriv = (fup - base) / h
        var += deriv * deriv * vec[s]
    return float(np.sqrt(var))


def g_from_counts(table: CountsTable) -> GResult:
    """Covariance-sum measure from a full 36-setting table, with error bar.

    Each covariance entry is joint(i, j) - marginal_A(i) * marginal_B(j)
    under the group-normalization convention above; delta_g treats all 36
    counts as independent Poisson variables (zero for exact tables).
    """
    table.require(FULL_SETTINGS)
    vec = np.array([table.counts[s] for s in FULL_SETTINGS], dtype=float)
    cov = _cov_from_vec(vec)
    g = float(np.sum(cov * cov))
    if table.is_exact:
        return GResult(g=g, covariance=cov, delta_g=0.0)
    group_of = [_G_GROUP_INDEX[_axis_of(s.a), _axis_of(s.b)] for s in FULL_SETTINGS]
    delta = _propagate_poisson(vec, lambda v: float(np.sum(_cov_from_vec(v) ** 2)), group_of)
    return GResult(g=g, covariance=cov, delta_g=delta)


_AXIS_OF_LABEL = {label: axis for axis, pair in PAULI_EIGENBASIS.items() for label in pair}


def _axis_of(label: BasisLabel) -> int:
    return _AXIS_OF_LABEL[label]


_K_GROUP_SLICES = {
    3: np.array([n for n, s in enumerate(KMODE_SETTINGS) if _axis_of(s.a) == 3]),
    1: np.array([n for n, s in enumerate(KMODE_SETTINGS) if _axis_of(s.a) == 1]),
    2: np.array([n for n, s in enumerate(KMODE_SETTINGS) if _axis_of(s.a) == 2]),
}


def _k_group_probs(vec: np.ndarray, axis: int) -> np.ndarray:
    c = vec[_K_GROUP_SLICES[axis]]
    t = c.sum()
    if t <= 0:
        raise ValueError(f"settings group ({axis}, {axis}) has zero total counts")
    return c / t


def _k_expectations_from_vec(vec: np.ndarray, a: float, b: float) -> np.ndarray:
    """Projector expectations <M_1..4> from the 12-count k-mode vector.

    The Z group gives the basis-state probabilities; the D/A and R/L groups
    give the two coherences through the product-projector decompositions
      <|00><11| + h.c.> = p(RL) + p(LR) + p(DD) + p(AA) - 1
      <|01><10| + h.c.> = p(DD) + p(AA) - p(RL) - p(LR).
    """
    p00, p01, p10, p11 = _k_group_probs(vec, 3)  # order HH, HV, VH, VV
    pdd, pda, pad, paa = _k_group_probs(vec, 1)  # order DD, DA, AD, AA
    prr, prl, plr, pll = _k_group_probs(vec, 2)  # order RR, RL, LR, LL
    coh_main = prl + plr + pdd + paa - 1.0
    coh_cross = pdd + paa - prl - plr
    ab = a * b
    return np.array(
        [
            a * a * p00 + b * b * p11 + ab * coh_main,
            a * a * p01 + b * b * p10 + ab * coh_cross,
            b * b * p01 + a * a * p10 - ab * coh_cross,
            b * b * p00 + a * a * p11 - ab * coh_main,
        ]
    )


def _k_of_vec(vec: np.ndarray, a: float, b: float) -> float:
    m = _k_expectations_from_vec(vec, a, b)
    return float(np.sum(m - m * m))


def k_from_counts(table: CountsTable, s: SchmidtCoeffs) -> KResult:
    """Nonlocal variance sum from the 12-setting k-mode subset.

    The estimate is clamped at 0: the unbiased sum can dip marginally
    negative under Poisson noise when the true value is 0.
    """
    table.require(KMODE_SETTINGS)
    vec = np.array([table.counts[st] for st in KMODE_SETTINGS], dtype=float)
    exps = _k_expectations_from_vec(vec, s.a, s.b)
    k = max(0.0, float(np.sum(exps - exps * exps)))
    if table.is_exact:
        return KResult(k=k, expectations=tuple(exps), bound=k_separable_bound(s), delta_k=0.0)
    group_of = [_K_GROUP_SLICES[_axis_of(st.a)] for st in KMODE_SETTINGS]
    delta = _propagate_poisson(vec, lambda v: _k_of_vec(v, s.a, s.b), group_of)
    return KResult(k=k, expectations=tuple(exps), bound=k_separable_bound(s), delta_k=delta)
