"""End-to-end acceptance gates.

Each test pins one exit criterion at its stated tolerance and runtime
budget, and prints a PASS/FAIL line with the measured numbers (visible
under pytest -s; pytest -v shows one line per criterion either way).
"""

import io
import json
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from entquant import (
    FULL_SETTINGS,
    ChannelSpec,
    SchmidtCoeffs,
    SimConfig,
    apply_local_unitary,
    concurrence,
    data_file,
    g_from_counts,
    g_measure,
    k_from_counts,
    k_measure,
    k_separable_bound,
    mixed_state_bounds,
    parse_counts_csv,
    phase_damping,
    prepare_parallel,
    pure_to_density,
    random_density,
    random_pure,
    random_unitary,
    simulate_counts,
)
from entquant.cli import main as cli_main
from entquant.tomography import fidelity, reconstruct, trace_distance

SQ2 = 1.0 / np.sqrt(2.0)
SINGLET = pure_to_density(np.array([0, SQ2, -SQ2, 0], dtype=complex))


def report(criterion, ok, detail, elapsed, budget):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {criterion:>2}] {status} ({elapsed:.2f}s / budget {budget:.0f}s) {detail}")


def load_block(name):
    with open(data_file(name), encoding="utf-8") as fh:
        return parse_counts_csv(fh.read())


def test_criterion_01_fixture_analysis_in_range():
    t0 = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["analyze", data_file("tableII_block1.csv")])
    g = json.loads(buf.getvalue())["g"]
    elapsed = time.perf_counter() - t0
    ok = code == 0 and 2.74 <= g <= 2.94 and elapsed < 1.0
    report(1, ok, f"analyze block1: g={g:.4f} in [2.74, 2.94]", elapsed, 1)
    assert code == 0
    assert 2.74 <= g <= 2.94
    assert elapsed < 1.0


def test_criterion_02_ilut_on_measured_blocks():
    t0 = time.perf_counter()
    g1 = g_from_counts(load_block("tableII_block1.csv")).g
    g2 = g_from_counts(load_block("tableII_block2.csv")).g
    elapsed = time.perf_counter() - t0
    ok = abs(g1 - g2) < 0.15 and elapsed < 1.0
    report(2, ok, f"g={g1:.4f} vs g'={g2:.4f}, |diff|={abs(g1 - g2):.4f} < 0.15", elapsed, 1)
    assert abs(g1 - g2) < 0.15
    assert elapsed < 1.0


def test_criterion_03_pure_state_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(10_000):
        rho = pure_to_density(random_pure(rng))
        c = concurrence(rho)
        worst = max(worst, abs(g_measure(rho).g - c * c * (c * c + 2.0)))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 10.0
    report(3, ok, f"10^4 pure states, max |g - c^2(c^2+2)| = {worst:.2e} < 1e-9", elapsed, 10)
    assert worst < 1e-9
    assert elapsed < 10.0


def test_criterion_04_invariance_under_local_unitaries():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2025)
    worst = 0.0
    for n in range(10_000):
        rho = pure_to_density(random_pure(rng)) if n % 2 else random_density(rng)
        rotated = apply_local_unitary(rho, random_unitary(rng), random_unitary(rng))
        worst = max(worst, abs(g_measure(rho).g - g_measure(rotated).g))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 30.0
    report(4, ok, f"10^4 (state, unitary pair) draws, max |g - g'| = {worst:.2e} < 1e-9", elapsed, 30)
    assert worst < 1e-9
    assert elapsed < 30.0


def test_criterion_05_mixed_state_bounds_empirical():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2026)
    violations = []
    for _ in range(10_000):
        rho = random_density(rng)
        lower, g, upper = mixed_state_bounds(rho)
        if not (lower - 1e-9 <= g <= upper + 1e-9):
            violations.append((lower, g, upper, rho))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 30.0
    report(5, ok, f"10^4 mixed states, bound violations: {len(violations)}", elapsed, 30)
    for lower, g, upper, rho in violations:
        print(f"  violation: lower={lower!r} g={g!r} upper={upper!r}\n  state:\n{rho!r}")
    assert not violations
    assert elapsed < 30.0


def test_criterion_06_phase_damped_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    for theta in np.linspace(0.0, np.pi / 4.0, 10):
        for p in np.linspace(0.0, 1.0, 10):
            a, b = np.cos(2 * theta), np.sin(2 * theta)
            rho = phase_damping(pure_to_density(prepare_parallel(theta)), ChannelSpec("z", p))
            expected = (1 - (a * a - b * b) ** 2) ** 2 + 8 * a * a * b * b * (1 - 2 * p) ** 4
            worst = max(worst, abs(g_measure(rho).g - expected))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 5.0
    report(6, ok, f"10x10 (theta, p) grid, max closed-form deviation = {worst:.2e} < 1e-9", elapsed, 5)
    assert worst < 1e-9
    assert elapsed < 5.0


def test_criterion_07_nonlocal_variance_sweep():
    t0 = time.perf_counter()
    hh = pure_to_density(np.array([1, 0, 0, 0], dtype=complex))
    vh = pure_to_density(np.array([0, 0, 1, 0], dtype=complex))
    worst_k0 = worst_k1 = worst_k2 = 0.0
    for theta_deg in np.arange(2.5, 45.0, 2.5):
        theta = np.radians(theta_deg)
        s = SchmidtCoeffs(np.cos(2 * theta), np.sin(2 * theta))
        bound = k_separable_bound(s)
        k0 = k_measure(pure_to_density(prepare_parallel(theta)), s).k
        k1 = k_measure(hh, s).k
        k2 = k_measure(vh, s).k
        assert k0 < bound
        worst_k0 = max(worst_k0, k0)
        worst_k1 = max(worst_k1, abs(k1 - bound))
        worst_k2 = max(worst_k2, abs(k2 - bound))
    elapsed = time.perf_counter() - t0
    ok = worst_k0 < 1e-9 and worst_k1 < 1e-9 and worst_k2 < 1e-9 and elapsed < 5.0
    report(
        7, ok,
        f"17-point sweep: max k0 = {worst_k0:.2e} < 1e-9, "
        f"max |k1 - bound| = {worst_k1:.2e}, max |k2 - bound| = {worst_k2:.2e}",
        elapsed, 5,
    )
    assert worst_k0 < 1e-9
    assert worst_k1 < 1e-9
    assert worst_k2 < 1e-9
    assert elapsed < 5.0


def test_criterion_08_estimator_consistency():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2027)
    cfg = SimConfig(n_per_setting=6700.0, noise="exact")
    worst_g = worst_k = 0.0
    for n in range(1000):
        rho = pure_to_density(random_pure(rng)) if n % 2 else random_density(rng)
        table = simulate_counts(rho, FULL_SETTINGS, cfg)
        worst_g = max(worst_g, abs(g_from_counts(table).g - g_measure(rho).g))
        u = rng.uniform(0.0, 1.0)
        s = SchmidtCoeffs(np.sqrt(u), np.sqrt(1.0 - u))
        worst_k = max(worst_k, abs(k_from_counts(table, s).k - k_measure(rho, s).k))
    elapsed = time.perf_counter() - t0
    ok = worst_g < 1e-9 and worst_k < 1e-9 and elapsed < 60.0
    report(
        8, ok,
        f"10^3 states: max |g_counts - g_state| = {worst_g:.2e}, "
        f"max |k_counts - k_state| = {worst_k:.2e} < 1e-9",
        elapsed, 60,
    )
    assert worst_g < 1e-9
    assert worst_k < 1e-9
    assert elapsed < 60.0


def test_criterion_09_error_bar_calibration():
    t0 = time.perf_counter()
    gs, deltas = [], []
    for seed in range(500):
        table = simulate_counts(SINGLET, FULL_SETTINGS, SimConfig(5000.0, "poisson", seed=seed))
        res = g_from_counts(table)
        gs.append(res.g)
        deltas.append(res.delta_g)
    gs = np.array(gs)
    std = gs.std(ddof=1)
    mean_delta = float(np.mean(deltas))
    mean_dev = abs(gs.mean() - 3.0)
    elapsed = time.perf_counter() - t0
    ok = mean_delta / 2 <= std <= 2 * mean_delta and mean_dev <= 3 * std and elapsed < 120.0
    report(
        9, ok,
        f"500 reps at n=5000: std(g)={std:.2e} vs mean delta_g={mean_delta:.2e} "
        f"(ratio {std / mean_delta:.2f} in [0.5, 2]); |mean(g) - 3| = {mean_dev:.2e} <= 3 std",
        elapsed, 120,
    )
    assert mean_delta / 2 <= std <= 2 * mean_delta
    assert mean_dev <= 3 * std
    assert elapsed < 120.0


def test_criterion_10_tomography_gate():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2028)
    cfg = SimConfig(n_per_setting=5000.0, noise="exact")
    worst_td = 0.0
    for _ in range(1000):
        rho = random_density(rng)
        table = simulate_counts(rho, FULL_SETTINGS, cfg)
        worst_td = max(worst_td, trace_distance(reconstruct(table), rho))
    min_fid = 1.0
    for seed in range(100):
        table = simulate_counts(SINGLET, FULL_SETTINGS, SimConfig(100_000.0, "poisson", seed=seed))
        min_fid = min(min_fid, fidelity(reconstruct(table), SINGLET))
    elapsed = time.perf_counter() - t0
    ok = worst_td < 1e-9 and min_fid > 0.99 and elapsed < 120.0
    report(
        10, ok,
        f"10^3 exact round trips: max trace distance = {worst_td:.2e} < 1e-9; "
        f"100 Poisson reconstructions at n=10^5: min fidelity = {min_fid:.4f} > 0.99",
        elapsed, 120,
    )
    assert worst_td < 1e-9
    assert min_fid > 0.99
    assert elapsed < 120.0
