"""Acceptance gate: one test per criterion, each logging a [PASS]/[FAIL] line.

The lines are printed in the pytest terminal summary under "acceptance criteria".
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from regionscreen import (AtomSelector, DomeRegion, MembershipIndex, ProbeSet, RegionSet,
                          SparseSolution, SphereRegion, dome_max_abs, members_interval,
                          omp_iterate, region_max_abs, select_exhaustive_discrete,
                          select_screened, tune_epsilon_dome, tune_epsilon_sphere)
from regionscreen.experiments import (ExperimentConfig, deconv_screen, deconv_signal, run_doa,
                                      survivors_path)
from regionscreen.regions import dome_bound, sphere_bound

from conftest import separated_support
from oracles import dome_angle_grid_max, random_unit, sample_dome_points, sample_sphere_points


def _log(log, ok, number, text):
    log.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


def test_criterion_1_screened_selection_matches_exhaustive(doa_dict, acceptance_log):
    start = time.perf_counter()
    regions = RegionSet.subsample(doa_dict, 100, "dome")
    probe = ProbeSet.from_regions(regions)
    index = MembershipIndex(regions.centers, doa_dict, "dome")
    config = ExperimentConfig("doa")
    failures = checks = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        idx = rng.choice(1000, 5, replace=False)
        y = doa_dict.atoms[idx].T @ rng.uniform(-1, 1, 5)
        # compare at every residual along an exhaustive OMP path
        state = SparseSolution.empty(y)
        selector = AtomSelector(doa_dict, "exhaustive")
        for _ in range(config.k):
            want, _ = select_exhaustive_discrete(state.residual, doa_dict)
            got, _, _ = select_screened(state.residual, doa_dict, probe, regions,
                                        membership=index)
            failures += int(got != want)
            checks += 1
            state = omp_iterate(y, state, selector)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    _log(acceptance_log, ok, 1,
         f"{failures} mismatches in {checks} selections over 200 DOA seeds, {elapsed:.1f} s (limit 60 s)")
    assert failures == 0
    assert elapsed < 60


@pytest.mark.parametrize("geometry", ["sphere", "dome"])
def test_criterion_2_region_bound_soundness(geometry, acceptance_log):
    rng = np.random.default_rng(2)
    m, n_regions, per_region = 12, 1000, 100
    failures = 0
    worst = -np.inf
    for _ in range(n_regions):
        r = rng.standard_normal(m) * rng.uniform(0.1, 10)
        t = random_unit(rng, m)
        if rng.uniform() < 0.2:
            # residual nearly aligned with the center
            t = r / np.linalg.norm(r) + 1e-6 * random_unit(rng, m)
            t /= np.linalg.norm(t)
        if geometry == "sphere":
            size = rng.uniform(0.0, 2.0)
            region = SphereRegion(t, size)
            pts = sample_sphere_points(rng, t, size, per_region)
        else:
            size = rng.uniform(-1.0, 1.0)
            region = DomeRegion(t, size)
            pts = sample_dome_points(rng, t, size, per_region)
        bound = region_max_abs(r, region)
        gaps = np.abs(pts @ r) - bound
        worst = max(worst, float(gaps.max()))
        failures += int(np.sum(gaps > 1e-10))
    total = n_regions * per_region
    _log(acceptance_log, failures == 0, 2,
         f"{geometry}: {failures} violations in {total} triples (max excess {worst:.2e}, slack 1e-10)")
    assert failures == 0


def test_criterion_3_dome_closed_form_vs_grid(acceptance_log):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(2, 30))
        r = rng.standard_normal(m) * rng.uniform(0.1, 10)
        t = random_unit(rng, m)
        eps = rng.uniform(-1, 1)
        exact = dome_max_abs(r, DomeRegion(t, eps))
        brute = dome_angle_grid_max(r, t, eps, 10**6)
        worst = max(worst, abs(exact - brute) / max(brute, 1e-300))
    ok = worst <= 1e-6
    _log(acceptance_log, ok, 3, f"max relative error {worst:.2e} over 1000 domes (limit 1e-6)")
    assert ok


@pytest.mark.parametrize("geometry", ["sphere", "dome"])
def test_criterion_4_tuning_tightness(geometry, acceptance_log):
    rng = np.random.default_rng(4)
    bad = 0
    worst_root = 0.0
    for _ in range(1000):
        m = int(rng.integers(2, 50))
        r = rng.standard_normal(m) * rng.uniform(0.1, 10)
        t = random_unit(rng, m)
        c, rho = float(r @ t), float(np.linalg.norm(r))
        if geometry == "sphere":
            tau = abs(c) + rng.uniform(0.01, 3.0) * rho
            eps = tune_epsilon_sphere(r, t, tau)
            inside = sphere_bound(c, rho, eps * (1 - 1e-9)) < tau
            beyond = sphere_bound(c, rho, eps * (1 + 1e-9)) >= tau
            root = abs(sphere_bound(c, rho, eps) - tau) / tau
        else:
            tau = abs(c) + rng.uniform(0.01, 0.99) * (rho - abs(c))
            eps = tune_epsilon_dome(r, t, tau)
            inside = dome_bound(c, rho, eps * (1 + 1e-9)) < tau
            beyond = dome_bound(c, rho, eps * (1 - 1e-9)) >= tau
            root = abs(dome_bound(c, rho, eps) - tau) / tau
        worst_root = max(worst_root, root)
        bad += int(not (inside and beyond and root <= 1e-9))
    _log(acceptance_log, bad == 0, 4,
         f"{geometry}: {bad} of 1000 instances not tight at 1e-9 (max |h(eps*)-tau|/tau {worst_root:.1e})")
    assert bad == 0


def test_criterion_5_complexity_gain(doa_dict, acceptance_log):
    ratios = [run_doa(ExperimentConfig("doa", seed=s), doa_dict).ratio for s in range(20)]
    med = float(np.median(ratios))
    ok = med <= 0.2
    _log(acceptance_log, ok, 5,
         f"median screened/exhaustive cost ratio {med:.4f} over 20 seeds "
         f"(gain {1 / med:.1f}x, floor ratio 0.2)")
    assert ok


def test_criterion_6_deconvolution_screening(gauss_dict, acceptance_log):
    config = ExperimentConfig("deconv")
    unsafe = small = 0
    for seed in range(100):
        y, _, _ = deconv_signal(gauss_dict, config, np.random.default_rng(seed))
        res = deconv_screen(y, gauss_dict, config)
        mu = res.mu_exhaustive
        unsafe += int(any(a < mu < b for a, b in res.removed))
        small += int(res.surviving_fraction < 0.2)
    _log(acceptance_log, unsafe == 0, 6,
         f"{unsafe} of 100 instances removed the exhaustive argmax; "
         f"{small}/100 keep less than 20% of the domain (reported, target 80)")
    assert unsafe == 0


def test_criterion_7_interval_inversion(gauss_dict, acceptance_log):
    sigma2 = gauss_dict.sigma2
    worst = 0.0
    for mu_c in np.linspace(20.0, 80.0, 20):
        center = gauss_dict.atom(mu_c)
        for eps in np.linspace(0.05, 1.0, 20):
            lo, hi = members_interval(SphereRegion(center, eps), gauss_dict, mu_c)
            half = 0.5 * (hi - lo)
            expected = np.sqrt(-4 * sigma2 * np.log(1 - eps**2 / 2))
            worst = max(worst, abs(half - expected))
    ok = worst <= 0.05
    _log(acceptance_log, ok, 7, f"max half-width error {worst:.2e} on a 20x20 grid (limit 0.05)")
    assert ok


@pytest.mark.parametrize("selection", ["exhaustive", "screened"])
def test_criterion_8_omp_recovery(gauss_discrete, selection, acceptance_log):
    selector = AtomSelector(gauss_discrete, selection)
    exact = 0
    worst_res = worst_orth = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        idx = separated_support(rng)
        y = gauss_discrete.atoms[idx].T @ rng.uniform(-1, 1, 5)
        state = SparseSolution.empty(y)
        for _ in range(5):
            state = omp_iterate(y, state, selector)
            orth = np.max(np.abs(np.asarray(state.atoms) @ state.residual))
            worst_orth = max(worst_orth, float(orth))
        rel = np.linalg.norm(state.residual) / np.linalg.norm(y)
        worst_res = max(worst_res, float(rel))
        exact += int(sorted(state.selected) == sorted(idx.tolist()) and rel < 1e-6)
    ok = exact == 50 and worst_orth < 1e-9
    _log(acceptance_log, ok, 8,
         f"{selection}: exact support {exact}/50, max residual/||y|| {worst_res:.1e}, "
         f"max |A_S^T r| {worst_orth:.1e}")
    assert ok


def _run_cli(tmp_path, name, *args):
    out = tmp_path / name
    subprocess.run([sys.executable, "-m", "regionscreen", *args, "--seed", "7", "--out", str(out)],
                   check=True, capture_output=True)
    return out


@pytest.mark.parametrize("experiment", ["doa", "deconv"])
def test_criterion_9_cli_determinism(tmp_path, experiment, acceptance_log):
    a = _run_cli(tmp_path, "a.csv", experiment)
    b = _run_cli(tmp_path, "b.csv", experiment)
    files = [(a, b)]
    if experiment == "deconv":
        files.append((survivors_path(a), survivors_path(b)))
    same = all(x.read_bytes() == y.read_bytes() for x, y in files)
    _log(acceptance_log, same, 9,
         f"{experiment}: {len(files)} CSV file(s) byte-identical across two runs")
    assert same
