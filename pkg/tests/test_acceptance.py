"""Acceptance suite: every criterion at its stated tolerance.

Each test evaluates one criterion end to end, prints a single
machine-greppable verdict line, and asserts the verdict.  Run with

    pytest -v -s tests/test_acceptance.py
"""

import time

import numpy as np
import pytest

from lattice_limit import (
    ContinuumReference,
    LatticeHamiltonian,
    ResolventProbe,
    ScalingFunction,
    SpectralWindow,
    adjoint_diff,
    apply_h0h,
    bounded_uc_potential,
    commutator_direct_norm,
    default_resolvent_shift,
    fiber_norm_sup_free1,
    fiber_norm_sup_free2,
    fiber_norm_sup_free_resolvent_diff,
    forward_diff,
    grid_inner,
    growth_potential,
    h0h_symbol,
    harmonic_potential,
    hausdorff_vs_norm_property,
    hoelder_potential,
    lowest_eigenvalues,
    orthonormality_defect,
    p_h_apply,
    p_h_star_apply,
    partition_defect,
    plane_wave,
    q_apply,
    q_star_apply,
    random_grid_function,
    rate_fit,
    resolvent_diff_norm,
    resolvent_rate,
    resolvent_spectrum_hausdorff,
    schur_commutator_bound,
    spec_from_extent,
    spectral_projection_diff,
    uniform_relative_boundedness,
)

MEYER = ScalingFunction()
PROBE = ResolventProbe(-1.0)
SEED = 20240817


def verdict(number, name, ok, detail, started, budget):
    elapsed = time.time() - started
    line = (f"[acceptance] {number:2d} {name}: {'PASS' if ok else 'FAIL'} "
            f"({detail}; {elapsed:.1f}s)")
    print(line)
    assert ok, line
    assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget"


def test_criterion_01_partition_of_unity():
    t0 = time.time()
    defect = partition_defect(MEYER, 4096)
    verdict(1, "partition of unity", defect <= 1e-10,
            f"defect {defect:.3e} <= 1e-10", t0, budget=1.0)


def test_criterion_02_orthonormality():
    t0 = time.time()
    defect = orthonormality_defect(MEYER, 3, 4096)
    verdict(2, "translate orthonormality", defect <= 1e-8,
            f"defect {defect:.3e} <= 1e-8 for |n| <= 3", t0, budget=5.0)


def test_criterion_03_free1_rate():
    t0 = time.time()
    hs = [2.0 ** -k for k in range(3, 9)]
    errs = [fiber_norm_sup_free1(h, PROBE, MEYER, 512) for h in hs]
    slope, _, r2 = rate_fit(list(zip(hs, errs)))
    ok = abs(slope - 2.0) <= 0.1 and r2 >= 0.99
    verdict(3, "projection-defect resolvent rate", ok,
            f"slope {slope:.4f} in 2.0+-0.1, r2 {r2:.5f} >= 0.99", t0, budget=10.0)


def test_criterion_04_free2_rate():
    t0 = time.time()
    hs = [2.0 ** -k for k in range(3, 9)]
    errs = [fiber_norm_sup_free2(h, PROBE, MEYER, 512) for h in hs]
    slope, _, r2 = rate_fit(list(zip(hs, errs)))
    ok = abs(slope - 2.0) <= 0.1 and r2 >= 0.99
    verdict(4, "free resolvent mismatch rate", ok,
            f"slope {slope:.4f} in 2.0+-0.1, r2 {r2:.5f} >= 0.99", t0, budget=10.0)


def test_criterion_05_commutator_rates():
    t0 = time.time()
    extent = 1.0
    hs = [2.0 ** -k for k in range(7, 12)]  # N = 128 .. 2048
    rng = np.random.default_rng(SEED)
    slopes = {}
    dominated = []
    for alpha in (0.5, 1.0):
        G = hoelder_potential(alpha).evaluate
        pairs = []
        for h in hs:
            coarse = spec_from_extent(extent, h, 1)
            direct = commutator_direct_norm(G, MEYER, coarse, 8, tol=1e-5, rng=rng)
            bound = schur_commutator_bound(G, MEYER, coarse, 8, delta=h ** 0.9,
                                           n_decay=4, rng=rng).bound
            pairs.append((h, direct))
            dominated.append(bound >= direct)
        slopes[alpha], _, _ = rate_fit(pairs)
    ok = (slopes[0.5] >= 0.4 and slopes[1.0] >= 0.9 and all(dominated))
    verdict(5, "commutator rates with Schur domination", ok,
            f"slopes {slopes[0.5]:.3f}>=0.4, {slopes[1.0]:.3f}>=0.9, "
            f"domination {sum(dominated)}/{len(dominated)}", t0, budget=120.0)


def test_criterion_06_free_resolvent_cross_check():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    deviations = []
    for h in (0.125, 0.0625, 0.03125):
        box = resolvent_diff_norm(None, PROBE, h, 16.0, MEYER, ratio=8,
                                  norm_tol=1e-4, rng=rng)
        fiber = fiber_norm_sup_free_resolvent_diff(h, PROBE, MEYER, 2048)
        deviations.append(abs(box - fiber) / fiber)
    ok = all(d <= 0.10 for d in deviations)
    verdict(6, "free-case box vs fiber prediction", ok,
            f"max relative deviation {max(deviations):.4f} <= 0.10", t0, budget=120.0)


def test_criterion_07_hoelder_resolvent_rate():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    hs = [2.0 ** -k for k in range(3, 8)]  # N <= 1024 on L = 8
    report = resolvent_rate(hoelder_potential(0.5), PROBE, hs, 8.0, MEYER,
                            ratio=8, expected_rate=0.5, rate_tolerance=0.1,
                            mode="at_least", min_r_squared=0.95, rng=rng)
    ok = report.slope >= 0.4 and report.r_squared >= 0.95
    verdict(7, "Hoelder resolvent convergence", ok,
            f"slope {report.slope:.4f} >= 0.4, r2 {report.r_squared:.5f} >= 0.95",
            t0, budget=600.0)


def test_criterion_08_projection_and_oscillator_levels():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    pot = harmonic_potential()
    window = SpectralWindow(0.0, 2.0)
    diffs = [spectral_projection_diff(pot, window, h, 20.0, MEYER, ratio=8, rng=rng)
             for h in (0.2, 0.1, 0.05)]
    decreasing = all(b <= a for a, b in zip(diffs, diffs[1:]))
    spec = spec_from_extent(20.0, 0.05, 1)
    levels = lowest_eigenvalues(LatticeHamiltonian(spec, pot), 5, tol=1e-7, rng=rng)
    level_err = float(np.max(np.abs(levels - np.array([1.0, 3.0, 5.0, 7.0, 9.0]))))
    ok = decreasing and diffs[-1] <= 0.05 and level_err <= 5e-2
    verdict(8, "ground-window projection and levels", ok,
            f"diffs {['%.2e' % d for d in diffs]}, final <= 0.05, "
            f"level error {level_err:.2e} <= 5e-2", t0, budget=300.0)


def test_criterion_09_resolvent_spectrum_hausdorff():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    pot = harmonic_potential()
    shift = default_resolvent_shift(pot)
    res = resolvent_spectrum_hausdorff(pot, shift, [0.2, 0.1, 0.05, 0.025],
                                       20.0, k=8, ratio=8, rng=rng)
    ok = res.decreasing and res.final <= 1e-2
    verdict(9, "shifted-resolvent spectral distance", ok,
            f"distances {['%.2e' % d for _, d in res.pairs]}, "
            f"final {res.final:.2e} <= 1e-2 (M={shift})", t0, budget=300.0)


def test_criterion_10_hausdorff_vs_norm():
    t0 = time.time()
    res = hausdorff_vs_norm_property(1000, 20, rng=np.random.default_rng(SEED))
    verdict(10, "spectral Hausdorff vs operator norm", res.passed,
            f"{res.violations} violations in {res.trials} trials "
            f"(max excess {res.max_excess:.2e} <= 1e-10)", t0, budget=30.0)


def test_criterion_11_uniform_relative_boundedness():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    hs = [2.0 ** -k for k in range(2, 7)]
    ratios = {}
    for pot in (bounded_uc_potential(), hoelder_potential(0.5),
                growth_potential(1.0, 2.0)):
        table = uniform_relative_boundedness(pot, PROBE, hs, 16.0, rng=rng)
        ratios[pot.kind] = table.ratio
    ok = all(r <= 10.0 for r in ratios.values())
    verdict(11, "uniform relative boundedness", ok,
            "max/min ratios " + ", ".join(f"{k}={v:.3f}" for k, v in ratios.items())
            + " all <= 10", t0, budget=120.0)


def test_criterion_12_structural_identities():
    t0 = time.time()
    rng = np.random.default_rng(SEED)
    spec = spec_from_extent(8.0, 0.25, 1)
    fine = spec.refined(8)
    worst = {"factorization": 0.0, "plane_wave": 0.0, "projection": 0.0,
             "adjointness": 0.0}
    for _ in range(20):
        v = random_grid_function(spec, rng)
        fac = sum((adjoint_diff(forward_diff(v, j), j).values
                   for j in range(spec.dimension)))
        worst["factorization"] = max(worst["factorization"], float(np.max(np.abs(
            fac - apply_h0h(v).values))) * spec.mesh ** 2)

        mode = int(rng.integers(-spec.points // 2, spec.points // 2))
        pw = plane_wave(spec, mode)
        lam = h0h_symbol(mode / spec.extent, spec.mesh)
        worst["plane_wave"] = max(worst["plane_wave"], float(np.max(np.abs(
            apply_h0h(pw).values - lam * pw.values))) * spec.mesh ** 2)

        lifted = p_h_star_apply(v, MEYER, fine)
        back = p_h_apply(lifted, MEYER, spec)
        worst["projection"] = max(worst["projection"], float(np.max(np.abs(
            back.values - v.values))))

        u = random_grid_function(fine, rng)
        lhs = grid_inner(p_h_apply(u, MEYER, spec), v)
        rhs = grid_inner(u, lifted)
        worst["adjointness"] = max(worst["adjointness"],
                                   abs(lhs - rhs) / (u.norm() * v.norm()))
    ok = (worst["factorization"] <= 1e-12 and worst["plane_wave"] <= 1e-12
          and worst["projection"] <= 1e-8 and worst["adjointness"] <= 1e-8)
    verdict(12, "structural identities", ok,
            ", ".join(f"{k} {v:.2e}" for k, v in worst.items()), t0, budget=60.0)
