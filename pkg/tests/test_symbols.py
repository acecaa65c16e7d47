import numpy as np
import pytest

from lattice_limit import (
    ResolventProbe,
    ScalingFunction,
    fiber_free1,
    fiber_free2,
    fiber_free_resolvent_diff,
    fiber_norm_sup_free1,
    fiber_norm_sup_free2,
    fiber_norm_sup_free_resolvent_diff,
    fiber_vector,
    h0_symbol,
    h0h_symbol,
    lower_bound_check,
    rate_fit,
    taylor_gap_ratio,
)
from lattice_limit.symbols import fiber_shifts


def test_probe_validation():
    ResolventProbe(-1.0)
    ResolventProbe(1j)
    ResolventProbe(2.0 + 0.5j)
    with pytest.raises(ValueError):
        ResolventProbe(0.0)
    with pytest.raises(ValueError):
        ResolventProbe(3.0)


def test_h0_symbol_values():
    assert h0_symbol(0.0) == 0.0
    assert h0_symbol(np.array([1.0 / (2.0 * np.pi), 0.0])) == pytest.approx(1.0)
    assert h0_symbol(np.array([1.0, 1.0])) == pytest.approx(8.0 * np.pi ** 2)


def test_h0h_symbol_values():
    assert h0h_symbol(0.0, 0.1) == 0.0
    assert h0h_symbol(0.5, 1.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        h0h_symbol(0.5, 0.0)


def test_h0h_periodicity_and_range(rng):
    h = 0.125
    zeta = rng.uniform(-4.0, 4.0, (256, 2))
    shifted = zeta + np.array([1.0 / h, 0.0])
    assert np.abs(h0h_symbol(zeta, h) - h0h_symbol(shifted, h)).max() <= 1e-9 / h ** 2
    vals = h0h_symbol(zeta, h)
    assert np.all(vals >= 0.0)
    assert np.all(vals <= 4.0 * 2 / h ** 2 + 1e-9)
    # the maximum is attained at the edge midpoint
    assert h0h_symbol(np.array([0.5 / h, 0.5 / h]), h) == pytest.approx(8.0 / h ** 2)


def test_taylor_gap_ratio_bound_and_limit():
    bound = (2.0 * np.pi) ** 4 / 12.0
    grid = np.linspace(0.05, 3.0, 500)
    assert taylor_gap_ratio(0.1, grid) <= bound
    # frozen by hand: 2 * 10^2 * (1 - cos(0.2 pi)) = 38.19660..., 4 pi^2 = 39.47842...
    gap = abs(h0h_symbol(1.0, 0.1) - h0_symbol(1.0))
    assert gap == pytest.approx(1.2818164793, rel=1e-9)
    # the ratio approaches the quartic remainder constant as h -> 0 at fixed xi
    assert taylor_gap_ratio(0.0125, np.array([1.0])) == pytest.approx(bound, rel=0.01)


def test_taylor_gap_ratio_scale_invariance():
    # the gap depends on h*xi only, divided by h^2 |xi|^4
    grid = np.linspace(0.1, 2.0, 50)
    a = taylor_gap_ratio(0.2, grid)
    b = taylor_gap_ratio(0.1, 2.0 * grid)
    assert a == pytest.approx(b, rel=1e-12)


def test_taylor_gap_ratio_validation():
    with pytest.raises(ValueError):
        taylor_gap_ratio(0.1, np.array([]))
    with pytest.raises(ValueError):
        taylor_gap_ratio(0.1, np.array([0.0, 1.0]))


def test_lower_bound_constant(meyer):
    t = np.linspace(-2.0 / 3.0, 2.0 / 3.0, 3001)
    c0 = lower_bound_check(meyer, t)
    # minimized at the support edge: 2 (1 - cos(4 pi/3)) / (4/9) = 27/4
    assert c0 == pytest.approx(6.75, rel=1e-9)
    assert c0 > 0.0
    # small-t limit is the continuum coefficient (t large enough that the
    # 1 - cos cancellation stays well below the tolerance)
    assert lower_bound_check(meyer, np.array([1e-4])) == pytest.approx(
        4.0 * np.pi ** 2, rel=1e-6)
    # even in t
    assert lower_bound_check(meyer, np.array([0.4])) == pytest.approx(
        lower_bound_check(meyer, np.array([-0.4])), rel=1e-14)
    with pytest.raises(ValueError):
        lower_bound_check(meyer, np.array([0.9]))  # outside the support


def test_fiber_vector_unit_norm(meyer, rng):
    h = 0.125
    zeta = rng.uniform(-0.5 / h, 0.5 / h, 1000)
    norms = np.array([np.linalg.norm(fiber_vector(z, h, meyer)) for z in zeta[:200]])
    assert np.abs(norms - 1.0).max() <= 1e-12


def test_fiber_free1_projection_structure(meyer, probe):
    h = 0.25
    v = fiber_vector(0.3, h, meyer)
    proj = np.eye(3) - np.outer(v, v)
    assert np.abs(proj @ proj - proj).max() <= 1e-12


def test_fiber_free1_flat_region(meyer, probe):
    # with h*zeta deep in the flat region the center channel is annihilated
    h = 0.25
    zeta = 0.1
    fm = fiber_free1(zeta, h, probe, meyer)
    shifts = np.array(fiber_shifts(1), dtype=float).ravel()
    expected = max(1.0 / abs(h0_symbol(zeta + n / h) - probe.mu)
                   for n in shifts if n != 0.0)
    assert fm.norm2() == pytest.approx(expected, rel=1e-12)


def test_fiber_free1_at_zero(meyer, probe):
    h = 0.125
    fm = fiber_free1(0.0, h, probe, meyer)
    expected = 1.0 / abs(h0_symbol(np.array([1.0 / h])) - probe.mu)
    assert fm.norm2() == pytest.approx(expected, rel=1e-12)


def test_fiber_zero_rows_and_columns(meyer, probe):
    # vanishing profile weights zero out the matching free2 rows and columns
    h = 0.25
    zeta = 0.1
    v = fiber_vector(zeta, h, meyer)
    fm2 = fiber_free2(zeta, h, probe, meyer)
    dead = np.where(v == 0.0)[0]
    assert np.abs(fm2.entries[dead, :]).max() == 0.0
    assert np.abs(fm2.entries[:, dead]).max() == 0.0


def test_diff_fiber_is_free2_minus_free1(meyer, probe):
    h = 0.2
    for zeta in (-2.2, 0.0, 0.7, 1.9):
        m1 = fiber_free1(zeta, h, probe, meyer).entries
        m2 = fiber_free2(zeta, h, probe, meyer).entries
        md = fiber_free_resolvent_diff(zeta, h, probe, meyer).entries
        assert np.abs(md - (m2 - m1)).max() <= 1e-14


@pytest.mark.parametrize("sup,expected", [
    (fiber_norm_sup_free1, 2.0),
    (fiber_norm_sup_free2, 2.0),
    (fiber_norm_sup_free_resolvent_diff, 2.0),
])
def test_fiber_norm_rates(meyer, probe, sup, expected):
    hs = [2.0 ** -k for k in range(3, 9)]
    errs = [sup(h, probe, meyer, 256) for h in hs]
    slope, _, r2 = rate_fit(list(zip(hs, errs)))
    assert slope == pytest.approx(expected, abs=0.1)
    assert r2 >= 0.99


def test_fiber_norm_rate_complex_probe(meyer):
    probe = ResolventProbe(1j)
    hs = [2.0 ** -k for k in range(3, 8)]
    errs = [fiber_norm_sup_free2(h, probe, meyer, 128) for h in hs]
    slope, _, r2 = rate_fit(list(zip(hs, errs)))
    assert slope == pytest.approx(2.0, abs=0.1)


def test_fiber_norm_monotone_in_h(meyer, probe):
    hs = [2.0 ** -k for k in range(3, 9)]
    for sup in (fiber_norm_sup_free1, fiber_norm_sup_free2):
        vals = [sup(h, probe, meyer, 256) for h in hs]
        assert all(b <= a * 1.02 for a, b in zip(vals, vals[1:]))


def test_fiber_norm_grid_convergence(meyer, probe):
    h = 0.125
    coarse = fiber_norm_sup_free1(h, probe, meyer, 256)
    fine = fiber_norm_sup_free1(h, probe, meyer, 512)
    assert abs(fine - coarse) <= 0.01 * fine


def test_free2_channel_bounds(meyer, probe):
    """Central channel |phi_hat(h xi)|^2 |B_h| <= C h^2 |phi_hat(h xi)|^2 and
    O(h^2) off channels, with h-independent empirical constants."""
    constants = []
    off_constants = []
    for h in (0.125, 0.0625, 0.03125):
        xi = np.linspace(-0.999 * 2.0 / 3.0 / h, 0.999 * 2.0 / 3.0 / h, 4001)[:, None]
        b = 1.0 / (h0h_symbol(xi, h) - probe.mu) - 1.0 / (h0_symbol(xi) - probe.mu)
        w = meyer.phi_hat(h * xi[:, 0]) ** 2
        mask = w > 0
        constants.append(np.max(np.abs(b[mask])) / h ** 2)
        # off channel n = 1: both energies are of size h^-2 on its support
        zeta = np.linspace(-0.5 / h, -1.0 / (3.0 * h), 2001)[:, None]
        w_off = meyer.phi_hat(h * zeta[:, 0]) * meyer.phi_hat(h * zeta[:, 0] + 1.0)
        b_off = 1.0 / (h0h_symbol(zeta, h) - probe.mu) \
            - 1.0 / (h0_symbol(zeta + 1.0 / h) - probe.mu)
        mask = w_off != 0.0
        off_constants.append(np.max(np.abs(b_off[mask])) / h ** 2)
    assert max(constants) / min(constants) <= 1.5
    assert max(off_constants) / min(off_constants) <= 1.5


def test_fiber_sup_matches_dense_realization(meyer, probe):
    """Brute-force oracle: realize (1 - Q*Q)(H_0 - mu)^{-1} as a dense matrix
    on a truncated frequency box and compare spectral norms."""
    h = 0.5
    m = 64                      # points per unit frequency cell
    cells = 5
    p = cells * m
    xi = (np.arange(p) - p / 2) / (m * h)
    weights = meyer.phi_hat(h * xi)
    same_coset = (np.arange(p)[:, None] - np.arange(p)[None, :]) % m == 0
    qq = np.outer(weights, weights) * same_coset
    dense = (np.eye(p) - qq) @ np.diag(1.0 / (h0_symbol(xi[:, None]) - probe.mu))
    dense_norm = np.linalg.norm(dense, ord=2)
    fiber_norm = fiber_norm_sup_free1(h, probe, meyer, grid_points=m)
    assert dense_norm == pytest.approx(fiber_norm, rel=0.02)
