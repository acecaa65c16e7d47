"""Fourier symbols of the free operators and exact fibered norms.

After Fourier transform, both free Hamiltonians act by multiplication:
the continuum one by ``|2 pi xi|^2`` and the mesh-h lattice one by the
periodic symbol ``2 h^{-2} sum_j (1 - cos(2 pi h zeta_j))``.  Operators
built from them together with the band-limited sampling weights couple a
quasi-momentum ``zeta`` in the fundamental cell only to its translates
``zeta + n/h`` with n in {0,+-1}^d, so each is a direct integral of
3^d x 3^d matrices.  Operator norms are therefore computed exactly (up
to sampling of the cell) as the sup of small-matrix spectral norms; no
spatial truncation enters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .scaling import ScalingFunction

__all__ = [
    "ResolventProbe",
    "FiberMatrix",
    "h0_symbol",
    "h0h_symbol",
    "taylor_gap_ratio",
    "fiber_shifts",
    "fiber_vector",
    "fiber_free1",
    "fiber_free2",
    "fiber_free_resolvent_diff",
    "fiber_norm_sup_free1",
    "fiber_norm_sup_free2",
    "fiber_norm_sup_free_resolvent_diff",
    "lower_bound_check",
]


@dataclass(frozen=True)
class ResolventProbe:
    """Spectral parameter mu, kept away from the nonnegative real axis."""

    mu: complex

    def __post_init__(self) -> None:
        mu = complex(self.mu)
        if mu.imag == 0.0 and mu.real >= 0.0:
            raise ValueError("mu must avoid [0, inf)")
        object.__setattr__(self, "mu", mu)


def h0_symbol(xi) -> np.ndarray:
    """Continuum kinetic symbol |2 pi xi|^2; last axis = coordinates."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        return 4.0 * np.pi ** 2 * xi ** 2
    return 4.0 * np.pi ** 2 * np.sum(xi ** 2, axis=-1)


def h0h_symbol(zeta, h: float) -> np.ndarray:
    """Lattice kinetic symbol 2 h^{-2} sum_j (1 - cos(2 pi h zeta_j)).

    Periodic with period 1/h in each coordinate; last axis = coordinates.
    """
    if h <= 0:
        raise ValueError("mesh h must be positive")
    zeta = np.asarray(zeta, dtype=float)
    if zeta.ndim == 0:
        return (2.0 / h ** 2) * (1.0 - np.cos(2.0 * np.pi * h * zeta))
    return (2.0 / h ** 2) * np.sum(1.0 - np.cos(2.0 * np.pi * h * zeta), axis=-1)


def taylor_gap_ratio(h: float, xi_grid) -> float:
    """Empirical constant sup |H_{0,h}(xi) - H_0(xi)| / (h^2 |xi|^4).

    The quartic cosine remainder bounds this by (2 pi)^4 / 12 for every h
    and xi; the sup is attained in the small-(h xi) limit.  A 1-d array is
    read as a batch of scalar frequencies; otherwise the last axis holds
    the coordinates.
    """
    xi = np.asarray(xi_grid, dtype=float)
    if xi.size == 0:
        raise ValueError("empty grid")
    if xi.ndim <= 1:
        pts = np.atleast_1d(xi)[:, None]
    else:
        pts = xi.reshape(-1, xi.shape[-1])
    norm2 = np.sum(pts ** 2, axis=-1)
    if np.any(norm2 == 0.0):
        raise ValueError("grid must exclude xi = 0")
    gap = np.abs(h0h_symbol(pts, h) - h0_symbol(pts))
    return float(np.max(gap / (h ** 2 * norm2 ** 2)))


def fiber_shifts(d: int) -> tuple[tuple[int, ...], ...]:
    """Lexicographic enumeration of {0,+-1}^d; the zero shift sits mid-list."""
    return tuple(itertools.product((-1, 0, 1), repeat=d))


def _as_points(arr: np.ndarray, d: int) -> np.ndarray:
    """Normalize a batch of zeta values to shape (m, d)."""
    arr = np.asarray(arr, dtype=float)
    if arr.ndim == 0:
        arr = arr[None]
    if arr.ndim == 1 and d == 1:
        arr = arr[:, None]
    if arr.ndim == 1 and d > 1:
        arr = arr[None, :]
    if arr.shape[-1] != d:
        raise ValueError(f"expected points in {d} coordinates")
    return arr.reshape(-1, d)


def _fiber_vectors(zeta: np.ndarray, h: float, sf: ScalingFunction) -> np.ndarray:
    """Stacked sampling weights v_n(zeta) = phi_hat(h zeta + n), shape (m, 3^d)."""
    d = sf.dimension
    pts = _as_points(zeta, d)
    shifts = np.asarray(fiber_shifts(d), dtype=float)
    t = h * pts[:, None, :] + shifts[None, :, :]
    if d == 1:
        return sf.phi_hat(t[..., 0])
    return sf.phi_hat(t)


def fiber_vector(zeta, h: float, sf: ScalingFunction) -> np.ndarray:
    """Sampling weight vector over the 3^d coset shifts; unit norm by the
    partition identity."""
    return _fiber_vectors(zeta, h, sf)[0]


@dataclass(frozen=True)
class FiberMatrix:
    """One fiber of a coset-coupled operator at quasi-momentum ``center``.

    Rows/columns follow :func:`fiber_shifts`.  Rows m with vanishing
    phi_hat(h zeta + m) and columns n with vanishing phi_hat(h zeta + n)
    are zero whenever the operator carries the sampling weight on that side.
    """

    center: tuple[float, ...]
    entries: np.ndarray

    def norm2(self) -> float:
        """Spectral norm of the fiber."""
        return float(np.linalg.norm(self.entries, ord=2))


def _coset_energies(zeta_pts: np.ndarray, h: float) -> np.ndarray:
    """Continuum symbol at zeta + n/h for every shift, shape (m, 3^d)."""
    d = zeta_pts.shape[-1]
    shifts = np.asarray(fiber_shifts(d), dtype=float)
    coset = zeta_pts[:, None, :] + shifts[None, :, :] / h
    return h0_symbol(coset)


def _free1_entries(zeta_pts, h, mu, sf) -> np.ndarray:
    v = _fiber_vectors(zeta_pts, h, sf)
    dres = 1.0 / (_coset_energies(zeta_pts, h) - mu)
    eye = np.eye(v.shape[1])
    proj = eye[None, :, :] - v[:, :, None] * v[:, None, :]
    return proj * dres[:, None, :]


def _free2_entries(zeta_pts, h, mu, sf) -> np.ndarray:
    v = _fiber_vectors(zeta_pts, h, sf)
    lattice = 1.0 / (h0h_symbol(zeta_pts, h) - mu)
    continuum = 1.0 / (_coset_energies(zeta_pts, h) - mu)
    b = lattice[:, None] - continuum
    return v[:, :, None] * (v * b)[:, None, :]


def _diff_entries(zeta_pts, h, mu, sf) -> np.ndarray:
    v = _fiber_vectors(zeta_pts, h, sf)
    lattice = 1.0 / (h0h_symbol(zeta_pts, h) - mu)
    continuum = 1.0 / (_coset_energies(zeta_pts, h) - mu)
    rank_one = lattice[:, None, None] * v[:, :, None] * v[:, None, :]
    diag = np.zeros_like(rank_one)
    idx = np.arange(v.shape[1])
    diag[:, idx, idx] = continuum
    return rank_one - diag


def fiber_free1(zeta, h: float, probe: ResolventProbe, sf: ScalingFunction) -> FiberMatrix:
    """Fiber of (1 - Q* Q)(H_0 - mu)^{-1}: (I - v v^T) diag(resolvent)."""
    pts = _as_points(zeta, sf.dimension)
    entries = _free1_entries(pts, h, probe.mu, sf)[0]
    return FiberMatrix(center=tuple(pts[0]), entries=entries)


def fiber_free2(zeta, h: float, probe: ResolventProbe, sf: ScalingFunction) -> FiberMatrix:
    """Fiber of Q*(H_{0,h}-mu)^{-1}Q - Q*Q(H_0-mu)^{-1}.

    Entry (m, n) is v_m v_n B(zeta + n/h) with B the difference of the two
    resolvent symbols; the lattice symbol is evaluated once at zeta by
    periodicity.
    """
    pts = _as_points(zeta, sf.dimension)
    entries = _free2_entries(pts, h, probe.mu, sf)[0]
    return FiberMatrix(center=tuple(pts[0]), entries=entries)


def fiber_free_resolvent_diff(
    zeta, h: float, probe: ResolventProbe, sf: ScalingFunction
) -> FiberMatrix:
    """Fiber of the full free resolvent mismatch P*(H_{0,h}-mu)^{-1}P - (H_0-mu)^{-1}.

    Equals the free2 fiber minus the free1 fiber: the rank-one lattice
    resolvent term v v^T (H_{0,h}(zeta)-mu)^{-1} minus the diagonal of
    continuum resolvents over the coset.
    """
    pts = _as_points(zeta, sf.dimension)
    entries = _diff_entries(pts, h, probe.mu, sf)[0]
    return FiberMatrix(center=tuple(pts[0]), entries=entries)


def _cell_grid(h: float, d: int, grid_points: int) -> np.ndarray:
    axis = np.linspace(-0.5, 0.5, grid_points, endpoint=False) / h
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, d)


def _sup_norm(entries: np.ndarray) -> float:
    return float(np.max(np.linalg.svd(entries, compute_uv=False)[..., 0]))


def fiber_norm_sup_free1(
    h: float, probe: ResolventProbe, sf: ScalingFunction, grid_points: int = 256
) -> float:
    """Operator norm of (1 - Q*Q)(H_0 - mu)^{-1} as a sup of fiber norms.

    Channels with |n|_inf >= 2 would contribute only diagonal resolvent
    values strictly below the in-block ones, so the 3^d truncation is
    exact for the sup.
    """
    pts = _cell_grid(h, sf.dimension, grid_points)
    return _sup_norm(_free1_entries(pts, h, probe.mu, sf))


def fiber_norm_sup_free2(
    h: float, probe: ResolventProbe, sf: ScalingFunction, grid_points: int = 256
) -> float:
    """Operator norm of the commuted free-resolvent mismatch (fiber sup)."""
    pts = _cell_grid(h, sf.dimension, grid_points)
    return _sup_norm(_free2_entries(pts, h, probe.mu, sf))


def fiber_norm_sup_free_resolvent_diff(
    h: float, probe: ResolventProbe, sf: ScalingFunction, grid_points: int = 256
) -> float:
    """Operator norm of the full free resolvent mismatch (fiber sup)."""
    pts = _cell_grid(h, sf.dimension, grid_points)
    return _sup_norm(_diff_entries(pts, h, probe.mu, sf))


def lower_bound_check(sf: ScalingFunction, t_grid) -> float:
    """Minimum of the symbol ratio 2 sum_j (1-cos 2 pi t_j) / |t|^2 on the support.

    ``t_grid`` holds scaled frequencies t = h*xi; the ratio depends on t
    only, which is the mesh-independence being certified.  Points outside
    supp(phi_hat) or at the origin are discarded; the result is the
    constant c0 with H_{0,h}(xi) >= c0 |xi|^2 on the sampling support.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim == 0:
        t = t[None]
    if t.ndim == 1:
        t = t[:, None]
    if t.shape[-1] != sf.dimension:
        raise ValueError(f"expected points in {sf.dimension} coordinates")
    pts = t.reshape(-1, sf.dimension)
    # the support is the closed cube of radius support_radius
    inside = np.max(np.abs(pts), axis=-1) <= sf.support_radius + 1e-12
    norm2 = np.sum(pts ** 2, axis=-1)
    keep = inside & (norm2 > 0.0)
    if not np.any(keep):
        raise ValueError("no usable grid points inside the support")
    ratio = 2.0 * np.sum(1.0 - np.cos(2.0 * np.pi * pts[keep]), axis=-1) / norm2[keep]
    return float(np.min(ratio))
