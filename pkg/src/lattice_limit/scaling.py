"""Band-limited scaling functions and their frequency-side sampling action.

The central object is a profile ``phi`` given in closed form through its
Fourier transform ``phi_hat``: a Meyer-type bump that equals 1 on a flat
inner region, rolls off to 0 through a polynomial transition, and vanishes
identically outside a support radius strictly below 1.  Integer translates
of ``phi`` are orthonormal exactly when the squared translates of
``phi_hat`` tile frequency space (the partition identity), which the Meyer
transition satisfies by a cos/sin complementarity.

All integrals on the ``phi`` side are evaluated in frequency space where
the support is compact; the slowly decaying spatial profile is never
truncated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ScalingFunction",
    "meyer_nu_coefficients",
    "meyer_phi_hat",
    "partition_defect",
    "orthonormality_defect",
    "phi_spatial",
    "q_apply",
    "q_star_apply",
    "coset_axis",
    "central_axis",
]

DEFAULT_SUPPORT_RADIUS = 2.0 / 3.0


def meyer_nu_coefficients(degree: int) -> tuple[float, ...]:
    """Ascending coefficients of the order-``degree`` transition polynomial.

    The polynomial is the regularized incomplete beta function I_x(k, k)
    restricted to [0, 1]: it rises from 0 to 1, has k-1 vanishing
    derivatives at both endpoints, and obeys nu(x) + nu(1-x) = 1, which
    is what makes the squared profile a partition of unity.  degree=4
    gives the classical quartic 35x^4 - 84x^5 + 70x^6 - 20x^7; degree=1
    gives nu(x) = x.
    """
    if degree < 1:
        raise ValueError("transition degree must be >= 1")
    k = degree
    scale = math.factorial(2 * k - 1) // (math.factorial(k - 1) ** 2)
    coeffs = [0.0] * (2 * k)
    for j in range(k):
        coeffs[k + j] = scale * math.comb(k - 1, j) * (-1) ** j / (k + j)
    return tuple(coeffs)


@dataclass(frozen=True)
class ScalingFunction:
    """Tensor-product band-limited scaling profile.

    ``phi_hat`` equals ``amplitude`` on the cube |xi|_inf <= 1 - support_radius,
    vanishes for |xi|_inf >= support_radius, and transitions through
    cos(pi/2 * nu) in between.  ``amplitude`` defaults to 1 and exists to
    build deliberately broken profiles in validation code.
    """

    support_radius: float = DEFAULT_SUPPORT_RADIUS
    nu_degree: int = 4
    dimension: int = 1
    amplitude: float = 1.0
    nu_coefficients: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0.5 < self.support_radius < 1.0:
            raise ValueError("support_radius must lie in (1/2, 1)")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "nu_coefficients", meyer_nu_coefficients(self.nu_degree))

    @property
    def inner_radius(self) -> float:
        return 1.0 - self.support_radius

    def profile(self, t: np.ndarray) -> np.ndarray:
        """One-axis profile m(|t|): 1 inside, cosine roll-off, 0 outside."""
        t = np.abs(np.asarray(t, dtype=float))
        inner = self.inner_radius
        width = 2.0 * self.support_radius - 1.0
        out = np.zeros_like(t)
        out[t <= inner] = 1.0
        trans = (t > inner) & (t < self.support_radius)
        if np.any(trans):
            u = (t[trans] - inner) / width
            nu = np.polynomial.polynomial.polyval(u, self.nu_coefficients)
            out[trans] = np.cos(0.5 * np.pi * nu)
        return out

    def phi_hat(self, xi) -> np.ndarray:
        """Evaluate phi_hat.

        For dimension 1 the input is treated elementwise.  For dimension
        d > 1 the last axis of ``xi`` must have length d and the profile
        is the product over coordinates.
        """
        xi = np.asarray(xi, dtype=float)
        if self.dimension == 1:
            return self.amplitude * self.profile(xi)
        if xi.ndim == 0 or xi.shape[-1] != self.dimension:
            raise ValueError(f"expected last axis of length {self.dimension}")
        return self.amplitude * np.prod(self.profile(xi), axis=-1)

    def to_json_dict(self) -> dict:
        out = {
            "profile": "meyer",
            "support_radius": self.support_radius,
            "nu_degree": self.nu_degree,
            "dimension": self.dimension,
        }
        if self.amplitude != 1.0:
            out["amplitude"] = self.amplitude
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScalingFunction":
        profile = data.get("profile", "meyer")
        if profile != "meyer":
            raise ValueError(f"unknown scaling profile {profile!r}")
        return cls(
            support_radius=float(data.get("support_radius", DEFAULT_SUPPORT_RADIUS)),
            nu_degree=int(data.get("nu_degree", 4)),
            dimension=int(data.get("dimension", 1)),
            amplitude=float(data.get("amplitude", 1.0)),
        )


def meyer_phi_hat(xi, sf: ScalingFunction) -> np.ndarray:
    """Closed-form evaluation of phi_hat (see ScalingFunction.phi_hat)."""
    return sf.phi_hat(xi)


def _shifts(d: int) -> list[tuple[int, ...]]:
    return list(itertools.product((-1, 0, 1), repeat=d))


def partition_defect(sf: ScalingFunction, grid_points_per_axis: int) -> float:
    """Worst deviation of sum_n |phi_hat(xi+n)|^2 from 1 on [0,1)^d.

    The shift sum runs over n in {0,+-1}^d only; every other term vanishes
    because the support radius is below 1.
    """
    if grid_points_per_axis < 2:
        raise ValueError("need at least 2 grid points per axis")
    d = sf.dimension
    axis = np.arange(grid_points_per_axis) / grid_points_per_axis
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    xi = np.stack(mesh, axis=-1)
    total = np.zeros(xi.shape[:-1])
    for n in _shifts(d):
        shifted = xi + np.asarray(n, dtype=float)
        point = shifted if d > 1 else shifted[..., 0]
        total += np.abs(sf.phi_hat(point)) ** 2
    return float(np.max(np.abs(total - 1.0)))


def _axis_overlap_integrals(sf: ScalingFunction, n_max: int, quadrature_points: int) -> np.ndarray:
    """1-d integrals int exp(2 pi i n xi) |m(xi)|^2 dxi for n = 0..n_max."""
    nodes = np.linspace(-1.0, 1.0, quadrature_points + 1)
    w = sf.profile(nodes) ** 2
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        # integrand is real and even, so the complex exponential reduces to cos
        out[n] = np.trapezoid(w * np.cos(2.0 * np.pi * n * nodes), nodes)
    return out


def orthonormality_defect(sf: ScalingFunction, n_max: int, quadrature_points: int) -> float:
    """Worst |<phi, phi(.-n)> - delta_{n,0}| over |n|_inf <= n_max.

    Inner products are computed in frequency space, where the integrand is
    compactly supported, by trapezoid quadrature.  In d > 1 the integral
    factorizes over axes, so only 1-d quadratures are performed.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if quadrature_points < 256 or quadrature_points & (quadrature_points - 1):
        raise ValueError("quadrature_points must be a power of two >= 256")
    table = _axis_overlap_integrals(sf, n_max, quadrature_points)
    amp2 = sf.amplitude ** 2
    worst = 0.0
    for n in itertools.product(range(-n_max, n_max + 1), repeat=sf.dimension):
        value = amp2 ** sf.dimension * float(np.prod([table[abs(nj)] for nj in n]))
        target = 1.0 if all(nj == 0 for nj in n) else 0.0
        worst = max(worst, abs(value - target))
    return worst


def phi_spatial(y, sf: ScalingFunction, quadrature_points: int = 4096) -> np.ndarray:
    """Spatial profile phi(y) by frequency-space quadrature.

    Trapezoid on the compact support is exact up to aliasing at distance
    quadrature_points/2 in y, so values are reliable for |y| well below
    that.  Input conventions match phi_hat (elementwise for d = 1).
    """
    y = np.asarray(y, dtype=float)
    nodes = np.linspace(0.0, 1.0, quadrature_points + 1)
    m = sf.profile(nodes)

    def axis_values(coords: np.ndarray) -> np.ndarray:
        flat = coords.reshape(-1)
        out = np.empty(flat.size)
        chunk = max(1, 2 ** 22 // (quadrature_points + 1))
        for start in range(0, flat.size, chunk):
            block = flat[start : start + chunk, None]
            integrand = m[None, :] * np.cos(2.0 * np.pi * block * nodes[None, :])
            out[start : start + chunk] = 2.0 * np.trapezoid(integrand, nodes, axis=1)
        return out.reshape(coords.shape)

    if sf.dimension == 1:
        return sf.amplitude * axis_values(y)
    if y.ndim == 0 or y.shape[-1] != sf.dimension:
        raise ValueError(f"expected last axis of length {sf.dimension}")
    return sf.amplitude * np.prod(
        np.stack([axis_values(y[..., j]) for j in range(sf.dimension)], axis=-1), axis=-1
    )


def coset_axis(h: float, points_per_cell: int) -> np.ndarray:
    """Frequency axis covering h^{-1}[-3/2, 3/2), one value per grid point."""
    m = points_per_cell
    return (np.arange(3 * m) / m - 1.5) / h


def central_axis(h: float, points_per_cell: int) -> np.ndarray:
    """Frequency axis for the fundamental cell h^{-1}[-1/2, 1/2)."""
    m = points_per_cell
    return (np.arange(m) / m - 0.5) / h


def _central_coords(h: float, m: int, d: int) -> np.ndarray:
    axis = central_axis(h, m)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack(mesh, axis=-1)


def q_apply(f: np.ndarray, sf: ScalingFunction, h: float) -> np.ndarray:
    """Coset-weighted folding of a frequency-grid function onto the cell.

    ``f`` must cover h^{-1}[-3/2, 3/2)^d with 3M points per axis (M per
    unit cell); the output lives on the M^d central-cell grid.  The shift
    sum is hard-truncated to n in {0,+-1}^d, which is exact because the
    profile support radius is below 1.
    """
    f = np.asarray(f, dtype=complex)
    d = sf.dimension
    if f.ndim != d:
        raise ValueError(f"expected a {d}-dimensional frequency grid")
    if any(s != f.shape[0] for s in f.shape) or f.shape[0] % 3:
        raise ValueError("grid must cover three unit cells per axis (3M points)")
    m = f.shape[0] // 3
    coords = _central_coords(h, m, d)
    out = np.zeros((m,) * d, dtype=complex)
    for n in _shifts(d):
        t = h * coords + np.asarray(n, dtype=float)
        point = t if d > 1 else t[..., 0]
        weight = np.conj(sf.phi_hat(point))
        block = f[tuple(slice(m + nj * m, 2 * m + nj * m) for nj in n)]
        out += weight * block
    return out


def q_star_apply(g: np.ndarray, sf: ScalingFunction, h: float) -> np.ndarray:
    """Adjoint of :func:`q_apply`: periodic extension times phi_hat(h xi).

    ``g`` lives on the M^d central-cell grid; the result covers the same
    three-cell grid that q_apply consumes.
    """
    g = np.asarray(g, dtype=complex)
    d = sf.dimension
    if g.ndim != d or any(s != g.shape[0] for s in g.shape):
        raise ValueError(f"expected a cubic {d}-dimensional cell grid")
    m = g.shape[0]
    tiled = np.tile(g, (3,) * d)
    axis = coset_axis(h, m)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    t = h * np.stack(mesh, axis=-1)
    point = t if d > 1 else t[..., 0]
    return sf.phi_hat(point) * tiled
