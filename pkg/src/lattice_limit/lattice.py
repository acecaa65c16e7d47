"""Periodic-box realizations of the lattice and continuum operators.

The infinite lattice and the continuum are both truncated to a periodic
box of extent L centered at the origin.  On the lattice side the kinetic
term is the plain second-difference stencil with wrap-around indexing;
on the continuum side it is a Fourier spectral discretization on a grid
refined by an integer ratio, exact for band-limited functions, so that
measured discrepancies are dominated by the mesh dependence under study
and not by the reference itself.

The embedding pair between the two grids is realized in frequency space:
analysis multiplies the fine spectrum by the sampling profile and folds
frequency cosets onto the lattice cell; synthesis periodically extends
the lattice spectrum and multiplies by the same profile.  For even point
counts these are exact mutual adjoints in the weighted inner products,
and analysis-after-synthesis is the identity to machine precision.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg, gmres

from . import fourier
from ._iterative import OpNormResult, power_norm
from .scaling import ScalingFunction
from .symbols import ResolventProbe, h0_symbol, h0h_symbol

__all__ = [
    "LatticeSpec",
    "PotentialSpec",
    "GridFunction",
    "SolverConvergenceError",
    "IncompatibleBoxError",
    "spec_from_extent",
    "grid_inner",
    "random_grid_function",
    "plane_wave",
    "apply_h0h",
    "forward_diff",
    "adjoint_diff",
    "apply_hh",
    "p_h_apply",
    "p_h_star_apply",
    "resolvent_solve",
    "uniform_relative_boundedness",
    "RelativeBoundednessTable",
    "LatticeHamiltonian",
    "ContinuumReference",
    "MultiplicationOperator",
    "bounded_uc_potential",
    "hoelder_potential",
    "growth_potential",
    "harmonic_potential",
    "constant_potential",
    "check_assumption",
    "boundary_decay",
    "save_grid",
    "load_grid",
]


class SolverConvergenceError(RuntimeError):
    """A shifted linear solve missed its residual contract."""

    def __init__(self, message: str, residual: float | None = None,
                 tolerance: float | None = None):
        super().__init__(message)
        self.residual = residual
        self.tolerance = tolerance


class IncompatibleBoxError(ValueError):
    """Grids that should share a periodic box do not."""


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic box h Z^d / L Z^d with N points per axis and L = N h."""

    dimension: int
    mesh: float
    points: int

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.mesh <= 0:
            raise ValueError("mesh must be positive")
        if self.points < 8 or self.points % 2:
            raise ValueError("points per axis must be even and >= 8")

    @property
    def extent(self) -> float:
        return self.points * self.mesh

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dimension

    @property
    def size(self) -> int:
        return self.points ** self.dimension

    @property
    def weight(self) -> float:
        """Inner-product weight h^d per site."""
        return self.mesh ** self.dimension

    def site_coords(self) -> np.ndarray:
        """Centered site coordinates, shape ``shape + (d,)``."""
        return fourier.site_vectors(self.shape, self.mesh)

    def frequency_coords(self) -> np.ndarray:
        """Frequency coordinates k/L in FFT order, shape ``shape + (d,)``."""
        return fourier.frequency_vectors(self.shape, self.mesh)

    def refined(self, ratio: int) -> "LatticeSpec":
        if ratio < 2:
            raise ValueError("refinement ratio must be >= 2")
        return replace(self, mesh=self.mesh / ratio, points=self.points * ratio)


def spec_from_extent(extent: float, mesh: float, dimension: int = 1) -> LatticeSpec:
    """Spec for a box of given extent; extent/mesh must be an even integer."""
    n = round(extent / mesh)
    if abs(n * mesh - extent) > 1e-9 * extent or n < 8 or n % 2:
        raise ValueError(f"extent {extent} is not an even multiple (>= 8) of mesh {mesh}")
    return LatticeSpec(dimension=dimension, mesh=mesh, points=n)


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class PotentialSpec:
    """Catalog entry for a real continuous potential bounded from below.

    ``evaluate`` takes coordinates of shape (..., d).  ``offset`` is the
    constant M making V + M >= 1; ``lower_bound`` is an analytic lower
    bound for V itself; ``comparability`` is the constant c1 with
    (V(y)+M)/(V(x)+M) <= c1 whenever |x-y| <= 1.
    """

    kind: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    offset: float
    lower_bound: float
    comparability: float
    hoelder_alpha: float | None = None
    params: dict = field(default_factory=dict)

    def describe(self) -> dict:
        out = {"kind": self.kind, "offset": self.offset,
               "lower_bound": self.lower_bound, "comparability": self.comparability}
        if self.hoelder_alpha is not None:
            out["alpha"] = self.hoelder_alpha
        out.update(self.params)
        return out


def _dot_wave(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if x.shape[-1] != w.size:
        raise ValueError(f"expected coordinates with last axis {w.size}")
    return x @ w


def bounded_uc_potential(wavevector=(1.0,)) -> PotentialSpec:
    """V(x) = 2 + sin(2 pi x.w): bounded, uniformly continuous, V >= 1."""
    w = np.asarray(wavevector, dtype=float)

    def evaluate(x):
        return 2.0 + np.sin(2.0 * np.pi * _dot_wave(x, w))

    return PotentialSpec(kind="bounded_uc", evaluate=evaluate, offset=0.0,
                         lower_bound=1.0, comparability=3.0,
                         params={"wavevector": tuple(w.tolist())})


def hoelder_potential(alpha: float, wavevector=(1.0,)) -> PotentialSpec:
    """V(x) = 2 + |sin(2 pi x.w)|^alpha: uniformly Hoelder of order alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    w = np.asarray(wavevector, dtype=float)

    def evaluate(x):
        return 2.0 + np.abs(np.sin(2.0 * np.pi * _dot_wave(x, w))) ** alpha

    return PotentialSpec(kind="hoelder", evaluate=evaluate, offset=0.0,
                         lower_bound=2.0, comparability=1.5, hoelder_alpha=alpha,
                         params={"wavevector": tuple(w.tolist())})


def _radial_comparability(radial: Callable[[np.ndarray], np.ndarray]) -> float:
    """c1 for an even radial profile: worst (f(r+1)+)/(f(r)) over r >= 0."""
    r = np.concatenate([np.linspace(0.0, 50.0, 20001), np.geomspace(50.0, 1e6, 2001)])
    return float(np.max(radial(r + 1.0) / radial(r)))


def growth_potential(a: float = 1.0, kappa: float = 2.0) -> PotentialSpec:
    """V(x) = a (1 + |x|^2)^(kappa/2), polynomial growth."""
    if a <= 0 or kappa <= 0:
        raise ValueError("a and kappa must be positive")
    offset = max(0.0, 1.0 - a)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x[None]
        return a * (1.0 + np.sum(x ** 2, axis=-1)) ** (kappa / 2.0)

    c1 = _radial_comparability(lambda r: a * (1.0 + r ** 2) ** (kappa / 2.0) + offset)
    return PotentialSpec(kind="growth", evaluate=evaluate, offset=offset,
                         lower_bound=a, comparability=c1,
                         params={"a": a, "kappa": kappa})


def harmonic_potential() -> PotentialSpec:
    """V(x) = |x|^2, the oscillator benchmark."""

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x[None]
        return np.sum(x ** 2, axis=-1)

    c1 = _radial_comparability(lambda r: r ** 2 + 1.0)
    return PotentialSpec(kind="harmonic", evaluate=evaluate, offset=1.0,
                         lower_bound=0.0, comparability=c1)


def constant_potential(value: float) -> PotentialSpec:
    def evaluate(x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x[None]
        return np.full(x.shape[:-1], float(value))

    return PotentialSpec(kind="constant", evaluate=evaluate,
                         offset=max(0.0, 1.0 - value), lower_bound=float(value),
                         comparability=1.0, params={"value": float(value)})


def check_assumption(pot: PotentialSpec, extent: float, dimension: int = 1,
                     samples: int = 4096, rng: np.random.Generator | None = None) -> dict:
    """Sampled validity check: bounded below, V+M >= 1, comparability <= c1.

    Pairs at distance <= 1 are drawn inside the box [-extent/2, extent/2]^d.
    """
    rng = rng or np.random.default_rng(0)
    x = rng.uniform(-extent / 2.0, extent / 2.0, size=(samples, dimension))
    step = rng.uniform(-1.0, 1.0, size=(samples, dimension))
    norms = np.linalg.norm(step, axis=-1)
    step = step / np.maximum(norms, 1.0)[:, None]  # keep |x - y| <= 1
    y = np.clip(x + step, -extent / 2.0, extent / 2.0)
    vx = pot.evaluate(x) + pot.offset
    vy = pot.evaluate(y) + pot.offset
    ratio = float(np.max(np.maximum(vx / vy, vy / vx)))
    min_value = float(np.min(pot.evaluate(x)))
    return {
        "min_value": min_value,
        "min_shifted": float(np.min(vx)),
        "c1_sampled": ratio,
        "c1_declared": pot.comparability,
        "ok": bool(min_value >= pot.lower_bound - 1e-9
                   and np.min(vx) >= 1.0 - 1e-9
                   and ratio <= pot.comparability * (1.0 + 1e-9)),
    }


# ---------------------------------------------------------------------------
# grid functions


@dataclass
class GridFunction:
    """Complex samples over a periodic box, with the h^d-weighted norm."""

    values: np.ndarray
    spec: LatticeSpec

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.spec.shape:
            raise ValueError(f"values of shape {self.values.shape} do not fit {self.spec.shape}")

    def norm(self) -> float:
        return float(np.sqrt(self.spec.weight * np.sum(np.abs(self.values) ** 2)))


def grid_inner(u: GridFunction, v: GridFunction) -> complex:
    """Weighted inner product, linear in the first argument."""
    if u.spec != v.spec:
        raise IncompatibleBoxError("inner product across different grids")
    return complex(u.spec.weight * np.sum(u.values * np.conj(v.values)))


def random_grid_function(spec: LatticeSpec, rng: np.random.Generator) -> GridFunction:
    values = rng.standard_normal(spec.shape) + 1j * rng.standard_normal(spec.shape)
    return GridFunction(values, spec)


def plane_wave(spec: LatticeSpec, mode) -> GridFunction:
    """exp(2 pi i zeta.z) with zeta = mode/L, an exact stencil eigenvector."""
    mode = np.atleast_1d(np.asarray(mode, dtype=float))
    if mode.size != spec.dimension:
        raise ValueError("one integer mode per axis")
    zeta = mode / spec.extent
    phase = spec.site_coords() @ zeta
    return GridFunction(np.exp(2.0j * np.pi * phase), spec)


# ---------------------------------------------------------------------------
# pointwise operations


def _h0h_values(arr: np.ndarray, mesh: float, d: int) -> np.ndarray:
    """Second-difference stencil on the trailing d axes (batch-friendly)."""
    out = np.zeros_like(arr)
    for j in range(d):
        ax = arr.ndim - d + j
        out += 2.0 * arr - np.roll(arr, -1, axis=ax) - np.roll(arr, 1, axis=ax)
    return out / mesh ** 2


def apply_h0h(v: GridFunction) -> GridFunction:
    """Free lattice Hamiltonian: wrap-around second differences."""
    return GridFunction(_h0h_values(v.values, v.spec.mesh, v.spec.dimension), v.spec)


def forward_diff(v: GridFunction, j: int) -> GridFunction:
    """(v(z + h e_j) - v(z)) / h."""
    arr = (np.roll(v.values, -1, axis=j) - v.values) / v.spec.mesh
    return GridFunction(arr, v.spec)


def adjoint_diff(v: GridFunction, j: int) -> GridFunction:
    """h^d-weighted adjoint of forward_diff: (v(z - h e_j) - v(z)) / h."""
    arr = (np.roll(v.values, 1, axis=j) - v.values) / v.spec.mesh
    return GridFunction(arr, v.spec)


def apply_hh(v: GridFunction, pot: PotentialSpec) -> GridFunction:
    """Full lattice Hamiltonian: stencil plus the sampled potential."""
    pv = pot.evaluate(v.spec.site_coords())
    arr = _h0h_values(v.values, v.spec.mesh, v.spec.dimension) + pv * v.values
    return GridFunction(arr, v.spec)


# ---------------------------------------------------------------------------
# operators


class _BoxOperator:
    """Hermitian operator on a periodic box; subclasses fill in the action."""

    def __init__(self, spec: LatticeSpec):
        self.spec = spec

    def apply_values(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, v: GridFunction) -> GridFunction:
        if v.spec != self.spec:
            raise IncompatibleBoxError("operator and grid function live on different grids")
        return GridFunction(self.apply_values(v.values), self.spec)

    def shift_preconditioner(self, mu: complex):
        """Approximate inverse of (self - mu), or None."""
        return None

    def dense_matrix(self) -> np.ndarray:
        """Dense realization by applying to the standard basis (small boxes)."""
        n = self.spec.size
        out = np.empty((n, n))
        chunk = max(1, 2 ** 22 // n)
        eye = np.eye(n)
        for start in range(0, n, chunk):
            block = eye[start:start + chunk].reshape((-1,) + self.spec.shape)
            out[start:start + chunk] = np.real(self.apply_values(block)).reshape(-1, n)
        return out.T


class LatticeHamiltonian(_BoxOperator):
    """H_h = stencil + V(z) on the lattice box."""

    def __init__(self, spec: LatticeSpec, potential: PotentialSpec | None = None):
        super().__init__(spec)
        self.potential = potential
        if potential is not None:
            self.potential_values = np.asarray(potential.evaluate(spec.site_coords()), dtype=float)
        else:
            self.potential_values = None
        self._symbol = h0h_symbol(spec.frequency_coords(), spec.mesh)

    def apply_values(self, arr: np.ndarray) -> np.ndarray:
        out = _h0h_values(arr, self.spec.mesh, self.spec.dimension)
        if self.potential_values is not None:
            out = out + self.potential_values * arr
        return out

    def shift_preconditioner(self, mu: complex):
        shift = float(np.mean(self.potential_values)) if self.potential_values is not None else 1.0
        sym = self._symbol + (shift - mu)
        d = self.spec.dimension

        def prec(arr: np.ndarray) -> np.ndarray:
            axes = tuple(range(arr.ndim - d, arr.ndim))
            return np.fft.ifftn(np.fft.fftn(arr, axes=axes) / sym, axes=axes)

        return prec


class ContinuumReference(_BoxOperator):
    """H = H_0 + V with H_0 realized spectrally on the (fine) box grid.

    Exact for band-limited functions, so its own discretization error is
    spectrally small compared with any mesh-h effect being measured.
    """

    def __init__(self, spec: LatticeSpec, potential: PotentialSpec | None = None):
        super().__init__(spec)
        self.potential = potential
        if potential is not None:
            self.potential_values = np.asarray(potential.evaluate(spec.site_coords()), dtype=float)
        else:
            self.potential_values = None
        self._symbol = h0_symbol(spec.frequency_coords())

    def apply_values(self, arr: np.ndarray) -> np.ndarray:
        d = self.spec.dimension
        axes = tuple(range(arr.ndim - d, arr.ndim))
        out = np.fft.ifftn(self._symbol * np.fft.fftn(arr, axes=axes), axes=axes)
        if self.potential_values is not None:
            out = out + self.potential_values * arr
        return out

    def shift_preconditioner(self, mu: complex):
        shift = float(np.mean(self.potential_values)) if self.potential_values is not None else 1.0
        sym = self._symbol + (shift - mu)
        d = self.spec.dimension

        def prec(arr: np.ndarray) -> np.ndarray:
            axes = tuple(range(arr.ndim - d, arr.ndim))
            return np.fft.ifftn(np.fft.fftn(arr, axes=axes) / sym, axes=axes)

        return prec


class MultiplicationOperator(_BoxOperator):
    """Multiplication by a real function of the sites (diagonal operator)."""

    def __init__(self, spec: LatticeSpec, values) -> None:
        super().__init__(spec)
        values = np.asarray(values, dtype=float)
        if values.ndim == 0:
            values = np.full(spec.shape, float(values))
        if values.shape != spec.shape:
            raise ValueError("multiplier shape does not match the grid")
        self.multiplier = values

    def apply_values(self, arr: np.ndarray) -> np.ndarray:
        return self.multiplier * arr

    def shift_preconditioner(self, mu: complex):
        diag = self.multiplier - mu

        def prec(arr: np.ndarray) -> np.ndarray:
            return arr / diag

        return prec


# ---------------------------------------------------------------------------
# embeddings


def _embedding_ratio(fine: LatticeSpec, coarse: LatticeSpec, sf: ScalingFunction) -> int:
    if fine.dimension != coarse.dimension or fine.dimension != sf.dimension:
        raise IncompatibleBoxError("dimension mismatch between grids and profile")
    if abs(fine.extent - coarse.extent) > 1e-9 * coarse.extent:
        raise IncompatibleBoxError("grids do not share a periodic box")
    ratio = fine.points // coarse.points
    if ratio < 2 or fine.points != ratio * coarse.points:
        raise IncompatibleBoxError("fine grid must refine the lattice by an integer ratio >= 2")
    return ratio


def _profile_weights(sf: ScalingFunction, spec: LatticeSpec, mesh_h: float) -> np.ndarray:
    t = mesh_h * spec.frequency_coords()
    return sf.phi_hat(t if spec.dimension > 1 else t[..., 0])


def p_h_apply(u: GridFunction, sf: ScalingFunction, target: LatticeSpec) -> GridFunction:
    """Analysis embedding: fine-grid function to lattice coefficients.

    Realized in frequency space (profile multiply, then coset fold), which
    is the exact band-limited quadrature of the defining integral.
    """
    ratio = _embedding_ratio(u.spec, target, sf)
    spectrum = fourier.forward_ft(u.values, u.spec.mesh)
    weighted = _profile_weights(sf, u.spec, target.mesh) * spectrum
    folded = fourier.fold_spectrum(weighted, ratio)
    return GridFunction(fourier.inverse_ft(folded, target.mesh), target)


def p_h_star_apply(v: GridFunction, sf: ScalingFunction, fine: LatticeSpec) -> GridFunction:
    """Synthesis embedding (adjoint of p_h_apply); an isometry onto the fine grid."""
    ratio = _embedding_ratio(fine, v.spec, sf)
    spectrum = fourier.forward_ft(v.values, v.spec.mesh)
    extended = fourier.extend_spectrum(spectrum, ratio)
    weighted = _profile_weights(sf, fine, v.spec.mesh) * extended
    return GridFunction(fourier.inverse_ft(weighted, fine.mesh), fine)


# ---------------------------------------------------------------------------
# solves


def resolvent_solve(op: _BoxOperator, probe: ResolventProbe, rhs: GridFunction,
                    tol: float = 1e-10, max_iter: int | None = None) -> GridFunction:
    """Solve (op - mu) x = rhs to a relative residual below ``tol``.

    Conjugate gradients for real shifts (the shifted operator is Hermitian
    positive definite below the spectrum), a preconditioned Krylov solver
    for complex shifts.  Non-convergence raises; a silently inaccurate
    solution is never returned.
    """
    if rhs.spec != op.spec:
        raise IncompatibleBoxError("rhs lives on a different grid than the operator")
    mu = probe.mu
    shape = op.spec.shape
    n = op.spec.size
    b = rhs.values.ravel()
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return GridFunction(np.zeros(shape, dtype=complex), op.spec)
    cap = max_iter or max(64, math.ceil(10.0 * math.sqrt(n)))

    def matvec(x: np.ndarray) -> np.ndarray:
        arr = x.reshape(shape)
        return (op.apply_values(arr) - mu * arr).ravel()

    operator = LinearOperator((n, n), matvec=matvec, dtype=complex)
    prec = op.shift_preconditioner(mu)
    preconditioner = None
    if prec is not None:
        preconditioner = LinearOperator(
            (n, n), matvec=lambda x: prec(x.reshape(shape)).ravel(), dtype=complex)

    # ask for extra headroom, then verify the true residual explicitly
    if mu.imag == 0.0:
        x, _ = cg(operator, b, rtol=tol / 4.0, atol=0.0, maxiter=cap, M=preconditioner)
    else:
        x, _ = gmres(operator, b, rtol=tol / 4.0, atol=0.0, maxiter=cap,
                     restart=50, M=preconditioner)
    residual = float(np.linalg.norm(matvec(x) - b) / b_norm)
    if not np.isfinite(residual) or residual > tol:
        raise SolverConvergenceError(
            f"shifted solve stalled at relative residual {residual:.3e} (tol {tol:.1e}, "
            f"mu={mu}, n={n})", residual=residual, tolerance=tol)
    return GridFunction(x.reshape(shape), op.spec)


@dataclass(frozen=True)
class RelativeBoundednessTable:
    """Norms of V (H_h - mu)^{-1} across meshes, with the spread ratio."""

    entries: tuple[tuple[float, float], ...]
    ratio: float
    bounded: bool


def uniform_relative_boundedness(pot: PotentialSpec, probe: ResolventProbe,
                                 h_list, extent: float, dimension: int = 1,
                                 solver_tol: float = 1e-10, norm_tol: float = 1e-4,
                                 max_ratio: float = 10.0,
                                 rng: np.random.Generator | None = None,
                                 ) -> RelativeBoundednessTable:
    """Power-iteration estimates of ||V (H_h - mu)^{-1}|| for each mesh.

    The family is declared bounded when max/min stays below ``max_ratio``
    across the sweep.
    """
    rng = rng or np.random.default_rng(0)
    entries = []
    for h in h_list:
        spec = spec_from_extent(extent, h, dimension)
        op = LatticeHamiltonian(spec, pot)
        v_values = op.potential_values

        def forward(arr):
            sol = resolvent_solve(op, probe, GridFunction(arr, spec), tol=solver_tol)
            return v_values * sol.values

        def backward(arr):
            conj_probe = ResolventProbe(np.conj(probe.mu))
            sol = resolvent_solve(op, conj_probe, GridFunction(v_values * arr, spec),
                                  tol=solver_tol)
            return sol.values

        start = random_grid_function(spec, rng).values
        result = power_norm(forward, backward, start, tol=norm_tol, max_iter=400)
        entries.append((float(h), result.value))
    norms = [n for _, n in entries]
    ratio = max(norms) / min(norms)
    return RelativeBoundednessTable(entries=tuple(entries), ratio=float(ratio),
                                    bounded=bool(ratio <= max_ratio))


# ---------------------------------------------------------------------------
# diagnostics and snapshots


def boundary_decay(v: GridFunction) -> float:
    """max |v| on the box boundary relative to max |v| overall."""
    mags = np.abs(v.values)
    peak = float(np.max(mags))
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for ax in range(v.spec.dimension):
        edge = max(edge, float(np.max(np.take(mags, 0, axis=ax))),
                   float(np.max(np.take(mags, -1, axis=ax))))
    return edge / peak


def save_grid(v: GridFunction, path) -> None:
    """Write the little-endian (re, im) float64 stream plus a JSON sidecar."""
    path = Path(path)
    flat = v.values.ravel()
    inter = np.empty(flat.size * 2)
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    inter.astype("<f8").tofile(path)
    sidecar = {"d": v.spec.dimension, "h": v.spec.mesh, "N": v.spec.points}
    path.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True) + "\n")


def load_grid(path) -> GridFunction:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    spec = LatticeSpec(dimension=int(sidecar["d"]), mesh=float(sidecar["h"]),
                       points=int(sidecar["N"]))
    inter = np.fromfile(path, dtype="<f8")
    if inter.size != 2 * spec.size:
        raise ValueError(f"snapshot size {inter.size} does not match spec {spec}")
    values = (inter[0::2] + 1j * inter[1::2]).reshape(spec.shape)
    return GridFunction(values, spec)
