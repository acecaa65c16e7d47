"""Norm, spectrum, and convergence-rate estimators.

Everything here reduces an operator-theoretic quantity to finite linear
algebra on the periodic box: operator norms by power iteration on the
adjoint composition, commutator norms both directly and through a Schur
row/column-sum bound on the realized kernel, spectra by dense or blocked
iterative eigensolvers with verified residuals, and convergence rates by
ordinary least squares in log-log coordinates.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh
from scipy.sparse.linalg import LinearOperator, lobpcg

from . import fourier
from ._iterative import OpNormResult, power_norm
from .lattice import (
    ContinuumReference,
    GridFunction,
    LatticeHamiltonian,
    LatticeSpec,
    PotentialSpec,
    p_h_apply,
    p_h_star_apply,
    random_grid_function,
    resolvent_solve,
    spec_from_extent,
)
from .scaling import ScalingFunction, phi_spatial
from .symbols import ResolventProbe

__all__ = [
    "OpNormError",
    "EigenConvergenceError",
    "WindowIntersectsSpectrumError",
    "SpectralWindow",
    "ConvergenceReport",
    "SchurBound",
    "CommutatorRateResult",
    "HausdorffPropertyResult",
    "SpectrumHausdorffResult",
    "op_norm",
    "rate_fit",
    "modulus_of_continuity",
    "schur_commutator_bound",
    "commutator_direct_norm",
    "commutator_rate",
    "resolvent_diff_norm",
    "resolvent_rate",
    "lowest_eigenvalues",
    "spectral_projection_diff",
    "hausdorff_distance",
    "hausdorff_vs_norm_property",
    "resolvent_spectrum_hausdorff",
    "default_resolvent_shift",
]


class OpNormError(RuntimeError):
    """Power iteration did not settle; carries the best estimate seen."""

    def __init__(self, message: str, best_estimate: float, iterations: int):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.iterations = iterations
        self.converged = False


class EigenConvergenceError(RuntimeError):
    """An eigensolve missed its residual contract."""


class WindowIntersectsSpectrumError(ValueError):
    """A spectral window endpoint sits on (or too close to) an eigenvalue."""

    def __init__(self, message: str, eigenvalue: float):
        super().__init__(message)
        self.eigenvalue = eigenvalue


@dataclass(frozen=True)
class SpectralWindow:
    """Open energy window (a, b) whose endpoints must avoid both spectra."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError("window requires a < b")


# ---------------------------------------------------------------------------
# operator norms


def op_norm(apply, apply_adjoint, start: np.ndarray, tol: float = 1e-6,
            max_iter: int = 500, strict: bool = True, check_adjoint: bool = True,
            domain_weight: float = 1.0, codomain_weight: float = 1.0,
            rng: np.random.Generator | None = None) -> OpNormResult:
    """Operator norm sqrt(rho(A* A)) by power iteration.

    ``apply_adjoint`` must be the adjoint with respect to the weighted
    inner products of the two spaces; the weights themselves only enter
    the optional consistency spot check.  Non-convergence raises
    :class:`OpNormError` (carrying the best estimate) unless ``strict``
    is disabled, in which case the flagged result is returned.
    """
    if check_adjoint:
        rng = rng or np.random.default_rng(0)
        x = (rng.standard_normal(np.shape(start)) + 1j * rng.standard_normal(np.shape(start)))
        ax = apply(x)
        y = (rng.standard_normal(np.shape(ax)) + 1j * rng.standard_normal(np.shape(ax)))
        aty = apply_adjoint(y)
        lhs = codomain_weight * np.vdot(np.ravel(y), np.ravel(ax))
        rhs = domain_weight * np.vdot(np.ravel(aty), np.ravel(x))
        scale = abs(lhs) + abs(rhs) + 1e-300
        if abs(lhs - rhs) > 1e-7 * scale:
            raise ValueError(f"map and adjoint are inconsistent: <Ax,y>={lhs:.6e} "
                             f"vs <x,A*y>={rhs:.6e}")
    result = power_norm(apply, apply_adjoint, start, tol=tol, max_iter=max_iter)
    if strict and not result.converged:
        raise OpNormError(
            f"operator norm estimate did not converge in {max_iter} iterations "
            f"(best {result.value:.6e})", best_estimate=result.value,
            iterations=result.iterations)
    return result


# ---------------------------------------------------------------------------
# rate fitting


def rate_fit(pairs) -> tuple[float, float, float]:
    """Least-squares slope, intercept, and r^2 of log(error) against log(h)."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ValueError("need at least 3 (h, error) pairs")
    if np.any(arr <= 0.0):
        raise ValueError("rate fit requires positive meshes and errors")
    x = np.log(arr[:, 0])
    y = np.log(arr[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot < 1e-300:
        r_squared = 1.0 if ss_res < 1e-300 else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r_squared)


@dataclass(frozen=True)
class ConvergenceReport:
    """(h, error) sweep with its fitted rate and a verdict against a target."""

    pairs: tuple[tuple[float, float], ...]
    slope: float
    intercept: float
    r_squared: float
    expected_rate: float | None = None
    rate_tolerance: float = 0.1
    mode: str = "two_sided"  # or "at_least"
    min_r_squared: float = 0.0
    clamped: bool = False

    @property
    def passed(self) -> bool:
        ok = self.r_squared >= self.min_r_squared
        if self.expected_rate is not None:
            if self.mode == "two_sided":
                ok = ok and abs(self.slope - self.expected_rate) <= self.rate_tolerance
            elif self.mode == "at_least":
                ok = ok and self.slope >= self.expected_rate - self.rate_tolerance
            else:
                raise ValueError(f"unknown verdict mode {self.mode!r}")
        return bool(ok)

    @classmethod
    def from_pairs(cls, pairs, expected_rate: float | None = None,
                   rate_tolerance: float = 0.1, mode: str = "two_sided",
                   min_r_squared: float = 0.0,
                   clamp_floor: float | None = None) -> "ConvergenceReport":
        ordered = sorted(((float(h), float(e)) for h, e in pairs), key=lambda p: -p[0])
        clamped = False
        if clamp_floor is not None:
            fixed = []
            for h, e in ordered:
                if e < clamp_floor:
                    e = clamp_floor
                    clamped = True
                fixed.append((h, e))
            ordered = fixed
        slope, intercept, r2 = rate_fit(ordered)
        return cls(pairs=tuple(ordered), slope=slope, intercept=intercept,
                   r_squared=r2, expected_rate=expected_rate,
                   rate_tolerance=rate_tolerance, mode=mode,
                   min_r_squared=min_r_squared, clamped=clamped)

    def to_json_dict(self, experiment: str) -> dict:
        return {
            "experiment": experiment,
            "pairs": [[h, e] for h, e in self.pairs],
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r_squared,
            "expected": self.expected_rate,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# moduli and the Schur commutator bound


def modulus_of_continuity(G, delta: float, box: tuple[float, float],
                          sample_count: int = 20000, dimension: int = 1,
                          rng: np.random.Generator | None = None) -> float:
    """Sampled sup of |G(x) - G(y)| over pairs at distance below delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    rng = rng or np.random.default_rng(0)
    lo, hi = box
    x = rng.uniform(lo, hi, size=(sample_count, dimension))
    dirs = rng.standard_normal((sample_count, dimension))
    dirs /= np.maximum(np.linalg.norm(dirs, axis=-1), 1e-300)[:, None]
    radii = np.where(rng.random(sample_count) < 0.5,
                     rng.uniform(0.0, delta, sample_count),
                     delta * (1.0 - 1e-9))
    y = x + radii[:, None] * dirs
    inside = np.all((y >= lo) & (y <= hi), axis=-1)
    if not np.any(inside):
        raise ValueError("no sample pairs landed inside the box")
    return float(np.max(np.abs(G(x[inside]) - G(y[inside]))))


@dataclass(frozen=True)
class SchurBound:
    """Row/column kernel sums and the resulting commutator norm bound."""

    k1: float
    k2: float
    bound: float
    modulus: float
    majorant: float | None


@functools.lru_cache(maxsize=16)
def _majorant_constants(sf: ScalingFunction, n_decay: int) -> tuple[float, float]:
    """L1 norm of the 1-d spatial profile and its <y>^n decay constant."""
    y = np.linspace(0.0, 256.0, 16385)
    profile = np.abs(phi_spatial(y, sf))
    decay_const = float(np.max(profile * (1.0 + y ** 2) ** (n_decay / 2.0)))
    tail = decay_const * quad(lambda s: (1.0 + s ** 2) ** (-n_decay / 2.0),
                              y[-1], np.inf)[0]
    l1_norm = 2.0 * (float(np.trapezoid(profile, y)) + tail)
    return l1_norm, decay_const


def _periodized_profile_offsets(sf: ScalingFunction, coarse: LatticeSpec,
                                fine: LatticeSpec) -> np.ndarray:
    """|phi periodized over the box| at fine-grid offsets, index-0 origin."""
    h = coarse.mesh
    t = h * fine.frequency_coords()
    weights = sf.phi_hat(t if fine.dimension > 1 else t[..., 0])
    spectrum = (h ** fine.dimension) * weights
    vals = np.real(fourier.inverse_ft(spectrum.astype(complex), fine.mesh))
    for ax in range(fine.dimension):
        vals = np.roll(vals, -(fine.points // 2), axis=ax)
    return np.abs(vals)


def _schur_sums_1d(g_fine: np.ndarray, g_coarse: np.ndarray, w: np.ndarray,
                   n: int, ratio: int) -> tuple[float, float]:
    """Sup row/column sums of the 1-d kernel, windowed with an exact tail bound.

    The kernel couples a coarse site m and a fine site j only through the
    offset j - ratio*m, so sums split over offset residues mod ratio with
    coarse-grid strides.  Offsets beyond the window contribute at most
    osc(G) times their (known) weight mass, which is added so both sums
    stay upper bounds.
    """
    osc = float(np.max(g_fine) - np.min(g_fine))
    gf2 = g_fine.reshape(n, ratio)
    total = float(w.sum())
    residues = np.arange(ratio)

    # window half-width in coarse steps: keep all but a 1e-6 mass fraction
    half = 16
    while True:
        if 2 * half + 1 >= n:
            t_idx = np.arange(n) - n // 2  # full circle, each offset exactly once
            break
        t_idx = np.arange(-half, half + 1)
        mass = float(w[(t_idx[:, None] * ratio + residues[None, :]) % w.size].sum())
        if total - mass <= 1e-6 * total:
            break
        half *= 2
    m_idx = np.arange(n)
    neighbor = (m_idx[:, None] + t_idx[None, :]) % n

    k1_rows = np.zeros(n)
    k2_best = 0.0
    window_mass = 0.0
    for s in range(ratio):
        w_s = w[(s + ratio * t_idx) % w.size]
        window_mass += float(w_s.sum())
        stride_tail = max(float(w[s::ratio].sum()) - float(w_s.sum()), 0.0)
        # K1: row sums over fine sites, split by residue
        k1_rows += np.sum(np.abs(g_coarse[:, None] - gf2[neighbor, s]) * w_s[None, :], axis=1)
        # K2: column sums touch a single residue each
        cols = np.sum(np.abs(gf2[:, s][:, None] - g_coarse[(m_idx[:, None] - t_idx[None, :]) % n])
                      * w_s[None, :], axis=1)
        k2_best = max(k2_best, float(cols.max()) + osc * stride_tail)
    k1 = (float(k1_rows.max()) + osc * max(total - window_mass, 0.0)) / ratio
    return k1, k2_best


def _schur_sums_generic(g_fine: np.ndarray, g_coarse: np.ndarray, w: np.ndarray,
                        fine_shape: tuple[int, ...], coarse_shape: tuple[int, ...],
                        ratio: int) -> tuple[float, float]:
    """Plain gathered kernel sums for d > 1 (small boxes only)."""
    d = len(fine_shape)
    n_points = fine_shape[0]
    fine_idx = np.indices(fine_shape).reshape(d, -1)
    coarse_idx = np.indices(coarse_shape).reshape(d, -1)
    k1 = 0.0
    chunk = max(1, 2 ** 23 // fine_idx.shape[1])
    for start in range(0, coarse_idx.shape[1], chunk):
        blk = coarse_idx[:, start:start + chunk]
        off = (fine_idx[:, None, :] - ratio * blk[:, :, None]) % n_points
        flat = np.ravel_multi_index(tuple(off), fine_shape)
        contrib = np.abs(g_coarse[start:start + chunk, None] - g_fine[None, :]) * w[flat]
        k1 = max(k1, float(contrib.sum(axis=1).max()) / ratio ** d)
    k2 = 0.0
    chunk = max(1, 2 ** 23 // coarse_idx.shape[1])
    for start in range(0, fine_idx.shape[1], chunk):
        blk = fine_idx[:, start:start + chunk]
        off = (blk[:, :, None] - ratio * coarse_idx[:, None, :]) % n_points
        flat = np.ravel_multi_index(tuple(off), fine_shape)
        contrib = np.abs(g_fine[start:start + chunk, None] - g_coarse[None, :]) * w[flat]
        k2 = max(k2, float(contrib.sum(axis=1).max()))
    return k1, k2


def schur_commutator_bound(G, sf: ScalingFunction, coarse: LatticeSpec,
                           ratio: int, delta: float, n_decay: int,
                           rng: np.random.Generator | None = None) -> SchurBound:
    """Schur test sqrt(K1 K2) for the commutator of G with the embedding.

    K1 and K2 are the sup row/column sums of the realized kernel
    (G(z) - G(x)) phi((x-z)/h) / h^d on the box, computed with the same
    periodized profile the embedding uses, so the bound dominates the
    directly measured norm by construction.  The closed-form majorant
    C R(delta) + C <delta/h>^{-(n-d)} is evaluated alongside for
    comparison (1-d only).
    """
    d = coarse.dimension
    if n_decay <= d:
        raise ValueError("decay order must exceed the dimension")
    fine = coarse.refined(ratio)
    h = coarse.mesh
    g_fine = np.asarray(G(fine.site_coords()), dtype=float).ravel()
    g_coarse = np.asarray(G(coarse.site_coords()), dtype=float).ravel()
    w = _periodized_profile_offsets(sf, coarse, fine).ravel()

    if d == 1:
        k1, k2 = _schur_sums_1d(g_fine, g_coarse, w, coarse.points, ratio)
    else:
        k1, k2 = _schur_sums_generic(g_fine, g_coarse, w, fine.shape, coarse.shape, ratio)

    half = coarse.extent / 2.0
    modulus = modulus_of_continuity(G, delta, (-half, half), dimension=d, rng=rng)

    majorant = None
    if d == 1:
        l1_norm, decay_const = _majorant_constants(sf, n_decay)
        sup_g = float(np.max(np.abs(g_fine)))
        t0 = delta / h
        tail = 2.0 * quad(lambda s: (1.0 + s ** 2) ** (-n_decay / 2.0), t0, np.inf)[0]
        majorant = l1_norm * modulus + 2.0 * sup_g * decay_const * tail

    return SchurBound(k1=k1, k2=k2, bound=float(np.sqrt(k1 * k2)),
                      modulus=modulus, majorant=majorant)


def commutator_direct_norm(G, sf: ScalingFunction, coarse: LatticeSpec,
                           ratio: int, tol: float = 1e-5, max_iter: int = 500,
                           rng: np.random.Generator | None = None) -> float:
    """Directly measured norm of G P_h - P_h G on the box realization."""
    rng = rng or np.random.default_rng(0)
    fine = coarse.refined(ratio)
    g_fine = np.asarray(G(fine.site_coords()), dtype=float)
    g_coarse = np.asarray(G(coarse.site_coords()), dtype=float)

    def forward(arr):
        u = GridFunction(arr, fine)
        first = g_coarse * p_h_apply(u, sf, coarse).values
        second = p_h_apply(GridFunction(g_fine * arr, fine), sf, coarse).values
        return first - second

    def backward(arr):
        v = GridFunction(arr, coarse)
        first = p_h_star_apply(GridFunction(g_coarse * arr, coarse), sf, fine).values
        second = g_fine * p_h_star_apply(v, sf, fine).values
        return first - second

    start = random_grid_function(fine, rng).values
    result = op_norm(forward, backward, start, tol=tol, max_iter=max_iter,
                     domain_weight=fine.weight, codomain_weight=coarse.weight, rng=rng)
    return result.value


@dataclass(frozen=True)
class CommutatorRateResult:
    report: ConvergenceReport
    schur_bounds: tuple[float, ...] | None


def commutator_rate(G, sf: ScalingFunction, h_list, extent: float,
                    dimension: int = 1, ratio: int = 8,
                    expected_rate: float | None = None,
                    rate_tolerance: float = 0.1, mode: str = "at_least",
                    min_r_squared: float = 0.0, gamma: float | None = None,
                    n_decay: int = 4, norm_tol: float = 1e-5,
                    rng: np.random.Generator | None = None) -> CommutatorRateResult:
    """Direct commutator norms across a mesh sweep, with optional Schur bounds
    evaluated at delta = h^gamma."""
    rng = rng or np.random.default_rng(0)
    pairs = []
    bounds = [] if gamma is not None else None
    for h in h_list:
        coarse = spec_from_extent(extent, h, dimension)
        direct = commutator_direct_norm(G, sf, coarse, ratio, tol=norm_tol, rng=rng)
        pairs.append((h, direct))
        if gamma is not None:
            sb = schur_commutator_bound(G, sf, coarse, ratio, delta=h ** gamma,
                                        n_decay=n_decay, rng=rng)
            bounds.append(sb.bound)
    report = ConvergenceReport.from_pairs(pairs, expected_rate=expected_rate,
                                          rate_tolerance=rate_tolerance, mode=mode,
                                          min_r_squared=min_r_squared)
    return CommutatorRateResult(report=report,
                                schur_bounds=tuple(bounds) if bounds is not None else None)


# ---------------------------------------------------------------------------
# resolvent difference


def resolvent_diff_norm(pot: PotentialSpec | None, probe: ResolventProbe, h: float,
                        extent: float, sf: ScalingFunction, ratio: int = 8,
                        dimension: int = 1, solver_tol: float = 1e-9,
                        norm_tol: float = 1e-3, max_iter: int = 400,
                        rng: np.random.Generator | None = None) -> float:
    """Norm of P_h^* (H_h - mu)^{-1} P_h - (H - mu)^{-1} on the box."""
    rng = rng or np.random.default_rng(0)
    coarse = spec_from_extent(extent, h, dimension)
    fine = coarse.refined(ratio)
    lattice_op = LatticeHamiltonian(coarse, pot)
    continuum_op = ContinuumReference(fine, pot)
    conj_probe = ResolventProbe(np.conj(probe.mu)) if probe.mu.imag else probe

    def difference(arr, lattice_probe, continuum_probe):
        u = GridFunction(arr, fine)
        embedded = p_h_apply(u, sf, coarse)
        lat = resolvent_solve(lattice_op, lattice_probe, embedded, tol=solver_tol)
        back = p_h_star_apply(lat, sf, fine).values
        cont = resolvent_solve(continuum_op, continuum_probe, u, tol=solver_tol).values
        return back - cont

    forward = lambda arr: difference(arr, probe, probe)
    backward = lambda arr: difference(arr, conj_probe, conj_probe)
    start = random_grid_function(fine, rng).values
    result = op_norm(forward, backward, start, tol=norm_tol, max_iter=max_iter,
                     domain_weight=fine.weight, codomain_weight=fine.weight, rng=rng)
    return result.value


def resolvent_rate(pot: PotentialSpec | None, probe: ResolventProbe, h_list,
                   extent: float, sf: ScalingFunction, ratio: int = 8,
                   dimension: int = 1, expected_rate: float | None = None,
                   rate_tolerance: float = 0.1, mode: str = "at_least",
                   min_r_squared: float = 0.0, solver_tol: float = 1e-9,
                   norm_tol: float = 1e-3,
                   rng: np.random.Generator | None = None) -> ConvergenceReport:
    """Resolvent-difference sweep fitted against an expected rate."""
    rng = rng or np.random.default_rng(0)
    pairs = [(h, resolvent_diff_norm(pot, probe, h, extent, sf, ratio=ratio,
                                     dimension=dimension, solver_tol=solver_tol,
                                     norm_tol=norm_tol, rng=rng))
             for h in h_list]
    return ConvergenceReport.from_pairs(pairs, expected_rate=expected_rate,
                                        rate_tolerance=rate_tolerance, mode=mode,
                                        min_r_squared=min_r_squared,
                                        clamp_floor=solver_tol)


# ---------------------------------------------------------------------------
# eigenvalues and spectral projections


def lowest_eigenvalues(op, k: int, tol: float = 1e-6, dense_cutoff: int = 4096,
                       max_iter: int = 2000, rng: np.random.Generator | None = None,
                       return_vectors: bool = False, force_iterative: bool = False):
    """k smallest eigenvalues of a Hermitian box operator, residual-verified.

    Small problems go through a dense symmetric eigensolver; larger ones
    through blocked inverse-free iteration (LOBPCG) preconditioned with
    the operator's own shifted Fourier symbol.  Every returned pair is
    checked against ||op x - lambda x|| <= tol and failure raises.
    """
    n = op.spec.size
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= {n}")
    shape = op.spec.shape
    if n <= dense_cutoff and not force_iterative:
        dense = op.dense_matrix()
        vals, vecs = eigh(dense, subset_by_index=[0, k - 1])
    else:
        rng = rng or np.random.default_rng(0)
        block = rng.standard_normal((n, k))

        def matmat(x):
            batch = x.T.reshape((-1,) + shape)
            return np.real(op.apply_values(batch)).reshape(x.shape[1], n).T

        operator = LinearOperator((n, n), matvec=lambda x: matmat(x[:, None]).ravel(),
                                  matmat=matmat, dtype=float)
        prec = op.shift_preconditioner(-1.0)
        preconditioner = None
        if prec is not None:
            def prec_matmat(x):
                batch = x.T.reshape((-1,) + shape)
                return np.real(prec(batch)).reshape(x.shape[1], n).T

            preconditioner = LinearOperator(
                (n, n), matvec=lambda x: prec_matmat(x[:, None]).ravel(),
                matmat=prec_matmat, dtype=float)
        # request headroom and silence the solver's own tolerance chatter;
        # the residual contract is enforced explicitly below
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            vals, vecs = lobpcg(operator, block, M=preconditioner, largest=False,
                                tol=tol / 2.0, maxiter=max_iter)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]

    applied = np.real(op.apply_values(vecs.T.reshape((-1,) + shape))).reshape(k, n).T
    residuals = np.linalg.norm(applied - vecs * vals[None, :], axis=0)
    worst = float(np.max(residuals))
    if worst > tol:
        raise EigenConvergenceError(
            f"eigensolve residual {worst:.3e} exceeds tolerance {tol:.1e} (n={n}, k={k})")
    vals = np.asarray(vals, dtype=float)
    if return_vectors:
        return vals, vecs
    return vals


def _eigenpairs_past(op, energy: float, margin: float, tol: float,
                     rng: np.random.Generator | None, start_k: int = 16):
    """Eigenpairs up to the first eigenvalue beyond energy + margin."""
    n = op.spec.size
    k = min(start_k, n)
    while True:
        vals, vecs = lowest_eigenvalues(op, k, tol=tol, rng=rng, return_vectors=True)
        if vals[-1] > energy + margin or k == n:
            return vals, vecs
        k = min(2 * k, n)


def spectral_projection_diff(pot: PotentialSpec | None, window: SpectralWindow,
                             h: float, extent: float, sf: ScalingFunction,
                             ratio: int = 8, dimension: int = 1,
                             margin: float = 1e-6, eig_tol: float = 1e-6,
                             norm_tol: float = 1e-4,
                             rng: np.random.Generator | None = None) -> float:
    """Norm of P_h^* E_{H_h}((a,b)) P_h - E_H((a,b)) on the box.

    Both projections are assembled from verified eigendecompositions; a
    window endpoint within ``margin`` of a computed eigenvalue is
    rejected together with the offending eigenvalue.
    """
    rng = rng or np.random.default_rng(0)
    coarse = spec_from_extent(extent, h, dimension)
    fine = coarse.refined(ratio)
    lattice_op = LatticeHamiltonian(coarse, pot)
    continuum_op = ContinuumReference(fine, pot)

    selections = []
    for op in (lattice_op, continuum_op):
        vals, vecs = _eigenpairs_past(op, window.b, margin, eig_tol, rng)
        for val in vals:
            if min(abs(val - window.a), abs(val - window.b)) <= margin:
                raise WindowIntersectsSpectrumError(
                    f"window endpoint within {margin:g} of eigenvalue {val:.9g}",
                    eigenvalue=float(val))
        inside = (vals > window.a) & (vals < window.b)
        selections.append(np.ascontiguousarray(vecs[:, inside]))
    lat_vecs, cont_vecs = selections

    def forward(arr):
        u = GridFunction(arr, fine)
        embedded = p_h_apply(u, sf, coarse).values.ravel()
        projected = lat_vecs @ (lat_vecs.conj().T @ embedded)
        back = p_h_star_apply(GridFunction(projected.reshape(coarse.shape), coarse),
                              sf, fine).values
        direct = cont_vecs @ (cont_vecs.conj().T @ arr.ravel())
        return back - direct.reshape(fine.shape)

    start = random_grid_function(fine, rng).values
    result = op_norm(forward, forward, start, tol=norm_tol, max_iter=500,
                     domain_weight=fine.weight, codomain_weight=fine.weight, rng=rng)
    return result.value


# ---------------------------------------------------------------------------
# Hausdorff distances


def hausdorff_distance(X, Y) -> float:
    """Exact Hausdorff distance between two finite point sets on the line."""
    X = np.atleast_1d(np.asarray(X, dtype=float))
    Y = np.atleast_1d(np.asarray(Y, dtype=float))
    if X.size == 0 or Y.size == 0:
        raise ValueError("Hausdorff distance needs nonempty sets")
    diff = np.abs(X[:, None] - Y[None, :])
    return float(max(diff.min(axis=1).max(), diff.min(axis=0).max()))


@dataclass(frozen=True)
class HausdorffPropertyResult:
    trials: int
    violations: int
    max_excess: float
    passed: bool


def hausdorff_vs_norm_property(trials: int, size: int,
                               rng: np.random.Generator | None = None,
                               slack: float = 1e-10) -> HausdorffPropertyResult:
    """Check d_H(spec(A), spec(B)) <= ||A - B|| on random Hermitian pairs.

    Perturbation magnitudes sweep six orders so the inequality is probed
    both near equality (rigid shifts) and far from it; every fifth pair is
    drawn independently.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    rng = rng or np.random.default_rng(0)

    def hermitian():
        m = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        return (m + m.conj().T) / 2.0

    violations = 0
    max_excess = -np.inf
    for t in range(trials):
        a = hermitian()
        if t % 5 == 0:
            b = hermitian()
        else:
            e = hermitian()
            e /= np.linalg.norm(e, ord=2)
            scale = 10.0 ** rng.uniform(-6.0, 0.5)
            b = a + scale * e
        dist = hausdorff_distance(np.linalg.eigvalsh(a), np.linalg.eigvalsh(b))
        gap = float(np.max(np.abs(np.linalg.eigvalsh(a - b))))
        excess = dist - gap
        max_excess = max(max_excess, excess)
        if excess > slack:
            violations += 1
    return HausdorffPropertyResult(trials=trials, violations=violations,
                                   max_excess=float(max_excess),
                                   passed=violations == 0)


def default_resolvent_shift(pot: PotentialSpec | None) -> float:
    """Shift M with H + M >= 1 plus unit headroom (spectrum maps into (0,1])."""
    lower = pot.lower_bound if pot is not None else 0.0
    return max(1.0, 1.0 - lower) + 1.0


@dataclass(frozen=True)
class SpectrumHausdorffResult:
    """Hausdorff distances between shifted-resolvent spectra across meshes."""

    pairs: tuple[tuple[float, float], ...]
    floors: tuple[float, ...]
    final: float
    decreasing: bool
    shift: float
    modes: int


def resolvent_spectrum_hausdorff(pot: PotentialSpec | None, shift: float, h_list,
                                 extent: float, k: int = 8, ratio: int = 8,
                                 dimension: int = 1, eig_tol: float = 1e-6,
                                 monotone_slack: float = 0.05,
                                 rng: np.random.Generator | None = None,
                                 ) -> SpectrumHausdorffResult:
    """Hausdorff distance between spec((H_h+M)^{-1}) and spec((H+M)^{-1}).

    Spectra are represented by the k lowest eigenvalues mapped through
    lambda -> (lambda+M)^{-1}, augmented with 0 as the accumulation point
    of the compressed high spectrum; everything above the k-th eigenvalue
    maps into an interval of width (lambda_k + M)^{-1}, reported as the
    per-mesh resolution floor.
    """
    lower = pot.lower_bound if pot is not None else 0.0
    if lower + shift < 1.0 - 1e-12:
        raise ValueError(f"shift {shift} does not push the spectrum above 1")
    rng = rng or np.random.default_rng(0)
    pairs = []
    floors = []
    for h in h_list:
        coarse = spec_from_extent(extent, h, dimension)
        fine = coarse.refined(ratio)
        lat_vals = lowest_eigenvalues(LatticeHamiltonian(coarse, pot), k,
                                      tol=eig_tol, rng=rng)
        cont_vals = lowest_eigenvalues(ContinuumReference(fine, pot), k,
                                       tol=eig_tol, rng=rng)
        lat_set = np.append(1.0 / (lat_vals + shift), 0.0)
        cont_set = np.append(1.0 / (cont_vals + shift), 0.0)
        pairs.append((float(h), hausdorff_distance(lat_set, cont_set)))
        floors.append(float(max(1.0 / (lat_vals[-1] + shift),
                                1.0 / (cont_vals[-1] + shift))))
    dists = [d for _, d in pairs]
    decreasing = all(dists[i + 1] <= dists[i] * (1.0 + monotone_slack)
                     for i in range(len(dists) - 1))
    return SpectrumHausdorffResult(pairs=tuple(pairs), floors=tuple(floors),
                                   final=dists[-1], decreasing=bool(decreasing),
                                   shift=float(shift), modes=k)
