"""Numerical laboratory for the continuum limit of discrete Schrodinger operators.

The package realizes the lattice/continuum operator pair on periodic
boxes, the band-limited embedding between them, and the fibered symbol
computations that make the expected convergence rates machine-checkable:
second-order rates for the free resolvents, Hoelder-order rates for the
commutators and the full resolvent difference, and spectral convergence
measured through projections and Hausdorff distances.
"""

from .scaling import (
    ScalingFunction,
    meyer_nu_coefficients,
    meyer_phi_hat,
    orthonormality_defect,
    partition_defect,
    phi_spatial,
    q_apply,
    q_star_apply,
)
from .symbols import (
    FiberMatrix,
    ResolventProbe,
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
    taylor_gap_ratio,
)
from .lattice import (
    ContinuumReference,
    GridFunction,
    IncompatibleBoxError,
    LatticeHamiltonian,
    LatticeSpec,
    MultiplicationOperator,
    PotentialSpec,
    RelativeBoundednessTable,
    SolverConvergenceError,
    apply_h0h,
    apply_hh,
    adjoint_diff,
    bounded_uc_potential,
    boundary_decay,
    check_assumption,
    constant_potential,
    forward_diff,
    grid_inner,
    growth_potential,
    harmonic_potential,
    hoelder_potential,
    load_grid,
    p_h_apply,
    p_h_star_apply,
    plane_wave,
    random_grid_function,
    resolvent_solve,
    save_grid,
    spec_from_extent,
    uniform_relative_boundedness,
)
from .estimators import (
    CommutatorRateResult,
    ConvergenceReport,
    EigenConvergenceError,
    HausdorffPropertyResult,
    OpNormError,
    SchurBound,
    SpectralWindow,
    SpectrumHausdorffResult,
    WindowIntersectsSpectrumError,
    commutator_direct_norm,
    commutator_rate,
    default_resolvent_shift,
    hausdorff_distance,
    hausdorff_vs_norm_property,
    lowest_eigenvalues,
    modulus_of_continuity,
    op_norm,
    rate_fit,
    resolvent_diff_norm,
    resolvent_rate,
    resolvent_spectrum_hausdorff,
    schur_commutator_bound,
    spectral_projection_diff,
)

__version__ = "0.1.0"
