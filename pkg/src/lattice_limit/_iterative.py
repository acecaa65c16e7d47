"""Shared iterative kernels: power iteration for operator norms.

The norm of a map A between (scalar-)weighted l2 spaces is estimated by
power iteration on A* A.  Constant inner-product weights cancel in every
Rayleigh quotient, so plain complex dot products are used; correctness
only requires that ``apply_adjoint`` is the adjoint with respect to the
weighted inner products the caller cares about.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OpNormResult:
    value: float
    iterations: int
    converged: bool


def power_norm(apply, apply_adjoint, start: np.ndarray, tol: float = 1e-6,
               max_iter: int = 500) -> OpNormResult:
    """Largest singular value of a linear map given with its adjoint.

    Iterates x <- A*A x with normalization; the estimate is the Rayleigh
    quotient sqrt(<x, A*Ax>) = ||Ax|| for unit x.  Stops when the estimate
    moves by less than ``tol`` relatively between iterations.
    """
    x = np.asarray(start, dtype=complex)
    nx = np.linalg.norm(x.ravel())
    if nx == 0.0:
        raise ValueError("start vector must be nonzero")
    x = x / nx
    estimate = 0.0
    for it in range(1, max_iter + 1):
        z = apply_adjoint(apply(x))
        sigma2 = float(np.real(np.vdot(x.ravel(), z.ravel())))
        new_estimate = float(np.sqrt(max(sigma2, 0.0)))
        zn = np.linalg.norm(z.ravel())
        if zn == 0.0:
            return OpNormResult(0.0, it, True)
        if it > 1 and abs(new_estimate - estimate) <= tol * max(new_estimate, 1e-300):
            return OpNormResult(new_estimate, it, True)
        estimate = new_estimate
        x = z / zn
    return OpNormResult(estimate, max_iter, False)
