"""Fourier transforms on centered periodic grids.

Conventions used throughout the package, for a box of extent L with n
points per axis and step s = L/n:

* sites sit at ``x_m = s*(m - n/2)`` (origin at the center of the box),
* frequencies are ``xi_k = k/L`` with k the signed FFT-order index,
* the forward transform approximates ``int exp(-2pi i x.xi) u(x) dx``
  and the inverse approximates ``int exp(+2pi i x.xi) g(xi) dxi`` over
  the n^d represented frequencies (spacing 1/L per axis).

With these weights the discrete transforms are exactly unitary between
the step-weighted inner product on sites and the (1/L)-weighted inner
product on frequencies, so adjointness of grid operators built from
them holds to machine precision.

Frequency-indexed arrays are kept in FFT order.  The site origin sits
mid-array, which introduces a per-axis factor (-1)^k handled here and
nowhere else.
"""

from __future__ import annotations

import numpy as np


def fft_indices(n: int) -> np.ndarray:
    """Signed integer FFT-order indices k for an axis of length n."""
    return np.rint(np.fft.fftfreq(n) * n).astype(int)


def frequencies(n: int, step: float) -> np.ndarray:
    """Frequencies k/(n*step) per axis, FFT order."""
    return np.fft.fftfreq(n, d=step)


def sites(n: int, step: float) -> np.ndarray:
    """Centered sample coordinates step*(m - n/2)."""
    return step * (np.arange(n) - n // 2)


def _center_phase(n: int, ndim: int, axis: int) -> np.ndarray:
    """(-1)^k along one axis, broadcast against an ndim-dimensional array."""
    k = fft_indices(n)
    ph = np.where(np.abs(k) % 2 == 1, -1.0, 1.0)
    shape = [1] * ndim
    shape[axis] = n
    return ph.reshape(shape)


def total_phase(shape: tuple[int, ...]) -> np.ndarray:
    """Product of per-axis (-1)^k factors for a centered grid."""
    out = np.ones(shape)
    for ax, n in enumerate(shape):
        out = out * _center_phase(n, len(shape), ax)
    return out


def forward_ft(values: np.ndarray, step: float) -> np.ndarray:
    """Transform centered samples to the spectrum, FFT frequency order.

    Returns step^d * (-1)^k * FFT[values]; the result approximates the
    integral transform at the represented frequencies (exactly, for
    band-limited input).
    """
    values = np.asarray(values)
    phase = total_phase(values.shape)
    return (step ** values.ndim) * phase * np.fft.fftn(values)


def inverse_ft(spectrum: np.ndarray, step: float) -> np.ndarray:
    """Inverse of :func:`forward_ft` on the same grid."""
    spectrum = np.asarray(spectrum)
    phase = total_phase(spectrum.shape)
    return (step ** -spectrum.ndim) * np.fft.ifftn(phase * spectrum)


def fold_spectrum(spectrum: np.ndarray, ratio: int) -> np.ndarray:
    """Sum a fine-grid spectrum over frequency cosets of a coarser grid.

    The fine axis length must be ratio * N; entries at fine index k are
    accumulated onto coarse index k mod N, which in FFT order is a plain
    reshape-and-sum.  Valid for even N (the (-1)^k centering factors of
    the two grids then agree coset-wise).
    """
    out = np.asarray(spectrum)
    for ax in range(out.ndim):
        n_fine = out.shape[ax]
        if n_fine % ratio != 0:
            raise ValueError(f"axis {ax} of length {n_fine} not divisible by ratio {ratio}")
        n = n_fine // ratio
        moved = np.moveaxis(out, ax, 0)
        folded = moved.reshape(ratio, n, *moved.shape[1:]).sum(axis=0)
        out = np.moveaxis(folded, 0, ax)
    return out


def extend_spectrum(spectrum: np.ndarray, ratio: int) -> np.ndarray:
    """Periodic extension of a coarse spectrum onto a ratio-times finer grid.

    Adjoint of :func:`fold_spectrum`; entry at fine index k is the coarse
    entry at k mod N.
    """
    out = np.asarray(spectrum)
    for ax in range(out.ndim):
        out = np.concatenate([out] * ratio, axis=ax)
    return out


def frequency_vectors(shape: tuple[int, ...], step: float) -> np.ndarray:
    """Stacked frequency coordinates, shape ``shape + (d,)``, FFT order."""
    axes = [frequencies(n, step) for n in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)


def site_vectors(shape: tuple[int, ...], step: float) -> np.ndarray:
    """Stacked centered site coordinates, shape ``shape + (d,)``."""
    axes = [sites(n, step) for n in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1)
