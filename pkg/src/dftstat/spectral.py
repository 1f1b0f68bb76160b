"""Periodogram and kernel-smoothed spectral density estimation.

The estimator is a circular weighted average of the periodogram on the
canonical frequency grid,

    fhat(w_k) = sum_j W(j) I_{k+j mod T},

where the weights come from a symmetric kernel on [-1/2, 1/2] evaluated at
j / (b*T) and renormalized to sum to exactly one. The index window has
half-width floor(b*T/2), so the bandwidth b is the covered fraction of the
whole frequency circle. After smoothing, values are floored at a relative
ridge to keep the standardization denominators away from zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .errors import BandwidthTooSmallError, BandwidthWarning, InvalidInputError
from .numerics import dft_canonical

_KERNEL_KINDS = ("daniell", "bartlett")


@dataclass(frozen=True)
class KernelSpec:
    """Smoothing kernel: flat (daniell) or triangular (bartlett).

    ``bandwidth`` is the covered fraction of the frequency circle, in
    (0, 1/2). ``None`` means the default T**(-1/3), resolved against the
    series length at use time (the geometric midpoint of the admissible
    window (T**-1/2, T**-1/4)).
    """

    kind: str = "daniell"
    bandwidth: float | None = None

    def __post_init__(self):
        if self.kind not in _KERNEL_KINDS:
            raise InvalidInputError(
                f"unknown kernel kind {self.kind!r}; expected one of {_KERNEL_KINDS}"
            )
        if self.bandwidth is not None and not (0.0 < self.bandwidth < 0.5):
            raise InvalidInputError(
                f"bandwidth must lie in (0, 1/2), got {self.bandwidth}"
            )

    def resolve_bandwidth(self, T: int) -> float:
        """Concrete bandwidth for a length-T series, warning when it falls
        outside the admissible window (T**-1/2, T**-1/4)."""
        if self.bandwidth is not None:
            b = self.bandwidth
        else:
            b = min(T ** (-1.0 / 3.0), 0.499)  # cap keeps tiny T valid
        if not (T ** -0.5 < b < T ** -0.25):
            warnings.warn(
                f"bandwidth {b:.4g} outside the admissible window "
                f"({T ** -0.5:.4g}, {T ** -0.25:.4g}) for T={T}",
                BandwidthWarning,
                stacklevel=3,
            )
        return b

    def weights(self, T: int) -> np.ndarray:
        """Discrete smoothing weights over index offsets -H..H, summing to 1."""
        return _kernel_weights(self.kind, self.resolve_bandwidth(T), T)


def _kernel_weights(kind: str, b: float, T: int) -> np.ndarray:
    bT = b * T
    if bT < 3.0:
        raise BandwidthTooSmallError(
            f"kernel window covers fewer than 3 frequencies (b*T = {bT:.3g})"
        )
    half = int(math.floor(bT / 2.0))
    offsets = np.arange(-half, half + 1)
    x = offsets / bT  # in [-1/2, 1/2]
    if kind == "daniell":
        w = np.ones_like(x, dtype=float)
    else:  # bartlett
        w = 2.0 * (1.0 - 2.0 * np.abs(x))
    w = np.clip(w, 0.0, None)
    return w / w.sum()


@dataclass(frozen=True)
class SpectralEstimate:
    """Smoothed spectral density on the canonical grid, k = 1..T order.

    ``values`` inherit the grid's periodicity (index arithmetic modulo T)
    and sit at or above ``ridge`` after regularization.
    """

    values: np.ndarray
    kernel: KernelSpec
    ridge: float
    T: int


def periodogram(series) -> np.ndarray:
    """|J(w_k)|^2 for k = 1..T; nonnegative by construction."""
    j = dft_canonical(series)
    return np.abs(j) ** 2


def smooth_spectral(pgram, kernel: KernelSpec | None = None,
                    ridge_factor: float = 1e-3) -> SpectralEstimate:
    """Kernel-smoothed spectral estimate with a relative ridge floor.

    Parameters
    ----------
    pgram : array_like
        Periodogram values on the canonical grid (k = 1..T order).
    kernel : KernelSpec, optional
        Defaults to a daniell kernel with automatic bandwidth.
    ridge_factor : float
        The floor is ridge_factor * mean(pgram); a relative ridge keeps the
        estimator scale equivariant.

    Returns
    -------
    SpectralEstimate
    """
    vals = np.asarray(pgram, dtype=float)
    if vals.ndim != 1 or vals.size < 2:
        raise InvalidInputError("smooth_spectral needs a 1-d periodogram of length >= 2")
    if ridge_factor < 0.0:
        raise InvalidInputError(f"ridge_factor must be >= 0, got {ridge_factor}")
    T = vals.size
    kern = kernel if kernel is not None else KernelSpec()
    b = kern.resolve_bandwidth(T)
    w = _kernel_weights(kern.kind, b, T)
    # circular (wrap) correlation; the window never exceeds T/2 + 1 points
    # because bandwidth < 1/2
    smoothed = correlate1d(vals, w, mode="wrap")
    ridge = ridge_factor * float(vals.mean())
    return SpectralEstimate(
        values=np.maximum(smoothed, ridge),
        kernel=KernelSpec(kern.kind, b),
        ridge=ridge,
        T=T,
    )
