"""Monte Carlo studies and locally stationary power diagnostics.

Replication i always uses stream id i of the master seed, so results are
bit-identical regardless of execution order and can be reproduced from the
(config, seed) pair alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    InvalidInputError,
    StationarityTestError,
)
from .numerics import RngStream, chisq_quantile, trapezoid_2d_values, _trapz
from .spectral import KernelSpec
from .stattest import (
    CorrectionSpec,
    correction_denominators,
    dft_covariances,
    stationarity_test,
    validate_lags,
)
from .simulate import GeneratorConfig, ModelSpec, generate

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class McConfig:
    """One Monte Carlo study: model, sample size, lags and replication plan."""

    model: ModelSpec
    T: int
    lags: tuple[int, ...] = (1, 2, 3, 4)
    level: float = 0.05
    replications: int = 1000
    master_seed: int = 0
    kernel: Optional[KernelSpec] = None
    correction: Optional[CorrectionSpec] = None
    ridge_factor: float = 1e-3
    burn_in: int = 500

    def __post_init__(self):
        if self.replications < 1:
            raise InvalidInputError("replications must be >= 1")
        if not (0.0 < self.level < 1.0):
            raise InvalidInputError(f"level must be in (0, 1), got {self.level}")
        object.__setattr__(self, "lags", tuple(int(r) for r in self.lags))

    def with_m(self, m: int) -> "McConfig":
        """Same study with consecutive lags 1..m."""
        return replace(self, lags=tuple(range(1, m + 1)))


@dataclass(frozen=True)
class McReport:
    """Rejection rate, raw statistics and their normalized histogram."""

    rejection_rate: float
    statistics: np.ndarray = field(repr=False)
    histogram: tuple[np.ndarray, np.ndarray] = field(repr=False)  # (edges, density)
    threshold: float
    config: McConfig


def _run_replication(config: McConfig, i: int) -> float:
    gen = GeneratorConfig(T=config.T, burn_in=config.burn_in,
                          rng=RngStream(config.master_seed, i))
    series = generate(config.model, gen)
    res = stationarity_test(series, lags=config.lags, kernel=config.kernel,
                            correction=config.correction,
                            ridge_factor=config.ridge_factor)
    return res.statistic


def rejection_rate(config: McConfig) -> McReport:
    """Replicate the test and report the exact rejection fraction.

    Replication i draws from stream i; a failure in any replication aborts
    the study with the replication index attached.
    """
    lags = validate_lags(config.lags, config.T)
    dof = 2 * len(lags)
    threshold = chisq_quantile(1.0 - config.level, dof)
    stats = np.empty(config.replications)
    for i in range(config.replications):
        try:
            stats[i] = _run_replication(config, i)
        except StationarityTestError as exc:
            raise type(exc)(f"replication {i} (stream {i}): {exc}") from exc
    rate = float(np.count_nonzero(stats > threshold)) / config.replications
    return McReport(
        rejection_rate=rate,
        statistics=stats,
        histogram=empirical_density(stats),
        threshold=threshold,
        config=config,
    )


def empirical_density(statistics, bins: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Normalized histogram (area one) of test statistics over [0, max]."""
    stats = np.asarray(statistics, dtype=float)
    if stats.size == 0:
        raise InvalidInputError("empirical_density needs at least one statistic")
    if bins < 2:
        raise InvalidInputError(f"bins must be >= 2, got {bins}")
    top = float(stats.max())
    if top <= 0.0:
        top = 1.0
    density, edges = np.histogram(stats, bins=bins, range=(0.0, top), density=True)
    return edges, density


def lag_scan(model: ModelSpec, T: int, lags, level: float = 0.05,
             replications: int = 1000, master_seed: int = 0,
             kernel: Optional[KernelSpec] = None,
             correction: Optional[CorrectionSpec] = None,
             ridge_factor: float = 1e-3, burn_in: int = 500) -> np.ndarray:
    """Rejection rate of the single-lag test at each requested lag.

    The DFT and spectral estimate of each replication are shared across all
    lags, so the scan costs O(T) per extra lag rather than a full test.
    """
    lags = validate_lags(lags, T)
    threshold = chisq_quantile(1.0 - level, 2)
    corr_spec = correction or CorrectionSpec()
    rejections = np.zeros(len(lags), dtype=int)
    for i in range(replications):
        try:
            gen = GeneratorConfig(T=T, burn_in=burn_in, rng=RngStream(master_seed, i))
            series = generate(model, gen)
            covs = dft_covariances(series, lags=lags, kernel=kernel,
                                   correction=corr_spec, ridge_factor=ridge_factor)
            stats = T * np.abs(covs.values) ** 2 / covs.corrections
            rejections += stats > threshold
        except StationarityTestError as exc:
            raise type(exc)(f"replication {i} (stream {i}): {exc}") from exc
    return rejections / replications


# ---------------------------------------------------------------------------
# power diagnostics for locally stationary alternatives
# ---------------------------------------------------------------------------


def fourier_coefficient(fn: Callable, r: int, grid: int = 512) -> complex:
    """Riemann-sum Fourier coefficient of a function on [0, 1]:

        a_r = (1/n) * sum_{t=1..n} fn(t/n) * exp(-2*pi*i*r*t/n).
    """
    if grid < 64:
        raise InvalidInputError(f"grid must be >= 64, got {grid}")
    t = np.arange(1, grid + 1)
    u = t / grid
    vals = np.asarray(fn(u), dtype=float)
    return complex(np.mean(vals * np.exp(-2j * np.pi * r * t / grid)))


def integrated_spectrum(f_local: Callable, omega_grid, u_points: int = 257) -> np.ndarray:
    """Time average of the local spectral density at each frequency."""
    w = np.asarray(omega_grid, dtype=float)
    u = np.linspace(0.0, 1.0, int(u_points))
    vals = _eval_local(f_local, u, w)
    out = _trapz(vals, u, axis=0)
    if np.any(out <= 0.0):
        raise DegenerateSpectrumError("integrated spectrum is not strictly positive")
    return out


def _eval_local(f_local, u, w) -> np.ndarray:
    vals = np.asarray(f_local(u[:, None], w[None, :]), dtype=float)
    if vals.shape != (u.size, w.size):
        vals = np.broadcast_to(vals, (u.size, w.size)).copy()
    if not np.all(np.isfinite(vals)):
        raise DegenerateSpectrumError("local spectrum produced non-finite values")
    if np.any(vals < 0.0):
        raise DegenerateSpectrumError("local spectrum produced negative values")
    return vals


def noncentrality(f_local: Callable, r: int, u_points: int = 257,
                  omega_points: int = 513, T: Optional[int] = None) -> complex:
    """Limit of the standardized DFT covariance under local stationarity.

    Computes

        B(r) = (2*pi)**-1 * integral over [0, 2pi] of
               [fbar(w) * fbar(w + w_r)]**-0.5
               * integral_0^1 f(u, w) exp(-2*pi*i*r*u) du  dw

    where fbar is the integrated spectrum. With ``T`` given, w_r = 2*pi*r/T;
    otherwise w_r = 0, the limit for fixed r as T grows. B vanishes exactly
    when f does not depend on u, and its magnitude at lag r drives the
    test's power there.
    """
    if u_points < 128 or omega_points < 256:
        raise InvalidInputError(
            f"quadrature grid must be at least 128 x 256, got {u_points} x {omega_points}"
        )
    if r == 0:
        raise InvalidInputError("lag r must be nonzero")
    u = np.linspace(0.0, 1.0, int(u_points))
    w = np.linspace(0.0, _TWO_PI, int(omega_points))
    vals = _eval_local(f_local, u, w)
    fbar = _trapz(vals, u, axis=0)
    if np.any(fbar < 1e-10):
        raise DegenerateSpectrumError("integrated spectrum below 1e-10")
    if T is None:
        denom = fbar
    else:
        w_r = _TWO_PI * r / T
        shifted = _eval_local(f_local, u, (w + w_r) % _TWO_PI)
        fbar_shift = _trapz(shifted, u, axis=0)
        if np.any(fbar_shift < 1e-10):
            raise DegenerateSpectrumError("integrated spectrum below 1e-10")
        denom = np.sqrt(fbar * fbar_shift)
    integrand = vals * np.exp(-2j * np.pi * r * u)[:, None] / denom[None, :]
    return complex(trapezoid_2d_values(integrand, u, w) / _TWO_PI)


@dataclass(frozen=True)
class PowerProfile:
    """Noncentrality diagnostics over a set of lags.

    ``mu`` stores the mean vector with real and imaginary parts interleaved:
    (Re B(r_1), Im B(r_1), Re B(r_2), Im B(r_2), ...).
    """

    lags: tuple[int, ...]
    B_values: np.ndarray
    mu: np.ndarray
    sigma_fourier: Optional[np.ndarray] = None


def power_profile(f_local: Callable, lags, u_points: int = 257,
                  omega_points: int = 513, T: Optional[int] = None,
                  sigma: Optional[Callable] = None,
                  sigma_grid: int = 512) -> PowerProfile:
    """Noncentrality B(r) per lag, with optional scale-function Fourier
    coefficients for comparison."""
    lags = tuple(int(r) for r in lags)
    B = np.array([noncentrality(f_local, r, u_points, omega_points, T) for r in lags])
    mu = np.empty(2 * len(lags))
    mu[0::2] = B.real
    mu[1::2] = B.imag
    coeffs = None
    if sigma is not None:
        coeffs = np.array([fourier_coefficient(sigma, r, sigma_grid) for r in lags])
    return PowerProfile(lags=lags, B_values=B, mu=mu, sigma_fourier=coeffs)
