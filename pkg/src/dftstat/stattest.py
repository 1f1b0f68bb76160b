"""Stationarity test core.

The standardized DFT covariance at lag r is

    c_hat(r) = (1/T) * sum_{k=1..T} J(w_k) * conj(J(w_{k+r}))
                               / sqrt(fhat(w_k) * fhat(w_{k+r})),

with all frequency indices taken modulo T. Under second order stationarity
the standardized DFT sequence is close to uncorrelated, so sqrt(T) times the
real and imaginary parts of c_hat(r) are asymptotically standard normal (up
to a fourth-cumulant correction) and the Portmanteau statistic

    stat = T * sum_n |c_hat(r_n)|^2 / denom_n

is asymptotically chi-square with 2m degrees of freedom. Lags 0 and T/2 are
excluded: at those lags the two DFT factors coincide (or are conjugate) and
the covariance degenerates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateTransferError,
    InvalidCorrectionError,
    InvalidInputError,
    InvalidLagError,
    SegmentationDepthError,
)
from .numerics import chisq_sf, dft_canonical
from .spectral import KernelSpec, SpectralEstimate, smooth_spectral

_TWO_PI = 2.0 * math.pi

MIN_SERIES_LENGTH = 32
DEFAULT_LEVELS = (0.01, 0.05, 0.10)


def validate_lags(lags, T: int) -> tuple[int, ...]:
    """Check every lag lies in 1..T-1 and avoids the excluded value T/2."""
    out = []
    for r in lags:
        if int(r) != r:
            raise InvalidLagError(f"lag must be an integer, got {r!r}")
        r = int(r)
        if r < 1 or r > T - 1:
            raise InvalidLagError(f"lag {r} outside the valid range 1..{T - 1}")
        if T % 2 == 0 and r == T // 2:
            raise InvalidLagError(f"lag {r} equals T/2 and is excluded for T={T}")
        out.append(r)
    if not out:
        raise InvalidLagError("at least one lag is required")
    return tuple(out)


# ---------------------------------------------------------------------------
# standardized DFT covariances
# ---------------------------------------------------------------------------


def _cov_from_transform(J: np.ndarray, denom_vals: np.ndarray, lag: int) -> complex:
    # index i holds frequency k = i + 1; rolling by -lag pairs k with k + lag
    num = J * np.conj(np.roll(J, -lag))
    den = np.sqrt(denom_vals * np.roll(denom_vals, -lag))
    return complex(np.mean(num / den))


def dft_covariance(series, lag: int, spectral: SpectralEstimate) -> complex:
    """Standardized empirical covariance of the DFT at one lag.

    ``spectral`` must come from the same series (same grid length); the
    estimate's ridge guarantees a positive denominator.
    """
    x = np.asarray(series, dtype=float)
    T = x.size
    if spectral.T != T:
        raise InvalidInputError(
            f"spectral estimate built for T={spectral.T}, series has T={T}"
        )
    (lag,) = validate_lags([lag], T)
    return _cov_from_transform(dft_canonical(x), np.asarray(spectral.values), lag)


def dft_covariance_true_spectrum(series, lag: int, spectrum) -> complex:
    """Covariance standardized by a caller-supplied spectral density.

    ``spectrum`` holds exact values f(w_k) on the canonical grid in k = 1..T
    order; useful when the true (or integrated) spectrum is known.
    """
    x = np.asarray(series, dtype=float)
    f = np.asarray(spectrum, dtype=float)
    T = x.size
    if f.shape != (T,):
        raise InvalidInputError(f"spectrum must have shape ({T},), got {f.shape}")
    if np.any(f <= 0.0):
        raise InvalidInputError("supplied spectrum must be strictly positive")
    (lag,) = validate_lags([lag], T)
    return _cov_from_transform(dft_canonical(x), f, lag)


@dataclass(frozen=True)
class DftCovariances:
    """Standardized DFT covariances at several lags plus their correction
    denominators 1 + kappa_r / 2 (all one in Gaussian mode)."""

    lags: tuple[int, ...]
    values: np.ndarray        # complex, one entry per lag
    corrections: np.ndarray   # positive reals, aligned with lags
    T: int


# ---------------------------------------------------------------------------
# transfer phase and the fourth-cumulant correction
# ---------------------------------------------------------------------------


def _transfer(psi: np.ndarray, omega):
    """A(w) = (2*pi)**-0.5 * sum_j psi_j exp(i*w*j) for a causal filter."""
    w = np.asarray(omega, dtype=float)
    j = np.arange(psi.size)
    vals = np.exp(1j * np.multiply.outer(w, j)) @ psi / math.sqrt(_TWO_PI)
    return vals


def transfer_phase(psi, omega):
    """Phase of the filter transfer function via the two-argument arctangent.

    Raises when the transfer modulus drops below 1e-12 (phase undefined).
    Accepts scalar or array omega.
    """
    p = np.asarray(psi, dtype=float)
    if p.ndim != 1 or p.size == 0 or p[0] == 0.0:
        raise InvalidInputError("psi must be a nonempty coefficient vector with psi[0] != 0")
    a = _transfer(p, omega)
    if np.any(np.abs(a) < 1e-12):
        raise DegenerateTransferError("transfer function modulus below 1e-12")
    phases = np.arctan2(a.imag, a.real)
    return float(phases) if np.isscalar(omega) else phases


def phase_coherence(psi, x: float, grid: int = 2048) -> float:
    """Squared modulus of the mean phase twist over one frequency period.

    Computes |(2*pi)**-1 * integral_0^2pi exp(i*(phi(w) - phi(w+x))) dw|^2
    where phi is the transfer phase. Always in [0, 1]; equals 1 at x = 0.
    The integrand is evaluated as A(w) * conj(A(w+x)) / |A(w) A(w+x)| so no
    branch choice for phi is needed.
    """
    if grid < 1024:
        raise InvalidInputError(f"quadrature grid must be >= 1024, got {grid}")
    p = np.asarray(psi, dtype=float)
    if p.ndim != 1 or p.size == 0 or p[0] == 0.0:
        raise InvalidInputError("psi must be a nonempty coefficient vector with psi[0] != 0")
    w = _TWO_PI * np.arange(grid) / grid  # periodic integrand: left rule is exact trapezoid
    a0 = _transfer(p, w)
    a1 = _transfer(p, w + x)
    mod = np.abs(a0) * np.abs(a1)
    if np.any(mod < 1e-24):
        raise DegenerateTransferError("transfer function modulus below 1e-12")
    mean = np.mean(a0 * np.conj(a1) / mod)
    return min(float(abs(mean) ** 2), 1.0)


@dataclass(frozen=True)
class CorrectionSpec:
    """How to build the denominators 1 + kappa_r / 2 of the test statistic.

    Modes
    -----
    gaussian
        kappa_r = 0 for every lag (the default; exact for Gaussian
        innovations, whose fourth cumulant vanishes).
    linear_plugin
        The linear-process form kappa_r = kappa4 * phase_coherence(psi, w_r)
        with user-supplied MA(inf) coefficients psi and innovation fourth
        cumulant kappa4.
    user
        Explicit kappa_r values, one per lag.
    """

    mode: str = "gaussian"
    psi: tuple = ()
    kappa4: float = 0.0
    kappa: tuple = ()

    def __post_init__(self):
        if self.mode not in ("gaussian", "linear_plugin", "user"):
            raise InvalidInputError(f"unknown correction mode {self.mode!r}")
        if self.mode == "linear_plugin":
            p = np.asarray(self.psi, dtype=float)
            if p.size == 0 or not np.all(np.isfinite(p)) or p[0] == 0.0:
                raise InvalidInputError(
                    "linear_plugin correction needs finite psi with psi[0] != 0"
                )
        if self.mode == "user" and len(self.kappa) == 0:
            raise InvalidInputError("user correction needs explicit kappa values")

    @classmethod
    def gaussian(cls) -> "CorrectionSpec":
        return cls()

    @classmethod
    def linear(cls, psi, kappa4: float) -> "CorrectionSpec":
        return cls(mode="linear_plugin", psi=tuple(float(v) for v in psi),
                   kappa4=float(kappa4))

    @classmethod
    def user(cls, kappa) -> "CorrectionSpec":
        return cls(mode="user", kappa=tuple(float(v) for v in kappa))


def correction_denominators(spec: CorrectionSpec, lags, T: int) -> np.ndarray:
    """Denominators 1 + kappa_r / 2 for each requested lag."""
    lags = tuple(int(r) for r in lags)
    if spec.mode == "gaussian":
        denom = np.ones(len(lags))
    elif spec.mode == "linear_plugin":
        denom = np.array(
            [1.0 + 0.5 * spec.kappa4 * phase_coherence(spec.psi, _TWO_PI * r / T)
             for r in lags]
        )
    else:  # user
        if len(spec.kappa) != len(lags):
            raise InvalidInputError(
                f"user correction has {len(spec.kappa)} kappa values for {len(lags)} lags"
            )
        denom = 1.0 + 0.5 * np.asarray(spec.kappa, dtype=float)
    if np.any(denom <= 0.0):
        raise InvalidCorrectionError("correction denominator is not positive")
    return denom


# ---------------------------------------------------------------------------
# the Portmanteau statistic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestResult:
    """Outcome of one stationarity test plus the configuration that made it."""

    statistic: float
    dof: int
    p_value: float
    reject_at: dict[float, bool]
    lags: tuple[int, ...]
    T: int
    kernel: KernelSpec
    ridge_factor: float
    correction_mode: str
    demeaned: bool


def _prepare_transform(series, kernel, ridge_factor, demean):
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError(f"series must be 1-d, got shape {x.shape}")
    T = x.size
    if T < MIN_SERIES_LENGTH:
        raise InvalidInputError(
            f"series too short for the test: T={T} < {MIN_SERIES_LENGTH}"
        )
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("series contains non-finite values")
    if np.ptp(x) == 0.0:
        raise InvalidInputError("degenerate series: zero variance")
    if demean:
        x = x - x.mean()
    J = dft_canonical(x)
    est = smooth_spectral(np.abs(J) ** 2, kernel=kernel, ridge_factor=ridge_factor)
    return x, J, est


def _covariances_and_estimate(series, lags, m, kernel, correction, ridge_factor, demean):
    x = np.asarray(series, dtype=float)
    _, J, est = _prepare_transform(x, kernel, ridge_factor, demean)
    T = x.size
    lags = validate_lags(range(1, m + 1) if lags is None else lags, T)
    corr = correction_denominators(correction or CorrectionSpec(), lags, T)
    vals = np.array([_cov_from_transform(J, est.values, r) for r in lags])
    return DftCovariances(lags=lags, values=vals, corrections=corr, T=T), est


def dft_covariances(series, lags=None, m: int = 4, kernel: KernelSpec | None = None,
                    correction: CorrectionSpec | None = None,
                    ridge_factor: float = 1e-3, demean: bool = True) -> DftCovariances:
    """Standardized covariances (and denominators) at several lags.

    The DFT and the spectral estimate are computed once and shared across
    all lags, so scanning many lags costs O(T) per extra lag.
    """
    covs, _ = _covariances_and_estimate(series, lags, m, kernel, correction,
                                        ridge_factor, demean)
    return covs


def stationarity_test(series, lags=None, m: int = 4, kernel: KernelSpec | None = None,
                      correction: CorrectionSpec | None = None,
                      ridge_factor: float = 1e-3, demean: bool = True,
                      levels=DEFAULT_LEVELS) -> TestResult:
    """Portmanteau test of second order stationarity.

    Parameters
    ----------
    series : array_like
        Observations, length at least 32. The sample mean is removed before
        the transform unless ``demean`` is False.
    lags : iterable of int, optional
        Lags r_1..r_m; default is the consecutive lags 1..m.
    m : int
        Number of consecutive lags when ``lags`` is not given.
    kernel : KernelSpec, optional
        Smoothing kernel for the spectral denominator (default daniell with
        automatic bandwidth T**-1/3).
    correction : CorrectionSpec, optional
        Fourth-cumulant correction; default Gaussian (no correction).
    ridge_factor : float
        Relative ridge for the spectral floor.
    demean : bool
        Subtract the sample mean first (annihilates the zero-frequency DFT).
    levels : iterable of float
        Significance levels for the decision map.

    Returns
    -------
    TestResult
        statistic, degrees of freedom 2m, p-value and per-level decisions.
    """
    covs, est = _covariances_and_estimate(series, lags, m, kernel, correction,
                                          ridge_factor, demean)
    stat = float(covs.T * np.sum(np.abs(covs.values) ** 2 / covs.corrections))
    dof = 2 * len(covs.lags)
    p = chisq_sf(stat, dof)
    return TestResult(
        statistic=stat,
        dof=dof,
        p_value=p,
        reject_at={float(a): bool(p < a) for a in levels},
        lags=covs.lags,
        T=covs.T,
        kernel=est.kernel,  # bandwidth resolved against this T
        ridge_factor=ridge_factor,
        correction_mode=(correction or CorrectionSpec()).mode,
        demeaned=demean,
    )


# ---------------------------------------------------------------------------
# recursive segmentation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SegmentBlock:
    """One tested block: half-open index range [start, stop) of the input."""

    depth: int
    index: int
    start: int
    stop: int
    result: TestResult


@dataclass(frozen=True)
class SegmentReport:
    """Tests on nested dyadic blocks, depth 0 (full series) through depth d."""

    T: int
    depth: int
    blocks: tuple[SegmentBlock, ...] = field(repr=False)

    def at_depth(self, d: int) -> tuple[SegmentBlock, ...]:
        return tuple(b for b in self.blocks if b.depth == d)


def _block_bounds(T: int, depth: int) -> list[tuple[int, int]]:
    n = 2 ** depth
    base = T // n
    bounds = [(i * base, (i + 1) * base) for i in range(n - 1)]
    bounds.append(((n - 1) * base, T))  # remainder goes to the last block
    return bounds


def segmented_test(series, depth: int, lags=None, m: int = 4,
                   kernel: KernelSpec | None = None,
                   correction: CorrectionSpec | None = None,
                   ridge_factor: float = 1e-3, demean: bool = True,
                   levels=DEFAULT_LEVELS) -> SegmentReport:
    """Run the stationarity test on every dyadic block up to ``depth``.

    Depth j splits the series into 2**j contiguous blocks of equal length
    (any remainder joins the last block); depth 0 is the full-series test.
    When the kernel bandwidth is automatic it adapts to each block length.
    """
    x = np.asarray(series, dtype=float)
    T = x.size
    if depth < 0:
        raise InvalidInputError(f"depth must be >= 0, got {depth}")
    leaf = min(b - a for a, b in _block_bounds(T, depth))
    if leaf < MIN_SERIES_LENGTH:
        raise SegmentationDepthError(
            f"depth {depth} gives leaf blocks of length {leaf} < {MIN_SERIES_LENGTH}"
        )
    blocks = []
    for d in range(depth + 1):
        for i, (a, b) in enumerate(_block_bounds(T, d)):
            res = stationarity_test(x[a:b], lags=lags, m=m, kernel=kernel,
                                    correction=correction, ridge_factor=ridge_factor,
                                    demean=demean, levels=levels)
            blocks.append(SegmentBlock(depth=d, index=i, start=a, stop=b, result=res))
    return SegmentReport(T=T, depth=depth, blocks=tuple(blocks))
