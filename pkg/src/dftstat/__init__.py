"""DFT-based Portmanteau test for second order stationarity of a time
series, with benchmark process generators, Monte Carlo drivers and power
diagnostics for locally stationary alternatives."""

from .errors import (
    BandwidthTooSmallError,
    BandwidthWarning,
    ComputationError,
    DegenerateSpectrumError,
    DegenerateTransferError,
    InputError,
    InvalidCorrectionError,
    InvalidInputError,
    InvalidLagError,
    NumericalError,
    SegmentationDepthError,
    StabilityError,
    StationarityTestError,
)
from .numerics import (
    FrequencyGrid,
    RngStream,
    chisq_quantile,
    chisq_sf,
    dft_canonical,
    dft_direct,
    gauss_stream,
    trapezoid_2d,
)
from .spectral import KernelSpec, SpectralEstimate, periodogram, smooth_spectral
from .stattest import (
    CorrectionSpec,
    DftCovariances,
    SegmentBlock,
    SegmentReport,
    TestResult,
    correction_denominators,
    dft_covariance,
    dft_covariance_true_spectrum,
    dft_covariances,
    phase_coherence,
    segmented_test,
    stationarity_test,
    transfer_phase,
)
from .simulate import (
    ArmaSpec,
    ChangepointArSpec,
    GeneratorConfig,
    ModulatedNoiseSpec,
    PRESET_NAMES,
    TvInnovationArSpec,
    generate,
    local_spectrum,
    model_preset,
    sigma_piecewise6,
    spec_from_dict,
)
from .experiments import (
    McConfig,
    McReport,
    PowerProfile,
    empirical_density,
    fourier_coefficient,
    integrated_spectrum,
    lag_scan,
    noncentrality,
    power_profile,
    rejection_rate,
)

__version__ = "0.1.0"

__all__ = [
    "ArmaSpec",
    "BandwidthTooSmallError",
    "BandwidthWarning",
    "ChangepointArSpec",
    "ComputationError",
    "CorrectionSpec",
    "DegenerateSpectrumError",
    "DegenerateTransferError",
    "DftCovariances",
    "FrequencyGrid",
    "GeneratorConfig",
    "InputError",
    "InvalidCorrectionError",
    "InvalidInputError",
    "InvalidLagError",
    "KernelSpec",
    "McConfig",
    "McReport",
    "ModulatedNoiseSpec",
    "NumericalError",
    "PRESET_NAMES",
    "PowerProfile",
    "RngStream",
    "SegmentBlock",
    "SegmentReport",
    "SegmentationDepthError",
    "SpectralEstimate",
    "StabilityError",
    "StationarityTestError",
    "TestResult",
    "TvInnovationArSpec",
    "chisq_quantile",
    "chisq_sf",
    "correction_denominators",
    "dft_canonical",
    "dft_covariance",
    "dft_covariance_true_spectrum",
    "dft_covariances",
    "dft_direct",
    "empirical_density",
    "fourier_coefficient",
    "gauss_stream",
    "generate",
    "integrated_spectrum",
    "lag_scan",
    "local_spectrum",
    "model_preset",
    "noncentrality",
    "periodogram",
    "phase_coherence",
    "power_profile",
    "rejection_rate",
    "segmented_test",
    "sigma_piecewise6",
    "smooth_spectral",
    "spec_from_dict",
    "stationarity_test",
    "trapezoid_2d",
    "transfer_phase",
]
