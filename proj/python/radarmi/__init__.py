"""Mutual-information-optimal waveform design for widely spaced MIMO radar.

Thin Python facade over the compiled core: Hermitian eigen-tools, majorization
and Schur-order analysis, water-filling waveform design, the spatial channel
model, and the two experiment sweeps.
"""

from radarmi._core import (
    ConfigError,
    NumericalError,
    __version__,
    decorrelation_report,
    eigh,
    fiedler_bounds,
    kron,
    log_det_psd,
    majorizes,
    monte_carlo_target_covariance,
    more_correlated,
    mutual_information,
    optimal_waveform,
    schur_scan,
    schur_threshold,
    spectral_mi,
    sweep_correlation_csv,
    sweep_frequency_csv,
    target_covariance,
    vec,
    waterfill,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "__version__",
    "decorrelation_report",
    "eigh",
    "fiedler_bounds",
    "kron",
    "log_det_psd",
    "majorizes",
    "monte_carlo_target_covariance",
    "more_correlated",
    "mutual_information",
    "optimal_waveform",
    "schur_scan",
    "schur_threshold",
    "spectral_mi",
    "sweep_correlation_csv",
    "sweep_frequency_csv",
    "target_covariance",
    "vec",
    "waterfill",
]
