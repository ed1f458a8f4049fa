from .inference import (
    ChiSquareResult,
    Decision,
    PhaseEstimate,
    UnderSampledError,
    chi_square_gof,
    empirical,
    likelihood_ratio_decision,
    log_likelihood,
    mle_phase,
    phase_preimages,
    required_samples,
    wilson_interval,
)
from .special import chi2_sf, gammaincc, norm_cdf, norm_ppf

__all__ = [
    "ChiSquareResult",
    "Decision",
    "PhaseEstimate",
    "UnderSampledError",
    "chi2_sf",
    "chi_square_gof",
    "empirical",
    "gammaincc",
    "likelihood_ratio_decision",
    "log_likelihood",
    "mle_phase",
    "norm_cdf",
    "norm_ppf",
    "phase_preimages",
    "required_samples",
    "wilson_interval",
]
