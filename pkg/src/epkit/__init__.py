"""Estimation and simulation for the Ewens-Pitman partition in the regime 0 < alpha < 1."""
from .errors import DegenerateStatsError, DomainError, SamplingError, TruncationError
from .estimate import (
    FitConfig,
    FitResult,
    asymptotic_fisher,
    fit_mle,
    fit_qmle,
    hessian,
    log_likelihood,
    profile_theta,
    score,
    theta_threshold,
)
from .inference import confidence_interval, sparsity_test, standardized_error
from .mittag import gmtl_moment, gmtl_sample, stable_sample, theta_limit_sample
from .params import EpParams
from .partition import PartitionStats, simulate, simulate_trajectory
from .rng import RngSeed
from .sibuya import TruncationPolicy, fisher_info_sibuya, sibuya_pmf
from .specfun import digamma, f_alpha, f_alpha_inv, f_alpha_prime, trigamma

__version__ = "0.1.0"

__all__ = [
    "DegenerateStatsError", "DomainError", "SamplingError", "TruncationError",
    "FitConfig", "FitResult", "asymptotic_fisher", "fit_mle", "fit_qmle", "hessian",
    "log_likelihood", "profile_theta", "score", "theta_threshold",
    "confidence_interval", "sparsity_test", "standardized_error",
    "gmtl_moment", "gmtl_sample", "stable_sample", "theta_limit_sample",
    "EpParams", "PartitionStats", "simulate", "simulate_trajectory", "RngSeed",
    "TruncationPolicy", "fisher_info_sibuya", "sibuya_pmf",
    "digamma", "f_alpha", "f_alpha_inv", "f_alpha_prime", "trigamma",
]
