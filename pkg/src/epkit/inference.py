"""Confidence intervals and the sparsity test built on the fitted alpha."""
import math
import warnings
from dataclasses import asdict, dataclass

from scipy.special import ndtr, ndtri

from .errors import DomainError
from .estimate import FitConfig, fit_mle

SMALL_K_WARNING = 50


@dataclass(frozen=True)
class ConfidenceInterval:
    lo: float
    hi: float
    level: float
    alpha_hat: float
    k: int
    fisher: float

    @property
    def width(self):
        return self.hi - self.lo

    def to_dict(self):
        return asdict(self)


def _check_level(level):
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must lie in (0, 1), got {level!r}")


def _check_fit(fit):
    if not fit.converged:
        raise DomainError("fit did not converge")
    if fit.boundary_hit:
        raise DomainError("fit stopped at a search boundary; no Wald interval")


def normal_quantile(p):
    return float(ndtri(p))


def standard_error(fit):
    """1 / sqrt(K_n I_alpha_hat)."""
    return 1.0 / math.sqrt(fit.k * fit.fisher_at_hat)


def confidence_interval(fit, level=0.95):
    """Two-sided Wald interval alpha_hat -/+ z / sqrt(K_n I_alpha_hat), clipped to (0, 1)."""
    _check_level(level)
    _check_fit(fit)
    half = normal_quantile(0.5 + level / 2.0) * standard_error(fit)
    lo = max(fit.alpha_hat - half, 0.0)
    hi = min(fit.alpha_hat + half, 1.0)
    return ConfidenceInterval(lo, hi, level, fit.alpha_hat, fit.k, fit.fisher_at_hat)


def lower_confidence_bound(fit, level=0.95):
    """One-sided lower bound alpha_hat - z_level / sqrt(K_n I_alpha_hat), floored at 0."""
    _check_level(level)
    _check_fit(fit)
    return max(fit.alpha_hat - normal_quantile(level) * standard_error(fit), 0.0)


def standardized_error(fit, alpha_true):
    """sqrt(K_n I_alpha_hat) (alpha_hat - alpha_true); asymptotically N(0, 1)."""
    if not fit.converged:
        raise DomainError("fit did not converge")
    return (fit.alpha_hat - alpha_true) / standard_error(fit)


@dataclass(frozen=True)
class SparsityTestResult:
    mu: float
    delta: float
    z_stat: float
    critical: float
    reject: bool
    p_value: float
    alpha_hat: float
    k: int
    two_sided: bool = False

    def to_dict(self):
        return asdict(self)


def sparsity_test(stats, mu=2.0, delta=0.05, cfg=FitConfig(), two_sided=False):
    """Test H0: alpha <= 1/mu (not sparse) against H1: 1/mu < alpha < 1 (sparse).

    ``mu`` is the number of vertices per edge (2 for ordinary graphs). The
    statistic z = sqrt(K_n I_alpha_hat) (alpha_hat - 1/mu) is compared with
    the upper delta quantile of N(0, 1). With ``two_sided`` the null is
    alpha = 1/mu and |z| is compared with the upper delta/2 quantile.
    """
    if not mu >= 1:
        raise DomainError(f"mu must be at least 1, got {mu!r}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    if stats.k < SMALL_K_WARNING:
        warnings.warn(f"only K_n={stats.k} blocks; the normal approximation may be poor",
                      RuntimeWarning, stacklevel=2)
    fit = fit_mle(stats, cfg)
    z = (fit.alpha_hat - 1.0 / mu) / standard_error(fit)
    if two_sided:
        crit = normal_quantile(1.0 - delta / 2.0)
        p = 2.0 * float(ndtr(-abs(z)))
        reject = abs(z) > crit
    else:
        crit = normal_quantile(1.0 - delta)
        p = float(ndtr(-z))
        reject = z > crit
    return SparsityTestResult(float(mu), float(delta), float(z), crit, bool(reject), p,
                              float(fit.alpha_hat), fit.k, two_sided)
