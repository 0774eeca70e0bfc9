"""Likelihood, derivatives and estimators for the Ewens-Pitman partition.

The log-likelihood at (alpha, theta) = (x, y) is

    l_n(x, y) = sum_{i<K} log(y + i x) - sum_{i<n} log(y + i) + sum_j S_j sum_{i<j} log(i - x).

The first two sums are evaluated together as sum_{i<K} log((y+ix)/(y+i))
minus the leftover terms i = K..n-1, which avoids cancellation when y is
large. Inner sums over block sizes use log-gamma / digamma / trigamma
differences so one evaluation costs O(K + number of distinct sizes).
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateStatsError, DomainError
from .mittag import gmtl_moment
from .sibuya import DEFAULT_POLICY, fisher_info_sibuya
from .specfun import digamma, f_alpha_prime, trigamma

_DIRECT_SUM_MAX = 256


@dataclass(frozen=True)
class FitConfig:
    alpha_lo: float = 1e-4
    alpha_hi: float = 1.0 - 1e-4
    root_tol: float = 1e-10
    max_iter: int = 200
    grid_points: int = 12

    def __post_init__(self):
        if not 0.0 < self.alpha_lo < self.alpha_hi < 1.0:
            raise DomainError("need 0 < alpha_lo < alpha_hi < 1")
        if not self.root_tol > 0 or self.max_iter < 1 or self.grid_points < 2:
            raise DomainError("root_tol, max_iter and grid_points must be positive")


@dataclass
class FitResult:
    alpha_hat: float
    theta_hat: Optional[float]
    k: int
    n: int
    fisher_at_hat: float
    converged: bool
    boundary_hit: bool
    method: str
    theta_plugin: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "method": self.method,
            "alpha_hat": self.alpha_hat,
            "theta_hat": self.theta_hat,
            "theta_plugin": self.theta_plugin,
            "n": self.n,
            "k": self.k,
            "fisher_at_hat": self.fisher_at_hat,
            "converged": self.converged,
            "boundary_hit": self.boundary_hit,
            "diagnostics": self.diagnostics,
        }


class _Prepared(NamedTuple):
    n: int
    k: int
    i: np.ndarray        # 1..K-1
    sizes: np.ndarray    # distinct block sizes >= 2
    counts: np.ndarray   # matching S_{n,j}


@lru_cache(maxsize=64)
def _prepare(stats):
    sizes = stats.sizes
    counts = stats.counts
    big = sizes >= 2
    return _Prepared(
        stats.n, stats.k,
        np.arange(1, stats.k, dtype=float),
        sizes[big].astype(float), counts[big].astype(float),
    )


def _check_point(x, y):
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    if not y > -x:
        raise DomainError(f"y must exceed -x, got y={y!r} with x={x!r}")


def _log_rising(a, d):
    # sum_{i=0}^{d-1} log(a + i)
    if d <= 0:
        return 0.0
    if d <= _DIRECT_SUM_MAX:
        return float(np.sum(np.log(a + np.arange(d))))
    return float(gammaln(a + d) - gammaln(a))


def _harmonic(a, d, power=1):
    # sum_{i=0}^{d-1} (a + i)^{-power}
    if d <= 0:
        return 0.0
    if d <= _DIRECT_SUM_MAX:
        return float(np.sum((a + np.arange(d)) ** -power))
    if power == 1:
        return digamma(a + d) - digamma(a)
    return trigamma(a) - trigamma(a + d)


def log_likelihood(stats, x, y):
    """Exact log-likelihood l_n(x, y) of the block-size statistic."""
    _check_point(x, y)
    pr = _prepare(stats)
    i = pr.i
    head = np.sum(np.log1p(-i * (1.0 - x) / (y + i))) if pr.k > 1 else 0.0
    rest = _log_rising(y + pr.k, pr.n - pr.k)
    blocks = np.sum(pr.counts * (gammaln(pr.sizes - x) - gammaln(1.0 - x)))
    return float(head - rest + blocks)


def score(stats, x, y):
    """(d/dx, d/dy) of the log-likelihood."""
    _check_point(x, y)
    pr = _prepare(stats)
    i = pr.i
    yi = y + i * x
    dx = np.sum(i / yi) - np.sum(pr.counts * (digamma(pr.sizes - x) - digamma(1.0 - x)))
    # sum_{i<K} [1/(y+ix) - 1/(y+i)] - sum_{i=K}^{n-1} 1/(y+i)
    dy = np.sum((1.0 - x) * i / (yi * (y + i))) - _harmonic(y + pr.k, pr.n - pr.k)
    return float(dx), float(dy)


def hessian(stats, x, y):
    """2x2 matrix of second derivatives [[l_xx, l_xy], [l_xy, l_yy]]."""
    _check_point(x, y)
    pr = _prepare(stats)
    i = pr.i
    yi = y + i * x
    yi2 = yi * yi
    dxx = -np.sum(i * i / yi2) - np.sum(pr.counts * (trigamma(1.0 - x) - trigamma(pr.sizes - x)))
    dxy = -np.sum(i / yi2)
    # (y+i)^2 - (y+ix)^2 = i (1-x) (2y + i + ix)
    dyy = -np.sum(i * (1.0 - x) * (2.0 * y + i + i * x) / (yi2 * (y + i) ** 2)) + _harmonic(
        y + pr.k, pr.n - pr.k, power=2
    )
    return np.array([[dxx, dxy], [dxy, dyy]])


class ThetaThreshold(NamedTuple):
    value: float
    degenerate: Optional[str]


def theta_threshold(stats):
    """Theta_n = K(K-1) / (2 sum_{j>=2} S_j H_{j-1}); a QMLE root exists iff 1<K<n and theta* < Theta_n."""
    if stats.k == 1:
        return ThetaThreshold(0.0, "K_n=1")
    pr = _prepare(stats)
    if len(pr.sizes) == 0:
        return ThetaThreshold(math.inf, "K_n=n")
    denom = 2.0 * np.sum(pr.counts * (digamma(pr.sizes) - digamma(1.0)))
    return ThetaThreshold(float(stats.k * (stats.k - 1) / denom), None)


def _require_nondegenerate(stats):
    if stats.k <= 1 or stats.k >= stats.n:
        raise DegenerateStatsError(
            f"estimation needs 1 < K_n < n, got K_n={stats.k}, n={stats.n}"
        )


# --------------------------------------------------------------------------
# safeguarded Newton on a bracket
# --------------------------------------------------------------------------

def _solve_decreasing(fdf, lo, hi, x0, ftol, max_iter, origin=None):
    """Root of a function that is positive at lo and negative at hi.

    Newton steps are taken when they stay strictly inside the current
    bracket; otherwise the bracket is bisected. With ``origin`` set the
    bisection is geometric in (x - origin), for brackets spanning many
    orders of magnitude.
    """
    x = x0 if x0 is not None and lo < x0 < hi else None
    f = df = None
    for it in range(1, max_iter + 1):
        if x is None:
            if origin is not None and (hi - origin) > 4.0 * (lo - origin):
                x = origin + math.sqrt((lo - origin) * (hi - origin))
            else:
                x = 0.5 * (lo + hi)
        f, df = fdf(x)
        if f > 0:
            lo = x
        else:
            hi = x
        scale = max(1.0, abs(x))
        step = -f / df if df < 0 else math.inf
        if abs(f) <= ftol and abs(step) <= 1e-10 * scale:
            return x, f, it
        if hi - lo <= 4e-16 * scale:
            return x, f, it
        nx = x + step
        x = nx if lo < nx < hi else None
    return x if x is not None else 0.5 * (lo + hi), f, max_iter


# --------------------------------------------------------------------------
# profile solver for theta
# --------------------------------------------------------------------------

def _phi(stats, x):
    # (d/dy l, d^2/dy^2 l) at fixed x, without the x-derivative terms
    pr = _prepare(stats)
    i = pr.i
    ix = i * x
    d = pr.n - pr.k

    def fdf(y):
        a = 1.0 / (y + ix)
        b = 1.0 / (y + i)
        diff = (1.0 - x) * i * a * b  # a - b without cancellation
        f = np.sum(diff) - _harmonic(y + pr.k, d)
        df = -np.dot(diff, a + b) + _harmonic(y + pr.k, d, power=2)
        return float(f), float(df)
    return fdf


def profile_theta(stats, x, cfg=FitConfig(), y0=None, info=None):
    """Unique root y_n(x) > -x of d/dy l_n(x, y) = 0 (requires 1 < K_n < n)."""
    _require_nondegenerate(stats)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    fdf = _phi(stats, x)
    eps = 1e-3 * x
    for _ in range(80):
        if fdf(-x + eps)[0] > 0:
            break
        eps /= 16.0
    else:
        raise ArithmeticError("could not bracket the profile root from the left")
    lo = -x + eps
    hi = max(float(stats.k), 1.0)
    while fdf(hi)[0] >= 0:
        hi *= 2.0
        if hi > 2.0**60:
            raise ArithmeticError("profile root for theta exceeds 2^60")
    y, f, iters = _solve_decreasing(fdf, lo, hi, y0, cfg.root_tol, cfg.max_iter, origin=-x)
    if info is not None:
        info["iterations"] = iters
        info["residual"] = f
    return float(y)


def profile_log_likelihood(stats, x, cfg=FitConfig()):
    return log_likelihood(stats, x, profile_theta(stats, x, cfg))


# --------------------------------------------------------------------------
# estimators
# --------------------------------------------------------------------------

def _fisher(alpha):
    return fisher_info_sibuya(alpha, DEFAULT_POLICY)


def fit_qmle(stats, theta_star, cfg=FitConfig()):
    """MLE of alpha with theta fixed at ``theta_star``.

    The score in x is strictly decreasing, so the root is bracketed by the
    admissible interval ((-theta*) v 0 v alpha_lo, alpha_hi). When no root
    lies inside, the maximizer is the boundary the score points to.
    """
    if not theta_star > -cfg.alpha_hi:
        raise DomainError(f"theta_star must exceed -alpha_hi, got {theta_star!r}")
    _require_nondegenerate(stats)
    threshold = theta_threshold(stats).value
    lower = max(cfg.alpha_lo, -theta_star)
    open_lower = -theta_star >= cfg.alpha_lo
    if open_lower:
        lower = -theta_star + 1e-12 * max(1.0, abs(theta_star))
    upper = cfg.alpha_hi
    if lower >= upper:
        raise DomainError("theta_star leaves an empty range for alpha")

    def fdf(x):
        return score(stats, x, theta_star)[0], hessian(stats, x, theta_star)[0, 0]

    diag = {"theta_threshold": threshold, "existence_condition": bool(theta_star < threshold)}
    s_lo, s_hi = fdf(lower)[0], fdf(upper)[0]
    if s_lo <= 0 or s_hi >= 0:
        alpha_hat = lower if s_lo <= 0 else upper
        diag.update(iterations=0, residual=s_lo if s_lo <= 0 else s_hi)
        return FitResult(alpha_hat, None, stats.k, stats.n, _fisher(alpha_hat), True, True,
                         "qmle", theta_star, diag)
    x, f, iters = _solve_decreasing(fdf, lower, upper, None, cfg.root_tol * stats.k, cfg.max_iter)
    x, f = float(x), float(f)
    diag.update(iterations=iters, residual=f)
    converged = abs(f) <= cfg.root_tol * stats.k or iters < cfg.max_iter
    return FitResult(x, None, stats.k, stats.n, _fisher(x), converged, False, "qmle", theta_star, diag)


def fit_mle(stats, cfg=FitConfig()):
    """Joint MLE of (alpha, theta) by root finding on the profile score.

    The profile score Psi_n(x) = d/dx l_n(x, y_n(x)) / K_n is scanned on a
    coarse grid over [alpha_lo, alpha_hi]; every + to - sign change is
    refined by safeguarded Newton using the total derivative
    (l_xx - l_xy^2 / l_yy) / K_n. The highest profile likelihood root wins.
    """
    _require_nondegenerate(stats)
    k = stats.k
    cache = {}

    def profile(x, y0=None):
        if x not in cache:
            y = profile_theta(stats, x, cfg, y0)
            dx, _ = score(stats, x, y)
            h = hessian(stats, x, y)
            slope = (h[0, 0] - h[0, 1] ** 2 / h[1, 1]) / k
            cache[x] = (dx / k, slope, y)
        return cache[x]

    grid = np.linspace(cfg.alpha_lo, cfg.alpha_hi, cfg.grid_points)
    vals = []
    y_prev = None
    for x in grid:
        psi, _, y_prev = profile(float(x), y_prev)
        vals.append(psi)
    vals = np.array(vals)
    down = [int(g) for g in np.flatnonzero((vals[:-1] > 0) & (vals[1:] <= 0))]
    up = [int(g) for g in np.flatnonzero((vals[:-1] < 0) & (vals[1:] >= 0))]
    diag = {
        "grid_sign_changes": len(down) + len(up),
        "grid_downcrossings": [[float(grid[g]), float(grid[g + 1])] for g in down],
    }

    if not down:
        candidates = [float(grid[0]), float(grid[-1])]
        lls = [log_likelihood(stats, x, profile(x)[2]) for x in candidates]
        alpha_hat = candidates[int(np.argmax(lls))]
        theta_hat = profile(alpha_hat)[2]
        diag.update(iterations=0, residual=profile(alpha_hat)[0])
        return FitResult(alpha_hat, theta_hat, k, stats.n, _fisher(alpha_hat), True, True,
                         "mle", None, diag)

    roots = []
    for g in down:
        state = {"y": profile(float(grid[g]))[2]}

        def fdf(x, state=state):
            psi, slope, y = profile(x, state["y"])
            state["y"] = y
            return psi, slope

        x, f, iters = _solve_decreasing(fdf, float(grid[g]), float(grid[g + 1]), None,
                                        cfg.root_tol, cfg.max_iter)
        roots.append((float(x), float(f), iters))
    lls = [log_likelihood(stats, x, profile(x)[2]) for x, _, _ in roots]
    best = int(np.argmax(lls))
    alpha_hat, f, iters = roots[best]
    _, slope, theta_hat = profile(alpha_hat)
    diag.update(
        iterations=iters,
        residual=f,
        roots=[r[0] for r in roots],
        slope_at_root=float(slope),
        unique_certificate=bool(slope < 0 and len(roots) == 1),
    )
    converged = abs(f) <= cfg.root_tol or iters < cfg.max_iter
    return FitResult(alpha_hat, theta_hat, k, stats.n, _fisher(alpha_hat), converged, False,
                     "mle", None, diag)


def asymptotic_fisher(params, n, policy=DEFAULT_POLICY):
    """Leading terms (I_aa, I_at, I_tt) of the Fisher information after n balls."""
    a, t = params.alpha, params.theta
    i_aa = n**a * gmtl_moment(params, 1.0) * fisher_info_sibuya(a, policy)
    i_at = math.log(n) / a
    i_tt = f_alpha_prime(a, t / a) / a**2
    return i_aa, i_at, i_tt
