"""Positive stable and (generalized) Mittag-Leffler random variables.

S_alpha has Laplace transform exp(-lambda**alpha). Kanter's representation
writes it as

    S = (A(U) / E) ** ((1 - alpha) / alpha),
    A(u) = [sin(alpha pi u)**alpha * sin((1-alpha) pi u)**(1-alpha) / sin(pi u)] ** (1/(1-alpha))

with U uniform on (0, 1) and E standard exponential. M = S**(-alpha) =
(E / A(U))**(1 - alpha) is Mittag-Leffler(alpha). Tilting the law of M by
M**(theta/alpha) tilts the pair (U, E): E becomes Gamma(1 + c) and U gets
density proportional to A(u)**(-c), with c = theta (1 - alpha) / alpha.
A is increasing on (0, 1), so for theta >= 0 the U-marginal is sampled
exactly by rejection from the uniform law. For -alpha < theta < 0 the
identity M(alpha, theta) = B**alpha * M(alpha, theta + alpha), with
B ~ Beta(theta + alpha, 1 - alpha), shifts theta into the first case.
"""
import numpy as np
from scipy.special import gammaln

from .errors import DomainError, SamplingError
from .params import EpParams
from .rng import as_generator
from .specfun import f_alpha_inv

GmtlParam = EpParams

DEFAULT_MAX_ITER = 10**6


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def kanter_log_a(alpha, u):
    """log A(u) for Kanter's representation; increasing in u."""
    pu = np.pi * np.asarray(u, dtype=float)
    return (
        alpha * np.log(np.sin(alpha * pu))
        + (1.0 - alpha) * np.log(np.sin((1.0 - alpha) * pu))
        - np.log(np.sin(pu))
    ) / (1.0 - alpha)


def _kanter_log_a0(alpha):
    return (alpha * np.log(alpha) + (1.0 - alpha) * np.log1p(-alpha)) / (1.0 - alpha)


def _open_uniform(rng, size):
    u = rng.random(size)
    # Generator.random draws from [0, 1); zero is a measure-zero nuisance
    while np.any(u == 0.0):
        u[u == 0.0] = rng.random(np.count_nonzero(u == 0.0))
    return u


def _draw(size):
    return 1 if size is None else int(np.prod(size))


def _shape(x, size):
    return float(x[0]) if size is None else x.reshape(size)


def stable_sample(alpha, rng=None, size=None):
    """Positive alpha-stable draws with E[exp(-lam S)] = exp(-lam**alpha)."""
    _check_alpha(alpha)
    rng = as_generator(rng)
    m = _draw(size)
    u = _open_uniform(rng, m)
    e = rng.standard_exponential(m)
    s = np.exp((1.0 - alpha) / alpha * (kanter_log_a(alpha, u) - np.log(e)))
    return _shape(s, size)


def _tilted_u(alpha, c, m, rng, max_iter):
    # exact draws from density proportional to A(u)**(-c), c >= 0
    if c == 0.0:
        return _open_uniform(rng, m)
    la0 = _kanter_log_a0(alpha)
    out = np.empty(m)
    filled = 0
    proposed = 0
    budget = max_iter * m
    batch = m
    while filled < m:
        batch = min(batch, budget - proposed)
        if batch <= 0:
            raise SamplingError(f"GMtL rejection exceeded {max_iter} proposals per draw")
        u = _open_uniform(rng, batch)
        log_v = np.log(_open_uniform(rng, batch))
        keep = u[log_v <= -c * (kanter_log_a(alpha, u) - la0)]
        proposed += batch
        take = min(len(keep), m - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
        rate = max(filled / proposed, 1e-3)
        batch = int(min(max((m - filled) / rate * 1.2, 64), 10**7))
    return out


def _gmtl_nonneg(alpha, theta, m, rng, max_iter):
    c = theta * (1.0 - alpha) / alpha
    u = _tilted_u(alpha, c, m, rng, max_iter)
    e = rng.gamma(1.0 + c, size=m)
    return np.exp((1.0 - alpha) * (np.log(e) - kanter_log_a(alpha, u)))


def gmtl_sample(param, rng=None, size=None, max_iter=DEFAULT_MAX_ITER):
    """Draws of M ~ GMtL(alpha, theta), the law of lim K_n / n**alpha."""
    alpha, theta = param.alpha, param.theta
    rng = as_generator(rng)
    m = _draw(size)
    if theta >= 0:
        x = _gmtl_nonneg(alpha, theta, m, rng, max_iter)
    else:
        b = rng.beta(theta + alpha, 1.0 - alpha, size=m)
        x = b**alpha * _gmtl_nonneg(alpha, theta + alpha, m, rng, max_iter)
    return _shape(x, size)


def gmtl_moment(param, p):
    """E[M**p] = G(theta+1) G(theta/alpha+p+1) / (G(theta/alpha+1) G(theta+p alpha+1))."""
    alpha, theta = param.alpha, param.theta
    if not p > -(1.0 + theta / alpha):
        raise DomainError(f"moment order must exceed -(1 + theta/alpha), got {p!r}")
    r = theta / alpha
    return float(np.exp(
        gammaln(theta + 1.0) + gammaln(r + p + 1.0) - gammaln(r + 1.0) - gammaln(theta + p * alpha + 1.0)
    ))


def theta_limit_sample(param, rng=None, size=None):
    """Draws of alpha * f_alpha^{-1}(log M), the limit law of the MLE of theta."""
    m = gmtl_sample(param, rng, size)
    return param.alpha * f_alpha_inv(param.alpha, np.log(m))
