"""Sibuya distribution, its Fisher information, and the limit score Psi.

The Sibuya law with parameter alpha in (0, 1) has pmf

    p(j) = alpha * prod_{i<j} (i - alpha) / j!,   j = 1, 2, ...

and the exact tail T(i) = sum_{j>i} p(j) = (i - alpha) p(i) / alpha.

Every infinite series here is summed up to ``j_max`` and the remainder is
enclosed in a two-sided bracket obtained by summation by parts against T.
The returned value uses the bracket midpoint; the half-width is the
certified truncation error.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, TruncationError
from .specfun import trigamma


@dataclass(frozen=True)
class TruncationPolicy:
    j_max: int = 10**5
    tail_tol: float = 1e-6

    def __post_init__(self):
        if int(self.j_max) != self.j_max or self.j_max < 2:
            raise DomainError("j_max must be an integer >= 2")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")


DEFAULT_POLICY = TruncationPolicy()


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def sibuya_pmf(alpha, j):
    """p_alpha(j), evaluated in log space so that large j cannot overflow."""
    _check_alpha(alpha)
    jarr = np.asarray(j)
    if np.any(jarr < 1) or np.any(jarr != np.floor(jarr)):
        raise DomainError("j must be a positive integer")
    jf = jarr.astype(float)
    logp = np.log(alpha) + gammaln(jf - alpha) - gammaln(1.0 - alpha) - gammaln(jf + 1.0)
    p = np.exp(logp)
    return float(p) if p.ndim == 0 else p


def sibuya_tail(alpha, i):
    """P(J > i) = (i - alpha) p_alpha(i) / alpha."""
    iarr = np.asarray(i)
    if np.any(iarr < 1):
        raise DomainError("i must be a positive integer")
    return (iarr - alpha) * sibuya_pmf(alpha, i) / alpha


@lru_cache(maxsize=16)
def _pmf_table(alpha, j_max):
    # p(j+1) = p(j) (j - alpha) / (j + 1), accumulated in log space
    j = np.arange(1, j_max + 1, dtype=float)
    steps = np.log1p(-(1.0 + alpha) / (j[:-1] + 1.0))
    logp = np.empty(j_max)
    logp[0] = np.log(alpha)
    logp[1:] = np.log(alpha) + np.cumsum(steps)
    p = np.exp(logp)
    p.setflags(write=False)
    j.setflags(write=False)
    return j, p


def sibuya_pmf_table(alpha, j_max):
    """Arrays (j, p_alpha(j)) for j = 1..j_max, cached and read-only."""
    _check_alpha(alpha)
    return _pmf_table(float(alpha), int(j_max))


def _inner_prefix(j, x, power):
    # sum_{i<j} (i - x)^{-power} for every j in the table (zero at j = 1)
    terms = (j[:-1] - x) ** -power
    out = np.zeros_like(j)
    out[1:] = np.cumsum(terms)
    return out


def fisher_info_series(alpha, j_max=DEFAULT_POLICY.j_max, formula="B"):
    """Fisher information of the Sibuya law by either series representation.

    formula "A": 1/alpha^2 + sum_j p(j) sum_{i<j} (i - alpha)^{-2}
    formula "B": 1/alpha^2 + sum_j p(j) / (alpha (j - alpha))

    Returns ``(value, err)`` with ``|value - I_alpha| <= err``.
    """
    _check_alpha(alpha)
    J = int(j_max)
    j, p = sibuya_pmf_table(alpha, J)
    tail = (J - alpha) * p[-1] / alpha
    if formula == "B":
        head = np.sum(p / (j - alpha)) / alpha
        c = (J + 1 - alpha) / (J + 2 - alpha)
        r_lo = alpha * tail / ((1.0 + alpha) * (J + 1 - alpha))
        r_hi = alpha * tail / ((alpha + c) * (J + 1 - alpha))
        r_lo, r_hi = r_lo / alpha, r_hi / alpha
    elif formula == "A":
        h = _inner_prefix(j, alpha, 2)
        head = np.sum(p * h)
        r_hi = tail * trigamma(1.0 - alpha)
        r_lo = tail * (h[-1] + (J - alpha) ** -2)
    else:
        raise ValueError("formula must be 'A' or 'B'")
    value = 1.0 / alpha**2 + head + 0.5 * (r_lo + r_hi)
    return float(value), float(0.5 * (r_hi - r_lo))


def fisher_info_sibuya(alpha, policy=DEFAULT_POLICY):
    """I_alpha via formula B, certified to within ``policy.tail_tol``."""
    value, err = fisher_info_series(alpha, policy.j_max, "B")
    if err > policy.tail_tol:
        raise TruncationError(
            f"I_alpha tail bound {err:.3g} exceeds {policy.tail_tol:.3g} at j_max={policy.j_max}"
        )
    return value


def _check_x(x):
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")


def limit_score_series(alpha, x, j_max=DEFAULT_POLICY.j_max):
    """Psi(x) = 1/x - sum_j p_alpha(j) sum_{i<j} 1/(i - x), with its error bound.

    The remainder beyond j_max equals T(J) g(J+1) + (1/alpha) sum_{j>J} p(j) (j-alpha)/(j-x),
    and the ratio (j - alpha)/(j - x) is monotone in j, which brackets it.
    """
    _check_alpha(alpha)
    _check_x(x)
    J = int(j_max)
    j, p = sibuya_pmf_table(alpha, J)
    g = _inner_prefix(j, x, 1)
    head = np.sum(p * g)
    tail = (J - alpha) * p[-1] / alpha
    g_next = g[-1] + 1.0 / (J - x)
    r = (J + 1 - alpha) / (J + 1 - x)
    lo = tail * g_next + tail / alpha * min(r, 1.0)
    hi = tail * g_next + tail / alpha * max(r, 1.0)
    value = 1.0 / x - head - 0.5 * (lo + hi)
    return float(value), float(0.5 * (hi - lo))


def limit_score_Psi(alpha, x, policy=DEFAULT_POLICY):
    value, err = limit_score_series(alpha, x, policy.j_max)
    if err > policy.tail_tol:
        raise TruncationError(f"Psi tail bound {err:.3g} exceeds {policy.tail_tol:.3g}")
    return value


def limit_score_Psi_prime(alpha, x, policy=DEFAULT_POLICY):
    """Psi'(x) = -1/x^2 - sum_j p(j) sum_{i<j} (i - x)^{-2}; equals -I_alpha at x = alpha."""
    _check_alpha(alpha)
    _check_x(x)
    J = int(policy.j_max)
    j, p = sibuya_pmf_table(alpha, J)
    h = _inner_prefix(j, x, 2)
    tail = (J - alpha) * p[-1] / alpha
    lo = tail * (h[-1] + (J - x) ** -2)
    hi = tail * trigamma(1.0 - x)
    if 0.5 * (hi - lo) > policy.tail_tol:
        raise TruncationError("Psi' tail bound exceeds tolerance")
    return float(-1.0 / x**2 - np.sum(p * h) - 0.5 * (lo + hi))

