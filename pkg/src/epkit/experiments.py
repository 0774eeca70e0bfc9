"""Monte Carlo studies: coverage and efficiency, the theta-hat limit law, and the I_alpha curve.

Replications run on independent streams ``seed.generator(r)``, so results do
not depend on the number of worker processes or on completion order.
"""
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats as sps

from .errors import DegenerateStatsError, DomainError, TruncationError
from .estimate import FitConfig, fit_mle, fit_qmle
from .inference import confidence_interval
from .mittag import theta_limit_sample
from .params import EpParams
from .partition import simulate_trajectory
from .rng import RngSeed, as_generator
from .sibuya import DEFAULT_POLICY, fisher_info_sibuya
from .specfun import f_alpha_prime

ESTIMATORS = ("mle", "qmle_known_theta", "qmle_zero")
DEFAULT_N_GRID = tuple(2**p for p in range(7, 18))


@dataclass(frozen=True)
class ExperimentPlan:
    alpha: float
    theta: float
    n_grid: tuple = DEFAULT_N_GRID
    replications: int = 500
    estimators: tuple = ESTIMATORS
    seed: RngSeed = RngSeed()
    level: float = 0.95
    cfg: FitConfig = FitConfig()

    def __post_init__(self):
        EpParams(self.alpha, self.theta)
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("n_grid must be strictly increasing positive integers")
        object.__setattr__(self, "n_grid", grid)
        if int(self.replications) != self.replications or self.replications < 1:
            raise DomainError("replications must be a positive integer")
        est = tuple(self.estimators)
        if not est or any(e not in ESTIMATORS for e in est):
            raise DomainError(f"estimators must be a non-empty subset of {ESTIMATORS}")
        object.__setattr__(self, "estimators", est)
        if not 0.0 < self.level < 1.0:
            raise DomainError("level must lie in (0, 1)")

    @property
    def params(self):
        return EpParams(self.alpha, self.theta)


def _fit(estimator, stats, plan):
    if estimator == "mle":
        return fit_mle(stats, plan.cfg)
    if estimator == "qmle_known_theta":
        return fit_qmle(stats, plan.theta, plan.cfg)
    return fit_qmle(stats, 0.0, plan.cfg)


def run_replication(plan, r):
    """Fit every estimator along one trajectory; returns {(estimator, n): record or None}."""
    rng = plan.seed.generator(r)
    path = simulate_trajectory(plan.params, plan.n_grid, rng)
    out = {}
    for n, stats in zip(plan.n_grid, path):
        for est in plan.estimators:
            try:
                fit = _fit(est, stats, plan)
            except DegenerateStatsError:
                out[est, n] = None
                continue
            if fit.boundary_hit or not fit.converged:
                out[est, n] = None
                continue
            ci = confidence_interval(fit, plan.level)
            out[est, n] = (fit.alpha_hat, fit.theta_hat, fit.k, fit.fisher_at_hat,
                           ci.lo <= plan.alpha <= ci.hi)
    return out


def _run_chunk(args):
    plan, lo, hi = args
    return [run_replication(plan, r) for r in range(lo, hi)]


@dataclass
class ExperimentReport:
    plan: ExperimentPlan
    cells: list = field(default_factory=list)

    def cell(self, estimator, n):
        for c in self.cells:
            if c["estimator"] == estimator and c["n"] == n:
                return c
        raise KeyError((estimator, n))


def _summarize(plan, est, n, records):
    ok = [rec for rec in records if rec is not None]
    cell = {
        "estimator": est,
        "n": n,
        "requested": len(records),
        "completed": len(ok),
        "dropped": len(records) - len(ok),
    }
    if not ok:
        return cell | {"mse": math.nan, "efficiency": math.nan, "coverage": math.nan,
                       "mean_alpha_hat": math.nan, "mean_k": math.nan}
    a = np.array([rec[0] for rec in ok])
    k = np.array([rec[2] for rec in ok], dtype=float)
    info = np.array([rec[3] for rec in ok])
    mse = float(np.mean((a - plan.alpha) ** 2))
    z = np.sqrt(k * info) * (a - plan.alpha)
    cell |= {
        "mse": mse,
        "efficiency": 1.0 / (mse * float(np.mean(k * info))) if mse > 0 else math.inf,
        "coverage": float(np.mean([rec[4] for rec in ok])),
        "mean_alpha_hat": float(a.mean()),
        "mean_k": float(k.mean()),
        "z_mean": float(z.mean()),
        "z_sd": float(z.std(ddof=1)) if len(z) > 1 else math.nan,
    }
    if est == "mle":
        t = np.array([rec[1] for rec in ok])
        q05, q50, q95 = np.quantile(t, [0.05, 0.5, 0.95])
        cell |= {"theta_mean": float(t.mean()), "theta_q05": float(q05),
                 "theta_q50": float(q50), "theta_q95": float(q95)}
    return cell


def run_coverage_efficiency(plan, workers=1, return_raw=False):
    """MSE, efficiency and CI coverage per (estimator, n).

    Each replication grows one partition through the whole n grid. Fits that
    hit degeneracy or a search boundary are dropped and counted.
    """
    reps = plan.replications
    workers = max(1, int(workers))
    if workers == 1:
        raw = _run_chunk((plan, 0, reps))
    else:
        step = max(1, math.ceil(reps / (4 * workers)))
        chunks = [(plan, lo, min(lo + step, reps)) for lo in range(0, reps, step)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            raw = [rec for part in ex.map(_run_chunk, chunks) for rec in part]
    report = ExperimentReport(plan)
    for n in plan.n_grid:
        for est in plan.estimators:
            report.cells.append(_summarize(plan, est, n, [rec[est, n] for rec in raw]))
    return (report, raw) if return_raw else report


@dataclass
class ThetaLimitReport:
    alpha: float
    theta: float
    draws: int
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    mean: float
    variance: float
    skewness: float
    ref_mean: float
    ref_variance: float
    ks_to_reference: float

    def summary(self):
        return {k: v for k, v in asdict(self).items() if not isinstance(v, np.ndarray)}


def run_theta_limit_study(param, draws, rng=None, bins="fd"):
    """Histogram and moments of alpha f_alpha^{-1}(log M), M ~ GMtL(alpha, theta),
    against the normal reference N(theta, alpha^2 / f'_alpha(theta / alpha))."""
    if int(draws) != draws or draws < 1:
        raise DomainError("draws must be a positive integer")
    a, t = param.alpha, param.theta
    x = theta_limit_sample(param, as_generator(rng), int(draws))
    counts, edges = np.histogram(x, bins=bins)
    widths = np.diff(edges)
    density = counts / (counts.sum() * widths)
    ref_var = a * a / f_alpha_prime(a, t / a)
    ks = sps.kstest(x, "norm", args=(t, math.sqrt(ref_var))).statistic
    return ThetaLimitReport(
        a, t, int(draws), edges, counts, density,
        float(x.mean()), float(x.var(ddof=1)) if draws > 1 else 0.0,
        float(sps.skew(x)) if draws > 2 else math.nan,
        float(t), float(ref_var), float(ks),
    )


def run_ialpha_curve(grid, policy=DEFAULT_POLICY):
    """Rows (alpha, I_alpha, error) over ``grid``; a failing point keeps NaN and its message."""
    rows = []
    for a in grid:
        a = float(a)
        try:
            rows.append({"alpha": a, "I_alpha": fisher_info_sibuya(a, policy), "error": ""})
        except (DomainError, TruncationError) as exc:
            rows.append({"alpha": a, "I_alpha": math.nan, "error": str(exc)})
    return rows


def parse_grid(text):
    """'lo:hi:step' (inclusive of hi up to rounding) or comma separated values."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi, step = (float(p) for p in text.split(":"))
            if step <= 0 or hi < lo:
                raise DomainError("grid needs lo <= hi and step > 0")
            m = int(math.floor((hi - lo) / step + 1e-9))
            return [round(lo + i * step, 12) for i in range(m + 1)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"cannot parse grid {text!r}") from None


# --------------------------------------------------------------------------
# writers
# --------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def rows_to_csv(rows, columns=None):
    if not rows:
        return ""
    if columns is None:
        columns = list(rows[0])
        for r in rows[1:]:
            columns += [c for c in r if c not in columns]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) if c in r else "" for c in columns])
    return buf.getvalue()


def histogram_rows(report):
    e = report.bin_edges
    return [{"bin_left": float(e[i]), "bin_right": float(e[i + 1]),
             "count": int(report.counts[i]), "density": float(report.density[i])}
            for i in range(len(report.counts))]


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def to_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def report_to_dict(report):
    plan = report.plan
    return {
        "plan": {
            "alpha": plan.alpha, "theta": plan.theta, "n_grid": list(plan.n_grid),
            "replications": plan.replications, "estimators": list(plan.estimators),
            "seed": plan.seed.seed, "stream": plan.seed.stream, "level": plan.level,
        },
        "cells": report.cells,
    }

