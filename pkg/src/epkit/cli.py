"""Command-line interface: ``epkit {simulate,fit,test-sparsity,experiment}``.

Exit codes: 0 success, 2 invalid input or parameters, 3 degenerate statistics.
"""
import argparse
import os
import sys
import warnings

from . import experiments as ex
from .errors import DegenerateStatsError, DomainError, SamplingError, TruncationError
from .estimate import FitConfig, fit_mle, fit_qmle, theta_threshold
from .inference import SMALL_K_WARNING, confidence_interval, sparsity_test
from .params import EpParams
from .partition import (
    read_block_sizes,
    read_edge_list,
    simulate,
    simulate_trajectory,
    stats_from_blocks,
    stats_from_degrees,
    stats_from_json,
    stats_to_json,
)
from .rng import RngSeed

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None


def _bounds(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi, got {text!r}") from None
    return lo, hi


def build_parser():
    p = argparse.ArgumentParser(prog="epkit", description="Ewens-Pitman partition toolkit")
    p.add_argument("--seed", type=int, default=0, help="integer RNG seed (default 0)")
    p.add_argument("--stream", type=int, default=0, help="independent stream index")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes for experiments (EP_KIT_THREADS overrides)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the sequential urn scheme")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--theta", type=float, required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--trajectory", type=_int_list, default=None,
                   help="checkpoints n1,n2,... of one growing partition")

    f = sub.add_parser("fit", help="MLE (or QMLE with --plug-theta) of alpha")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="stats JSON file ('-' for stdin)")
    src.add_argument("--blocks", help="text file with one block size per line")
    src.add_argument("--edges", help="edge list; vertices are blocks, degrees are sizes")
    f.add_argument("--plug-theta", type=float, default=None)
    f.add_argument("--alpha-bounds", type=_bounds, default=None, help="lo,hi")
    f.add_argument("--level", type=float, default=0.95)

    t = sub.add_parser("test-sparsity", help="test H0: alpha <= 1/mu")
    src = t.add_mutually_exclusive_group(required=True)
    src.add_argument("--edges", help="edge list file")
    src.add_argument("--degrees", help="text file with one vertex degree per line")
    t.add_argument("--mu", type=float, default=2.0)
    t.add_argument("--delta", type=float, default=0.05)
    t.add_argument("--two-sided", action="store_true")
    t.add_argument("--multigraph", action="store_true",
                   help="keep repeated edges and self-loops in --edges input")

    e = sub.add_parser("experiment", help="Monte Carlo studies")
    e.add_argument("--preset", choices=("coverage", "efficiency", "theta-limit", "ialpha"),
                   required=True)
    e.add_argument("--alpha", type=float, default=0.6)
    e.add_argument("--theta", type=float, default=1.0)
    e.add_argument("--grid", default=None,
                   help="ialpha: alpha grid lo:hi:step; coverage/efficiency: n values")
    e.add_argument("--reps", type=int, default=500)
    e.add_argument("--estimators", default=",".join(ex.ESTIMATORS))
    e.add_argument("--level", type=float, default=0.95)
    e.add_argument("--draws", type=int, default=100_000)
    e.add_argument("--bins", default="fd", help="histogram bins: 'fd' or an integer")
    e.add_argument("--j-max", type=int, default=None, help="ialpha truncation point")
    return p


def _threads(args):
    env = os.environ.get("EP_KIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _Fail(EXIT_INPUT, f"EP_KIT_THREADS must be an integer, got {env!r}") from None
    if args.threads is not None:
        return max(1, args.threads)
    return os.cpu_count() or 1


def _dumps(obj):
    return ex.to_json(obj)


def _stats_csv(stats_list):
    rows = [{"n": st.n, "k": st.k, "size": j, "count": c}
            for st in stats_list for j, c in st.s.items()]
    return ex.rows_to_csv(rows, ["n", "k", "size", "count"])


def cmd_simulate(args, rng_seed):
    params = EpParams(args.alpha, args.theta)
    rng = rng_seed.generator()
    if args.trajectory:
        cps = list(args.trajectory)
        if args.n is not None:
            if args.n < cps[-1]:
                raise DomainError("--n must not be smaller than the last checkpoint")
            if args.n > cps[-1]:
                cps.append(args.n)
        path = simulate_trajectory(params, cps, rng)
        if args.format == "csv":
            return _stats_csv(path)
        return "[" + ",".join(stats_to_json(st) for st in path) + "]\n"
    if args.n is None:
        raise DomainError("--n is required unless --trajectory is given")
    st = simulate(params, args.n, rng)
    if args.format == "csv":
        return _stats_csv([st])
    return stats_to_json(st) + "\n"


def _load_stats(args):
    if getattr(args, "input", None):
        text = sys.stdin.read() if args.input == "-" else open(args.input).read()
        return stats_from_json(text)
    if getattr(args, "blocks", None):
        return stats_from_blocks(read_block_sizes(args.blocks))
    degrees = read_edge_list(args.edges, multi=getattr(args, "multigraph", False))
    if not degrees:
        raise DomainError("edge list contains no usable edges")
    return stats_from_degrees(degrees)[0]


def _degenerate_message(stats):
    return (f"degenerate statistics: estimation needs 1<K_n<n, got K_n={stats.k}, n={stats.n}")


def cmd_fit(args, rng_seed):
    stats = _load_stats(args)
    cfg = FitConfig() if args.alpha_bounds is None else FitConfig(*args.alpha_bounds)
    thr = theta_threshold(stats)
    if thr.degenerate:
        raise _Fail(EXIT_DEGENERATE, _degenerate_message(stats))
    if args.plug_theta is None:
        fit = fit_mle(stats, cfg)
    else:
        fit = fit_qmle(stats, args.plug_theta, cfg)
    out = fit.to_dict()
    out["fisher"] = fit.fisher_at_hat
    out["theta_threshold"] = thr.value
    out["degenerate"] = thr.degenerate is not None
    try:
        out["ci"] = confidence_interval(fit, args.level).to_dict()
    except DomainError as exc:
        out["ci"] = None
        out["ci_note"] = str(exc)
    if args.format == "csv":
        ci = out["ci"] or {}
        row = {"method": fit.method, "n": fit.n, "k": fit.k, "alpha_hat": fit.alpha_hat,
               "theta_hat": "" if fit.theta_hat is None else fit.theta_hat,
               "theta_plugin": "" if fit.theta_plugin is None else fit.theta_plugin,
               "fisher": fit.fisher_at_hat, "ci_lo": ci.get("lo", ""), "ci_hi": ci.get("hi", ""),
               "level": args.level, "converged": fit.converged, "boundary_hit": fit.boundary_hit}
        return ex.rows_to_csv([row])
    return _dumps(out)


def cmd_test_sparsity(args, rng_seed):
    if args.edges:
        degrees = read_edge_list(args.edges, multi=args.multigraph)
        if not degrees:
            raise DomainError("edge list contains no usable edges")
    else:
        degrees = read_block_sizes(args.degrees)
        if not degrees:
            raise DomainError("degree file is empty")
    stats, mu = stats_from_degrees(degrees, args.mu)
    if theta_threshold(stats).degenerate:
        raise _Fail(EXIT_DEGENERATE, _degenerate_message(stats))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = sparsity_test(stats, mu, args.delta, two_sided=args.two_sided)
    out = res.to_dict()
    out["verdict"] = "reject H0: sparse (alpha > 1/mu)" if res.reject else "do not reject H0"
    warning = None
    if stats.k < SMALL_K_WARNING:
        warning = f"K_n={stats.k} < {SMALL_K_WARNING}: the normal approximation may be poor"
        print(f"warning: {warning}", file=sys.stderr)
    out["warning"] = warning
    if args.format == "csv":
        return ex.rows_to_csv([{k: ("" if v is None else v) for k, v in out.items()}])
    return _dumps(out)


_COVERAGE_COLS = ["estimator", "n", "requested", "completed", "dropped", "coverage",
                  "mean_alpha_hat", "mean_k", "z_mean", "z_sd"]
_EFFICIENCY_COLS = ["estimator", "n", "requested", "completed", "dropped", "mse",
                    "efficiency", "mean_alpha_hat", "mean_k"]


def cmd_experiment(args, rng_seed):
    if args.preset == "ialpha":
        grid = ex.parse_grid(args.grid or "0.05:0.95:0.05")
        policy = ex.DEFAULT_POLICY
        if args.j_max is not None:
            from .sibuya import TruncationPolicy
            policy = TruncationPolicy(args.j_max, policy.tail_tol)
        rows = ex.run_ialpha_curve(grid, policy)
        if args.format == "csv":
            return ex.rows_to_csv(rows, ["alpha", "I_alpha", "error"])
        return _dumps(rows)

    if args.preset == "theta-limit":
        bins = args.bins if args.bins == "fd" else _positive_int(args.bins, "--bins")
        rep = ex.run_theta_limit_study(EpParams(args.alpha, args.theta), args.draws,
                                       rng_seed.generator(), bins=bins)
        hist = ex.histogram_rows(rep)
        if args.format == "csv":
            return ex.rows_to_csv(hist, ["bin_left", "bin_right", "count", "density"])
        return _dumps({"summary": rep.summary(), "histogram": hist})

    if args.grid:
        n_grid = [int(round(v)) for v in ex.parse_grid(args.grid)]
    else:
        n_grid = list(ex.DEFAULT_N_GRID)
    estimators = tuple(e.strip() for e in args.estimators.split(",") if e.strip())
    plan = ex.ExperimentPlan(args.alpha, args.theta, tuple(n_grid), args.reps, estimators,
                             rng_seed, args.level)
    report = ex.run_coverage_efficiency(plan, workers=_threads(args))
    if args.format == "csv":
        cols = _COVERAGE_COLS if args.preset == "coverage" else _EFFICIENCY_COLS
        return ex.rows_to_csv(report.cells, cols)
    return _dumps(ex.report_to_dict(report))


def _positive_int(text, name):
    try:
        v = int(text)
    except ValueError:
        raise DomainError(f"{name} must be 'fd' or a positive integer") from None
    if v < 1:
        raise DomainError(f"{name} must be positive")
    return v


_COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "test-sparsity": cmd_test_sparsity,
    "experiment": cmd_experiment,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rng_seed = RngSeed(args.seed, args.stream)
        text = _COMMANDS[args.command](args, rng_seed)
    except _Fail as exc:
        print(f"epkit: {exc}", file=sys.stderr)
        return exc.code
    except DegenerateStatsError as exc:
        print(f"epkit: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DomainError, TruncationError, SamplingError, ValueError, OSError) as exc:
        print(f"epkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
