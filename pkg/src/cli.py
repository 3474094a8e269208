"""
Command-line front end: `precond-lmc {sample,plan,bounds,infer,metrics}`.

Reports go to stdout as key=value lines or CSV; logging goes to stderr.
Exit codes: 0 ok, 2 usage, 3 divergence, 4 theory infeasibility.
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.lib.error_handler import InputError, LangevinToolkitError, setup_logging
from src.lib.io import (
    format_report,
    format_value,
    parse_vector,
    read_config_file,
    write_csv,
)
from src.lib.plotting import histogram_counts, save_histogram_svg
from src.lib.target_loader import DEFAULT_PRESET_DIR, resolve_problem
from src.models.chain import ChainConfig
from src.models.preconditioner import Preconditioner
from src.models.target import TargetSpec
from src.models.theory import KAPPA_CONVENTION_NAMES, KappaConvention
from src.services.inference import (
    batch_means,
    normality_diagnostic,
    projection_ci,
    projection_values,
)
from src.services.metrics import marginal_distances
from src.services.precond import build_precond
from src.services.sampler import LangevinSampler, export_trajectory, load_trajectory
from src.services.targets import TARGET_KINDS, parse_target_id
from src.services.theory import (
    ErgodicityAnalyzer,
    continuous_w2_bound,
    kl_discretization_bound,
    plan_sampling,
    problem_constants,
    rho_grid_search,
    tv_bound,
    w2_discretization_bound,
)

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("sample", "plan", "bounds", "infer", "metrics")


def _vector_arg(text: str) -> np.ndarray:
    try:
        return parse_vector(text)
    except InputError as e:
        raise argparse.ArgumentTypeError(e.message)


def _target_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("target")
    group.add_argument("--preset", help="named preset from the preset directory")
    group.add_argument("--preset-dir", default=DEFAULT_PRESET_DIR)
    group.add_argument("--target", choices=TARGET_KINDS)
    group.add_argument("--a", type=_vector_arg, help="mixture offset (comma-separated)")
    group.add_argument("--lambda1", type=float, help="gcos perturbation weight")
    group.add_argument("--dim", type=int, help="dimension (gcos, gaussian)")
    group.add_argument("--file", help="edge-list file (logistic)")
    group.add_argument("--diag", type=_vector_arg, help="diagonal precision (gaussian)")
    group.add_argument(
        "--precond", help="identity | ar1:<rho> | file:<path> | tanh:<eps>"
    )
    group.add_argument(
        "--kappa-convention",
        choices=KAPPA_CONVENTION_NAMES,
        help="standard (kappa = m m_H, alias appendix) or doubled (kappa = 2 m m_H, alias text)",
        default=KappaConvention.STANDARD.value,
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="precond-lmc", description="Preconditioned Langevin Monte Carlo toolkit"
    )
    parser.add_argument("--config", help="key=value file of flags; command-line flags win")
    parser.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    sub = parser.add_subparsers(dest="command", required=True)
    target = _target_parent()

    sample = sub.add_parser("sample", parents=[target], help="run chains and write trajectories")
    sample.add_argument("--gamma", type=float)
    sample.add_argument("--iters", type=int, help="iterations K per chain")
    sample.add_argument("--replicates", type=int)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--x0", type=_vector_arg)
    sample.add_argument("--record-every", type=int, default=1)
    sample.add_argument("--burn-in", type=int, default=0)
    sample.add_argument("--workers", type=int, default=1)
    sample.add_argument("--out-dir", default=".")
    sample.add_argument("--prefix", default="chain")

    plan = sub.add_parser("plan", parents=[target], help="Wasserstein sampling plan")
    plan.add_argument("--epsilon", type=float, required=True)
    plan.add_argument("--x0", type=_vector_arg)
    plan.add_argument("--alpha-exp", type=float, help="exponential-moment parameter (default min(kappa, m m_H)/4)")
    plan.add_argument("--gamma", type=float, help="step size; must not exceed gamma_max")

    bounds = sub.add_parser("bounds", parents=[target], help="geometric ergodicity constants")
    bounds.add_argument("--gamma", type=float)
    bounds.add_argument("--alpha", type=float, help="drift level in (lambda_tilde, 1)")
    bounds.add_argument("--grid-r", type=_vector_arg)
    bounds.add_argument("--grid-d", type=_vector_arg)
    bounds.add_argument("--mc-samples", type=int, default=100_000)
    bounds.add_argument("--seed", type=int, default=0)
    bounds.add_argument("--x0", type=_vector_arg)
    bounds.add_argument("--k-max", type=int, default=100)
    bounds.add_argument("--tv-out", help="CSV of k,tv_bound for k = 0..k-max")
    bounds.add_argument("--grid-out", help="CSV of the (r, d, rho) grid")

    infer = sub.add_parser("infer", help="projection confidence intervals")
    infer.add_argument("trajectories", nargs="+")
    infer.add_argument("--u", type=_vector_arg, required=True)
    infer.add_argument("--level", type=float, default=0.95)
    infer.add_argument("--n-batches", type=int, default=30)
    infer.add_argument("--x-star", type=_vector_arg, help="defaults to the meta target's minimizer")
    infer.add_argument("--M-H", dest="M_H", type=float, help="defaults to the meta preconditioner's M_H")
    infer.add_argument("--batch-out", help="CSV of batch means (single trajectory)")
    infer.add_argument("--ci-out", help="CSV of per-replicate intervals")
    infer.add_argument("--histogram", type=int, metavar="BINS")
    infer.add_argument("--histogram-out", help="bin-count CSV of replicate averages")
    infer.add_argument("--svg", help="SVG histogram of replicate averages")

    metrics = sub.add_parser("metrics", help="per-coordinate W2 and TV between sample sets")
    metrics.add_argument("--first", nargs="+", required=True, help="trajectory CSV(s), pooled")
    metrics.add_argument("--second", nargs="+", required=True, help="trajectory CSV(s), pooled")
    metrics.add_argument("--bins", type=int, default=50)
    metrics.add_argument("--out", help="write the coord,w2,tv CSV here instead of stdout")
    metrics.add_argument("--histogram", type=int, metavar="BINS")
    metrics.add_argument("--histogram-out", help="per-coordinate bin-count CSV")
    metrics.add_argument("--svg", help="SVG prefix; one file per coordinate")
    return parser


def expand_config(argv: Sequence[str]) -> List[str]:
    """
    Splices flags from `--config FILE` in right after the subcommand, so that
    flags given on the command line come later and override them.
    """
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        return argv
    path = argv[i + 1]
    del argv[i : i + 2]
    tokens = read_config_file(path)
    for j, token in enumerate(argv):
        if token in SUBCOMMANDS:
            return argv[: j + 1] + tokens + argv[j + 1 :]
    return argv + tokens


def _target_params(args: argparse.Namespace) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    for key in ("a", "lambda1", "dim", "file", "diag"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def resolve(args: argparse.Namespace) -> Tuple[TargetSpec, Preconditioner, Any]:
    if not args.preset and not args.target:
        raise InputError("one of --preset or --target is required")
    return resolve_problem(
        preset=args.preset,
        kind=args.target,
        params=_target_params(args),
        precond=args.precond,
        config_path=args.preset_dir,
    )


def _start(args: argparse.Namespace, target: TargetSpec) -> np.ndarray:
    if args.x0 is None:
        return np.zeros(target.dimension)
    if args.x0.size != target.dimension:
        raise InputError(f"--x0 has dimension {args.x0.size}, target has {target.dimension}")
    return args.x0


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def cmd_sample(args: argparse.Namespace) -> int:
    target, precond, preset = resolve(args)
    gamma = args.gamma if args.gamma is not None else (preset.gamma if preset else None)
    iters = args.iters if args.iters is not None else (preset.iters if preset else None)
    if gamma is None or iters is None:
        raise InputError("--gamma and --iters are required (or a preset that sets them)")
    replicates = args.replicates or (preset.replicates if preset and preset.replicates else 1)
    config = ChainConfig(
        gamma=gamma,
        K=int(iters),
        x0=_start(args, target),
        seed=args.seed,
        record_every=args.record_every,
        burn_in=args.burn_in,
    )
    sampler = LangevinSampler(target, precond)
    trajectories = sampler.run_replicates(config, int(replicates), workers=args.workers)
    os.makedirs(args.out_dir, exist_ok=True)
    width = max(4, len(str(len(trajectories) - 1)))
    paths = []
    for trajectory in trajectories:
        name = (
            f"{args.prefix}.csv"
            if len(trajectories) == 1
            else f"{args.prefix}_r{trajectory.replicate:0{width}d}.csv"
        )
        path = os.path.join(args.out_dir, name)
        export_trajectory(trajectory, path)
        paths.append(path)
    report: Dict[str, Any] = {
        "target": target.identifier,
        "precond": precond.identifier,
        "gamma": config.gamma,
        "K": config.K,
        "seed": config.seed,
        "replicates": len(trajectories),
        "rows": trajectories[0].k,
        "out_dir": args.out_dir,
        "first_file": os.path.basename(paths[0]),
    }
    for i, message in enumerate(trajectories[0].warnings):
        report[f"warning{i + 1}"] = message
    _emit(format_report(report))
    return 0


def cmd_plan(args: argparse.Namespace) -> int:
    target, precond, _ = resolve(args)
    pc = problem_constants(target, precond, args.kappa_convention)
    x0 = _start(args, target)
    plan = plan_sampling(pc, target, precond, x0, args.epsilon, args.alpha_exp, args.gamma)
    report: Dict[str, Any] = {
        "target": target.identifier,
        "precond": precond.identifier,
        "kappa_convention": pc.kappa_convention.value,
        "epsilon": plan.epsilon,
        "T": plan.T,
        "C": plan.C_const,
        "C_star": plan.C_star,
        "gamma_max": plan.gamma_max,
        "gamma": plan.gamma,
        "K": plan.K,
        "kappa": plan.kappa,
        "kappa_star": plan.kappa_star,
        "alpha_exp": plan.alpha_exp,
        "log_E_L0": plan.log_E_L0,
        "w2_continuous": continuous_w2_bound(pc, x0, target.x_star, plan.T),
        "kl_discretization": kl_discretization_bound(plan),
        "w2_discretization": w2_discretization_bound(plan),
        "degenerate": plan.degenerate,
    }
    for i, note in enumerate(plan.notes):
        report[f"note{i + 1}"] = note
    _emit(format_report(report))
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    target, precond, preset = resolve(args)
    gamma = args.gamma if args.gamma is not None else (preset.gamma if preset else None)
    if gamma is None:
        raise InputError("--gamma is required (or a preset that sets it)")
    analyzer = ErgodicityAnalyzer(n_mc=args.mc_samples, seed=args.seed)
    report = analyzer.analyze(
        target,
        precond,
        gamma,
        alpha=args.alpha,
        r_grid=args.grid_r,
        d_grid=args.grid_d,
        kappa_convention=KappaConvention(args.kappa_convention),
    )
    x0 = _start(args, target)
    start = tv_bound(report, x0, 0, target, precond)
    out: Dict[str, Any] = {
        "target": target.identifier,
        "precond": precond.identifier,
        "gamma": report.gamma,
        "gamma_lo": report.gamma_interval[0],
        "gamma_hi": report.gamma_interval[1],
        "lambda_tilde": report.lambda_tilde,
        "b": report.b,
        "b_tilde": report.b_tilde,
        "alpha": report.alpha,
        "small_set_radius": report.small_set_radius,
        "mu_leb_C": report.mu_leb_C,
        "mu_leb_se": report.mu_leb_se,
        "eta": report.eta,
        "log_eta": report.log_eta,
        "r": report.r,
        "d": report.d,
        "rho": report.rho,
        "M_x0": start.M_x,
    }
    for i, note in enumerate(report.notes):
        out[f"note{i + 1}"] = note
    _emit(format_report(out))
    if args.tv_out:
        rows = []
        for k in range(args.k_max + 1):
            bound = tv_bound(report, x0, k, target, precond)
            rows.append((k, bound.clipped, bound.raw))
        write_csv(args.tv_out, ["k", "tv_bound", "raw"], rows)
    if args.grid_out:
        grid = rho_grid_search(report, args.grid_r, args.grid_d).grid
        write_csv(args.grid_out, ["r", "d", "rho"], grid.tolist())
    return 0


def _projection_setup(
    meta: Dict[str, str], args: argparse.Namespace
) -> Tuple[np.ndarray, float]:
    x_star = args.x_star
    M_H = args.M_H
    if x_star is None:
        if "target" not in meta:
            raise InputError("--x-star is required when the trajectory has no meta sidecar")
        x_star = parse_target_id(meta["target"]).x_star
    if M_H is None:
        if "precond" not in meta:
            raise InputError("--M-H is required when the trajectory has no meta sidecar")
        M_H = build_precond(meta["precond"], x_star.size).M_H
    return np.asarray(x_star, dtype=float), float(M_H)


def cmd_infer(args: argparse.Namespace) -> int:
    loaded = [load_trajectory(path) for path in args.trajectories]
    x_star, M_H = _projection_setup(loaded[0][2], args)
    intervals = [
        projection_ci(samples, args.u, x_star, M_H, args.level, args.n_batches)
        for _, samples, _ in loaded
    ]
    first = intervals[0]
    report: Dict[str, Any] = {
        "u": first.u,
        "level": first.level,
        "n_batches": first.n_batches,
        "M_H": M_H,
        "x_star": x_star,
    }
    if len(intervals) == 1:
        report.update(
            {
                "k": first.k,
                "point_estimate": first.point_estimate,
                "sigma_hat": first.sigma_hat,
                "lo": first.interval[0],
                "hi": first.interval[1],
                "half_width": first.half_width,
                "degenerate": first.degenerate,
            }
        )
        if args.batch_out:
            values = projection_values(loaded[0][1], args.u, x_star, M_H)
            means = batch_means(values, args.n_batches)
            write_csv(args.batch_out, ["batch", "mean"], enumerate(means.tolist(), start=1))
    else:
        averages = np.array([ci.point_estimate for ci in intervals])
        report["replicates"] = len(intervals)
        report["mean_of_averages"] = float(np.mean(averages))
        report["sd_of_averages"] = float(np.std(averages, ddof=1))
        if len(intervals) >= 100:
            normality = normality_diagnostic(averages)
            report["ks_statistic"] = normality.ks_statistic
            report["ks_critical"] = normality.critical_value
            report["normality_pass"] = normality.passed
        else:
            logger.warning("Fewer than 100 replicates; skipping the normality diagnostic")
        if args.histogram:
            counts, edges = histogram_counts(averages, args.histogram)
            if args.histogram_out:
                write_csv(
                    args.histogram_out,
                    ["bin_lo", "bin_hi", "count"],
                    zip(edges[:-1].tolist(), edges[1:].tolist(), counts.tolist()),
                )
            if args.svg:
                save_histogram_svg(
                    args.svg, {"replicate averages": averages}, args.histogram,
                    title="Projection averages", xlabel="f",
                )
    if args.ci_out:
        write_csv(
            args.ci_out,
            ["replicate", "point_estimate", "lo", "hi", "sigma_hat"],
            [
                (i, ci.point_estimate, ci.interval[0], ci.interval[1], ci.sigma_hat)
                for i, ci in enumerate(intervals)
            ],
        )
    report["estimand"] = first.estimand
    _emit(format_report(report))
    return 0


def _pooled(paths: Sequence[str]) -> np.ndarray:
    return np.vstack([load_trajectory(path)[1] for path in paths])


def cmd_metrics(args: argparse.Namespace) -> int:
    first = _pooled(args.first)
    second = _pooled(args.second)
    rows = marginal_distances(first, second, args.bins)
    if args.out:
        write_csv(args.out, ["coord", "w2", "tv"], rows)
    else:
        _emit("coord,w2,tv\n" + "".join(",".join(format_value(v) for v in row) + "\n" for row in rows))
    if args.histogram:
        hist_rows = []
        for j in range(first.shape[1]):
            lo = float(min(first[:, j].min(), second[:, j].min()))
            hi = float(max(first[:, j].max(), second[:, j].max()))
            span = (lo, hi) if lo < hi else (lo - 0.5, hi + 0.5)
            counts_a, edges = histogram_counts(first[:, j], args.histogram, span)
            counts_b, _ = histogram_counts(second[:, j], args.histogram, span)
            for i in range(args.histogram):
                hist_rows.append(
                    (j + 1, float(edges[i]), float(edges[i + 1]), int(counts_a[i]), int(counts_b[i]))
                )
            if args.svg:
                save_histogram_svg(
                    f"{args.svg}_x{j + 1}.svg",
                    {"first": first[:, j], "second": second[:, j]},
                    args.histogram,
                    title=f"Coordinate {j + 1}",
                    xlabel=f"x{j + 1}",
                )
        if args.histogram_out:
            write_csv(
                args.histogram_out,
                ["coord", "bin_lo", "bin_hi", "count_first", "count_second"],
                hist_rows,
            )
    return 0


COMMANDS = {
    "sample": cmd_sample,
    "plan": cmd_plan,
    "bounds": cmd_bounds,
    "infer": cmd_infer,
    "metrics": cmd_metrics,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        argv = expand_config(sys.argv[1:] if argv is None else argv)
    except LangevinToolkitError as e:
        sys.stderr.write(f"{e.message}\n")
        return e.exit_code
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except LangevinToolkitError as e:
        logger.debug("Command failed", exc_info=True)
        sys.stderr.write(f"{e.message}\n")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
