"""Command-line surface: thin adapters over the library with JSON payloads.

Exit codes: 0 success, 2 usage/validation error, 3 runtime failure
(divergence, bracketing failure).
"""

import argparse
import json
import sys

import numpy as np

from .dependence import DegenerateInputError, KernelSpec, nhsic_offdiag_mean
from .diagnostics import sparsity_metrics
from .distributions import (
    BracketingError,
    RGGParams,
    expected_l0,
    read_sample_csv,
    rgn_moments,
    sample_rgn,
    sigma_gn,
    sigma_rgn,
    write_sample_csv,
)
from .entropy import ddim_entropy_empirical, marginal_entropy_sum
from .slicing import mixed_projections, rdmreg_loss
from .trainer import TrainConfig, TrainingDiverged, train

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class UsageError(ValueError):
    pass


def _resolve_sigma(p, mu, sigma, sigma_rule):
    if sigma is not None:
        return sigma, "explicit"
    if sigma_rule == "gn":
        return sigma_gn(p), "gn"
    if sigma_rule == "rgn":
        return sigma_rgn(p, mu), "rgn"
    raise UsageError(f"unknown sigma rule {sigma_rule!r}")


def _load_csv(path):
    try:
        return read_sample_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise UsageError(f"malformed CSV {path}: {exc}") from exc


def cmd_sample(args):
    if args.n < 1 or args.d < 1:
        raise UsageError("n and d must be >= 1")
    sigma, rule = _resolve_sigma(args.p, args.mu, args.sigma, args.sigma_rule)
    params = RGGParams(args.p, args.mu, sigma)
    data = sample_rgn(params, args.n * args.d, args.seed).reshape(args.n, args.d)
    write_sample_csv(args.out, data)
    moments = rgn_moments(params)
    return {
        "p": args.p, "mu": args.mu, "sigma": sigma, "sigma_rule": rule,
        "n": args.n, "d": args.d, "seed": args.seed, "out": args.out,
        "zero_fraction": float(np.mean(data == 0.0)),
        "sample_mean": float(data.mean()),
        "sample_variance": float(data.var(ddof=1)),
        "theoretical_mean": moments.mean,
        "theoretical_variance": moments.variance,
    }


def cmd_predict_l0(args):
    if args.d < 1:
        raise UsageError("d must be >= 1")
    sigma, rule = _resolve_sigma(args.p, args.mu, args.sigma, args.sigma_rule)
    params = RGGParams(args.p, args.mu, sigma)
    e = expected_l0(params, args.d)
    return {
        "p": args.p, "mu": args.mu, "sigma": sigma, "sigma_rule": rule,
        "d": args.d, "expected_l0": e, "per_dimension_probability": e / args.d,
    }


def cmd_entropy(args):
    z = _load_csv(args.input)
    per_column = []
    for j in range(z.shape[1]):
        est = ddim_entropy_empirical(z[:, j], m=args.m)
        per_column.append({
            "column": j,
            "info_dim": est.info_dim,
            "continuous_part": est.continuous_part,
            "bernoulli_part": est.bernoulli_part,
            "entropy": est.entropy,
            "continuous_available": est.continuous_available,
        })
    return {
        "input": args.input, "m": args.m,
        "columns": per_column,
        "marginal_entropy_sum": marginal_entropy_sum(z, m=args.m),
    }


def cmd_rdmreg(args):
    z = _load_csv(args.z)
    zprime = _load_csv(args.zprime)
    if z.shape != zprime.shape:
        raise UsageError(f"shape mismatch: {z.shape} vs {zprime.shape}")
    sigma, rule = _resolve_sigma(args.p, args.mu, args.sigma, args.sigma_rule)
    params = RGGParams(args.p, args.mu, sigma)
    proj = mixed_projections(z, args.n_proj, args.policy,
                             np.random.default_rng(args.seed))
    breakdown = rdmreg_loss(z, zprime, params, proj,
                            lambda_sim=args.lambda_sim,
                            lambda_dist=args.lambda_dist, seed=args.seed)
    return {
        "p": args.p, "mu": args.mu, "sigma": sigma, "sigma_rule": rule,
        "n_proj": args.n_proj, "policy": args.policy, "seed": args.seed,
        "invariance": breakdown.invariance,
        "rdmreg_view1": breakdown.rdmreg_view1,
        "rdmreg_view2": breakdown.rdmreg_view2,
        "total": breakdown.total,
    }


def cmd_hsic(args):
    z = _load_csv(args.input)
    kernel = KernelSpec(bandwidth_rule=args.bandwidth_rule)
    mean, excluded = nhsic_offdiag_mean(z, kernel, return_excluded=True)
    return {
        "input": args.input, "bandwidth_rule": args.bandwidth_rule,
        "nhsic_offdiag_mean": mean, "excluded_columns": excluded,
    }


def cmd_train(args):
    try:
        config = TrainConfig.from_json(args.config)
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise UsageError(f"bad config {args.config}: {exc}") from exc
    model, trace = train(config)
    trace.to_csv(args.trace_out)
    model.save_csv(args.model_out)
    final = trace.records[-1]
    summary = {
        "config": config.to_dict(),
        "trace_out": args.trace_out,
        "model_out": args.model_out,
        "final": final,
        "steps_logged": len(trace.steps),
    }
    if args.summary_out:
        with open(args.summary_out, "w") as fh:
            json.dump(summary, fh, indent=2)
    return summary


def build_parser():
    parser = argparse.ArgumentParser(prog="rgg")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_target(p, with_d=True):
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--mu", type=float, default=0.0)
        p.add_argument("--sigma", type=float, default=None)
        p.add_argument("--sigma-rule", dest="sigma_rule", default="gn",
                       choices=["gn", "rgn"])
        if with_d:
            p.add_argument("--d", type=int, default=1)

    p = sub.add_parser("sample", help="draw RGN samples to CSV")
    add_target(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("predict-l0", help="expected nonzero count")
    add_target(p)
    p.set_defaults(func=cmd_predict_l0)

    p = sub.add_parser("entropy", help="per-column mixed entropy of a CSV matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("rdmreg", help="sliced matching loss between two CSV matrices")
    add_target(p, with_d=False)
    p.add_argument("--z", required=True)
    p.add_argument("--zprime", required=True)
    p.add_argument("--n-proj", dest="n_proj", type=int, default=1024)
    p.add_argument("--policy", default="random_sphere",
                   choices=["random_sphere", "random_plus_top_eig",
                            "random_plus_bottom_eig"])
    p.add_argument("--lambda-sim", dest="lambda_sim", type=float, default=25.0)
    p.add_argument("--lambda-dist", dest="lambda_dist", type=float, default=125.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_rdmreg)

    p = sub.add_parser("hsic", help="mean off-diagonal nHSIC of a CSV matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--bandwidth-rule", dest="bandwidth_rule",
                   default="median_pairwise",
                   choices=["median_pairwise", "positive_std"])
    p.set_defaults(func=cmd_hsic)

    p = sub.add_parser("train", help="run the toy trainer from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--trace-out", dest="trace_out", default="trace.csv")
    p.add_argument("--model-out", dest="model_out", default="model.csv")
    p.add_argument("--summary-out", dest="summary_out", default=None)
    p.set_defaults(func=cmd_train)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        payload = args.func(args)
    except (UsageError, ValueError, DegenerateInputError) as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_USAGE
    except (TrainingDiverged, BracketingError, RuntimeError) as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_RUNTIME
    except OSError as exc:
        print(json.dumps({"error": str(exc)}))
        return EXIT_USAGE
    print(json.dumps(payload))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
