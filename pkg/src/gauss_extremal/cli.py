"""Command-line surface: region queries, dual-function tables, inequality
falsification sweeps, and covering-ellipsoid simulations.

Data goes to stdout, diagnostics to stderr. All randomized commands are
deterministic under a fixed seed (--seed, else GAUSS_EXTREMAL_SEED, else
0), and outputs are canonically ordered, so repeated runs are
byte-identical. Exit codes: 0 success (region: inside; verify: no
violations; ellipsoid: region ok and identity residual small), 1 checked
condition failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import GaussExtremalError
from .extremal import (
    alpha_family_channel,
    oohama_gap,
    scalar_dual_closed,
    scalar_dual_oracle,
    scalar_extremal_gap,
    vector_extremal_gap,
)
from .gauss_model import GaussianAuxChannel, GaussianPairModel, matrix_from_json
from .ellipsoid_codec import CodecConfig, report_to_dict, run_simulation, trials_csv_rows
from .rate_region import RegionQuery, region_verdict
from .rng import random_pd, stream

VERIFY_MODES = ("thm1-scalar", "thm1-vector", "thm3", "oohama", "vec-epi")
GAP_TOL = 1e-9


def _fmt(value: float, precision: int) -> str:
    return format(value, f".{precision}g")


def _round_floats(obj, precision: int):
    if isinstance(obj, float):
        return float(_fmt(obj, precision))
    if isinstance(obj, dict):
        return {k: _round_floats(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, precision) for v in obj]
    return obj


def _emit_json(payload: dict, precision: int) -> None:
    print(json.dumps(_round_floats(payload, precision), sort_keys=True))


def _default_seed() -> int:
    raw = os.environ.get("GAUSS_EXTREMAL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise GaussExtremalError(f"GAUSS_EXTREMAL_SEED is not an integer: {raw!r}") from None


def _sample_scalar_channels(gen: np.random.Generator):
    # Small chance of a degenerate description keeps the zero paths exercised.
    def one(side: str) -> GaussianAuxChannel:
        if gen.uniform() < 0.02:
            return GaussianAuxChannel.degenerate_on(side)
        return GaussianAuxChannel.scalar_corr(gen.uniform(0.0, 0.999), side)

    return one("x"), one("y")


def _sample_vector_channel(gen: np.random.Generator, n: int, side: str) -> GaussianAuxChannel:
    if gen.uniform() < 0.02:
        return GaussianAuxChannel.degenerate_on(side)
    gain = gen.standard_normal((n, n))
    return GaussianAuxChannel.linear(gain, random_pd(gen, n), side)


def run_verify_sweep(mode: str, trials: int, dim: int, seed: int) -> dict:
    """Seeded falsification sweep; returns the summary used by `verify`.

    Gap conventions per mode: thm3 and thm1-scalar use two descriptions on
    a unit-variance pair, thm1-vector uses random covariances and channels,
    oohama drops the second description, and vec-epi mixes random channels
    with injected equality-family channels whose conditional covariance is
    proportional to the noise covariance (those certify that zero gap is
    attained).
    """
    if mode not in VERIFY_MODES:
        raise GaussExtremalError(f"unknown mode {mode!r}")
    if trials < 1:
        raise GaussExtremalError("trials must be at least 1")
    if not 1 <= dim <= 64:
        raise GaussExtremalError("dim must lie in [1, 64]")

    gaps = np.empty(trials)
    argmin_params: dict = {}
    running_min = math.inf
    for t in range(trials):
        gen = stream(seed, t, 0)
        if mode == "thm3":
            rho = gen.uniform(-0.99, 0.99)
            u, v = _sample_scalar_channels(gen)
            gap = scalar_extremal_gap(rho, u, v)
            params = {"sample": t, "rho": rho}
        elif mode == "thm1-scalar":
            sign = -1.0 if gen.uniform() < 0.5 else 1.0
            rho = sign * gen.uniform(0.05, 0.99)
            u, v = _sample_scalar_channels(gen)
            model = GaussianPairModel.scalar(rho)
            gap = vector_extremal_gap(model, u, v)
            params = {"sample": t, "rho": rho}
        elif mode == "thm1-vector":
            model = GaussianPairModel.vector(random_pd(gen, dim), random_pd(gen, dim))
            u = _sample_vector_channel(gen, dim, "x")
            v = _sample_vector_channel(gen, dim, "y")
            gap = vector_extremal_gap(model, u, v)
            params = {"sample": t, "n": dim}
        elif mode == "oohama":
            rho = gen.uniform(-0.99, 0.99)
            model = GaussianPairModel.scalar(rho)
            u = GaussianAuxChannel.scalar_corr(gen.uniform(0.0, 0.999), "x")
            gap = oohama_gap(model, u)
            params = {"sample": t, "rho": rho}
        else:  # vec-epi
            model = GaussianPairModel.vector(random_pd(gen, dim), random_pd(gen, dim))
            inject = t % 2 == 0
            if inject:
                # Equality family: conditional covariance proportional to the
                # noise covariance, scaled to stay below the source covariance.
                white = np.linalg.inv(np.linalg.cholesky(model.sigma_x))
                m = float(np.linalg.eigvalsh(white @ model.sigma_z @ white.T).max())
                lam = 1.0 + 1.0 / (gen.uniform(0.05, 0.95) / m)
                u, alpha = alpha_family_channel(model, lam)
                params = {"sample": t, "n": dim, "alpha": alpha, "injected": True}
            else:
                u = _sample_vector_channel(gen, dim, "x")
                params = {"sample": t, "n": dim, "injected": False}
            gap = oohama_gap(model, u)
        gaps[t] = gap
        if gap < running_min:
            running_min = gap
            argmin_params = params

    negative = int(np.count_nonzero(gaps < -GAP_TOL))
    return {
        "mode": mode,
        "trials": trials,
        "dim": dim if mode in ("thm1-vector", "vec-epi") else 1,
        "seed": seed,
        "min_gap": float(gaps.min()),
        "mean_gap": float(gaps.mean()),
        "max_gap": float(gaps.max()),
        "negative_count": negative,
        "argmin": argmin_params,
        "gaps": gaps,
    }


def _cmd_region(args) -> int:
    q = RegionQuery(rho=args.rho, r_x=args.rx, r_y=args.ry, nu_x=args.nux, nu_y=args.nuy)
    v = region_verdict(q)
    payload = {
        "inside": v.inside,
        "satisfies_rx": v.satisfies_rx,
        "satisfies_ry": v.satisfies_ry,
        "satisfies_sum": v.satisfies_sum,
        "slack_rx": v.slack_rx,
        "slack_ry": v.slack_ry,
        "slack_sum": v.slack_sum,
    }
    if args.output == "json":
        _emit_json(payload, args.precision)
    else:
        keys = sorted(payload)
        print(",".join(keys))
        print(",".join(
            _fmt(payload[k], args.precision) if isinstance(payload[k], float) else str(payload[k]).lower()
            for k in keys
        ))
    return 0 if v.inside else 1


def _cmd_dual(args) -> int:
    lambdas = [float(s) for s in args.lambdas.split(",") if s.strip()]
    if not lambdas:
        raise GaussExtremalError("--lambdas must list at least one value")
    rows = []
    for lam in lambdas:
        closed = scalar_dual_closed(lam, args.rho).value_bits
        oracle = scalar_dual_oracle(lam, args.rho, args.grid)
        rows.append((lam, closed, oracle, oracle - closed))
    if args.output == "json":
        _emit_json(
            {"rho": args.rho, "grid": args.grid,
             "rows": [dict(zip(("lam", "f_closed", "f_oracle", "gap"), r)) for r in rows]},
            args.precision,
        )
    else:
        print("lambda,f_closed,f_oracle,gap")
        for r in rows:
            print(",".join(_fmt(v, args.precision) for v in r))
    return 0


def _cmd_verify(args) -> int:
    summary = run_verify_sweep(args.mode, args.trials, args.dim, args.seed)
    gaps = summary.pop("gaps")
    if args.samples_csv:
        with open(args.samples_csv, "w") as fh:
            fh.write("sample,gap\n")
            for i, g in enumerate(gaps):
                fh.write(f"{i},{_fmt(float(g), args.precision)}\n")
    _emit_json(summary, args.precision)
    return 0 if summary["negative_count"] == 0 else 1


def _cmd_ellipsoid(args) -> int:
    if args.sigma_file is not None:
        with open(args.sigma_file) as fh:
            sigma = matrix_from_json(json.load(fh))
        if sigma.shape[0] != args.n:
            raise GaussExtremalError("sigma file dimension does not match --n")
    elif args.sigma == "identity":
        sigma = np.eye(args.n)
    else:
        raise GaussExtremalError('--sigma accepts only "identity" (or use --sigma-file)')
    config = CodecConfig(
        n=args.n, k=args.k, rho=args.rho, sigma=sigma,
        nu_x=args.nux, nu_y=args.nuy, delta=args.delta,
        trials=args.trials, seed=args.seed,
    )
    report = run_simulation(config)
    if args.trials_csv:
        with open(args.trials_csv, "w") as fh:
            fh.write("\n".join(trials_csv_rows(report, args.precision)) + "\n")
    _emit_json(report_to_dict(report), args.precision)
    return 0 if report.region_inside and report.residual_max <= 1e-9 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gauss-extremal",
        description="Gaussian information-inequality and rate-region toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None,
                       help="random seed (default: GAUSS_EXTREMAL_SEED or 0)")
        p.add_argument("--precision", type=int, default=12,
                       help="significant digits in printed numbers")

    p_region = sub.add_parser("region", help="rate-region membership query")
    p_region.add_argument("--rho", type=float, required=True)
    p_region.add_argument("--rx", type=float, required=True)
    p_region.add_argument("--ry", type=float, required=True)
    p_region.add_argument("--nux", type=float, required=True)
    p_region.add_argument("--nuy", type=float, required=True)
    p_region.add_argument("--output", choices=("json", "csv"), default="json")
    common(p_region)

    p_dual = sub.add_parser("dual", help="dual-function table: closed form vs grid oracle")
    p_dual.add_argument("--rho", type=float, required=True)
    p_dual.add_argument("--lambdas", type=str, required=True,
                        help="comma-separated lambda values")
    p_dual.add_argument("--grid", type=int, default=500)
    p_dual.add_argument("--output", choices=("json", "csv"), default="csv")
    common(p_dual)

    p_verify = sub.add_parser("verify", help="randomized inequality falsification sweep")
    p_verify.add_argument("--mode", choices=VERIFY_MODES, required=True)
    p_verify.add_argument("--trials", type=int, default=1000)
    p_verify.add_argument("--dim", type=int, default=4)
    p_verify.add_argument("--samples-csv", type=str, default=None,
                          help="write per-sample gaps to this file")
    common(p_verify)

    p_ell = sub.add_parser("ellipsoid", help="covering-ellipsoid Monte Carlo simulation")
    p_ell.add_argument("--n", type=int, required=True)
    p_ell.add_argument("--k", type=int, required=True)
    p_ell.add_argument("--rho", type=float, required=True)
    p_ell.add_argument("--nux", type=float, required=True)
    p_ell.add_argument("--nuy", type=float, required=True)
    p_ell.add_argument("--delta", type=float, default=0.0025)
    p_ell.add_argument("--trials", type=int, default=100)
    p_ell.add_argument("--sigma", type=str, default="identity")
    p_ell.add_argument("--sigma-file", type=str, default=None)
    p_ell.add_argument("--trials-csv", type=str, default=None,
                       help="write per-trial rows to this file")
    common(p_ell)
    return parser


_COMMANDS = {
    "region": _cmd_region,
    "dual": _cmd_dual,
    "verify": _cmd_verify,
    "ellipsoid": _cmd_ellipsoid,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        try:
            args.seed = _default_seed()
        except GaussExtremalError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return _COMMANDS[args.command](args)
    except (GaussExtremalError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
