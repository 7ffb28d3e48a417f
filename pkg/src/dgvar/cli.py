"""Command-line front end.

    dgvar var MODEL --gamma G --epsilon E
    dgvar cdf MODEL --x X --epsilon E
    dgvar simulate --seed S --out PATH [--options N] [--dist normal|t]
    dgvar benchmark --dist normal|t --epsilons 1e-3,1e-4 --seed S --out-dir DIR

Results go to stdout as ``key=value`` lines. Exit status: 0 success, 2 bad
arguments or model file, 3 numerical error (the message names the error).
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import time

from . import modelfile
from .errors import DgVarError, ModelFileError
from .montecarlo import (
    McConfig,
    epsilon_experimental,
    epsilon_theoretical,
    mc_var,
    required_samples,
)
from .portfolio import PortfolioConfig, aggregate, simulate_portfolio
from .spectral import Normal, StudentT
from .var import cdf, value_at_risk

EXIT_PARSE = 2
EXIT_NUMERIC = 3

FOURIER_HEADER = ["epsilon", "N", "var", "wall_time_s"]
MC_HEADER = ["epsilon", "M", "var", "wall_time_s"]
FIG1_HEADER = ["M", "epsilon_experimental", "epsilon_theoretical"]


def _emit(stream, **fields):
    for k, v in fields.items():
        stream.write(f"{k}={v!r}\n" if isinstance(v, float) else f"{k}={v}\n")


def cmd_var(args, out):
    model = modelfile.load(args.model)
    t0 = time.perf_counter()
    res = value_at_risk(model, args.gamma, args.epsilon)
    wall = time.perf_counter() - t0
    _emit(out, var=res.x_star, gamma=res.gamma, epsilon=res.epsilon,
          n_terms=res.n_terms_used, cf_evals=res.cf_evals, dist=res.dist,
          time_s=round(wall, 6))


def cmd_cdf(args, out):
    model = modelfile.load(args.model)
    value = cdf(model, args.x, args.epsilon)
    _emit(out, x=args.x, cdf=float(value), epsilon=args.epsilon)


def _dist(args):
    return StudentT(args.nu) if args.dist == "t" else Normal()


def _portfolio_model(args):
    config = PortfolioConfig(option_count=args.options, underlying_count=args.underlyings,
                             seed=args.seed)
    options, sigma = simulate_portfolio(config)
    return aggregate(options, sigma, config, dist=_dist(args))


def cmd_simulate(args, out):
    model = _portfolio_model(args)
    modelfile.dump(model, args.out)
    _emit(out, out=args.out, p=model.p, options=args.options, dist=str(model.dist))


def _fmt(v):
    return "" if v is None else repr(v)


def cmd_benchmark(args, out):
    os.makedirs(args.out_dir, exist_ok=True)
    model = _portfolio_model(args)
    rows = []
    for eps in args.epsilons:
        t0 = time.perf_counter()
        res = value_at_risk(model, args.gamma, eps)
        rows.append([eps, res.n_terms_used, res.x_star, time.perf_counter() - t0])
    _write_csv(os.path.join(args.out_dir, "fourier.csv"), FOURIER_HEADER, rows)

    rows = []
    for i, eps in enumerate(args.epsilons):
        m = required_samples(args.gamma, eps, args.rho)
        if m > args.mc_max_samples:
            rows.append([eps, m, None, None])
            continue
        t0 = time.perf_counter()
        x = mc_var(model, args.gamma, McConfig(m, seed=args.seed + 1 + i))
        rows.append([eps, m, x, time.perf_counter() - t0])
    _write_csv(os.path.join(args.out_dir, "mc.csv"), MC_HEADER, rows)

    rows = []
    for e in range(3, 10):
        m = 10 ** e
        exp = None
        if m <= args.fig1_max_m:
            cfg = McConfig(m, seed=args.seed + 100 + e, repetitions=args.repetitions,
                           confidence_rho=args.rho)
            exp = float(epsilon_experimental(model, args.gamma, cfg))
        rows.append([m, exp, epsilon_theoretical(args.gamma, m, args.rho)])
    _write_csv(os.path.join(args.out_dir, "fig1.csv"), FIG1_HEADER, rows)
    _emit(out, out_dir=args.out_dir, dist=str(model.dist))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, (int, str)) else _fmt(v) for v in row])


def _epsilons(text):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty epsilon list")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(prog="dgvar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("var", help="certified value-at-risk of a model file")
    p.add_argument("model")
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.set_defaults(func=cmd_var)

    p = sub.add_parser("cdf", help="P(dV <= x) of a model file")
    p.add_argument("model")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.set_defaults(func=cmd_cdf)

    def portfolio_flags(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--options", type=int, default=10_000)
        p.add_argument("--underlyings", type=int, default=30)
        p.add_argument("--dist", choices=["normal", "t"], default="normal")
        p.add_argument("--nu", type=float, default=5.0)

    p = sub.add_parser("simulate", help="write a simulated options book as a model file")
    portfolio_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("benchmark", help="Fourier vs Monte Carlo tables and Fig.-1 data")
    portfolio_flags(p)
    p.add_argument("--epsilons", type=_epsilons, default=[1e-3, 1e-4, 1e-5, 1e-6])
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--rho", type=float, default=0.01)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--mc-max-samples", type=float, default=1e7,
                   help="skip Monte Carlo runs needing more samples than this")
    p.add_argument("--repetitions", type=int, default=500)
    p.add_argument("--fig1-max-m", type=float, default=1e5,
                   help="largest M for which the experimental epsilon is simulated")
    p.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except ModelFileError as exc:
        print(f"error: ModelFileError: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DgVarError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
