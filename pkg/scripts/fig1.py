"""Experimental vs theoretical Monte Carlo accuracy as a function of M.

    python3 scripts/fig1.py [--seed 0] [--repetitions 500] [--max-m 1e5] [--out fig1.csv]

Experimental points come from R repeated order-statistic estimates whose
confidence levels are evaluated with the Fourier CDF at eps = 1e-9.
"""
import argparse
import csv
import sys

from dgvar.montecarlo import McConfig, epsilon_experimental, epsilon_theoretical
from dgvar.portfolio import desk_model


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gamma", type=float, default=0.01)
    ap.add_argument("--rho", type=float, default=0.01)
    ap.add_argument("--repetitions", type=int, default=500)
    ap.add_argument("--max-m", type=float, default=1e5)
    ap.add_argument("--out", default="fig1.csv")
    args = ap.parse_args(argv)
    model = desk_model(args.seed)
    rows = []
    for e in range(3, 10):
        m = 10 ** e
        exp = None
        if m <= args.max_m:
            cfg = McConfig(m, seed=args.seed + e, repetitions=args.repetitions,
                           confidence_rho=args.rho)
            exp = float(epsilon_experimental(model, args.gamma, cfg))
        th = epsilon_theoretical(args.gamma, m, args.rho)
        rows.append((m, exp, th))
        ratio = "" if exp is None else f"  ratio {exp / th:.3f}"
        print(f"M=1e{e}  eps_exp={'-' if exp is None else f'{exp:.3e}'}  eps_th={th:.3e}{ratio}")
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "epsilon_experimental", "epsilon_theoretical"])
        for m, exp, th in rows:
            w.writerow([m, "" if exp is None else repr(exp), repr(th)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
