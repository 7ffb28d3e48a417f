"""Fourier N/time and Monte Carlo M/time tables for the simulated 30-underlying book.

    python3 scripts/reproduce_tables.py [--seed 0] [--out-dir results] [--mc-max-samples 1e7]

Writes results/<dist>/{fourier,mc,fig1}.csv via the CLI benchmark and prints
the tables. Wall times are machine-dependent.
"""
import argparse
import csv
import os
import sys

from dgvar.cli import main as cli_main


def show(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--mc-max-samples", default="1e7")
    ap.add_argument("--repetitions", default="500")
    args = ap.parse_args(argv)
    for dist in ("normal", "t"):
        out = os.path.join(args.out_dir, dist)
        code = cli_main(["benchmark", "--dist", dist, "--nu", "5", "--seed", str(args.seed),
                         "--out-dir", out, "--mc-max-samples", args.mc_max_samples,
                         "--repetitions", args.repetitions])
        if code:
            return code
        for name in ("fourier", "mc"):
            print(f"\n{dist}: {name}.csv")
            show(os.path.join(out, f"{name}.csv"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
