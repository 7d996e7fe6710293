#!/usr/bin/env python3
"""Desk-scale rate-vs-threshold sweep for (d_v, 10, L=200, w=10) ensembles.

Emits the threshold points and the analytic rate curves as CSV; plot
eps_thresh on the x axis against nominal_rate (points) and the curve
columns (lines) to reproduce the coverage picture.

Usage:
    python scripts/run_figure6.py --out fig6.csv [--jobs 4] [--tol 1e-3]
"""

import argparse
import sys

from twemac_jcf.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="fig6.csv")
    ap.add_argument("--dc", type=int, default=10)
    ap.add_argument("--dv", default="3..9")
    ap.add_argument("--L", type=int, default=200)
    ap.add_argument("--w", type=int, default=10)
    ap.add_argument("--p-pi", default="0")
    ap.add_argument("--channel", default="primary")
    ap.add_argument("--tol", type=float, default=1e-3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    return cli_main(
        [
            "figure6",
            "--dc", str(args.dc),
            "--dv", args.dv,
            "--L", str(args.L),
            "--w", str(args.w),
            "--p-pi", args.p_pi,
            "--channel", args.channel,
            "--tol", repr(args.tol),
            "--jobs", str(args.jobs),
            "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
