#!/usr/bin/env python3
"""Puncturing sweep of a single coupled ensemble across the rate range.

Defaults mirror the (9,10,L=200,w=10) setup: five puncturing levels whose
effective rates span roughly 0.08 to 0.5 on the primary channel.

Usage:
    python scripts/run_puncture_sweep.py --out puncture.csv
"""

import argparse
import sys

from twemac_jcf.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="puncture.csv")
    ap.add_argument("--dv", type=int, default=9)
    ap.add_argument("--dc", type=int, default=10)
    ap.add_argument("--L", type=int, default=200)
    ap.add_argument("--w", type=int, default=10)
    ap.add_argument("--p-pi", default="0,0.2,0.4,0.6,0.8")
    ap.add_argument("--channel", default="primary")
    ap.add_argument("--tol", type=float, default=1e-3)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    return cli_main(
        [
            "figure6",
            "--dc", str(args.dc),
            "--dv", str(args.dv),
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
