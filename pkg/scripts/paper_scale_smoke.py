#!/usr/bin/env python3
"""Overnight paper-scale run: (9,10,L=10000,w=100) punctured to R_pi = 0.5.

Finds the threshold of the large chain with the full 400,000 iteration
budget and pruning enabled, then compares against the desk-scale
(L=200, w=10) chain punctured to the same effective rate.  The two should
agree to about 0.01.  Expect hours of runtime.

Usage:
    python scripts/paper_scale_smoke.py [--tol 1e-3]
"""

import argparse
import time

from twemac_jcf.channel import BUILTINS
from twemac_jcf.de_coupled import CoupledEnsemble, nominal_rate
from twemac_jcf.threshold import Caps, CoupledSystem, find_threshold


def run(e: CoupledEnsemble, tol: float, l_max: int) -> float:
    fam = BUILTINS["primary"]
    p_pi = 1.0 - nominal_rate(e) / 0.5
    t0 = time.time()
    res = find_threshold(
        CoupledSystem(e), fam, tol=tol, p_pi=p_pi, caps=Caps(l_max=l_max, prune=True)
    )
    print(
        f"(dv={e.d_v}, dc={e.d_c}, L={e.L}, w={e.w}) p_pi={p_pi:.4f} "
        f"eps_thresh={res.eps_thresh:.5f} "
        f"[{res.eps_lo:.5f}, {res.eps_hi:.5f}] "
        f"evals={res.evaluations} ({time.time() - t0:.0f}s)"
    )
    return res.eps_thresh


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tol", type=float, default=1e-3)
    args = ap.parse_args()
    desk = run(CoupledEnsemble(9, 10, 200, 10), args.tol, 20000)
    paper = run(CoupledEnsemble(9, 10, 10000, 100), args.tol, 400000)
    gap = abs(paper - desk)
    print(f"gap = {gap:.5f} ({'OK' if gap <= 0.01 else 'EXCEEDS 0.01'})")


if __name__ == "__main__":
    main()
