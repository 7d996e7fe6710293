"""Command-line surface: rates, de-regular, de-coupled, threshold, figure6,
simulate, oracle.

Every output starts with a metadata header (version, full config, seed) so
that identical configs reproduce identical files.  CSV is the default
format; --format json mirrors the same fields.  Exit codes: 2 for usage
errors (argparse), 3 for numerical-consistency failures.

Environment overrides for default tolerances:
    TWEMAC_TOL_REGULAR, TWEMAC_TOL_COUPLED, TWEMAC_SUCCESS_TARGET
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import asdict
from typing import List, Optional

import numpy as np

from . import __version__
from .channel import ChannelError, get_family, puncture
from .de_core import RegularConfig, SimplexError, de_regular
from .de_coupled import CoupledEnsemble, de_coupled, nominal_rate
from .rates import rate_bounds
from .simulate import (
    Observation,
    brute_force_jcf,
    failure_rate,
    graph_from_parity,
    load_parity_matrix,
    peel_decode,
    sample_states,
)
from .threshold import (
    Caps,
    CoupledSystem,
    RegularSystem,
    find_threshold,
    sweep,
)

EXIT_NUMERICAL = 3


def _env_float(name: str, default: Optional[float]) -> Optional[float]:
    val = os.environ.get(name)
    return float(val) if val else default


def _caps(args) -> Caps:
    return Caps(
        l_max=getattr(args, "lmax", None),
        success_target=_env_float("TWEMAC_SUCCESS_TARGET", 1.0 - 1e-5),
        prune=not getattr(args, "no_prune", False),
    )


def _tol(args, coupled: bool) -> Optional[float]:
    if args.tol is not None:
        return args.tol
    return _env_float("TWEMAC_TOL_COUPLED" if coupled else "TWEMAC_TOL_REGULAR", None)


def _meta(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    return {"version": __version__, "config": cfg}


def _emit(args, meta: dict, columns: List[str], rows: List[dict], path=None) -> None:
    out = path or getattr(args, "out", None)
    fh = open(out, "w") if out else sys.stdout
    try:
        if getattr(args, "format", "csv") == "json":
            json.dump({"meta": meta, "rows": rows}, fh, indent=2, default=str)
            fh.write("\n")
        else:
            for key, val in sorted(meta["config"].items()):
                fh.write(f"# {key}={val}\n")
            fh.write(f"# version={meta['version']}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")
    finally:
        if out:
            fh.close()


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return "" if v is None else str(v)


def _family(args):
    return get_family(args.channel, getattr(args, "channel_config", None))


def cmd_rates(args) -> int:
    family = _family(args)
    rows = []
    for eps in np.linspace(0.0, 1.0, args.grid):
        rb = rate_bounds(family.eval(float(eps)))
        rows.append(
            {
                "eps": float(eps),
                "r_df": rb.r_df,
                "r_df_prime": rb.r_df_prime,
                "r_cf": rb.r_cf,
                "r_jcf_target": rb.r_jcf_target,
            }
        )
    _emit(args, _meta(args), ["eps", "r_df", "r_df_prime", "r_cf", "r_jcf_target"], rows)
    return 0


def cmd_de_regular(args) -> int:
    family = _family(args)
    cfg = RegularConfig(d_v=args.dv, d_c=args.dc, l_max=args.lmax)
    res = de_regular(cfg, family.eval(args.eps), trace=args.trace is not None)
    if args.trace:
        cols = (
            ["iter"]
            + [f"pvc{i}" for i in range(1, 6)]
            + [f"pcv{i}" for i in range(1, 6)]
            + ["p_dec"]
        )
        rows = [
            {
                "iter": it,
                **{f"pvc{i + 1}": float(pvc[i]) for i in range(5)},
                **{f"pcv{i + 1}": float(pcv[i]) for i in range(5)},
                "p_dec": p_dec,
            }
            for it, pvc, pcv, p_dec in res.trace
        ]
        _emit(args, _meta(args), cols, rows, path=args.trace)
    _emit(
        args,
        _meta(args),
        ["p_dec", "iterations", "status"],
        [{"p_dec": res.p_dec, "iterations": res.iterations_used, "status": res.converged}],
    )
    return 0


def cmd_de_coupled(args) -> int:
    family = _family(args)
    e = CoupledEnsemble(d_v=args.dv, d_c=args.dc, L=args.L, w=args.w)
    profile_iters = None
    if args.profile:
        profile_iters = {2**k for k in range(0, 30) if 2**k <= args.lmax}
    res = de_coupled(
        e,
        family.eval(args.eps),
        l_max=args.lmax,
        prune=not args.no_prune,
        profile_iters=profile_iters,
    )
    if args.profile:
        iters = sorted(res.profile)
        cols = ["position"] + [f"p_dec_iter_{k}" for k in iters]
        rows = [
            {
                "position": pos - e.L,
                **{f"p_dec_iter_{k}": float(res.profile[k][pos]) for k in iters},
            }
            for pos in range(e.n_var_positions)
        ]
        _emit(args, _meta(args), cols, rows, path=args.profile)
    _emit(
        args,
        _meta(args),
        ["min_p_dec", "iterations", "status", "nominal_rate"],
        [
            {
                "min_p_dec": res.min_p_dec,
                "iterations": res.iterations_used,
                "status": res.converged,
                "nominal_rate": nominal_rate(e),
            }
        ],
    )
    return 0


def _parse_system(args):
    if args.regular is not None:
        dv, dc = args.regular
        return RegularSystem(int(dv), int(dc))
    dv, dc, L, w = args.coupled
    return CoupledSystem(CoupledEnsemble(int(dv), int(dc), int(L), int(w)))


def cmd_threshold(args) -> int:
    family = _family(args)
    system = _parse_system(args)
    res = find_threshold(
        system,
        family,
        tol=_tol(args, isinstance(system, CoupledSystem)),
        caps=_caps(args),
        p_pi=args.p_pi,
        verify_scan=args.verify_scan,
    )
    _emit(
        args,
        _meta(args),
        ["eps_thresh", "eps_lo", "eps_hi", "tol", "evals", "degenerate"],
        [
            {
                "eps_thresh": res.eps_thresh,
                "eps_lo": res.eps_lo,
                "eps_hi": res.eps_hi,
                "tol": res.tol,
                "evals": res.evaluations,
                "degenerate": res.degenerate,
            }
        ],
    )
    return 0


def _parse_dv_list(spec: str) -> List[int]:
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in spec.split(",")]


def cmd_figure6(args) -> int:
    family = _family(args)
    systems = [
        CoupledSystem(CoupledEnsemble(dv, args.dc, args.L, args.w))
        for dv in _parse_dv_list(args.dv)
    ]
    p_grid = [float(x) for x in args.p_pi.split(",")]
    rows_out = []
    for row in sweep(systems, family, p_grid, tol=_tol(args, True), caps=_caps(args), jobs=args.jobs):
        rows_out.append(asdict(row))
    cols = [
        "d_v", "d_c", "L", "w", "p_pi", "nominal_rate", "rate_pi",
        "eps_thresh", "eps_lo", "eps_hi", "evals",
    ]
    _emit(args, _meta(args), cols, rows_out)

    # analytic overlay curves on an eps grid
    curve_rows = []
    for eps in np.linspace(0.0, 1.0, args.curve_grid):
        rb = rate_bounds(family.eval(float(eps)))
        curve_rows.append(
            {
                "eps": float(eps),
                "r_df": rb.r_df,
                "r_df_prime": rb.r_df_prime,
                "r_cf": rb.r_cf,
                "r_jcf_target": rb.r_jcf_target,
            }
        )
    curve_path = (args.out + ".curves.csv") if args.out else None
    _emit(
        args,
        _meta(args),
        ["eps", "r_df", "r_df_prime", "r_cf", "r_jcf_target"],
        curve_rows,
        path=curve_path,
    )
    return 0


def cmd_simulate(args) -> int:
    family = _family(args)
    if args.L is not None:
        if args.M is None:
            raise SystemExit("--M is required for coupled simulation")
        system = CoupledSystem(CoupledEnsemble(args.dv, args.dc, args.L, args.w))
        size = args.M
    else:
        system = RegularSystem(args.dv, args.dc)
        size = args.N
        if size is None:
            raise SystemExit("--N is required for regular simulation")
    stats = failure_rate(
        system, family, args.eps, size, args.trials, args.seed, p_pi=args.p_pi
    )
    _emit(
        args,
        _meta(args),
        ["bit_rate", "bit_halfwidth", "block_rate", "block_halfwidth", "trials", "n_vars"],
        [asdict(stats)],
    )
    return 0


def cmd_oracle(args) -> int:
    h = load_parity_matrix(args.H)
    g = graph_from_parity(h)
    family = _family(args)
    pch = family.eval(args.eps)
    rng = np.random.default_rng(args.seed)
    n = g.n_vars

    if args.exhaustive:
        patterns = itertools.product(range(1, 6), repeat=n)
        total = 5**n
    else:
        patterns = (sample_states(pch, n, rng) for _ in range(args.trials))
        total = args.trials

    checked = sound_violations = completeness_mismatches = 0
    tree = g.is_cycle_free()
    for types in patterns:
        types = np.asarray(types, dtype=np.int64)
        obs = Observation.all_zero(types)
        out = peel_decode(g, types)
        known = (out == 4) | (out == 5)
        sets = brute_force_jcf(h, obs)
        recoverable = np.array([s == {0} for s in sets])
        sound_violations += int(np.any(known & ~recoverable))
        if tree:
            completeness_mismatches += int(np.any(known != recoverable))
        checked += 1
    _emit(
        args,
        _meta(args),
        ["patterns", "cycle_free", "sound_violations", "completeness_mismatches"],
        [
            {
                "patterns": checked,
                "cycle_free": tree,
                "sound_violations": sound_violations,
                "completeness_mismatches": completeness_mismatches if tree else None,
            }
        ],
    )
    return 0 if sound_violations == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twemac-jcf",
        description="Density evolution and finite-length validation for joint "
        "compute-and-forward decoding over two-way erasure MACs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--channel", default="primary", help="channel family name")
        p.add_argument("--channel-config", help="config file with custom families")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("rates", help="rate bounds on an eps grid")
    common(p)
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("de-regular", help="regular-ensemble evolution at one eps")
    common(p)
    p.add_argument("--dv", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lmax", type=int, default=5000)
    p.add_argument("--trace", help="per-iteration trace CSV path")
    p.set_defaults(func=cmd_de_regular)

    p = sub.add_parser("de-coupled", help="coupled-ensemble evolution at one eps")
    common(p)
    p.add_argument("--dv", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--lmax", type=int, default=20000)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--profile", help="per-position p_dec CSV path")
    p.set_defaults(func=cmd_de_coupled)

    p = sub.add_parser("threshold", help="bisect for the erasure threshold")
    common(p)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--regular", nargs=2, type=int, metavar=("DV", "DC"))
    grp.add_argument("--coupled", nargs=4, type=int, metavar=("DV", "DC", "L", "W"))
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--p-pi", type=float, default=0.0)
    p.add_argument("--verify-scan", type=int, default=None)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("figure6", help="rate-vs-threshold sweep with analytic curves")
    common(p)
    p.add_argument("--dc", type=int, default=10)
    p.add_argument("--dv", default="3..9", help="range '3..9' or list '3,5,7'")
    p.add_argument("--L", type=int, default=200)
    p.add_argument("--w", type=int, default=10)
    p.add_argument("--p-pi", default="0", help="comma list of puncture probabilities")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--curve-grid", type=int, default=201)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_figure6)

    p = sub.add_parser("simulate", help="finite-length Monte Carlo failure rates")
    common(p)
    p.add_argument("--dv", type=int, required=True)
    p.add_argument("--dc", type=int, required=True)
    p.add_argument("--N", type=int, help="codeword length (regular)")
    p.add_argument("--L", type=int)
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--M", type=int, help="variables per position (coupled)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--p-pi", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="peeling vs brute-force agreement report")
    common(p)
    p.add_argument("--H", required=True, help="parity matrix file: 'rows cols' then 0/1 rows")
    p.add_argument("--eps", type=float, default=0.5)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--exhaustive", action="store_true")
    grp.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SimplexError,) as exc:
        print(f"numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ChannelError, ValueError) as exc:
        parser.exit(2, f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
