"""Decodability predicate, erasure-threshold bisection, and rate sweeps.

The threshold is the largest eps at which the evolution drives the
per-position success probability past the target (1 - 1e-5 by default)
within the iteration cap.  Bisection assumes decodability is monotone in
eps; a scan mode can verify this on a grid for unfamiliar channels.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Union

from .channel import ChannelFamily, puncture
from .de_core import DEFAULT_STALL_TOL, DEFAULT_SUCCESS_TARGET, RegularConfig, de_regular
from .de_coupled import DEFAULT_COUPLED_LMAX, CoupledEnsemble, de_coupled, nominal_rate

DEFAULT_REGULAR_LMAX = 5000
DEFAULT_TOL_REGULAR = 1e-4
DEFAULT_TOL_COUPLED = 1e-3


@dataclass(frozen=True)
class RegularSystem:
    d_v: int
    d_c: int


@dataclass(frozen=True)
class CoupledSystem:
    ensemble: CoupledEnsemble


System = Union[RegularSystem, CoupledSystem]


@dataclass(frozen=True)
class Caps:
    """Termination settings shared by both evolution kinds."""

    l_max: Optional[int] = None  # per-kind default when None
    success_target: float = DEFAULT_SUCCESS_TARGET
    stall_tol: float = DEFAULT_STALL_TOL
    prune: bool = True

    def l_max_for(self, system: System) -> int:
        if self.l_max is not None:
            return self.l_max
        return (
            DEFAULT_REGULAR_LMAX
            if isinstance(system, RegularSystem)
            else DEFAULT_COUPLED_LMAX
        )


@dataclass
class EvalMeta:
    eps: float
    decodable: bool
    iterations: int
    status: str
    min_p_dec: float


@dataclass
class ThresholdResult:
    eps_thresh: float
    eps_lo: float
    eps_hi: float
    tol: float
    evaluations: int
    evals: List[EvalMeta] = field(default_factory=list)
    degenerate: bool = False  # eps = 0 already undecodable


def is_decodable(
    system: System,
    family: ChannelFamily,
    eps: float,
    caps: Caps = Caps(),
    p_pi: float = 0.0,
) -> EvalMeta:
    """Run the evolution at eps (optionally punctured) and report the outcome."""
    pch = family.eval(eps)
    if p_pi:
        pch = puncture(pch, p_pi)
    l_max = caps.l_max_for(system)
    if isinstance(system, RegularSystem):
        cfg = RegularConfig(
            d_v=system.d_v,
            d_c=system.d_c,
            l_max=l_max,
            success_target=caps.success_target,
            stall_tol=caps.stall_tol,
        )
        res = de_regular(cfg, pch)
        return EvalMeta(eps, res.converged == "success", res.iterations_used,
                        res.converged, res.p_dec)
    res = de_coupled(
        system.ensemble,
        pch,
        l_max=l_max,
        success_target=caps.success_target,
        stall_tol=caps.stall_tol,
        prune=caps.prune,
    )
    return EvalMeta(eps, res.converged == "success", res.iterations_used,
                    res.converged, res.min_p_dec)


def default_tol(system: System) -> float:
    return DEFAULT_TOL_REGULAR if isinstance(system, RegularSystem) else DEFAULT_TOL_COUPLED


def find_threshold(
    system: System,
    family: ChannelFamily,
    tol: Optional[float] = None,
    caps: Caps = Caps(),
    p_pi: float = 0.0,
    verify_scan: Optional[int] = None,
) -> ThresholdResult:
    """Bisect for the largest decodable eps; bracket width <= 2*tol.

    With verify_scan=n, an n-point grid is evaluated first and a
    non-monotone decodability pattern raises RuntimeError.
    """
    if tol is None:
        tol = default_tol(system)
    evals: List[EvalMeta] = []

    def check(eps: float) -> bool:
        meta = is_decodable(system, family, eps, caps, p_pi)
        evals.append(meta)
        return meta.decodable

    if verify_scan:
        import numpy as np

        flags = [check(float(x)) for x in np.linspace(0.0, 1.0, verify_scan)]
        # decodable must form a prefix of the grid
        seen_false = False
        for f in flags:
            if not f:
                seen_false = True
            elif seen_false:
                raise RuntimeError(
                    "decodability is not monotone in eps on the scan grid; "
                    "bisection would be unsound for this channel family"
                )

    if not check(0.0):
        return ThresholdResult(0.0, 0.0, 0.0, tol, len(evals), evals, degenerate=True)
    if check(1.0):
        return ThresholdResult(1.0, 1.0, 1.0, tol, len(evals), evals)
    lo, hi = 0.0, 1.0
    while hi - lo > 2 * tol:
        mid = 0.5 * (lo + hi)
        if check(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(0.5 * (lo + hi), lo, hi, tol, len(evals), evals)


@dataclass
class SweepRow:
    d_v: int
    d_c: int
    L: Optional[int]
    w: Optional[int]
    p_pi: float
    nominal_rate: float
    rate_pi: float
    eps_thresh: float
    eps_lo: float
    eps_hi: float
    evals: int


def _system_rate(system: System) -> float:
    if isinstance(system, RegularSystem):
        return 1.0 - system.d_v / system.d_c
    return nominal_rate(system.ensemble)


def _sweep_point(args) -> SweepRow:
    system, family, p_pi, tol, caps = args
    res = find_threshold(system, family, tol=tol, caps=caps, p_pi=p_pi)
    rate = _system_rate(system)
    if isinstance(system, RegularSystem):
        d_v, d_c, L, w = system.d_v, system.d_c, None, None
    else:
        e = system.ensemble
        d_v, d_c, L, w = e.d_v, e.d_c, e.L, e.w
    return SweepRow(
        d_v=d_v,
        d_c=d_c,
        L=L,
        w=w,
        p_pi=p_pi,
        nominal_rate=rate,
        rate_pi=rate / (1 - p_pi),
        eps_thresh=res.eps_thresh,
        eps_lo=res.eps_lo,
        eps_hi=res.eps_hi,
        evals=res.evaluations,
    )


def sweep(
    systems: Sequence[System],
    family: ChannelFamily,
    puncture_grid: Sequence[float] = (0.0,),
    tol: Optional[float] = None,
    caps: Caps = Caps(),
    jobs: int = 1,
) -> List[SweepRow]:
    """Threshold and rate for every (system, p_pi) pair, in input order."""
    tasks = [
        (system, family, float(p_pi), tol, caps)
        for system in systems
        for p_pi in puncture_grid
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
