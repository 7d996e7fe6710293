"""Type distribution evolution for spatially coupled (d_v, d_c, L, w) ensembles.

Variable positions occupy -L..L; check positions -L..L+w-1.  Effective
node inputs are width-w window averages of the per-position message
distributions, with out-of-range variable positions reading as the type-5
point mass (pseudo variable nodes fixed to the known all-zero pair).
Window averages use fresh prefix sums each iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Set, Tuple

import numpy as np

from .channel import validate_dist
from .de_core import (
    DEFAULT_STALL_TOL,
    DEFAULT_SUCCESS_TARGET,
    chk_matrices,
    mat_power,
    renormalize,
    var_matrices,
)

E5 = np.array([0.0, 0.0, 0.0, 0.0, 1.0])

DEFAULT_COUPLED_LMAX = 20000


@dataclass(frozen=True)
class CoupledEnsemble:
    """A (d_v, d_c, L, w) spatially coupled regular ensemble."""

    d_v: int
    d_c: int
    L: int
    w: int

    def __post_init__(self):
        if self.d_v < 2:
            raise ValueError(f"coupled ensemble needs d_v >= 2, got {self.d_v}")
        if self.d_c < 2:
            raise ValueError(f"d_c must be >= 2, got {self.d_c}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.w < 1:
            raise ValueError(f"w must be >= 1, got {self.w}")

    @property
    def n_var_positions(self) -> int:
        return 2 * self.L + 1

    @property
    def n_chk_positions(self) -> int:
        return 2 * self.L + self.w


def nominal_rate(e: CoupledEnsemble) -> float:
    """Design rate of the coupled ensemble (may be negative for tiny L)."""
    ratio = e.d_v / e.d_c
    i = np.arange(e.w + 1)
    boundary = (e.w + 1 - 2 * np.sum((i / e.w) ** e.d_c)) / (2 * e.L + 1)
    return (1 - ratio) - ratio * boundary


def _window_sum(rows: np.ndarray, w: int) -> np.ndarray:
    """Sums of w consecutive rows: out[i] = rows[i] + ... + rows[i+w-1]."""
    cs = np.vstack([np.zeros((1, rows.shape[1])), np.cumsum(rows, axis=0)])
    return cs[w:] - cs[: rows.shape[0] - w + 1]


def eff_vc_window(pvc: np.ndarray, w: int, lo: int, hi: int) -> np.ndarray:
    """Effective check inputs for check indices lo..hi+w-1.

    Check index q averages variable rows q-w+1..q; rows outside the stored
    array read as the type-5 point mass.
    """
    if w == 1:
        return pvc[lo : hi + 1].copy()
    pad = np.tile(E5, (w - 1, 1))
    padded = np.vstack([pad, pvc, pad])  # row shift: var index i -> i + w - 1
    return _window_sum(padded[lo : hi + 2 * w - 1], w) / w


def eff_cv_window(pcv: np.ndarray, w: int, lo: int, hi: int) -> np.ndarray:
    """Effective variable inputs for variable indices lo..hi.

    Variable index i averages check rows i..i+w-1 (always in range).
    """
    if w == 1:
        return pcv[lo : hi + 1].copy()
    return _window_sum(pcv[lo : hi + w], w) / w


def effective_dists(
    pvc: np.ndarray, pcv: np.ndarray, e: CoupledEnsemble
) -> Tuple[np.ndarray, np.ndarray]:
    """Full-width window averages (eff_vc over all check positions, eff_cv
    over all variable positions)."""
    nv = e.n_var_positions
    return eff_vc_window(pvc, e.w, 0, nv - 1), eff_cv_window(pcv, e.w, 0, nv - 1)


@dataclass
class CoupledResult:
    """Outcome of a coupled evolution run."""

    p_dec: np.ndarray  # per variable position, -L..L
    min_p_dec: float
    iterations_used: int
    converged: str  # 'success' | 'stall' | 'cap'
    final_pvc: np.ndarray
    final_pcv: np.ndarray
    profile: Optional[Dict[int, np.ndarray]] = None


def de_coupled(
    e: CoupledEnsemble,
    pch,
    l_max: int = DEFAULT_COUPLED_LMAX,
    success_target: float = DEFAULT_SUCCESS_TARGET,
    stall_tol: float = DEFAULT_STALL_TOL,
    prune: bool = True,
    profile_iters: Optional[Set[int]] = None,
) -> CoupledResult:
    """Run coupled type distribution evolution until success, stall, or cap.

    Success means min-over-positions p_dec >= success_target.  With
    prune=True, positions whose variable-to-check distribution is within
    stall_tol of the type-5 point mass are frozen and excluded from the
    update window (the decoded wave leaves large saturated regions behind).
    """
    pch = validate_dist(pch)
    nv, nc = e.n_var_positions, e.n_chk_positions
    pvc = np.tile(pch, (nv, 1))
    pcv = np.tile(pch, (nc, 1))
    p_dec = np.zeros(nv)
    profile: Optional[Dict[int, np.ndarray]] = {} if profile_iters is not None else None

    status = "cap"
    it = 0
    for it in range(1, l_max + 1):
        lo, hi = 0, nv - 1
        if prune:
            unsat = np.flatnonzero(np.max(np.abs(pvc - E5), axis=1) > stall_tol)
            if unsat.size == 0:
                p_dec[:] = 1.0
                status = "success"
                break
            lo = max(0, int(unsat[0]) - e.w)
            hi = min(nv - 1, int(unsat[-1]) + e.w)

        # check half-iteration over check indices lo..hi+w-1
        eff_vc = eff_vc_window(pvc, e.w, lo, hi)
        m_vc = chk_matrices(eff_vc)
        pcv[lo : hi + e.w] = renormalize(
            np.squeeze(mat_power(m_vc, e.d_c - 2) @ eff_vc[:, :, None], axis=2)
        )

        # variable half-iteration and decoder output over indices lo..hi
        eff_cv = eff_cv_window(pcv, e.w, lo, hi)
        m_cv = var_matrices(eff_cv)
        m_pow = mat_power(m_cv, e.d_v - 1)
        new_rows = renormalize(m_pow @ pch)
        p_out = renormalize((m_pow @ m_cv) @ pch)
        p_dec[lo : hi + 1] = p_out[:, 3] + p_out[:, 4]
        delta = float(np.max(np.abs(new_rows - pvc[lo : hi + 1])))
        pvc[lo : hi + 1] = new_rows

        if profile is not None and it in profile_iters:
            profile[it] = p_dec.copy()
        if float(p_dec.min()) >= success_target:
            status = "success"
            break
        if delta < stall_tol:
            status = "stall"
            break
    if profile is not None:
        profile[it] = p_dec.copy()
    return CoupledResult(
        p_dec=p_dec,
        min_p_dec=float(p_dec.min()),
        iterations_used=it,
        converged=status,
        final_pvc=pvc,
        final_pcv=pcv,
        profile=profile,
    )
