"""Brute-force ground truth at desk scale.

Two independent routes to the quantities the solvers compute:

* `brute_force_u` -- exhaustive 2-d search over ellipses parametrized by
  semiaxes and rotation, with containment decided by dense boundary
  sampling.  Slow and obviously correct; the reference for every 2-d
  solver result.
* `quadrature_m` -- Monte-Carlo evaluation of the mean-square gauge over
  an ellipsoid boundary, validating the closed-form trace identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import ConvexBody, norm_many
from .ellipsoids import Ellipsoid, sample_mu


class NoFeasiblePointError(RuntimeError):
    """The search grid contained no inscribed ellipse (grid too coarse)."""


@dataclass(frozen=True)
class GridConfig:
    axis_steps: int = 120
    angle_steps: int = 90
    refine_rounds: int = 3
    boundary_samples: int = 2048

    def __post_init__(self):
        if min(self.axis_steps, self.angle_steps, self.refine_rounds,
               self.boundary_samples) < 1:
            raise ValueError("all grid parameters must be positive")


def _grid_axis(lo, hi, steps):
    return np.linspace(lo, hi, steps)


def brute_force_u(body: ConvexBody, e: Ellipsoid, grid: GridConfig = GridConfig()):
    """Exhaustive 2-d minimization over inscribed ellipses.

    Ellipses are parametrized by semiaxes a >= b > 0 and rotation phi in
    [0, pi); containment is tested at `boundary_samples` body boundary
    points (one-sided sampling error: a marginally infeasible ellipse can
    slip through between samples).  The grid is re-centered on the
    incumbent and shrunk tenfold `refine_rounds` times.  Deterministic,
    with lexicographic (a, b, phi) tie-breaking.  Returns (Q_best, J_best).
    """
    if body.dim != 2 or e.dim != 2:
        raise ValueError("the brute-force search is 2-d only")
    angles = 2.0 * np.pi * np.arange(grid.boundary_samples) / grid.boundary_samples
    dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    bpts = dirs / norm_many(body, dirs)[:, None]
    # rows: x1^2, 2 x1 x2, x2^2 -- so margins come from one matmul
    gram = np.column_stack([bpts[:, 0] ** 2, 2.0 * bpts[:, 0] * bpts[:, 1],
                            bpts[:, 1] ** 2]).T
    # interleave columns so each block spreads over the whole boundary and
    # infeasible candidates are eliminated after the first blocks
    stride = 16
    order = np.concatenate([np.arange(s, grid.boundary_samples, stride)
                            for s in range(stride)])
    gram = gram[:, order]
    rmax = float(np.max(np.linalg.norm(bpts, axis=1))) * 1.0000001
    c = e.q_inv
    obj_coef = np.array([c[0, 0], 2.0 * c[0, 1], c[1, 1]]) / 2.0

    a_lo, a_hi = rmax * 1e-4, rmax
    b_lo, b_hi = rmax * 1e-4, rmax
    p_lo, p_hi = 0.0, np.pi
    best = None  # (J2, a, b, phi, q3)
    for round_idx in range(grid.refine_rounds + 1):
        avals = _grid_axis(a_lo, a_hi, grid.axis_steps)
        bvals = _grid_axis(b_lo, b_hi, grid.axis_steps)
        pvals = p_lo + (p_hi - p_lo) * np.arange(grid.angle_steps) / grid.angle_steps
        aa, bb, pp = np.meshgrid(avals, bvals, pvals, indexing="ij")
        aa, bb, pp = aa.ravel(), bb.ravel(), pp.ravel()
        keep = (bb <= aa) & (aa > 0) & (bb > 0)
        aa, bb, pp = aa[keep], bb[keep], pp[keep]
        ca, sa = np.cos(pp), np.sin(pp)
        ia, ib = aa**-2.0, bb**-2.0
        q11 = ca**2 * ia + sa**2 * ib
        q22 = sa**2 * ia + ca**2 * ib
        q12 = ca * sa * (ia - ib)
        forms = np.column_stack([q11, q12, q22])
        j2 = forms @ obj_coef
        feasible = np.ones(forms.shape[0], dtype=bool)
        block = max(64, gram.shape[1] // 16)
        for s in range(0, gram.shape[1], block):
            alive = np.flatnonzero(feasible)
            if alive.size == 0:
                break
            margins = forms[alive] @ gram[:, s:s + block]
            feasible[alive] = np.all(margins >= 1.0 - 1e-9, axis=1)
        if np.any(feasible):
            j2_masked = np.where(feasible, j2, np.inf)
            i = int(np.argmin(j2_masked))  # first minimum = lexicographic (a, b, phi)
            cand = (float(j2[i]), float(aa[i]), float(bb[i]), float(pp[i]), forms[i])
            if best is None or cand[0] < best[0]:
                best = cand
        elif best is None:
            raise NoFeasiblePointError("no inscribed ellipse on the grid")
        _, a0, b0, p0, _ = best
        wa, wb, wp = (a_hi - a_lo) / 10.0, (b_hi - b_lo) / 10.0, (p_hi - p_lo) / 10.0
        a_lo, a_hi = max(rmax * 1e-6, a0 - wa / 2), min(rmax, a0 + wa / 2)
        b_lo, b_hi = max(rmax * 1e-6, b0 - wb / 2), b0 + wb / 2
        p_lo, p_hi = p0 - wp / 2, p0 + wp / 2
    j2, _, _, _, q3 = best
    q_best = np.array([[q3[0], q3[1]], [q3[1], q3[2]]])
    return q_best, float(np.sqrt(j2))


def quadrature_m(e: Ellipsoid, body: ConvexBody, count: int, seed: int):
    """Monte-Carlo mean-square gauge of the body over the boundary measure
    of E.  Returns (estimate, standard_error) for the square root, with the
    delta-method error propagation."""
    if count < 100:
        raise ValueError("count must be at least 100")
    pts = sample_mu(e, count, seed)
    vals = norm_many(body, pts) ** 2
    mean = float(np.mean(vals))
    se_mean = float(np.std(vals, ddof=1) / np.sqrt(count))
    est = float(np.sqrt(mean))
    se = se_mean / (2.0 * est) if est > 0 else float("nan")
    return est, se
