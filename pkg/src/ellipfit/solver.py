"""Cutting-plane solvers for the extremal-ellipsoid problems.

`solve_u` computes the unique inscribed ellipsoid minimizing the
mean-square gauge over a reference ellipsoid E.  The decision variables
are the n(n+1)/2 free entries of the symmetric form B = Q_F, the
objective trace(Q_E^{-1} B) is linear, and the semi-infinite constraint
family "x^T B x >= 1 on the body boundary" is relaxed to finitely many
boundary-point cuts:

* the LP relaxation (boxed, so always solvable) is solved;
* an indefinite B gets an eigenvector cut, a boundary point along the
  most negative eigendirection, which is always violated;
* otherwise the containment oracle either accepts or supplies a violated
  boundary point as the next cut.

After convergence a guarded Newton polish solves the contact equations
(touching points on their facets, tangency, and the weighted-dyad
identity for the objective gradient) to pin the optimum well below the
LP feasibility floor, and a final rescale makes containment exact.

`solve_u_bar` runs the mirrored circumscribed problem, maximize
trace(Q_E^{-1} B) subject to 0 <= x^T B x <= 1 on the boundary, with
two-sided cuts, and probes the optimal face for non-attainment (a
singular optimal form) and non-uniqueness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (ConvexBody, LpBall, PolytopeV, _extreme_points, _facet_form,
                     _quadric_form, _scaled_normal, boundary_point,
                     boundary_quadratic_scan, body_in_ellipsoid,
                     contains_ellipsoid, linear_image, polar)
from .ellipsoids import Ellipsoid, form_distance, m_ellipsoid, make_ellipsoid
from .numerics import (LpProblem, NotPositiveDefiniteError, cholesky, solve_lp,
                       solve_nnls, sym_eigen)

# Violation floor near the LP solver's own feasibility tolerance; below it
# further cutting cannot make progress and the polish takes over.
_LP_FLOOR = 3e-9


class SolverError(RuntimeError):
    """The cutting-plane solve failed structurally (box too small, ...)."""


class RestartDisagreementError(SolverError):
    """Randomized restarts disagreed beyond the uniqueness tolerance."""


class UnsupportedBodyError(ValueError):
    """The operation is not defined for this body representation."""


@dataclass(frozen=True)
class SolveConfig:
    tol_feas: float = 1e-8
    tol_obj: float = 1e-9
    max_cuts: int = 2000
    box_R: float = 1e6
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if min(self.tol_feas, self.tol_obj) <= 0:
            raise ValueError("tolerances must be positive")
        if self.box_R <= 0 or not np.isfinite(self.box_R):
            raise ValueError("box_R must be finite and positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass(frozen=True)
class SolveReport:
    minimizer: Ellipsoid
    j_value: float
    status: str  # "optimal" | "max_cuts_reached"
    cuts: np.ndarray  # (k, n) boundary points used as constraints
    active_cuts: np.ndarray  # cuts with x^T Q_F x = 1 within 10*tol_feas
    lp_iterations: int


@dataclass(frozen=True)
class DualReport:
    status: str  # "attained" | "non_attained" | "max_cuts_reached"
    i_value: float
    maximizer: Ellipsoid | None
    degenerate_direction: np.ndarray | None
    uniqueness: str  # "unknown" | "multiple_found"
    second: Ellipsoid | None


@dataclass(frozen=True)
class JohnReport:
    is_fixed_point: bool
    distance: float
    contained: bool


@dataclass(frozen=True)
class IterateReport:
    trajectory: list
    fixed_point_reached: bool


# --------------------------------------------------------------------------
# Symmetric-form packing: diagonal entries first, then pairs (p < q).

def _pairs(n):
    return [(p, q) for p in range(n) for q in range(p + 1, n)]


def _pack(m, pairs):
    return np.concatenate([np.diag(m), [m[p, q] for p, q in pairs]])


def _unpack(v, n, pairs):
    b = np.diag(v[:n]).astype(float)
    for k, (p, q) in enumerate(pairs):
        b[p, q] = b[q, p] = v[n + k]
    return b


def _cut_row(x, pairs):
    return np.concatenate([x * x, [2.0 * x[p] * x[q] for p, q in pairs]])


def _obj_vec(c, pairs):
    # trace(C B) in packed coordinates.
    return np.concatenate([np.diag(c), [2.0 * c[p, q] for p, q in pairs]])


class _CutPool:
    """Boundary-point cuts with antipodal folding; near-duplicates
    (angular distance < 1e-6) are merged, keeping the newest point."""

    def __init__(self):
        self.points: list[np.ndarray] = []
        self._units: list[np.ndarray] = []

    def push(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        u = x / np.linalg.norm(x)
        k = int(np.argmax(np.abs(u)))
        if u[k] < 0:
            u, x = -u, -x
        cos_tol = np.cos(1e-6)
        for i, old in enumerate(self._units):
            if abs(float(old @ u)) >= cos_tol:
                self.points[i] = x
                self._units[i] = u
                return False
        self.points.append(x)
        self._units.append(u)
        return True


def _initial_cuts(body: ConvexBody, seed: int) -> _CutPool:
    n = body.dim
    pool = _CutPool()
    eye = np.eye(n)
    for i in range(n):
        pool.push(boundary_point(body, eye[i]))
        pool.push(boundary_point(body, -eye[i]))
    rng = np.random.default_rng(seed)
    for d in rng.standard_normal((4 * n, n)):
        if np.any(d):
            pool.push(boundary_point(body, d))
    # extreme points are boundary points where violations concentrate for
    # vertex-described bodies; seeding them saves separation-oracle rounds
    pts = _extreme_points(body)
    if pts is not None and pts.shape[0] <= 64:
        for p in pts:
            pool.push(p)
    return pool


def _cut_loop(body: ConvexBody, e: Ellipsoid, cfg: SolveConfig, seed: int):
    """One cutting-plane run.  Returns (B, pool, lp_count, status)."""
    n = body.dim
    pairs = _pairs(n)
    obj = _obj_vec(e.q_inv, pairs)
    pool = _initial_cuts(body, seed)
    exact_oracle = _facet_form(body) is not None or _quadric_form(body) is not None
    floor = max(cfg.tol_feas, _LP_FLOOR)
    prev_obj = None
    floor_rounds = 0
    last_pd = None
    status = "max_cuts_reached"
    lp_count = 0
    while lp_count < cfg.max_cuts:
        rows = tuple((_cut_row(x, pairs), 1.0) for x in pool.points)
        sol = solve_lp(LpProblem(obj, rows, cfg.box_R))
        lp_count += 1
        b = _unpack(sol.x, n, pairs)
        try:
            cholesky(b)
        except NotPositiveDefiniteError:
            _, vecs = sym_eigen(b)
            pool.push(boundary_point(body, vecs[:, -1]))
            continue
        last_pd = b
        candidate = make_ellipsoid(b)
        if exact_oracle:
            verdict = contains_ellipsoid(body, candidate, cfg.tol_feas)
        else:
            # cheap scan first: any violation it finds is a valid cut, and
            # only an apparent pass pays for the full-resolution scan
            verdict = contains_ellipsoid(body, candidate, cfg.tol_feas,
                                         net_size=max(180, 32 * n), starts=16,
                                         rounds=24)
            if verdict.worst_margin >= -cfg.tol_feas:
                verdict = contains_ellipsoid(body, candidate, cfg.tol_feas)
        margin = verdict.worst_margin
        obj_val = float(obj @ sol.x)
        if margin < -cfg.tol_feas:
            # Below the LP feasibility floor further cuts only churn;
            # accept after a few stagnant rounds and let the polish finish.
            if margin >= -floor:
                floor_rounds += 1
            else:
                floor_rounds = 0
            if not (floor_rounds >= 10):
                pool.push(verdict.witness)
                prev_obj = obj_val
                continue
        if sol.box_active:
            raise SolverError("LP box is active at a contained solution; "
                              "increase box_R")
        if prev_obj is not None and abs(obj_val - prev_obj) <= cfg.tol_obj * max(1.0, abs(obj_val)):
            status = "optimal"
            break
        prev_obj = obj_val
    if last_pd is None:
        last_pd = np.eye(n)
    return last_pd, pool, lp_count, status


# --------------------------------------------------------------------------
# Terminal polish: Newton on the contact equations.  At the optimum each
# touching point x_j (scaled so that the boundary normal n_j satisfies
# n_j . x_j = 1) obeys B x_j = n_j, and the weighted contact dyads satisfy
# sum_j lambda_j x_j x_j^T = Q_E^{-1}.  Solving that system pins the flat
# directions that the LP relaxation leaves wobbling at the feasibility
# tolerance.  Guarded: any failure falls back to the unpolished iterate.
#
# A contact is a triple (kind, x0, payload):
#   "plane"  -- payload h, a fixed facet normal with h . x = 1 on the facet
#   "smooth" -- payload (normal_fn, boundary_fn) for curved boundaries
#   "frozen" -- point held fixed (vertex-like contact); only its weight moves

def _fold_merge_points(points, angle_tol=1e-4):
    kept, units = [], []
    for p in points:
        u = p / np.linalg.norm(p)
        k = int(np.argmax(np.abs(u)))
        if u[k] < 0:
            u, p = -u, -p
        if any(abs(float(u @ v)) >= np.cos(angle_tol) for v in units):
            continue
        kept.append(p)
        units.append(u)
    return kept


def _vrep_facet_normal(body, x):
    """Local supporting-facet normal of a 2-d vertex polytope at a boundary
    point x: solve for h with h . w = 1 on the two generators bracketing x
    by angle.  None when x sits at a vertex or validation fails."""
    w = np.vstack([body.generators, -body.generators])
    ang = np.arctan2(w[:, 1], w[:, 0])
    ax = np.arctan2(x[1], x[0])
    rel = np.mod(ang - ax, 2.0 * np.pi)
    eps = 1e-9
    ccw = rel.copy()
    ccw[ccw < eps] = np.inf
    cw = np.mod(-rel, 2.0 * np.pi)
    cw[cw < eps] = np.inf
    if np.all(np.isinf(ccw)) or np.all(np.isinf(cw)):
        return None
    if np.min(ccw) > np.pi - 1e-9 or np.min(cw) > np.pi - 1e-9:
        return None  # x aligned with a generator: vertex contact
    a = w[int(np.argmin(cw))]
    b = w[int(np.argmin(ccw))]
    mat = np.array([a, b])
    if abs(np.linalg.det(mat)) < 1e-12:
        return None
    h = np.linalg.solve(mat, np.ones(2))
    if abs(float(h @ x) - 1.0) > 1e-6:
        return None
    if np.max(np.abs(w @ h)) > 1.0 + 1e-7:
        return None
    return h


def _collect_contacts(body, b0, cfg):
    window = max(1e-3, 100.0 * cfg.tol_feas)
    n = body.dim
    facets = _facet_form(body)
    if facets is not None:
        binv = np.linalg.inv(b0)
        t = np.einsum("ij,jk,ik->i", facets, binv, facets)
        contacts = []
        for j in np.flatnonzero(t >= 1.0 - window):
            h = facets[j]
            x = (binv @ h) / t[j]  # tangent point of the slab |h . x| <= 1
            others = np.abs(facets @ x)
            others[j] = 0.0
            if np.max(others) <= 1.0 + 1e-6:
                contacts.append(("plane", x, h))
            else:
                contacts.append(("frozen", boundary_point(body, binv @ h), None))
        return contacts
    quadric = _quadric_form(body)
    if quadric is not None:
        vals, vecs = sym_eigen(quadric)
        w = vecs @ np.diag(vals**-0.5) @ vecs.T
        mvals, mvecs = sym_eigen(w @ b0 @ w)

        def normal(x, _q=quadric):
            return _q @ x

        def on_boundary(x, _q=quadric):
            return float(x @ _q @ x) - 1.0

        return [("smooth", w @ mvecs[:, i], (normal, on_boundary))
                for i in np.flatnonzero(np.abs(mvals - 1.0) <= window)]
    smooth = _scaled_normal(body)
    if smooth is not None:
        dirs, vals = boundary_quadratic_scan(body, b0, sense=1)
        hits = [boundary_point(body, dirs[i])
                for i in np.flatnonzero(np.abs(vals - 1.0) <= window)]

        def on_boundary(x, _body=body):
            return _body.norm(x) - 1.0

        return [("smooth", x, (smooth, on_boundary))
                for x in _fold_merge_points(hits)]
    if isinstance(body, PolytopeV) and n == 2:
        dirs, vals = boundary_quadratic_scan(body, b0, sense=1)
        hits = [boundary_point(body, dirs[i])
                for i in np.flatnonzero(np.abs(vals - 1.0) <= window)]
        contacts = []
        for x in _fold_merge_points(hits):
            h = _vrep_facet_normal(body, x)
            if h is not None:
                contacts.append(("plane", x, h))
            else:
                contacts.append(("frozen", x, None))
        return contacts
    return []


def _kkt_residual(z, n, pairs, c_mat, contacts):
    m = n + len(pairs)
    s = len(contacts)
    b = _unpack(z[:m], n, pairs)
    xs = []
    pos = m
    for kind, x0, _ in contacts:
        if kind == "frozen":
            xs.append(x0)
        else:
            xs.append(z[pos:pos + n])
            pos += n
    lam = z[pos:pos + s]
    acc = c_mat.copy()
    for lj, xj in zip(lam, xs):
        acc -= lj * np.outer(xj, xj)
    parts = [_pack(acc, pairs)]
    for (kind, _, payload), xj in zip(contacts, xs):
        if kind == "plane":
            parts.append(b @ xj - payload)
            parts.append([payload @ xj - 1.0])
        elif kind == "smooth":
            normal, on_boundary = payload
            parts.append(b @ xj - normal(xj))
            parts.append([on_boundary(xj)])
        else:
            parts.append([xj @ b @ xj - 1.0])
    return np.concatenate(parts)


def _newton_contacts(c_mat, b0, contacts, pairs):
    n = b0.shape[0]
    m = n + len(pairs)
    s = len(contacts)
    dyads = [np.outer(x, x) for _, x, _ in contacts]
    lam0 = solve_nnls([_pack(d, pairs) for d in dyads], _pack(c_mat, pairs)).weights
    z = np.concatenate([_pack(b0, pairs)]
                       + [x for kind, x, _ in contacts if kind != "frozen"]
                       + [lam0])
    scale = 1.0 + np.linalg.norm(c_mat)

    def res(zz):
        return _kkt_residual(zz, n, pairs, c_mat, contacts)

    r = res(z)
    for _ in range(15):
        if np.max(np.abs(r)) <= 1e-13 * scale:
            break
        jac = np.empty((r.size, z.size))
        h = 1e-6
        for k in range(z.size):
            zp = z.copy()
            zp[k] += h
            zm = z.copy()
            zm[k] -= h
            jac[:, k] = (res(zp) - res(zm)) / (2.0 * h)
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        improved = False
        for alpha in (1.0, 0.5, 0.25):
            cand = z + alpha * step
            rc = res(cand)
            if np.linalg.norm(rc) < np.linalg.norm(r):
                z, r = cand, rc
                improved = True
                break
        if not improved:
            break
    if np.max(np.abs(r)) > 1e-8 * scale:
        return None
    b1 = _unpack(z[:m], n, pairs)
    lam = z[-s:] if s else np.empty(0)
    return b1, lam


def _polish(body, e, b0, cfg):
    pairs = _pairs(body.dim)
    contacts = _collect_contacts(body, b0, cfg)
    n = body.dim
    if len(contacts) > n:
        # flat boundaries put whole arcs of near-contacts inside the window;
        # the nonnegative fit of Q_E^{-1} picks the carrying subset and the
        # Newton step relocates those points exactly
        dyads = [_pack(np.outer(x, x), pairs) for _, x, _ in contacts]
        w0 = solve_nnls(dyads, _pack(e.q_inv, pairs)).weights
        if np.max(w0) > 0:
            keep = [c for c, w in zip(contacts, w0) if w > 1e-12 * np.max(w0)]
            if len(keep) >= n:
                contacts = keep
    while len(contacts) >= n:
        out = _newton_contacts(e.q_inv, b0, contacts, pairs)
        if out is None:
            return b0
        b1, lam = out
        if np.min(lam) < -1e-8 and len(contacts) > n:
            contacts.pop(int(np.argmin(lam)))
            continue
        break
    else:
        return b0
    if np.min(lam) < -1e-8:
        return b0
    try:
        cholesky(b1)
    except NotPositiveDefiniteError:
        return b0
    if np.linalg.norm(b1 - b0) > 0.05 * max(1.0, np.linalg.norm(b0)):
        return b0
    obj0 = float(np.trace(e.q_inv @ b0))
    obj1 = float(np.trace(e.q_inv @ b1))
    bound = max(1.0, abs(obj0))
    if not (-1e-7 * bound <= obj1 - obj0 <= max(1e-5, 100.0 * cfg.tol_feas) * bound):
        return b0
    if contains_ellipsoid(body, make_ellipsoid(b1), cfg.tol_feas).worst_margin < -10.0 * cfg.tol_feas:
        return b0
    return b1


def _finalize(body, e, b, cfg):
    """Rescale to exact containment and wrap into an ellipsoid."""
    margin = contains_ellipsoid(body, make_ellipsoid(b), cfg.tol_feas).worst_margin
    if margin < 0:
        if margin > -1e-3:
            b = b * (1.0 + (-margin))
        else:
            # only reachable on aborted (max-cuts) runs
            b = b / (1.0 + margin)
    return make_ellipsoid(b)


def solve_u(body: ConvexBody, e: Ellipsoid, cfg: SolveConfig = SolveConfig()) -> SolveReport:
    """The inscribed ellipsoid of minimal mean-square gauge over E.

    The minimizer is unique; the solve is repeated from cfg.restarts
    randomized cut seeds and the results must agree within 1e-4 relative
    Frobenius distance, else RestartDisagreementError is raised.  The
    returned ellipsoid is contained in the body within 10 * tol_feas.
    """
    if e.dim != body.dim:
        raise ValueError("dimension mismatch between body and ellipsoid")
    if cfg.max_cuts < 2 * body.dim:
        raise ValueError("max_cuts must be at least 2 * dim")
    runs = []
    total_lp = 0
    for r in range(cfg.restarts):
        b, pool, lp_count, status = _cut_loop(body, e, cfg, cfg.seed + 7919 * r)
        total_lp += lp_count
        if status == "optimal":
            b = _polish(body, e, b, cfg)
        minimizer = _finalize(body, e, b, cfg)
        runs.append((minimizer, pool, status))
    # uniqueness contract: completed restarts must land on the same form;
    # aborted runs only promise a feasible iterate and are exempt
    done = [run for run in runs if run[2] == "optimal"]
    for i in range(len(done)):
        for j in range(i + 1, len(done)):
            d = form_distance(done[i][0], done[j][0])
            if d > 1e-4:
                raise RestartDisagreementError(
                    f"restarts {i} and {j} disagree by {d:.2e} (> 1e-4)")
    best = min(runs, key=lambda run: m_ellipsoid(e, run[0]))
    minimizer, pool, status = best
    cuts = np.array(pool.points)
    vals = np.einsum("ij,jk,ik->i", cuts, minimizer.q, cuts)
    active = cuts[np.abs(vals - 1.0) <= 10.0 * cfg.tol_feas]
    overall = "optimal" if all(run[2] == "optimal" for run in runs) else "max_cuts_reached"
    return SolveReport(minimizer=minimizer, j_value=m_ellipsoid(e, minimizer),
                       status=overall, cuts=cuts, active_cuts=active,
                       lp_iterations=total_lp)


def j_value(body: ConvexBody, e: Ellipsoid, cfg: SolveConfig = SolveConfig()) -> float:
    """Minimal mean-square gauge over E among inscribed ellipsoids."""
    return solve_u(body, e, cfg).j_value


def check_john(body: ConvexBody, e: Ellipsoid, cfg: SolveConfig = SolveConfig()) -> JohnReport:
    """Fixed-point test: E is the maximal-volume inscribed ellipsoid of the
    body exactly when the inscribed minimizer over E is E itself."""
    verdict = contains_ellipsoid(body, e, cfg.tol_feas)
    if not verdict.contained:
        return JohnReport(False, float("inf"), False)
    rep = solve_u(body, e, cfg)
    dist = form_distance(rep.minimizer, e)
    return JohnReport(bool(dist <= 100.0 * cfg.tol_feas), dist, True)


def iterate_u(body: ConvexBody, e0: Ellipsoid, steps: int,
              cfg: SolveConfig = SolveConfig()) -> IterateReport:
    """Iterate the inscribed-minimizer map from e0, recording the trajectory.

    Stops early once successive forms differ by less than 100 * tol_feas
    relative.  No convergence claim is made; the trajectory is data.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    current = e0
    trajectory = []
    for _ in range(steps):
        nxt = solve_u(body, current, cfg).minimizer
        trajectory.append(nxt)
        if form_distance(nxt, current) < 100.0 * cfg.tol_feas:
            return IterateReport(trajectory, True)
        current = nxt
    return IterateReport(trajectory, False)


# --------------------------------------------------------------------------
# Circumscribed problem.

def _boundary_form_max(body, form):
    """Max of x^T B x over the body boundary with a witness direction."""
    pts = _extreme_points(body)
    if pts is not None:
        vals = np.einsum("ij,jk,ik->i", pts, form, pts)
        i = int(np.argmax(vals))
        return float(vals[i]), pts[i]
    quadric = _quadric_form(body)
    if quadric is not None:
        vals, vecs = sym_eigen(quadric)
        w = vecs @ np.diag(vals**-0.5) @ vecs.T
        mvals, mvecs = sym_eigen(w @ form @ w)
        return float(mvals[0]), w @ mvecs[:, 0]
    dirs, vals = boundary_quadratic_scan(body, form, sense=-1)
    i = int(np.argmax(vals))
    return float(vals[i]), dirs[i]


def _canonical_unit(v):
    u = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(u)))
    return u if u[k] >= 0 else -u


def solve_u_bar(body: ConvexBody, e: Ellipsoid, cfg: SolveConfig = SolveConfig()) -> DualReport:
    """Circumscribed ellipsoids maximizing the mean-square gauge over E.

    Only vertex polytopes and lp balls are accepted: for those the upper
    constraint "x^T B x <= 1 on the boundary" is checkable (at the extreme
    points, or through the boundary scan).  The supremum need not be
    attained (the optimal form can be singular: reported as non-attained
    with the degenerate direction) and need not be unique (the optimal
    face is probed with secondary objectives; a second distinct maximizer
    is reported when found).
    """
    if not isinstance(body, (PolytopeV, LpBall)):
        raise UnsupportedBodyError(
            "circumscribed solve accepts vertex polytopes and lp balls only")
    if e.dim != body.dim:
        raise ValueError("dimension mismatch between body and ellipsoid")
    n = body.dim
    pairs = _pairs(n)
    obj = _obj_vec(e.q_inv, pairs)
    exact_pts = _extreme_points(body)
    upper = _CutPool()
    lower = _CutPool()
    if exact_pts is not None:
        for p in exact_pts:
            upper.push(p)
    else:
        eye = np.eye(n)
        for i in range(n):
            upper.push(boundary_point(body, eye[i]))
        rng = np.random.default_rng(cfg.seed + 17)
        for d in rng.standard_normal((4 * n, n)):
            if np.any(d):
                upper.push(boundary_point(body, d))
    sol = None
    b = None
    status = "max_cuts_reached"
    lp_count = 0
    while lp_count < cfg.max_cuts:
        rows = tuple([(-_cut_row(u, pairs), -1.0) for u in upper.points]
                     + [(_cut_row(l, pairs), 0.0) for l in lower.points])
        sol = solve_lp(LpProblem(-obj, rows, cfg.box_R))
        lp_count += 1
        b = _unpack(sol.x, n, pairs)
        vals, vecs = sym_eigen(b)
        scale = max(1.0, float(np.linalg.norm(b)))
        if vals[-1] < -1e-9 * scale:
            lower.push(boundary_point(body, vecs[:, -1]))
            continue
        if exact_pts is None:
            worst, direction = _boundary_form_max(body, b)
            if worst > 1.0 + cfg.tol_feas:
                upper.push(boundary_point(body, direction))
                continue
        if sol.box_active:
            raise SolverError("LP box is active at the circumscribed optimum; "
                              "increase box_R")
        status = "optimal"
        break
    v_star = float(obj @ sol.x)
    i_value = float(np.sqrt(v_star / n))

    # Probe the optimal face with secondary objectives to expose distinct
    # maximizers; midpoints of optimal solutions stay optimal and recover a
    # positive-definite representative when the supremum is attained.
    # Probe solutions get the same eigenvector-cut repair as the main loop
    # (the nonnegativity side must hold on the whole boundary).
    floor_row = (obj, v_star - 1e-9 * (1.0 + abs(v_star)))

    def face_rows():
        return tuple([(-_cut_row(u, pairs), -1.0) for u in upper.points]
                     + [(_cut_row(l, pairs), 0.0) for l in lower.points]
                     + [floor_row])

    candidates = [b]
    rng = np.random.default_rng(cfg.seed + 5000)
    for _ in range(max(2, cfg.restarts)):
        d = rng.standard_normal(obj.size)
        d /= np.linalg.norm(d)
        for sign in (1.0, -1.0):
            for _repair in range(100):
                psol = solve_lp(LpProblem(sign * d, face_rows(), cfg.box_R))
                bp_mat = _unpack(psol.x, n, pairs)
                pvals, pvecs = sym_eigen(bp_mat)
                if pvals[-1] < -1e-9 * max(1.0, float(np.linalg.norm(bp_mat))):
                    lower.push(boundary_point(body, pvecs[:, -1]))
                    continue
                break
            candidates.append(bp_mat)
    extra = [0.5 * (candidates[i] + candidates[j])
             for i in range(len(candidates)) for j in range(i + 1, len(candidates))]
    extra.append(np.mean(candidates, axis=0))
    candidates.extend(extra)

    def valid(cand):
        if exact_pts is None:
            worst, _ = _boundary_form_max(body, cand)
            if worst > 1.0 + 10.0 * cfg.tol_feas:
                return False
        return True

    pd = []
    for cand in candidates:
        vals, _ = sym_eigen(cand)
        norm = max(np.linalg.norm(cand), 1e-300)
        if vals[-1] >= 1e-6 * norm and valid(cand):
            pd.append((float(vals[-1] / norm), cand))
    if status != "optimal":
        return DualReport(status="max_cuts_reached", i_value=i_value, maximizer=None,
                          degenerate_direction=None, uniqueness="unknown", second=None)
    if not pd:
        vals, vecs = sym_eigen(b)
        return DualReport(status="non_attained", i_value=i_value, maximizer=None,
                          degenerate_direction=_canonical_unit(vecs[:, -1]),
                          uniqueness="unknown", second=None)
    pd.sort(key=lambda item: -item[0])
    best = pd[0][1]
    maximizer = make_ellipsoid(best)
    second = None
    dist_best = 0.0
    for _, cand in pd[1:]:
        d = form_distance(best, cand)
        if d > max(1e-3, dist_best):
            dist_best = d
            second = make_ellipsoid(cand)
    uniqueness = "multiple_found" if second is not None else "unknown"
    return DualReport(status="attained", i_value=i_value, maximizer=maximizer,
                      degenerate_direction=None, uniqueness=uniqueness, second=second)


def verify_dual_equivalence(body: ConvexBody, e: Ellipsoid, f: Ellipsoid,
                            cfg: SolveConfig = SolveConfig()) -> bool:
    """Check the two-problem correspondence for a circumscribed candidate F:
    F maximizes the gauge functional over E among ellipsoids containing the
    body exactly when the inscribed solve on the F-polar of the body
    returns F.  The F-polar is computed as Q_F^{-1} applied to the
    standard polar body."""
    ok, excess = body_in_ellipsoid(body, f, 10.0 * cfg.tol_feas)
    if not ok:
        raise ValueError(f"the body is not inside F (excess {excess:.2e})")
    f_polar_body = linear_image(f.q_inv, polar(body))
    rep = solve_u(f_polar_body, e, cfg)
    return bool(form_distance(rep.minimizer, f) <= 1e-4)
