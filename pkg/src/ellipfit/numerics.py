"""Dense symmetric linear algebra and the small constrained solvers that
every other module builds on: Cholesky, a Jacobi eigensolver, a bounded
linear-program solver and nonnegative least squares.

Everything operates on plain float ndarrays at desk scale (matrix order
<= ~20).  All kernels are deterministic: the eigensolver is cyclic Jacobi
with a fixed sweep cap, and the LP/NNLS backends (HiGHS and Lawson-Hanson
via scipy) are single-threaded and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize as _opt


class NotPositiveDefiniteError(ValueError):
    """A factorization met a pivot at or below the degeneracy threshold."""


class NoConvergenceError(RuntimeError):
    """An iterative kernel exhausted its iteration cap."""


class InfeasibleError(RuntimeError):
    """A linear program has no feasible point inside its box."""


def sym_matrix(entries) -> np.ndarray:
    """Square float matrix symmetrized by averaging with its transpose."""
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return 0.5 * (m + m.T)


def cholesky(s: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L @ L.T == s.

    Raises NotPositiveDefiniteError when any pivot falls at or below
    1e-12 * trace(s) / dim, which signals a degenerate or indefinite form.
    """
    a = np.asarray(s, dtype=float)
    n = a.shape[0]
    thresh = 1e-12 * np.trace(a) / n
    low = np.zeros_like(a)
    for i in range(n):
        for j in range(i + 1):
            acc = a[i, j] - low[i, :j] @ low[j, :j]
            if i == j:
                if acc <= thresh:
                    raise NotPositiveDefiniteError(
                        f"pivot {acc:.3e} at index {i} is not above {thresh:.3e}"
                    )
                low[i, i] = np.sqrt(acc)
            else:
                low[i, j] = acc / low[j, j]
    return low


def sym_eigen(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (values, vectors) with eigenvalues sorted descending and the
    matching orthonormal eigenvectors as columns.  Deterministic; capped
    at 100 * dim**2 sweeps, after which NoConvergenceError is raised.
    """
    a = sym_matrix(s)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), v
    scale = max(1.0, float(np.linalg.norm(a)))
    tol = 1e-14 * scale
    cap = 100 * n * n
    for _ in range(cap):
        off = np.sqrt(2.0 * np.sum(np.tril(a, -1) ** 2))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol / (2 * n):
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                sn = t * c
                # A <- J^T A J, V <- V J with J the (p,q) rotation.
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - sn * aq
                a[:, q] = sn * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - sn * aq
                a[q, :] = sn * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - sn * vq
                v[:, q] = sn * vp + c * vq
    else:
        raise NoConvergenceError(f"Jacobi sweeps exceeded cap {cap}")
    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], v[:, order]


@dataclass(frozen=True)
class LpProblem:
    """min objective . x  s.t.  a . x >= b for each (a, b), and |x_k| <= box.

    The box is mandatory and keeps every instance bounded; callers detect
    box-active solutions and react (the cutting-plane loops add cuts).
    """

    objective: np.ndarray
    constraints: tuple = ()
    box: float = 1e6

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=float)
        rows = tuple((np.asarray(a, dtype=float), float(b)) for a, b in self.constraints)
        for a, _ in rows:
            if a.shape != obj.shape:
                raise ValueError("constraint length does not match objective")
        if not np.isfinite(self.box) or self.box <= 0:
            raise ValueError("box bound must be finite and positive")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", rows)


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    status: str
    active: tuple[int, ...]
    box_active: tuple[int, ...]
    iterations: int


_HIGHS_OPTS = {
    "presolve": True,
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


def solve_lp(problem: LpProblem) -> LpSolution:
    """Solve the boxed LP; raises InfeasibleError when no point satisfies
    all constraints within the box.

    On success the solution is feasible to ~1e-9 and optimal to ~1e-8
    relative; `active` lists constraints tight at the solution and
    `box_active` the variables sitting on the box.
    """
    c = problem.objective
    k = c.size
    bounds = [(-problem.box, problem.box)] * k
    if problem.constraints:
        a = np.vstack([row for row, _ in problem.constraints])
        b = np.array([rhs for _, rhs in problem.constraints])
        res = _opt.linprog(c, A_ub=-a, b_ub=-b, bounds=bounds, method="highs",
                           options=_HIGHS_OPTS)
    else:
        a = b = None
        res = _opt.linprog(c, bounds=bounds, method="highs", options=_HIGHS_OPTS)
    if res.status == 2:
        raise InfeasibleError("no feasible point inside the box")
    if res.status != 0:
        raise NoConvergenceError(f"LP solver failed: {res.message}")
    x = np.asarray(res.x, dtype=float)
    if a is not None:
        resid = a @ x - b
        active = tuple(int(i) for i in np.flatnonzero(np.abs(resid) <= 1e-7 * (1.0 + np.abs(b))))
    else:
        active = ()
    box_active = tuple(int(i) for i in np.flatnonzero(
        np.abs(x) >= problem.box - 1e-7 * (1.0 + problem.box)))
    iters = int(getattr(res, "nit", 0) or 0)
    return LpSolution(x=x, status="optimal", active=active, box_active=box_active,
                      iterations=iters)


@dataclass(frozen=True)
class NnlsSolution:
    weights: np.ndarray
    residual: float
    support: tuple[int, ...]


def solve_nnls(columns, target) -> NnlsSolution:
    """Least squares over the nonnegative orthant (Lawson-Hanson).

    `columns` is a nonempty sequence of equal-length vectors; returns the
    weights, the residual 2-norm and the support (indices of positive
    weights).
    """
    cols = [np.asarray(col, dtype=float) for col in columns]
    if not cols:
        raise ValueError("columns must be nonempty")
    length = cols[0].size
    if any(col.size != length for col in cols):
        raise ValueError("columns must all have the same length")
    a = np.column_stack(cols)
    b = np.asarray(target, dtype=float)
    if b.size != length:
        raise ValueError("target length does not match columns")
    w, rnorm = _opt.nnls(a, b, maxiter=max(300, 30 * len(cols)))
    support = tuple(int(i) for i in np.flatnonzero(w > 0))
    return NnlsSolution(weights=w, residual=float(rnorm), support=support)
