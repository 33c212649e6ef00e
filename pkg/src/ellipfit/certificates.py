"""Contact points and isotropy certificates.

An inscribed ellipsoid F is the minimizer of the mean-square gauge over E
inside K exactly when some nonnegative weights on contact points
u_i in (boundary of F) intersect (boundary of K) satisfy

    sum_i  lambda_i  u_i u_i^T  =  Q_E^{-1}.

That matrix identity is checkable independently of how F was produced, so
it serves as a solver-free optimality proof: `verify_u` re-derives the
contact points, fits the weights by nonnegative least squares, and accepts
only when the fit is essentially exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (ConvexBody, _facet_form, boundary_point,
                     boundary_quadratic_scan, contains_ellipsoid, norm_many)
from .ellipsoids import Ellipsoid
from .numerics import solve_nnls

VERIFIED = "verified"
FAILED_CONTAINMENT = "failed_containment"
FAILED_ISOTROPY = "failed_isotropy"


@dataclass(frozen=True)
class Certificate:
    """Contact points, nonnegative weights and the relative residual of
    || sum_i lambda_i u_i u_i^T - Q_E^{-1} ||_F / || Q_E^{-1} ||_F."""

    points: np.ndarray  # (s, n)
    weights: np.ndarray  # (s,)
    residual: float
    metric: Ellipsoid


@dataclass(frozen=True)
class VerifyResult:
    verdict: str
    residual: float
    certificate: Certificate | None


def _svec(m: np.ndarray) -> np.ndarray:
    # Off-diagonal entries scaled by sqrt(2): the 2-norm of the packed
    # vector equals the Frobenius norm of the matrix.
    n = m.shape[0]
    iu = np.triu_indices(n, k=1)
    return np.concatenate([np.diag(m), np.sqrt(2.0) * m[iu]])


def _fold_and_merge(points: list[np.ndarray], angle_tol: float = 1e-4) -> np.ndarray:
    """Canonicalize signs (antipodal pairs carry the same dyad) and merge
    near-duplicates closer than `angle_tol` radians."""
    kept: list[np.ndarray] = []
    units: list[np.ndarray] = []
    for p in points:
        u = p / np.linalg.norm(p)
        k = int(np.argmax(np.abs(u)))
        if u[k] < 0:
            u = -u
            p = -p
        if any(abs(float(u @ v)) >= np.cos(angle_tol) for v in units):
            continue
        kept.append(p)
        units.append(u)
    if not kept:
        return np.empty((0, points[0].size if points else 0))
    return np.array(kept)


def contact_points(body: ConvexBody, f: Ellipsoid, tol: float,
                   extra_directions=None) -> np.ndarray:
    """Points of the body boundary where the inscribed ellipsoid touches.

    For facet polytopes each facet with h^T Q_F^{-1} h within tol of 1
    contributes Q_F^{-1} h normalized to the touching point.  Other bodies
    are scanned with the separation oracle's direction net and descent
    refinement, filtered by |x^T Q_F x - 1| <= tol at boundary points.
    Antipodal pairs are folded and near-duplicates merged; the result can
    be empty, in which case certification fails downstream.
    """
    if f.dim != body.dim:
        raise ValueError("dimension mismatch")
    facets = _facet_form(body)
    found: list[np.ndarray] = []
    if facets is not None:
        t = np.einsum("ij,jk,ik->i", facets, f.q_inv, facets)
        for j in np.flatnonzero(np.abs(t - 1.0) <= tol):
            found.append((f.q_inv @ facets[j]) / np.sqrt(t[j]))
    else:
        dirs, vals = boundary_quadratic_scan(body, f.q, sense=1)
        if extra_directions is not None and len(extra_directions):
            extra = np.atleast_2d(np.asarray(extra_directions, dtype=float))
            dirs = np.vstack([dirs, extra])
            vals = np.concatenate([vals, _boundary_values(body, f.q, extra)])
        order = np.argsort(np.abs(vals - 1.0))
        for i in order:
            if abs(vals[i] - 1.0) > tol:
                break
            found.append(boundary_point(body, dirs[i]))
    if not found:
        return np.empty((0, body.dim))
    return _fold_and_merge(found)


def _boundary_values(body, form, dirs):
    x = dirs / norm_many(body, dirs)[:, None]
    return np.einsum("ij,jk,ik->i", x, form, x)


def isotropy_certificate(e: Ellipsoid, points) -> Certificate:
    """Fit nonnegative weights so the contact dyads reproduce Q_E^{-1}.

    Solved as nonnegative least squares over the symmetric-matrix space
    (off-diagonals scaled by sqrt(2) so the reported residual is the
    relative Frobenius error).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("points must be nonempty")
    if pts.shape[1] != e.dim:
        raise ValueError("point dimension does not match the metric")
    target = _svec(e.q_inv)
    cols = [_svec(np.outer(p, p)) for p in pts]
    sol = solve_nnls(cols, target)
    residual = sol.residual / np.linalg.norm(target)
    return Certificate(points=pts, weights=sol.weights, residual=float(residual), metric=e)


def verify_u(body: ConvexBody, e: Ellipsoid, f: Ellipsoid, tol: float) -> VerifyResult:
    """Solver-independent optimality check for a candidate minimizer F.

    Verified exactly when F sits inside the body (within tol) and the
    contact points of F with the body carry an isotropy certificate with
    relative residual at most 100 * tol.
    """
    verdict = contains_ellipsoid(body, f, tol)
    if not verdict.contained:
        return VerifyResult(FAILED_CONTAINMENT, float("nan"), None)
    pts = contact_points(body, f, tol)
    if pts.shape[0] == 0:
        empty = Certificate(points=pts, weights=np.empty(0), residual=1.0, metric=e)
        return VerifyResult(FAILED_ISOTROPY, 1.0, empty)
    cert = isotropy_certificate(e, pts)
    if cert.residual <= 100.0 * tol:
        return VerifyResult(VERIFIED, cert.residual, cert)
    return VerifyResult(FAILED_ISOTROPY, cert.residual, cert)
