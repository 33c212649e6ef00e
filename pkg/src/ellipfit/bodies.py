"""Centrally-symmetric convex bodies and the oracles the solvers need.

Four representations:

* ``PolytopeH``    -- facet form {x : |h_j . x| <= 1 for every row h_j}
* ``PolytopeV``    -- vertex form conv{+-w_k}
* ``LpBall``       -- {x : ||x||_p <= r} for p in [1, inf]
* ``LinearImage``  -- T K for an invertible T and any inner body K

Each exposes the gauge norm (the unique norm whose unit ball is the body),
the support function and a boundary-point map.  On top of those sit polar
duality, linear images, and the ellipsoid containment test used as the
separation oracle by the cutting-plane solvers.

Facet and vertex data use the symmetric convention (each row stands for a
+- pair), so symmetry holds by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .numerics import LpProblem, solve_lp, sym_eigen

_SING_TOL = 1e-10  # smallest/largest singular value ratio below which a map is rejected


class ZeroDirectionError(ValueError):
    """A boundary point was requested along the zero direction."""


class SingularTransformError(ValueError):
    """A linear map is numerically singular."""


def _check_spanning(rows: np.ndarray, what: str) -> None:
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise ValueError(f"{what} must be a nonempty 2-d array")
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"{what} must not contain zero vectors")
    sv = np.linalg.svd(rows, compute_uv=False)
    if sv[-1] <= 1e-9 * sv[0] or rows.shape[0] < rows.shape[1]:
        raise ValueError(f"{what} must span the whole space")


class ConvexBody:
    """Base type; concrete bodies implement the gauge norm and support."""

    dim: int

    def norm(self, x) -> float:
        raise NotImplementedError

    def support(self, theta) -> float:
        raise NotImplementedError


class PolytopeH(ConvexBody):
    """{x : |h_j . x| <= 1 for every facet row h_j}."""

    def __init__(self, facets):
        f = np.array(facets, dtype=float)
        _check_spanning(f, "facets")
        self.facets = f
        self.dim = f.shape[1]
        sv = np.linalg.svd(f, compute_uv=False)
        # ||x|| <= sqrt(m)/sigma_min for any x in the body; used to box support LPs.
        self._radius_bound = float(np.sqrt(f.shape[0]) / sv[-1])

    def norm(self, x) -> float:
        return float(np.max(np.abs(self.facets @ np.asarray(x, dtype=float))))

    def support(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        rows = [(h, -1.0) for h in self.facets] + [(-h, -1.0) for h in self.facets]
        sol = solve_lp(LpProblem(-theta, tuple(rows), box=self._radius_bound + 1.0))
        return float(theta @ sol.x)


class PolytopeV(ConvexBody):
    """conv{+-w_k} for the generator rows w_k."""

    def __init__(self, generators):
        w = np.array(generators, dtype=float)
        _check_spanning(w, "generators")
        self.generators = w
        self.dim = w.shape[1]

    def norm(self, x) -> float:
        # min sum |c_k| s.t. sum c_k w_k = x, solved as an LP with c split
        # into nonnegative parts.
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            return 0.0
        a = self.generators.T  # (n, m)
        m = a.shape[1]
        c0 = np.linalg.lstsq(a, x, rcond=None)[0]
        ub = float(np.sum(np.abs(c0))) + 1.0
        wide = np.hstack([a, -a])  # (n, 2m)
        rows = []
        for i in range(a.shape[0]):
            rows.append((wide[i], float(x[i])))
            rows.append((-wide[i], float(-x[i])))
        eye = np.eye(2 * m)
        rows.extend((eye[j], 0.0) for j in range(2 * m))
        sol = solve_lp(LpProblem(np.ones(2 * m), tuple(rows), box=ub))
        return float(np.sum(sol.x))

    def support(self, theta) -> float:
        return float(np.max(np.abs(self.generators @ np.asarray(theta, dtype=float))))


class LpBall(ConvexBody):
    """{x : ||x||_p <= radius} with p in [1, inf]."""

    def __init__(self, p, radius, dim):
        p = float(p)
        if not (p >= 1.0):
            raise ValueError("p must lie in [1, inf]")
        if not (radius > 0 and np.isfinite(radius)):
            raise ValueError("radius must be positive and finite")
        if dim < 1:
            raise ValueError("dim must be positive")
        self.p = p
        self.radius = float(radius)
        self.dim = int(dim)

    @property
    def dual_p(self) -> float:
        if self.p == 1.0:
            return np.inf
        if np.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    def norm(self, x) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=float), ord=self.p) / self.radius)

    def support(self, theta) -> float:
        theta = np.asarray(theta, dtype=float)
        return float(self.radius * np.linalg.norm(theta, ord=self.dual_p))


class LinearImage(ConvexBody):
    """T K for an invertible matrix T and inner body K."""

    def __init__(self, matrix, inner: ConvexBody):
        t = np.array(matrix, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] != inner.dim:
            raise ValueError("matrix must be square and match the inner body dimension")
        sv = np.linalg.svd(t, compute_uv=False)
        if sv[-1] <= _SING_TOL * sv[0]:
            raise SingularTransformError("transform is numerically singular")
        self.matrix = t
        self.matrix_inv = np.linalg.inv(t)
        self.inner = inner
        self.dim = inner.dim

    def norm(self, x) -> float:
        return self.inner.norm(self.matrix_inv @ np.asarray(x, dtype=float))

    def support(self, theta) -> float:
        return self.inner.support(self.matrix.T @ np.asarray(theta, dtype=float))


def boundary_point(body: ConvexBody, direction) -> np.ndarray:
    """The point of the body boundary along `direction`: direction / gauge."""
    d = np.asarray(direction, dtype=float)
    if d.shape != (body.dim,):
        raise ValueError("direction has the wrong dimension")
    if not np.any(d):
        raise ZeroDirectionError("boundary point of the zero direction")
    g = body.norm(d)
    if g <= 0:
        raise ZeroDirectionError("gauge vanished along a nonzero direction")
    return d / g


def polar(body: ConvexBody) -> ConvexBody:
    """Standard polar body {y : x . y <= 1 for all x in K}.

    Facet and vertex representations swap; an lp ball dualizes its exponent
    and inverts its radius; a linear image maps by the inverse transpose.
    """
    if isinstance(body, PolytopeH):
        return PolytopeV(body.facets.copy())
    if isinstance(body, PolytopeV):
        return PolytopeH(body.generators.copy())
    if isinstance(body, LpBall):
        return LpBall(body.dual_p, 1.0 / body.radius, body.dim)
    if isinstance(body, LinearImage):
        return LinearImage(body.matrix_inv.T, polar(body.inner))
    raise TypeError(f"unknown body variant {type(body)!r}")


def linear_image(matrix, body: ConvexBody) -> ConvexBody:
    """The body T K.  Pushes through polytope data; otherwise wraps."""
    t = np.array(matrix, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] != body.dim:
        raise ValueError("matrix must be square and match the body dimension")
    sv = np.linalg.svd(t, compute_uv=False)
    if sv[-1] <= _SING_TOL * sv[0]:
        raise SingularTransformError("transform is numerically singular")
    if isinstance(body, PolytopeH):
        return PolytopeH(body.facets @ np.linalg.inv(t))
    if isinstance(body, PolytopeV):
        return PolytopeV(body.generators @ t.T)
    if isinstance(body, LinearImage):
        return linear_image(t @ body.matrix, body.inner)
    return LinearImage(t, body)


# ---------------------------------------------------------------------------
# Exact structure extraction.  Where a body (or a linear image of one) is
# secretly a facet polytope, a vertex polytope or an ellipsoid, containment
# and extreme-point questions have closed forms; the oracles below recover
# that structure so the sampled fallback is used only when necessary.

def _facet_form(body: ConvexBody):
    if isinstance(body, PolytopeH):
        return body.facets
    if isinstance(body, LpBall):
        n = body.dim
        if np.isinf(body.p):
            return np.eye(n) / body.radius
        if body.p == 1.0 and n <= 12:
            signs = np.array([s for s in itertools.product((1.0, -1.0), repeat=n)
                              if s[0] > 0])
            return signs / body.radius
    if isinstance(body, LinearImage):
        inner = _facet_form(body.inner)
        if inner is not None:
            return inner @ body.matrix_inv
    return None


def _extreme_points(body: ConvexBody):
    if isinstance(body, PolytopeV):
        return body.generators
    if isinstance(body, LpBall):
        n = body.dim
        if body.p == 1.0:
            return np.eye(n) * body.radius
        if np.isinf(body.p) and n <= 12:
            signs = np.array([s for s in itertools.product((1.0, -1.0), repeat=n)
                              if s[0] > 0])
            return signs * body.radius
    if isinstance(body, LinearImage):
        inner = _extreme_points(body.inner)
        if inner is not None:
            return inner @ body.matrix.T
    return None


def _quadric_form(body: ConvexBody):
    if isinstance(body, LpBall) and body.p == 2.0:
        return np.eye(body.dim) / body.radius**2
    if isinstance(body, LinearImage):
        inner = _quadric_form(body.inner)
        if inner is not None:
            return body.matrix_inv.T @ inner @ body.matrix_inv
    return None


def _scaled_normal(body: ConvexBody):
    """For smooth bodies, a callable n with n(x) normal to the boundary at
    x and n(x) . x = 1 there (the gradient of the gauge, Euler-scaled).
    None when the boundary is not smooth or no formula is known."""
    if isinstance(body, LpBall) and 1.0 < body.p < np.inf:
        p, r = body.p, body.radius

        def normal(x):
            return np.sign(x) * np.abs(x) ** (p - 1.0) / r**p

        return normal
    if isinstance(body, LinearImage):
        inner = _scaled_normal(body.inner)
        if inner is not None:
            t_inv = body.matrix_inv

            def normal(x, _inner=inner, _ti=t_inv):
                return _ti.T @ _inner(_ti @ x)

            return normal
    return None


# ---------------------------------------------------------------------------
# Batched gauge evaluation and the sampled separation oracle.

def norm_many(body: ConvexBody, points: np.ndarray) -> np.ndarray:
    """Gauge norm of every row of `points`."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if isinstance(body, PolytopeH):
        return np.max(np.abs(pts @ body.facets.T), axis=1)
    if isinstance(body, LpBall):
        return np.linalg.norm(pts, ord=body.p, axis=1) / body.radius
    if isinstance(body, LinearImage):
        return norm_many(body.inner, pts @ body.matrix_inv.T)
    if isinstance(body, PolytopeV):
        return _norm_many_vrep(body, pts)
    return np.array([body.norm(p) for p in pts])


def _norm_many_vrep(body: PolytopeV, pts: np.ndarray) -> np.ndarray:
    # One block-diagonal LP: each block solves min sum(z) s.t. [W^T -W^T] z = x.
    k = pts.shape[0]
    a = body.generators.T
    n, m = a.shape
    wide = np.hstack([a, -a])
    zero_rows = ~np.any(pts, axis=1)
    rows = (np.repeat(np.arange(k) * n, n * 2 * m)
            + np.tile(np.repeat(np.arange(n), 2 * m), k))
    cols = (np.repeat(np.arange(k) * 2 * m, n * 2 * m)
            + np.tile(np.tile(np.arange(2 * m), n), k))
    data = np.tile(wide.ravel(), k)
    blocks = sparse.csr_matrix((data, (rows, cols)), shape=(n * k, 2 * m * k))
    res = linprog(np.ones(2 * m * k), A_eq=blocks, b_eq=pts.ravel(),
                  bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError(f"batched gauge LP failed: {res.message}")
    out = res.x.reshape(k, 2 * m).sum(axis=1)
    out[zero_rows] = 0.0
    return out


def direction_net(dim: int, size: int | None = None) -> np.ndarray:
    """Fixed quasi-uniform unit directions: uniform angles for dim 2, a
    Fibonacci sphere for dim 3, a seeded Gaussian cloud above that."""
    if size is None:
        size = {2: 720, 3: 1280}.get(dim, 3000)
    if dim == 1:
        return np.array([[1.0]])
    if dim == 2:
        ang = np.pi * np.arange(size) / size  # antipodal halves carry the same data
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if dim == 3:
        i = np.arange(size) + 0.5
        phi = np.pi * (1.0 + np.sqrt(5.0)) * i
        z = 1.0 - 2.0 * i / size
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    rng = np.random.default_rng(20231110 + dim)
    g = rng.standard_normal((size, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _quad_values(body: ConvexBody, form: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """x^T Q x at the boundary points x = dir / gauge(dir)."""
    gauges = norm_many(body, dirs)
    x = dirs / gauges[:, None]
    return np.einsum("ij,jk,ik->i", x, form, x)


def _net_boundary(body: ConvexBody, size: int | None) -> np.ndarray:
    """Boundary points of the fixed direction net, memoized per body (the
    net is form-independent and gauge evaluation dominates scan cost)."""
    cache = body.__dict__.setdefault("_net_boundary_cache", {})
    if size not in cache:
        net = direction_net(body.dim, size)
        cache[size] = net / norm_many(body, net)[:, None]
    return cache[size]


def _pattern_descent(body, form, starts, sense, rounds):
    """Batched derivative-free descent of sense * x^T Q x over boundary
    directions.  Deterministic; returns refined unit directions."""
    pts = starts / np.linalg.norm(starts, axis=1, keepdims=True)
    n = pts.shape[1]
    step = np.full(pts.shape[0], 0.35)
    best = sense * _quad_values(body, form, pts)
    for _ in range(rounds):
        if np.all(step < 1e-8):
            break
        moves = np.concatenate([np.eye(n), -np.eye(n)])  # (2n, n)
        cand = pts[:, None, :] + step[:, None, None] * moves[None, :, :]
        cand = cand.reshape(-1, n)
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        vals = (sense * _quad_values(body, form, cand)).reshape(pts.shape[0], 2 * n)
        idx = np.argmin(vals, axis=1)
        improved = vals[np.arange(pts.shape[0]), idx] < best - 1e-15
        chosen = cand.reshape(pts.shape[0], 2 * n, n)[np.arange(pts.shape[0]), idx]
        pts = np.where(improved[:, None], chosen, pts)
        best = np.where(improved, vals[np.arange(pts.shape[0]), idx], best)
        step = np.where(improved, step, step * 0.6)
    return pts


def boundary_quadratic_scan(body: ConvexBody, form: np.ndarray, sense: int = 1, *,
                            net_size: int | None = None, starts: int | None = None,
                            rounds: int = 48, seed: int = 1234):
    """Sampled extremum of x^T Q x over the body boundary.

    sense=+1 searches the minimum, sense=-1 the maximum.  Returns
    (directions, values): all candidate unit directions considered (net
    plus multistart descent refinements) and x^T Q x at their boundary
    points.  Deterministic for a fixed seed.
    """
    n = body.dim
    net_pts = _net_boundary(body, net_size)
    rng = np.random.default_rng(seed)
    count = 64 * n if starts is None else starts
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    net_vals = np.einsum("ij,jk,ik->i", net_pts, form, net_pts)
    top = net_pts[np.argsort(sense * net_vals)[: max(8, n * 4)]]
    top = top / np.linalg.norm(top, axis=1, keepdims=True)
    refined = _pattern_descent(body, form, np.vstack([g, top]), sense, rounds)
    dirs = np.vstack([net_pts / np.linalg.norm(net_pts, axis=1, keepdims=True), refined])
    vals = np.concatenate([net_vals, _quad_values(body, form, refined)])
    return dirs, vals


@dataclass(frozen=True)
class ContainmentVerdict:
    """Result of the ellipsoid-in-body test.

    worst_margin is min over the body boundary of x^T Q_F x - 1 (negative
    means the ellipsoid pokes out); witness is the boundary point of K
    where the worst margin was found.  method is "exact" when the body
    structure admits a closed-form test and "sampled" otherwise.
    """

    contained: bool
    worst_margin: float
    witness: np.ndarray
    method: str


def contains_ellipsoid(body: ConvexBody, ellipsoid, tol: float, *,
                       net_size: int | None = None, starts: int | None = None,
                       rounds: int = 48) -> ContainmentVerdict:
    """Separation oracle: is {x : x^T Q x <= 1} inside the body?

    Containment is equivalent to x^T Q x >= 1 on the whole body boundary.
    Facet polytopes (and bodies reducible to them) are tested exactly via
    h^T Q^{-1} h <= 1 per facet; ellipsoidal bodies via an eigenvalue
    bound; everything else by a direction net plus multistart descent,
    flagged as "sampled".
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if ellipsoid.dim != body.dim:
        raise ValueError("dimension mismatch between body and ellipsoid")
    q = ellipsoid.q
    facets = _facet_form(body)
    if facets is not None:
        qi = ellipsoid.q_inv
        t = np.einsum("ij,jk,ik->i", facets, qi, facets)
        j = int(np.argmax(t))
        margin = 1.0 / t[j] - 1.0
        witness = boundary_point(body, qi @ facets[j])
        return ContainmentVerdict(bool(t[j] <= 1.0 + tol), float(margin), witness, "exact")
    quadric = _quadric_form(body)
    if quadric is not None:
        vals, vecs = sym_eigen(quadric)
        w = vecs @ np.diag(vals**-0.5) @ vecs.T
        mvals, mvecs = sym_eigen(w @ q @ w)
        margin = mvals[-1] - 1.0
        witness = boundary_point(body, w @ mvecs[:, -1])
        return ContainmentVerdict(bool(margin >= -tol), float(margin), witness, "exact")
    dirs, vals = boundary_quadratic_scan(body, q, sense=1, net_size=net_size,
                                         starts=starts, rounds=rounds)
    i = int(np.argmin(vals))
    margin = vals[i] - 1.0
    witness = boundary_point(body, dirs[i])
    return ContainmentVerdict(bool(margin >= -tol), float(margin), witness, "sampled")


def body_in_ellipsoid(body: ConvexBody, ellipsoid, tol: float) -> tuple[bool, float]:
    """Is the body inside {x : x^T Q x <= 1}?  Returns (verdict, worst excess).

    Exact through extreme points or a quadric form when available, sampled
    otherwise.  The excess is max over the boundary of x^T Q x - 1.
    """
    if ellipsoid.dim != body.dim:
        raise ValueError("dimension mismatch between body and ellipsoid")
    q = ellipsoid.q
    pts = _extreme_points(body)
    if pts is not None:
        vals = np.einsum("ij,jk,ik->i", pts, q, pts)
        excess = float(np.max(vals) - 1.0)
        return excess <= tol, excess
    quadric = _quadric_form(body)
    if quadric is not None:
        vals, vecs = sym_eigen(quadric)
        w = vecs @ np.diag(vals**-0.5) @ vecs.T
        mvals, _ = sym_eigen(w @ q @ w)
        excess = float(mvals[0] - 1.0)
        return excess <= tol, excess
    _, vals = boundary_quadratic_scan(body, q, sense=-1)
    excess = float(np.max(vals) - 1.0)
    return excess <= tol, excess


# ---------------------------------------------------------------------------
# Serialization.  {"dim": n, "type": ..., variant fields}; unknown fields
# are rejected so schema drift fails loudly.

_BODY_FIELDS = {
    "polytope_h": {"dim", "type", "facets"},
    "polytope_v": {"dim", "type", "generators"},
    "lp_ball": {"dim", "type", "p", "radius"},
    "linear_image": {"dim", "type", "matrix", "inner"},
}


def body_from_json(obj) -> ConvexBody:
    """Parse the body file schema, validating shape and field names."""
    if not isinstance(obj, dict):
        raise ValueError("body document must be an object")
    kind = obj.get("type")
    if kind not in _BODY_FIELDS:
        raise ValueError(f"unknown body type {kind!r}")
    extra = set(obj) - _BODY_FIELDS[kind]
    missing = _BODY_FIELDS[kind] - set(obj)
    if extra or missing:
        raise ValueError(f"bad fields for {kind}: extra={sorted(extra)} missing={sorted(missing)}")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("dim must be a positive integer")
    if kind == "polytope_h":
        body = PolytopeH(obj["facets"])
    elif kind == "polytope_v":
        body = PolytopeV(obj["generators"])
    elif kind == "lp_ball":
        p = obj["p"]
        if p == "inf":
            p = np.inf
        elif not isinstance(p, (int, float)):
            raise ValueError('p must be a number or "inf"')
        body = LpBall(p, obj["radius"], dim)
    else:
        body = LinearImage(obj["matrix"], body_from_json(obj["inner"]))
    if body.dim != dim:
        raise ValueError("dim field does not match the body data")
    return body


def body_to_json(body: ConvexBody) -> dict:
    if isinstance(body, PolytopeH):
        return {"dim": body.dim, "type": "polytope_h",
                "facets": body.facets.tolist()}
    if isinstance(body, PolytopeV):
        return {"dim": body.dim, "type": "polytope_v",
                "generators": body.generators.tolist()}
    if isinstance(body, LpBall):
        p = "inf" if np.isinf(body.p) else body.p
        return {"dim": body.dim, "type": "lp_ball", "p": p, "radius": body.radius}
    if isinstance(body, LinearImage):
        return {"dim": body.dim, "type": "linear_image",
                "matrix": body.matrix.tolist(), "inner": body_to_json(body.inner)}
    raise TypeError(f"unknown body variant {type(body)!r}")
