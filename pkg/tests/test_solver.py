import numpy as np
import pytest

import ellipfit as ef
from ellipfit.solver import SolveConfig
from util import (cross_h, cross_v, cube_h, rand_invertible, rand_polytope_h,
                  rand_spd_ellipsoid, rectangle_h, square_h)

BALL2 = ef.unit_ball(2)
SQRT58 = np.sqrt(5.0 / 8.0)


def _report_invariants(body, e, rep, cfg=SolveConfig()):
    assert ef.contains_ellipsoid(body, rep.minimizer, 10.0 * cfg.tol_feas).contained
    assert abs(rep.j_value - ef.m_ellipsoid(e, rep.minimizer)) <= 1e-12
    for cut in rep.active_cuts:
        assert abs(float(cut @ rep.minimizer.q @ cut) - 1.0) <= 10.0 * cfg.tol_feas


def test_solve_u_square():
    rep = ef.solve_u(square_h(), BALL2)
    assert rep.status == "optimal"
    assert abs(rep.j_value - 1.0) < 1e-9
    assert np.linalg.norm(rep.minimizer.q - np.eye(2)) < 1e-9
    _report_invariants(square_h(), BALL2, rep)


def test_solve_u_rectangle():
    rep = ef.solve_u(rectangle_h(), BALL2)
    assert abs(rep.j_value - SQRT58) < 1e-9
    assert np.linalg.norm(rep.minimizer.q - np.diag([0.25, 1.0])) < 1e-8
    _report_invariants(rectangle_h(), BALL2, rep)


def test_solve_u_cross_polytope():
    rep = ef.solve_u(cross_h(2), BALL2)
    assert abs(rep.j_value - np.sqrt(2.0)) < 1e-9
    assert np.linalg.norm(rep.minimizer.q - 2.0 * np.eye(2)) < 1e-8
    _report_invariants(cross_h(2), BALL2, rep)


def test_solve_u_vertex_polytope_matches_facet_form():
    rep_v = ef.solve_u(cross_v(2), BALL2)
    rep_h = ef.solve_u(cross_h(2), BALL2)
    assert ef.form_distance(rep_v.minimizer, rep_h.minimizer) < 1e-4


def test_solve_u_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        ef.solve_u(square_h(), ef.unit_ball(3))


def test_j_value_examples_and_monotonicity():
    assert abs(ef.j_value(square_h(), BALL2) - 1.0) < 1e-9
    assert abs(ef.j_value(rectangle_h(), BALL2) - SQRT58) < 1e-9
    # the square sits inside the rectangle, so its value can only be larger
    assert ef.j_value(rectangle_h(), BALL2) <= ef.j_value(square_h(), BALL2) + 1e-8
    # dropping a facet slab enlarges the body and lowers the value
    rng = np.random.default_rng(0)
    body = rand_polytope_h(rng, 2, 5)
    smaller_body = ef.PolytopeH(np.vstack([body.facets, rng.standard_normal((1, 2))]))
    assert ef.j_value(body, BALL2) <= ef.j_value(smaller_body, BALL2) + 1e-8


def test_check_john_square():
    rep = ef.check_john(square_h(), BALL2)
    assert rep.is_fixed_point and rep.distance < 1e-9


def test_check_john_cross_ball():
    rep = ef.check_john(cross_h(2), ef.make_ellipsoid(2.0 * np.eye(2)))
    assert rep.is_fixed_point


def test_check_john_rejects_non_fixed_point():
    e = ef.make_ellipsoid(np.diag([1.0, 4.0]))  # inscribed but not extremal
    rep = ef.check_john(square_h(), e)
    assert not rep.is_fixed_point
    # the map sends it to the unit disk
    out = ef.solve_u(square_h(), e)
    assert np.linalg.norm(out.minimizer.q - np.eye(2)) < 1e-8


def test_check_john_not_contained():
    rep = ef.check_john(square_h(), ef.make_ellipsoid(0.25 * np.eye(2)))
    assert not rep.is_fixed_point and not rep.contained


def test_iterate_square_fixed_immediately():
    rep = ef.iterate_u(square_h(), BALL2, steps=5)
    assert rep.fixed_point_reached and len(rep.trajectory) == 1


def test_iterate_rectangle_reaches_fixed_point():
    rep = ef.iterate_u(rectangle_h(), BALL2, steps=5)
    assert rep.fixed_point_reached
    assert np.linalg.norm(rep.trajectory[0].q - np.diag([0.25, 1.0])) < 1e-8
    assert len(rep.trajectory) == 2


def test_iterate_cross_records_trajectory():
    rep = ef.iterate_u(cross_h(2), ef.make_ellipsoid(np.diag([1.0, 4.0])), steps=4)
    assert len(rep.trajectory) >= 1
    # no convergence assertion; just record the gap to the known fixed point
    gap = ef.form_distance(rep.trajectory[-1], ef.make_ellipsoid(2.0 * np.eye(2)))
    assert np.isfinite(gap)


def test_dual_square_multiple_maximizers():
    rep = ef.solve_u_bar(ef.PolytopeV([[1.0, 1.0], [1.0, -1.0]]), BALL2)
    assert rep.status == "attained"
    assert abs(rep.i_value - 1.0 / np.sqrt(2.0)) < 1e-9
    assert rep.uniqueness == "multiple_found"
    assert rep.second is not None
    assert ef.form_distance(rep.maximizer, rep.second) > 1e-3
    # both witnesses really circumscribe the square at the optimal value
    for cand in (rep.maximizer, rep.second):
        ok, excess = ef.body_in_ellipsoid(ef.PolytopeV([[1.0, 1.0], [1.0, -1.0]]),
                                          cand, 1e-7)
        assert ok, excess
        assert abs(ef.m_ellipsoid(BALL2, cand) - rep.i_value) < 1e-7


def test_dual_narrow_box_not_attained():
    rep = ef.solve_u_bar(ef.PolytopeV([[0.1, 1.0], [0.1, -1.0]]), BALL2)
    assert rep.status == "non_attained"
    assert abs(rep.i_value - np.sqrt(50.0)) < 1e-9
    assert abs(abs(rep.degenerate_direction[1]) - 1.0) < 1e-6


def test_dual_ball_unique():
    rep = ef.solve_u_bar(ef.LpBall(2, 1.0, 2), BALL2)
    assert rep.status == "attained"
    assert abs(rep.i_value - 1.0) < 1e-9
    assert ef.form_distance(rep.maximizer, BALL2) < 1e-9
    assert rep.uniqueness == "unknown"


def test_dual_rejects_facet_polytopes():
    with pytest.raises(ef.UnsupportedBodyError):
        ef.solve_u_bar(square_h(), BALL2)


def test_dual_equivalence_examples():
    sq = ef.PolytopeV([[1.0, 1.0], [1.0, -1.0]])
    assert ef.verify_dual_equivalence(sq, BALL2, ef.make_ellipsoid(0.5 * np.eye(2)))
    assert not ef.verify_dual_equivalence(sq, BALL2, ef.make_ellipsoid(0.25 * np.eye(2)))
    ball_body = ef.LpBall(2, 1.0, 2)
    assert ef.verify_dual_equivalence(ball_body, BALL2, BALL2)
    with pytest.raises(ValueError):
        ef.verify_dual_equivalence(sq, BALL2, ef.make_ellipsoid(4.0 * np.eye(2)))


def test_uniqueness_across_seeds():
    rng = np.random.default_rng(1)
    for _ in range(4):
        n = int(rng.integers(2, 4))
        body = rand_polytope_h(rng, n, int(rng.integers(3, 7)))
        e = rand_spd_ellipsoid(rng, n)
        a = ef.solve_u(body, e, SolveConfig(seed=11))
        b = ef.solve_u(body, e, SolveConfig(seed=222))
        assert ef.form_distance(a.minimizer, b.minimizer) <= 1e-4


def test_equivariance_under_linear_maps():
    rng = np.random.default_rng(2)
    for _ in range(5):
        n = int(rng.integers(2, 4))
        body = rand_polytope_h(rng, n, n + 2)
        e = rand_spd_ellipsoid(rng, n)
        t = rand_invertible(rng, n, cond=10.0)
        direct = ef.solve_u(ef.linear_image(t, body), ef.ellipsoid_linear_image(t, e))
        mapped = ef.ellipsoid_linear_image(t, ef.solve_u(body, e).minimizer)
        assert ef.form_distance(direct.minimizer, mapped) <= 1e-4


def test_scale_invariance_of_reference():
    rng = np.random.default_rng(3)
    body = rand_polytope_h(rng, 2, 4)
    e = rand_spd_ellipsoid(rng, 2)
    base = ef.solve_u(body, e).minimizer
    for t in (0.5, 3.0):
        scaled = ef.solve_u(body, ef.make_ellipsoid(e.q / t**2)).minimizer
        assert ef.form_distance(base, scaled) <= 1e-6


def test_continuity_smoke():
    rng = np.random.default_rng(4)
    for body in (square_h(), rectangle_h(), cross_h(2)):
        e = rand_spd_ellipsoid(rng, 2, cond=4.0)
        base = ef.solve_u(body, e).minimizer
        bump = rng.standard_normal((2, 2))
        bump = 1e-3 * np.linalg.norm(e.q) * (bump + bump.T) / np.linalg.norm(bump + bump.T)
        moved = ef.solve_u(body, ef.make_ellipsoid(e.q + bump)).minimizer
        assert ef.form_distance(base, moved) <= 0.05


def test_gauge_of_fixed_point_dominates_inscribed():
    # with E the square's extremal inscribed ellipsoid, every other inscribed
    # ellipsoid has mean-square gauge above 1
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = rng.standard_normal((2, 2))
        q = g.T @ g + 0.1 * np.eye(2)
        q = q * np.max(np.diag(np.linalg.inv(q)))  # scale to touch the square
        f = ef.make_ellipsoid(q)
        assert ef.m_ellipsoid(BALL2, f) >= 1.0 - 1e-8


def test_solve_report_lp_iterations_positive():
    rep = ef.solve_u(square_h(), BALL2)
    assert rep.lp_iterations >= 3
    assert rep.cuts.shape[0] >= 2


def test_solve_u_smooth_ball_bodies():
    # the ball of any p-norm is invariant under axis flips, so the
    # minimizer over the round reference must be a round ball itself
    rep = ef.solve_u(ef.LpBall(4, 1.0, 2), BALL2)
    assert np.linalg.norm(rep.minimizer.q - np.eye(2)) < 1e-8
    assert abs(rep.j_value - 1.0) < 1e-9
    rep = ef.solve_u(ef.LpBall(1.5, 1.0, 2), BALL2)
    assert np.linalg.norm(rep.minimizer.q - 2.0 ** (1.0 / 3.0) * np.eye(2)) < 1e-6
    assert abs(rep.j_value - 2.0 ** (1.0 / 6.0)) < 1e-7


def test_solve_u_max_cuts_reports_feasible_iterate():
    cfg = SolveConfig(max_cuts=4)
    rep = ef.solve_u(square_h(), BALL2, cfg)
    assert rep.status == "max_cuts_reached"
    assert ef.contains_ellipsoid(square_h(), rep.minimizer, 10.0 * cfg.tol_feas).contained
    assert rep.j_value >= 1.0 - 1e-9  # cannot beat the true optimum
