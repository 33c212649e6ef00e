"""Extremal ellipsoids of centrally-symmetric convex bodies.

Core objects: convex bodies with gauge/support/boundary oracles, ellipsoids
as positive-definite forms, the inscribed minimizer of the mean-square
gauge with its isotropy certificate, the circumscribed maximizer, and the
fixed-point characterization of the maximal-volume inscribed ellipsoid.
"""

from .bodies import (ContainmentVerdict, ConvexBody, LinearImage, LpBall,
                     PolytopeH, PolytopeV, SingularTransformError,
                     ZeroDirectionError, body_from_json, body_in_ellipsoid,
                     body_to_json, boundary_point, contains_ellipsoid,
                     linear_image, norm_many, polar)
from .certificates import (FAILED_CONTAINMENT, FAILED_ISOTROPY, VERIFIED,
                           Certificate, VerifyResult, contact_points,
                           isotropy_certificate, verify_u)
from .ellipsoids import (Ellipsoid, ellipsoid_from_json, ellipsoid_linear_image,
                         ellipsoid_to_json, form_distance, inner_product,
                         m_ellipsoid, m_star, make_ellipsoid, polar_wrt,
                         sample_mu, unit_ball)
from .numerics import (InfeasibleError, LpProblem, LpSolution,
                       NnlsSolution, NoConvergenceError,
                       NotPositiveDefiniteError, cholesky, solve_lp,
                       solve_nnls, sym_eigen, sym_matrix)
from .oracle import GridConfig, NoFeasiblePointError, brute_force_u, quadrature_m
from .render import render_svg
from .solver import (DualReport, IterateReport, JohnReport,
                     RestartDisagreementError, SolveConfig, SolveReport,
                     SolverError, UnsupportedBodyError, check_john, iterate_u,
                     j_value, solve_u, solve_u_bar, verify_dual_equivalence)

__version__ = "0.1.0"
