"""Tiling-space metrics, perturbation groups and recurrence certificates."""

from .errors import (AdmissibilityError, CoverageError, DomainError,
                     G6ViolationError, IndexMismatchError,
                     InsufficientWindowError, InvalidTileError, ParseError,
                     PatchworkError)
from .geometry import (Ball, Patch, Pattern, Tile, TilingSource,
                       enclosing_patches, interiors_disjoint, make_chair,
                       make_grid, make_qp, minimal_patch, origin_ball,
                       patch_diameter, support_contains_ball)
from .groups import (Homothety, Piecewise, QPPair, Rigid, Translation,
                     compose, dist_homothety, dist_homothety_tilde,
                     dist_piecewise, dist_rigid, homothety_action, inverse,
                     norm, piecewise_action, qp_action, rigid_action,
                     translation_action)
from .metric import DistInterval, delta, tiling_distance, verify_metric_axioms
from .ramsey import (BrownCertificate, Coloring, OrbitSystem,
                     PerturbationCube, brown_search, gallai_search, largeness,
                     topological_brown, verify_brown, verify_topological_brown)
from .recurrence import (BTCertificate, LWCertificate, bt_search,
                         local_iso_radius, lw_search, return_set, verify_bt,
                         verify_lw)
from .theta import (ThetaFn, check_g5, check_theta_axioms, theta_affine,
                    theta_by_name, theta_eval, theta_identity)

__version__ = "0.1.0"
