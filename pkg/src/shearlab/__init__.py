"""Shear coordinates of ideal triangulations on hyperbolic surfaces.

Builds hyperbolic surfaces from Fenchel-Nielsen data, decomposes them
into right-angled hexagons, spins the seams into spiralling ideal
triangulations, and measures the shear coordinates, whose maximum is
checked against the logarithmic topology bound.  Cusped triangulations
of chain surfaces support flip moves and a minimax flip search.
"""

from .constants import (RHO, Signature, ShearFreeParams, area, bavard_bound,
                        collar_width, constants_audit, delta1, main_bound,
                        rough_cusped_bound, shear_free_params, spike_constant,
                        topology_constants, truncated_collar_width)
from .geom import (IDEAL_INRADIUS, INF, Geodesic, GeometryError, IdealTriangle,
                   Isometry, classify, compose, cross_ratio, dist,
                   dist_to_geodesic, fixed_points, horocycle_length_at_radius,
                   incircle, shear, shear_points, translation_length)
from .surface import (FNCoordinates, Holonomy, PantsGraph,
                      canonical_pants_graph, curve_length, holonomy_from_fn,
                      sample_fn, sample_seed, validate)
from .decomposition import (gamma_a, certify_short, seam_decomposition,
                            truncate_arc)
from .spiralling import (develop, max_abs_shear, shear_point_free_audit,
                         shear_relations, shear_vector, spiral)
from .chains import build_cusped_chain, is_chain
from .cusped import (CuspedTriangulation, cusp_sums, develop_from_shears,
                     develop_walk, flip, flippable, hyperbolic_walk_lengths,
                     minimax_flip_search, project_to_complete,
                     random_flip_sequence, rewrite_walk, test_curves)

__version__ = "0.1.0"
