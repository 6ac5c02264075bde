"""Illumination, covering and Steiner-tree computations for centred polytopes."""
from .covering import (COVERED, UNDETERMINED, UNVERIFIED, CoveringCertificate, Homothet,
                       certify, corner_covering, covering_cost, cube_halfcover,
                       verify_covering)
from .errors import (BoundViolation, CapExceededError, InvariantError, MinkError,
                     NumericalError)
from .geometry import (EuclideanGauge, Gauge, PolyhedralGauge, SymmetricPolytope, VertexList,
                       active_facets, as_gauge, enumerate_vertices, gauge_eval,
                       random_symmetric_polygon, standard_body)
from .illumination import (IlluminationReport, LightConfiguration, bezdek_parameter,
                           convert_covering_to_lights, illuminates_body, illuminates_point,
                           illumination_number, lemma1_margin, lemma1_smallest_k)
from .lp import Constraint, LinearProgram, LpOutcome, min_gauge_subject_to, solve_lp
from .steiner import (DegreeReport, EmbeddedTree, SteinerTopology, degree_bound_check,
                      degree_report, enumerate_full_topologies, minimize_fixed_topology,
                      mst_length, solve_smt, star_smt_test, steiner_star_test,
                      thm2_local_move)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
