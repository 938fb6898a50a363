"""Matrix-free PDHG solver for linear programs with diagnostics for
finite-time active-set identification and the local linear rate."""

from .kernels import BACKEND
from .sparse import (SparseMatrix, conjugate_gradient, frobenius_norm,
                     matvec, matvec_transpose, spectral_norm_estimate)
from .model import (DEFAULT_CLASSIFY_TOL, DeltaMetric, GeneralLP, Partition,
                    PrimalDualPoint, StandardLP, VariableMap, as_general,
                    delta_metric, kkt_residual, matrix_norm,
                    min_norm_subgradient, objective_value, partition,
                    reduced_costs, subdifferential_distance, to_standard)
from .mps import MpsParseError, parse_mps, structurally_equal, write_mps
from .scaling import (ScalingRecord, pock_chambolle_scale, precondition,
                      ruiz_scale)
from .solver import (CSV_HEADER, IterateLog, SolveResult, SolverConfig,
                     normalized_duality_gap, pdhg_step, pdhg_step_general,
                     ps_norm, solve)
from .identification import (IdentificationReport, identification_bound,
                             identification_moment, local_rate_bound,
                             local_rate_per_iter, r_delta_metric,
                             radius_bound)
from .sharpness import (HomogeneousSharpnessReport, PolyhedralSystem,
                        active_set_polyhedron, alpha0_bounds, angle_estimate,
                        empirical_sharpness, hoffman_brute_force,
                        homogeneous_partition, homogeneous_sharpness_report,
                        identification_cone_system, kkt_polyhedron,
                        local_cone_system, project_polyhedron)
from .instances import house, perturb, random_planted_lp, wedge

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CSV_HEADER",
    "DEFAULT_CLASSIFY_TOL",
    "DeltaMetric",
    "GeneralLP",
    "HomogeneousSharpnessReport",
    "IdentificationReport",
    "IterateLog",
    "MpsParseError",
    "Partition",
    "PolyhedralSystem",
    "PrimalDualPoint",
    "ScalingRecord",
    "SolveResult",
    "SolverConfig",
    "SparseMatrix",
    "StandardLP",
    "VariableMap",
    "active_set_polyhedron",
    "alpha0_bounds",
    "angle_estimate",
    "as_general",
    "conjugate_gradient",
    "delta_metric",
    "empirical_sharpness",
    "frobenius_norm",
    "hoffman_brute_force",
    "homogeneous_partition",
    "homogeneous_sharpness_report",
    "house",
    "identification_bound",
    "identification_cone_system",
    "identification_moment",
    "kkt_polyhedron",
    "kkt_residual",
    "local_cone_system",
    "local_rate_bound",
    "local_rate_per_iter",
    "matrix_norm",
    "matvec",
    "matvec_transpose",
    "min_norm_subgradient",
    "normalized_duality_gap",
    "objective_value",
    "parse_mps",
    "partition",
    "pdhg_step",
    "pdhg_step_general",
    "perturb",
    "pock_chambolle_scale",
    "precondition",
    "project_polyhedron",
    "ps_norm",
    "r_delta_metric",
    "radius_bound",
    "random_planted_lp",
    "reduced_costs",
    "ruiz_scale",
    "solve",
    "spectral_norm_estimate",
    "structurally_equal",
    "subdifferential_distance",
    "to_standard",
    "wedge",
    "write_mps",
]
