"""Exact comparison of finite metric spaces and finite metric measure spaces.

Solvers for the Gromov-Hausdorff distance (over correspondences), the box
distance (over coupling/relation pairs), and the Prokhorov distance on a
common space, together with the orbit parametrization of finite spaces,
canonical forms, witness constructions, and comb-space generators.  All
arithmetic is exact on rationals.
"""

from .box import (
    box_atom_bound,
    box_exact,
    cardinality_floor_check,
    two_point_box_oracle,
    two_point_space,
)
from .comb import CombParams, CombSpace, build_comb, comb_witness, hausdorff_l1
from .core import (
    MASS_TOLERANCE,
    Coupling,
    FiniteMetricSpace,
    FiniteMMSpace,
    PreconditionError,
    Relation,
    SizeGuardError,
    SpaceValidationError,
    Violation,
    diameter,
    distortion,
    is_correspondence,
    line_space,
    mass_on,
    require_valid,
    separation,
    to_fraction,
    validate,
)
from .gh import gh_exact, gh_upper_from_relation
from .moduli import (
    MetricVector,
    WeightVector,
    canonical_form,
    mass_closeness,
    metric_vector_of,
    orbit_distance,
    phi_b,
    phi_gh,
    relation_to_injection,
    uniform_lift,
    weight_vector_of,
)
from .transport import is_coupling, max_mass_coupling, prokhorov

__version__ = "0.1.0"

__all__ = [
    "MASS_TOLERANCE",
    "CombParams",
    "CombSpace",
    "Coupling",
    "FiniteMMSpace",
    "FiniteMetricSpace",
    "MetricVector",
    "PreconditionError",
    "Relation",
    "SizeGuardError",
    "SpaceValidationError",
    "Violation",
    "WeightVector",
    "box_atom_bound",
    "box_exact",
    "build_comb",
    "canonical_form",
    "cardinality_floor_check",
    "comb_witness",
    "diameter",
    "distortion",
    "gh_exact",
    "gh_upper_from_relation",
    "hausdorff_l1",
    "is_correspondence",
    "is_coupling",
    "line_space",
    "mass_closeness",
    "mass_on",
    "max_mass_coupling",
    "metric_vector_of",
    "orbit_distance",
    "phi_b",
    "phi_gh",
    "prokhorov",
    "relation_to_injection",
    "require_valid",
    "separation",
    "to_fraction",
    "two_point_box_oracle",
    "two_point_space",
    "uniform_lift",
    "validate",
    "weight_vector_of",
]
