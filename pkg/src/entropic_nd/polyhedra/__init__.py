"""Entropic cones in halfspace form: generation, projection and decisions."""

from .cone import (DERIVED, ELEMENTAL, FLOAT_TOL, INTERSECTION, Cone, LinearInequality,
                   Membership, elemental_inequalities, elemental_terms, membership,
                   nd_cone, normalize_coeffs, parse_inequality, shannon_cone)
from .extension import Extension, extension_feasible
from .fm import (DEFAULT_MAX_INEQUALITIES, ProjectionLimitExceeded, StepInfo, fm_eliminate,
                 is_redundant, project_cone, remove_redundant)
from .lp import LPResult, check_farkas, solve

__all__ = [
    "DERIVED", "ELEMENTAL", "FLOAT_TOL", "INTERSECTION", "Cone", "LinearInequality",
    "Membership", "elemental_inequalities", "elemental_terms", "membership", "nd_cone",
    "normalize_coeffs", "parse_inequality", "shannon_cone", "Extension",
    "extension_feasible", "DEFAULT_MAX_INEQUALITIES", "ProjectionLimitExceeded",
    "StepInfo", "fm_eliminate", "is_redundant", "project_cone", "remove_redundant",
    "LPResult", "check_farkas", "solve",
]
