"""Entropic no-disturbance cones, contextuality tests and their monogamy.

Subpackages: :mod:`entropic_nd.polyhedra` (cones, projection, exact LP) and
:mod:`entropic_nd.chordal` (extensions, decompositions, edge packings).
"""

from .scenario import (ContextNotClique, DanglingLabel, EntropyVector, IndexMismatch, Scenario,
                       ScenarioError, SubsetIndex, UncoveredEdge, chained_bell_scenario,
                       n_cycle_scenario, new_scenario, project, restrict)
from .polyhedra import (Cone, LinearInequality, extension_feasible, membership, nd_cone,
                        project_cone, shannon_cone)
from .inequalities import (LHV, NCHV, Certificate, NotValid, TestExpression, catalog, chain,
                           entropic_chained_bell, entropic_cycle, evaluate_expression,
                           monogamy_sum, verify_nchv_bound)
from .chordal import (chordal_extension, edge_packing, find_chordal_2_decomposition,
                      is_chordal, junction_tree, recognize_piece)
from .quantum import (QuantumExperiment, joint_probability, observed_entropy_vector,
                      optimize_violation, verify_monogamy)

__version__ = "0.1.0"

__all__ = [
    "ContextNotClique", "DanglingLabel", "EntropyVector", "IndexMismatch", "Scenario",
    "ScenarioError", "SubsetIndex", "UncoveredEdge", "chained_bell_scenario",
    "n_cycle_scenario", "new_scenario", "project", "restrict",
    "Cone", "LinearInequality", "extension_feasible", "membership", "nd_cone",
    "project_cone", "shannon_cone",
    "LHV", "NCHV", "Certificate", "NotValid", "TestExpression", "catalog", "chain",
    "entropic_chained_bell", "entropic_cycle", "evaluate_expression", "monogamy_sum",
    "verify_nchv_bound",
    "chordal_extension", "edge_packing", "find_chordal_2_decomposition", "is_chordal",
    "junction_tree", "recognize_piece",
    "QuantumExperiment", "joint_probability", "observed_entropy_vector",
    "optimize_violation", "verify_monogamy",
]
