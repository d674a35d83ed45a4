"""Chordal graphs, entropy extensions, chordal decompositions and edge packings."""

from ..graphs import (ChordalityResult, Graph, JunctionTree, NotChordal, is_chordal,
                      junction_tree, lex_bfs, maximal_cliques)
from .decompose import (ChordalDecomposition, DecompositionResult, find_chordal_2_decomposition,
                        nd_valid)
from .extension import (ExtensionInfeasible, MarginalMismatch, MissingCliqueEntropy,
                        ObservedOutsideND, chordal_extension, clique_piece_entropy,
                        compatibility_graph, junction_value)
from .packing import (COMPLETE, CYCLE, EULER, KINDS, LINE2K, STAR, PackingPiece, PackingResult,
                      PairTerm, check_certificate, edge_packing, piece_certificate,
                      recognize_piece)
from .decompose import FOUND, NOT_FOUND, UNKNOWN

__all__ = [
    "ChordalityResult", "Graph", "JunctionTree", "NotChordal", "is_chordal", "junction_tree",
    "lex_bfs", "maximal_cliques", "ChordalDecomposition", "DecompositionResult",
    "find_chordal_2_decomposition", "nd_valid", "ExtensionInfeasible", "MarginalMismatch",
    "MissingCliqueEntropy", "ObservedOutsideND", "chordal_extension", "clique_piece_entropy",
    "compatibility_graph", "junction_value", "COMPLETE", "CYCLE", "EULER", "KINDS", "LINE2K",
    "STAR", "PackingPiece", "PackingResult", "PairTerm", "check_certificate", "edge_packing",
    "piece_certificate", "recognize_piece", "FOUND", "NOT_FOUND", "UNKNOWN",
]
