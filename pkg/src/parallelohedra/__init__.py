"""Exact computations on lattice Voronoi parallelohedra and their tilings."""

from .audit import AuditReport, Case, Verdict, audit
from .catalog import catalog, get
from .dual import Census, CellTag, DualCell, classify, dual_cell, midpoint_set
from .estimator import ParallelohedronAnalyzer
from .free import add_segment, enumerate_free_edges, is_free_triangle_criterion
from .harness import analyze
from .io import AnalysisReport, InputError, LatticeSpec, load_lattice
from .lattice import Lattice, NotPositiveDefiniteError, points_in_ball, relevant_vectors
from .polytope import FaceLatticePolytope, check_minkowski_venkov, voronoi_cell
from .scaling import construct_scaling, reconstruct_quadratic_form, verify_scaling
from .venkov import build_red_graph, is_decomposable

__all__ = [
    "AnalysisReport", "AuditReport", "Case", "Census", "CellTag", "DualCell",
    "FaceLatticePolytope", "InputError", "Lattice", "LatticeSpec",
    "NotPositiveDefiniteError", "ParallelohedronAnalyzer", "Verdict",
    "add_segment", "analyze", "audit", "build_red_graph", "catalog",
    "check_minkowski_venkov", "classify", "construct_scaling", "dual_cell",
    "enumerate_free_edges", "get", "is_decomposable", "is_free_triangle_criterion",
    "load_lattice", "midpoint_set", "points_in_ball", "reconstruct_quadratic_form",
    "relevant_vectors", "verify_scaling", "voronoi_cell",
]
__version__ = "0.1.0"
