"""Toolkit for MMP hypergraphs, Greechie diagrams, and the finite
orthomodular lattices they generate, aimed at Kochen-Specker analysis in
three dimensions."""

from .mmp import (
    MmpHypergraph,
    MmpParseError,
    parse_mmp,
    parse_mmp_lines,
    serialize_mmp,
    validate,
    dualize,
    loop_analysis,
)
from .lattice import Oml, PasteError, paste, verify_axioms
from .equations import builtin, evaluate, parse_condition, check_superposition
from .states import solve_states, two_valued_coloring
from .vectors import Vec3Q, Subspace3, check_noa_subspace, vectorfind, vectorfind_all
from .layout import LayoutPlan, build_levels, find_independent_sets, render_svg

__version__ = "1.0.0"

__all__ = [
    "Oml",
    "PasteError",
    "paste",
    "verify_axioms",
    "builtin",
    "evaluate",
    "parse_condition",
    "check_superposition",
    "solve_states",
    "two_valued_coloring",
    "Vec3Q",
    "Subspace3",
    "check_noa_subspace",
    "vectorfind",
    "vectorfind_all",
    "LayoutPlan",
    "build_levels",
    "find_independent_sets",
    "render_svg",
    "MmpHypergraph",
    "MmpParseError",
    "parse_mmp",
    "parse_mmp_lines",
    "serialize_mmp",
    "validate",
    "dualize",
    "loop_analysis",
    "__version__",
]
