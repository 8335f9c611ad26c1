"""Principalization of ideals on affine toroidal orbifold charts.

The package turns an ideal on a chart with ordinary and monomial
variables into an invertible monomial ideal by a tree of Kummer blowups,
driven by logarithmic order reduction. Entry points: principalize and
order_reduce build the tree, invariant computes the stage invariant,
resolve_embedded extracts resolved subvariety charts, and trace_io / cli
handle problem files and trace documents.
"""

from .blowup import (BlowupChart, DivisorCenter, KummerCenter, admissible,
                     blow_up, controlled_transform, normalized_power,
                     strict_transform)
from .calculus import (MarkedIdeal, coefficient_ideal, derivation_level,
                       homogenize, is_balanced, is_clean, monomial_saturation,
                       select_maximal_contact)
from .chart import Character, Chart
from .engine import (BlowupTree, EngineConfig, TraceNode, TraceStep,
                     compare_invariants, format_invariant, invariant,
                     order_reduce, principalize, resolve_embedded,
                     verify_tree)
from .errors import (DepthExceeded, EmptyCenter, EngineError, NoMaximalContact,
                     NotBalanced, NotDivisible, NotMonomialFixpoint, NotSharp,
                     NotSynchronized, ParseError, ValidationError)
from .lattice import Lattice, Monoid, hilbert_basis
from .ring import ChartRing, Ideal, ideal
from .trace_io import (ProblemSpec, center_data, center_label, emit_dot,
                       emit_problem, emit_trace, parse_problem, parse_trace,
                       render_trace, trace_document)

__version__ = "0.1.0"

__all__ = [
    "BlowupChart", "BlowupTree", "Character", "Chart", "ChartRing",
    "DepthExceeded", "DivisorCenter", "EmptyCenter", "EngineConfig",
    "EngineError", "Ideal", "KummerCenter", "Lattice", "MarkedIdeal",
    "Monoid", "NoMaximalContact", "NotBalanced", "NotDivisible",
    "NotMonomialFixpoint", "NotSharp", "NotSynchronized", "ParseError",
    "ProblemSpec", "TraceNode", "TraceStep", "ValidationError", "admissible",
    "blow_up", "center_data", "center_label", "coefficient_ideal",
    "compare_invariants", "controlled_transform", "derivation_level",
    "emit_dot", "emit_problem", "emit_trace", "format_invariant",
    "hilbert_basis", "homogenize", "ideal", "invariant", "is_balanced",
    "is_clean", "monomial_saturation", "normalized_power", "order_reduce",
    "parse_problem", "parse_trace", "principalize", "render_trace",
    "resolve_embedded", "select_maximal_contact", "strict_transform",
    "trace_document", "verify_tree", "__version__",
]
