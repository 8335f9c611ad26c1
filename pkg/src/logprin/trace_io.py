"""Problem files, trace documents, and graph export.

Problem files are JSON: a chart presentation, generator strings in the
polynomial grammar, a mark, and optional codimension and budgets (the
schema is documented in the README). A finished blowup tree serializes
to a versioned trace document with a deterministic layout: dictionary
keys in fixed construction order, rationals as "p/q" strings, lattice
vectors as integer arrays, ideals as reduced bases in the ring's term
order, and Kummer roots as a vector list paired with a root index. The
DOT export draws the tree with one box per chart and the blowup centers
on the edges.
"""

import json
import re
from fractions import Fraction

from .blowup import DivisorCenter
from .calculus import MarkedIdeal
from .chart import Character, Chart
from .engine import (EngineConfig, STATUS_ACTIVE, STATUS_EMPTY, STATUS_ERROR,
                     STATUS_PRINCIPAL, STATUS_REDUCED, format_invariant)
from .errors import EngineError, ParseError, ValidationError
from .ring import Ideal

TRACE_FORMAT = "logprin-trace"
TRACE_VERSION = 1

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_STATUSES = (STATUS_ACTIVE, STATUS_PRINCIPAL, STATUS_EMPTY, STATUS_REDUCED,
             STATUS_ERROR)
_NODE_KEYS = ("id", "parent", "depth", "chart", "step", "clean", "factor",
              "accumulated", "transform", "invariant", "status", "k0",
              "notes")


class ProblemSpec:
    """A validated problem: chart, generators, mark, and run options."""

    __slots__ = ("chart", "gens", "mark", "codim", "config", "verbosity")

    def __init__(self, chart, gens, mark, codim=None, config=None,
                 verbosity=0):
        self.chart = chart
        self.gens = list(gens)
        self.mark = int(mark)
        self.codim = codim
        self.config = config or EngineConfig()
        self.verbosity = int(verbosity)

    @property
    def ideal(self):
        return Ideal(self.chart.ring, self.gens)

    def marked(self):
        return MarkedIdeal(self.ideal, self.mark)

    def data(self):
        """Plain-data form; emit_problem writes exactly this."""
        chart = {
            "name": self.chart.name,
            "ordinary": list(self.chart.ordinary),
            "rank": self.chart.rank,
            "monomial": {n: list(v)
                         for n, v in self.chart.monomial_pairs()},
        }
        if self.chart.characters:
            chart["characters"] = [_character_data(ch)
                                   for ch in self.chart.characters]
        out = {
            "chart": chart,
            "ideal": [self.chart.ring.format(g) for g in self.gens],
            "mark": self.mark,
        }
        if self.codim is not None:
            out["codim"] = self.codim
        out["config"] = {
            "max_depth": self.config.max_blowups,
            "max_shifts": self.config.max_shifts,
            "check_admissible": self.config.check_admissible,
            "verbosity": self.verbosity,
        }
        return out

    def __eq__(self, other):
        return isinstance(other, ProblemSpec) and self.data() == other.data()

    def __repr__(self):
        return "ProblemSpec({}, {} gens, mark {})".format(
            self.chart.name, len(self.gens), self.mark)


def parse_problem(text):
    """Parse and validate a JSON problem file into a ProblemSpec."""
    root = _load_json(text, "problem file")
    root = _require_object(root, "$", "problem")
    _reject_unknown(root, "$", ("chart", "ideal", "mark", "codim", "config"))
    chart = _parse_chart(_field(root, "chart", "$"))
    gens = _parse_gens(chart, _field(root, "ideal", "$"))
    mark = _int_at(_field(root, "mark", "$"), "$.mark", minimum=1)
    codim = None
    if root.get("codim") is not None:
        codim = _int_at(root["codim"], "$.codim", minimum=1)
    config, verbosity = _parse_config(root.get("config"))
    return ProblemSpec(chart, gens, mark, codim, config, verbosity)


def emit_problem(spec):
    """Canonical problem text; parses back to an equal ProblemSpec."""
    return _dumps(spec.data())


# ---------------------------------------------------------------------------
# problem validation helpers
# ---------------------------------------------------------------------------

def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(
            "{} is not valid JSON: {} (line {} column {})".format(
                what, err.msg, err.lineno, err.colno),
            pos=err.pos) from None


def _fail(message, path):
    raise ValidationError(message, path=path)


def _require_object(value, path, what):
    if not isinstance(value, dict):
        _fail("{} must be a JSON object".format(what), path)
    return value


def _reject_unknown(obj, path, allowed):
    for key in obj:
        if key not in allowed:
            _fail("unknown field {!r}".format(key),
                  "{}.{}".format(path, key))


def _field(obj, key, path):
    if key not in obj:
        _fail("missing field {!r}".format(key), path)
    return obj[key]


def _int_at(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        _fail("expected an integer", path)
    if minimum is not None and value < minimum:
        _fail("expected an integer >= {}".format(minimum), path)
    return value


def _check_name(value, path, seen):
    if not isinstance(value, str) or not _NAME_RE.match(value):
        _fail("invalid variable name", path)
    if value in seen:
        _fail("duplicate variable name {!r}".format(value), path)
    seen.add(value)
    return value


def _parse_fraction(value, path):
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    _fail('expected an integer or a "p/q" string', path)


def _parse_chart(data):
    data = _require_object(data, "$.chart", "chart")
    _reject_unknown(data, "$.chart",
                    ("name", "ordinary", "rank", "monomial", "characters"))
    name = data.get("name", "chart")
    if not isinstance(name, str) or not name:
        _fail("chart name must be a nonempty string", "$.chart.name")
    ordinary = data.get("ordinary", [])
    if not isinstance(ordinary, list):
        _fail("ordinary variables must form an array", "$.chart.ordinary")
    seen = set()
    for i, n in enumerate(ordinary):
        _check_name(n, "$.chart.ordinary[{}]".format(i), seen)
    monomial = _require_object(data.get("monomial", {}), "$.chart.monomial",
                               "monomial table")
    rank = data.get("rank")
    if rank is not None:
        rank = _int_at(rank, "$.chart.rank", minimum=0)
    pairs = []
    for n, vec in monomial.items():
        path = "$.chart.monomial.{}".format(n)
        _check_name(n, path, seen)
        if not isinstance(vec, list):
            _fail("generator vector must be an integer array", path)
        for j, x in enumerate(vec):
            _int_at(x, "{}[{}]".format(path, j))
        if rank is None:
            rank = len(vec)
        elif len(vec) != rank:
            _fail("generator vector disagrees with the monoid rank", path)
        if not any(vec):
            _fail("generator vector must be nonzero", path)
        pairs.append((n, tuple(vec)))
    characters = data.get("characters", [])
    if not isinstance(characters, list):
        _fail("characters must form an array", "$.chart.characters")
    chars = [_parse_character(item, rank or 0, set(ordinary),
                              "$.chart.characters[{}]".format(i))
             for i, item in enumerate(characters)]
    try:
        return Chart(name, ordinary, pairs, characters=chars)
    except AssertionError as err:
        _fail("chart presentation rejected: {}".format(err), "$.chart")
    except EngineError as err:
        _fail("chart presentation rejected: {}".format(err.message), "$.chart")


def _parse_character(item, rank, ordinary_names, path):
    item = _require_object(item, path, "character")
    _reject_unknown(item, path, ("lattice", "ordinary"))
    lat = item.get("lattice", [])
    if not isinstance(lat, list) or len(lat) != rank:
        _fail("character lattice part must list {} weights".format(rank),
              path + ".lattice")
    weights = [_parse_fraction(x, "{}.lattice[{}]".format(path, i))
               for i, x in enumerate(lat)]
    table = _require_object(item.get("ordinary", {}), path + ".ordinary",
                            "ordinary weight table")
    pairs = {}
    for n, x in table.items():
        if n not in ordinary_names:
            _fail("weight on unknown ordinary variable {!r}".format(n),
                  "{}.ordinary.{}".format(path, n))
        pairs[n] = _parse_fraction(x, "{}.ordinary.{}".format(path, n))
    return Character(weights, pairs)


def _parse_gens(chart, items):
    if not isinstance(items, list):
        _fail("ideal generators must form an array", "$.ideal")
    gens = []
    for i, text in enumerate(items):
        path = "$.ideal[{}]".format(i)
        if not isinstance(text, str):
            _fail("generator must be a string", path)
        try:
            gens.append(chart.ring.parse(text))
        except ParseError as err:
            bad = ValidationError(
                "generator does not parse: {}".format(err.message), path=path)
            if err.pos is not None:
                bad.data["pos"] = err.pos
            raise bad from None
    return gens


def _parse_config(value):
    if value is None:
        return EngineConfig(), 0
    value = _require_object(value, "$.config", "config")
    _reject_unknown(value, "$.config",
                    ("max_depth", "max_shifts", "check_admissible",
                     "verbosity"))
    kwargs = {}
    if "max_depth" in value:
        kwargs["max_blowups"] = _int_at(value["max_depth"],
                                        "$.config.max_depth", minimum=1)
    if "max_shifts" in value:
        kwargs["max_shifts"] = _int_at(value["max_shifts"],
                                       "$.config.max_shifts", minimum=1)
    if "check_admissible" in value:
        flag = value["check_admissible"]
        if not isinstance(flag, bool):
            _fail("expected a boolean", "$.config.check_admissible")
        kwargs["check_admissible"] = flag
    verbosity = 0
    if "verbosity" in value:
        verbosity = _int_at(value["verbosity"], "$.config.verbosity",
                            minimum=0)
    return EngineConfig(**kwargs), verbosity


def _character_data(char):
    out = {"lattice": [_frac_str(x) for x in char.lattice_part]}
    if char.ordinary_part:
        out["ordinary"] = {n: _frac_str(w) for n, w in char.ordinary_part}
    return out


def _frac_str(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "{}/{}".format(x.numerator, x.denominator)


def _dumps(data):
    return json.dumps(data, indent=2) + "\n"


# ---------------------------------------------------------------------------
# trace documents
# ---------------------------------------------------------------------------

def trace_document(tree):
    """The plain-data document of a finished blowup tree."""
    ring_ = tree.root_chart.ring
    return {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "mark": tree.mark,
        "input": [ring_.format(g) for g in tree.root_gens],
        "blowups": tree.blowup_count,
        "nodes": [_node_data(tree, node) for node in tree.nodes],
    }


def emit_trace(tree):
    """Deterministic trace text; identical trees give identical bytes."""
    return _dumps(trace_document(tree))


def render_trace(doc):
    """The canonical text of an already parsed trace document."""
    return _dumps(doc)


def parse_trace(text):
    """Validate trace text and return the document as plain data."""
    doc = _load_json(text, "trace file")
    doc = _require_object(doc, "$", "trace document")
    if doc.get("format") != TRACE_FORMAT:
        _fail("unrecognized document format", "$.format")
    if doc.get("version") != TRACE_VERSION:
        _fail("unsupported trace version", "$.version")
    _int_at(doc.get("mark"), "$.mark", minimum=1)
    _int_at(doc.get("blowups"), "$.blowups", minimum=0)
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        _fail("trace must contain at least the root node", "$.nodes")
    for i, node in enumerate(nodes):
        path = "$.nodes[{}]".format(i)
        node = _require_object(node, path, "node")
        if node.get("id") != i:
            _fail("node ids must run in preorder", path + ".id")
        parent = node.get("parent")
        if i == 0:
            if parent is not None:
                _fail("the root node has no parent", path + ".parent")
        elif not isinstance(parent, int) or not 0 <= parent < i:
            _fail("parent must point at an earlier node", path + ".parent")
        if node.get("status") not in _STATUSES:
            _fail("unknown node status", path + ".status")
        for key in _NODE_KEYS:
            if key not in node:
                _fail("missing field {!r}".format(key), path)
    return doc


def _node_data(tree, node):
    chart = node.chart
    out = {
        "id": node.node_id,
        "parent": node.parent_id,
        "depth": node.depth,
        "chart": chart.describe(),
        "step": _step_data(tree, node),
        "clean": node.clean_part.basis_strings(),
        "factor": chart.ring.format(node.factor),
        "accumulated": chart.ring.format(node.accumulated),
        "transform": node.transform.basis_strings(),
    }
    if node.strict is not None:
        out["strict"] = node.strict.basis_strings()
    if node.invariant is None:
        out["invariant"] = None
    else:
        out["invariant"] = format_invariant(node.invariant)
    out["status"] = node.status
    out["k0"] = node.k0
    out["notes"] = list(node.notes)
    return out


def _step_data(tree, node):
    if node.step is None:
        return None
    parent = tree.node(node.parent_id)
    return {
        "kind": node.step.kind,
        "mark": node.step.mark,
        "center": center_data(node.step.center, parent.chart),
        "exceptional": node.chart.ring.format(node.step.exceptional),
    }


def center_data(center, chart):
    """Serialized center: coordinate names plus rooted monomial vectors."""
    if isinstance(center, DivisorCenter):
        return {"divisor": chart.ring.format(center.element)}
    out = {"ordinary": list(center.ordinary)}
    if center.vectors:
        out["root"] = {
            "vectors": [list(v) for v in center.vectors],
            "monomials": [chart.ring.format(chart.monomial_poly(v))
                          for v in center.vectors],
            "index": center.index,
        }
    return out


# ---------------------------------------------------------------------------
# graph export
# ---------------------------------------------------------------------------

def center_label(center, chart):
    """Compact human form of a center, used on graph edges and reports."""
    if isinstance(center, DivisorCenter):
        return "div({})".format(chart.ring.format(center.element))
    parts = list(center.ordinary)
    for v in center.vectors:
        mono = chart.ring.format(chart.monomial_poly(v))
        if center.index == 1:
            parts.append(mono)
        elif _NAME_RE.match(mono):
            parts.append("{}^(1/{})".format(mono, center.index))
        else:
            parts.append("({})^(1/{})".format(mono, center.index))
    return "(" + ", ".join(parts) + ")"


def emit_dot(tree):
    """GraphViz text: nodes carry chart, invariant and status; edges the
    center that was blown up."""
    lines = ["digraph blowup {",
             '  node [shape=box, fontname="monospace"];']
    for node in tree.nodes:
        if node.invariant is None:
            inv = "?"
        else:
            inv = format_invariant(node.invariant)
        label = "\\n".join(_dot_escape(p) for p in (
            "#{} {}".format(node.node_id, node.chart.name),
            inv, node.status))
        lines.append('  n{} [label="{}"];'.format(node.node_id, label))
    for node in tree.nodes:
        if node.parent_id is None:
            continue
        parent = tree.node(node.parent_id)
        label = _dot_escape(center_label(node.step.center, parent.chart))
        lines.append('  n{} -> n{} [label="{}"];'.format(
            parent.node_id, node.node_id, label))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')
