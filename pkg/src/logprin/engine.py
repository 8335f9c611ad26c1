"""Order reduction, principalization and the stage invariant.

The driver keeps, on every chart of the growing blowup tree, a factored
state I = L * K: a pure monomial factor L already known to be exceptional
and a clean part K still carrying order. One expansion step either cleans
(blows up the a-th root of the monomial part), reduces the order of K
along a maximal contact center, passes through a divisor contact, or
performs the final cleaning blowup that absorbs L. Leaves are charts on
which nothing is left to do; on each of them the accumulated exceptional
element generates the full pullback of the input ideal.
"""

import math
from fractions import Fraction
from math import gcd

from .blowup import (DivisorCenter, KummerCenter, admissible, blow_up,
                     controlled_transform, strict_transform)
from .calculus import (MarkedIdeal, coefficient_ideal, homogenize,
                       is_clean, monomial_saturation, select_maximal_contact)
from .chart import Chart, INF
from .errors import (DepthExceeded, EngineError, NoMaximalContact,
                     NotSynchronized)
from .lattice import quotient_map, vec_add, vec_scale
from .ring import Ideal

STATUS_ACTIVE = "active"
STATUS_PRINCIPAL = "leaf-principal"
STATUS_EMPTY = "leaf-empty"
STATUS_REDUCED = "leaf-reduced"
STATUS_ERROR = "error"

STEP_CLEANING = "initial-cleaning"
STEP_CONTACT = "contact"
STEP_DIVISOR = "divisor"
STEP_FINAL = "final-cleaning"


class EngineConfig:
    """Budgets and toggles for one run of the driver."""

    __slots__ = ("max_blowups", "max_shifts", "check_admissible")

    def __init__(self, max_blowups=64, max_shifts=16, check_admissible=True):
        self.max_blowups = int(max_blowups)
        self.max_shifts = int(max_shifts)
        self.check_admissible = bool(check_admissible)


class TraceStep:
    """The incoming edge of a tree node: what was blown up and how."""

    __slots__ = ("kind", "center", "mark", "exceptional")

    def __init__(self, kind, center, mark, exceptional):
        self.kind = kind
        self.center = center
        self.mark = mark
        self.exceptional = exceptional


class TraceNode:
    """One chart of the blowup tree together with the engine state on it."""

    __slots__ = ("node_id", "parent_id", "depth", "chart", "step", "pullback",
                 "clean_part", "factor", "accumulated", "k0", "invariant",
                 "status", "strict", "notes", "recenter")

    def __init__(self, chart, step, pullback, clean_part, factor,
                 accumulated, k0, depth):
        self.node_id = None
        self.parent_id = None
        self.depth = depth
        self.chart = chart
        self.step = step
        self.pullback = pullback
        self.clean_part = clean_part
        self.factor = factor
        self.accumulated = accumulated
        self.k0 = k0
        self.invariant = None
        self.status = STATUS_ACTIVE
        self.strict = None
        self.notes = []
        self.recenter = None

    @property
    def transform(self):
        """The current controlled transform L * K on this chart."""
        return self.clean_part.multiply_poly(self.factor)

    def is_leaf(self):
        return self.status in (STATUS_PRINCIPAL, STATUS_EMPTY, STATUS_REDUCED)

    def __repr__(self):
        return "TraceNode({}, {}, {})".format(
            self.node_id, self.chart.name, self.status)


class BlowupTree:
    """The full tree of charts produced by one order reduction."""

    def __init__(self, chart, gens, mark, config):
        self.mark = mark
        self.config = config
        self.root_chart = chart
        self.root_gens = list(gens)
        self.nodes = []
        self.blowup_count = 0
        self._children = {}

    @property
    def root(self):
        return self.nodes[0]

    def add(self, node, parent_id):
        node.node_id = len(self.nodes)
        node.parent_id = parent_id
        self.nodes.append(node)
        self._children.setdefault(parent_id, []).append(node.node_id)
        return node

    def node(self, node_id):
        return self.nodes[node_id]

    def children(self, node_id):
        return [self.nodes[i] for i in self._children.get(node_id, [])]

    def leaves(self):
        return [n for n in self.nodes if n.is_leaf()]

    def path(self, node):
        out = [node]
        while out[-1].parent_id is not None:
            out.append(self.nodes[out[-1].parent_id])
        out.reverse()
        return out

    def pull_to(self, node, polys):
        """Push polynomials on the root chart down to the node's chart."""
        out = list(polys)
        for step_node in self.path(node)[1:]:
            out = [step_node.pullback(p) for p in out]
        return out


class _Shift:
    """Request to straighten a maximal contact coordinate first."""

    __slots__ = ("name", "poly")

    def __init__(self, name, poly):
        self.name = name
        self.poly = poly


# ---------------------------------------------------------------------------
# the stage invariant
# ---------------------------------------------------------------------------

def invariant(chart, marked, k0=0, config=None):
    """The chart-level stage invariant of a marked ideal.

    Entries are Fractions ordered lexicographically, with a shorter string
    smaller than any extension and math.inf as the largest entry value.
    """
    config = config or EngineConfig()
    return _invariant(chart, marked.ideal, marked.mark, k0, config)


def format_invariant(entries):
    if not entries:
        return "()"
    parts = []
    for e in entries:
        if e == INF:
            parts.append("inf")
        elif isinstance(e, Fraction) and e.denominator == 1:
            parts.append(str(e.numerator))
        else:
            parts.append(str(e))
    return "(" + ", ".join(parts) + ")"


def compare_invariants(a, b):
    """Lexicographic comparison; a proper prefix precedes its extensions."""
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) == len(b):
        return 0
    return -1 if len(a) < len(b) else 1


def _invariant(chart, ideal_, a, k0, config):
    if ideal_.is_zero():
        return (INF,)
    order = chart.max_logord(ideal_)
    if order < a:
        return ()
    work = ideal_
    if math.isinf(order):
        if k0 <= 0:
            return (INF,)
        sat = monomial_saturation(chart, ideal_)
        if len(sat) != 1:
            return (INF,)
        work = ideal_.colon(chart.monomial_poly(sat[0]))
        b = chart.max_logord(work)
        if math.isinf(b):
            return (INF,)
        if b < a:
            return (Fraction(b, a),)
    else:
        b = order
    entry = Fraction(b, a)
    k_next = max(k0, 1) - 1
    gens = list(work.gens)
    shifts = 0
    while True:
        h = homogenize(chart, Ideal(chart.ring, gens), b)
        sel = select_maximal_contact(chart, h, b)
        if sel is None:
            raise NoMaximalContact(
                "no maximal contact element for the invariant",
                chart=chart.name, order=b)
        if sel[0] == "divisor":
            g = sel[1]
            coeff = coefficient_ideal(chart, h, b)
            if Ideal(chart.ring, [g]).contains_ideal(coeff.ideal):
                return (entry, INF)
            raise NoMaximalContact(
                "divisor contact does not carry the coefficient ideal",
                chart=chart.name, order=b)
        name, shift = sel[1], sel[2]
        if shift:
            if shifts >= config.max_shifts:
                raise NoMaximalContact(
                    "contact straightening did not stabilize",
                    chart=chart.name, coordinate=name)
            shifts += 1
            gens = [chart.ring.substitute_coordinate(p, name, -shift)
                    for p in gens]
            continue
        coeff = coefficient_ideal(chart, h, b)
        sub, carry = chart.restrict_to_hypersurface(name)
        rest = Ideal(sub.ring, [carry(p) for p in coeff.ideal.gens])
        return (entry,) + _invariant(sub, rest, coeff.mark, k_next, config)


# ---------------------------------------------------------------------------
# center search
# ---------------------------------------------------------------------------

def _descend_center(chart, ideal_, mark):
    """The admissible center of the next order reduction blowup.

    Returns None for the zero ideal (the whole contact chain is the
    center), a KummerCenter or DivisorCenter otherwise, or a _Shift
    request when a contact coordinate needs straightening first.
    """
    if ideal_.is_zero():
        return None
    order = chart.max_logord(ideal_)
    if math.isinf(order):
        sat = monomial_saturation(chart, ideal_)
        return KummerCenter((), sat, mark)
    assert order >= mark, "descending through an already reduced ideal"
    h = homogenize(chart, ideal_, order)
    sel = select_maximal_contact(chart, h, order)
    if sel is None:
        raise NoMaximalContact("no maximal contact element on the chart",
                               chart=chart.name, order=order)
    if sel[0] == "divisor":
        g = sel[1]
        coeff = coefficient_ideal(chart, h, order)
        if Ideal(chart.ring, [g]).contains_ideal(coeff.ideal):
            return DivisorCenter(g)
        raise NoMaximalContact(
            "divisor contact does not carry the coefficient ideal",
            chart=chart.name, order=order)
    name, shift = sel[1], sel[2]
    if shift:
        return _Shift(name, shift)
    coeff = coefficient_ideal(chart, h, order)
    sub, carry = chart.restrict_to_hypersurface(name)
    rest = Ideal(sub.ring, [carry(p) for p in coeff.ideal.gens])
    below = _descend_center(sub, rest, coeff.mark)
    if below is None:
        return KummerCenter((name,), (), 1)
    if isinstance(below, _Shift):
        lifted = sub.ring.transfer(
            below.poly, chart.ring,
            {n: chart.ring.var(n) for n in sub.ring.names})
        return _Shift(below.name, lifted)
    if isinstance(below, DivisorCenter):
        raise NoMaximalContact(
            "divisor contact below a coordinate restriction",
            chart=chart.name)
    return KummerCenter((name,) + below.ordinary, below.vectors, below.index)


def _monomial_vector(chart, poly):
    """Lattice vector of a monic monomial in the chart's monomial variables."""
    terms = list(poly.terms())
    assert len(terms) == 1
    mono, coeff = terms[0]
    assert coeff == 1
    vec = (0,) * chart.rank
    for name, e in zip(chart.ring.names, mono):
        if not e:
            continue
        assert not chart.ring.is_ordinary(name), \
            "exceptional factor touched an ordinary variable"
        vec = vec_add(vec, vec_scale(chart.vector_of(name), e))
    return tuple(int(x) for x in vec)


# ---------------------------------------------------------------------------
# the driver
# ---------------------------------------------------------------------------

def order_reduce(chart, marked, config=None):
    """Blow up until the marked ideal is exceptional times small order.

    Returns the full BlowupTree; on a structured failure the raised
    EngineError carries the partial tree as its `tree` attribute.
    """
    config = config or EngineConfig()
    a = int(marked.mark)
    assert a >= 1
    tree = BlowupTree(chart, marked.ideal.gens, a, config)
    one = chart.ring.one()
    _expand(tree, None, chart, None, None, marked.ideal, one, one, 0, 0,
            None)
    return tree


def principalize(chart, ideal_, config=None):
    """Order reduction at mark 1: every leaf transform becomes the unit."""
    return order_reduce(chart, MarkedIdeal(ideal_, 1), config)


def _expand(tree, parent_id, chart, step, pullback, clean, factor, acc,
            k0, depth, strict):
    node = TraceNode(chart, step, pullback, clean, factor, acc, k0, depth)
    tree.add(node, parent_id)
    node.strict = strict
    try:
        node.invariant = _invariant(chart, node.transform, tree.mark, k0,
                                    tree.config)
        _decide(tree, node)
    except EngineError as err:
        if getattr(err, "tree", None) is None:
            err.tree = tree
            node.status = STATUS_ERROR
        raise
    return node


def _decide(tree, node):
    a = tree.mark
    chart = node.chart
    if node.clean_part.is_zero():
        node.status = STATUS_EMPTY
        return
    shifts = 0
    while True:
        order = chart.max_logord(node.clean_part)
        if math.isinf(order):
            _step_initial_cleaning(tree, node)
            return
        if order < a:
            if node.factor == chart.ring.one():
                if node.clean_part.is_unit():
                    node.status = STATUS_PRINCIPAL
                else:
                    node.status = STATUS_REDUCED
                return
            _step_final_cleaning(tree, node)
            return
        found = _descend_center(chart, node.clean_part, order)
        assert found is not None
        if isinstance(found, _Shift):
            if shifts >= tree.config.max_shifts:
                raise NoMaximalContact(
                    "contact straightening did not stabilize",
                    chart=chart.name, coordinate=found.name)
            shifts += 1
            _apply_shift(node, found)
            continue
        if isinstance(found, DivisorCenter):
            _step_divisor(tree, node, found, order)
            return
        _step_contact(tree, node, found, order)
        return


def _apply_shift(node, req):
    """Recenter one ordinary coordinate: old x becomes new x + shift."""
    ring_ = node.chart.ring
    prev = node.recenter

    def move(poly, _prev=prev, _name=req.name, _shift=req.poly):
        if _prev is not None:
            poly = _prev(poly)
        return ring_.substitute_coordinate(poly, _name, -_shift)

    node.recenter = move
    node.clean_part = Ideal(ring_, [
        ring_.substitute_coordinate(p, req.name, -req.poly)
        for p in node.clean_part.gens])
    node.accumulated = ring_.substitute_coordinate(
        node.accumulated, req.name, -req.poly)
    if node.strict is not None:
        node.strict = Ideal(ring_, [
            ring_.substitute_coordinate(p, req.name, -req.poly)
            for p in node.strict.gens])
    node.notes.append("recentered {} by {}".format(
        req.name, ring_.format(req.poly)))


def _charge_blowup(tree, node):
    tree.blowup_count += 1
    if tree.blowup_count > tree.config.max_blowups:
        raise DepthExceeded("blowup budget exhausted",
                            budget=tree.config.max_blowups,
                            chart=node.chart.name)


def _check_admissible(tree, node, ideal_, mark, center):
    if not tree.config.check_admissible:
        return
    if not admissible(node.chart, ideal_, mark, center):
        raise EngineError("center is not admissible for the marked ideal",
                          chart=node.chart.name, mark=mark,
                          center=center.describe(node.chart))


def _child_strict(node, blowup_chart):
    if node.strict is None:
        return None
    return strict_transform(blowup_chart, node.strict.gens)


def _child_pullback(node, blowup_chart):
    """The blowdown map, preceded by this node's recentering if any."""
    if node.recenter is None:
        return blowup_chart.pullback

    def pull(poly, _move=node.recenter, _bc=blowup_chart):
        return _bc.pullback(_move(poly))

    return pull


def _step_initial_cleaning(tree, node):
    a = tree.mark
    chart = node.chart
    current = node.transform
    sat = monomial_saturation(chart, current)
    center = KummerCenter((), sat, a)
    _check_admissible(tree, node, current, a, center)
    _charge_blowup(tree, node)
    for bc in blow_up(chart, center):
        clean = controlled_transform(bc, current.gens, a)
        assert is_clean(bc.chart, clean), "cleaning left a monomial part"
        step = TraceStep(STEP_CLEANING, center, a, bc.exceptional)
        acc = bc.pullback(node.accumulated) * bc.exceptional ** a
        _expand(tree, node.node_id, bc.chart, step, _child_pullback(node, bc),
                clean,
                bc.chart.ring.one(), acc, 0, node.depth + 1,
                _child_strict(node, bc))


def _step_final_cleaning(tree, node):
    a = tree.mark
    chart = node.chart
    current = node.transform
    vec = _monomial_vector(chart, node.factor)
    center = KummerCenter((), [vec], a)
    _check_admissible(tree, node, current, a, center)
    _charge_blowup(tree, node)
    children = blow_up(chart, center)
    assert len(children) == 1
    bc = children[0]
    clean = controlled_transform(bc, current.gens, a)
    assert is_clean(bc.chart, clean), "final cleaning left a monomial part"
    step = TraceStep(STEP_FINAL, center, a, bc.exceptional)
    acc = bc.pullback(node.accumulated) * bc.exceptional ** a
    _expand(tree, node.node_id, bc.chart, step, _child_pullback(node, bc),
            clean,
            bc.chart.ring.one(), acc, 0, node.depth + 1,
            _child_strict(node, bc))


def _step_contact(tree, node, center, order):
    a = tree.mark
    _check_admissible(tree, node, node.clean_part, order, center)
    _charge_blowup(tree, node)
    for bc in blow_up(node.chart, center):
        clean = controlled_transform(bc, node.clean_part.gens, order)
        step = TraceStep(STEP_CONTACT, center, order, bc.exceptional)
        residue = bc.exceptional ** (order - a)
        factor = bc.pullback(node.factor) * residue
        acc = bc.pullback(node.accumulated) * bc.exceptional ** a
        _expand(tree, node.node_id, bc.chart, step, _child_pullback(node, bc),
                clean,
                factor, acc, len(center.ordinary), node.depth + 1,
                _child_strict(node, bc))


def _step_divisor(tree, node, center, order):
    a = tree.mark
    _check_admissible(tree, node, node.clean_part, order, center)
    _charge_blowup(tree, node)
    children = blow_up(node.chart, center)
    assert len(children) == 1
    bc = children[0]
    reduced = controlled_transform(bc, node.clean_part.gens, order)
    residue = bc.exceptional ** (order - a)
    clean = reduced.multiply_poly(residue)
    step = TraceStep(STEP_DIVISOR, center, order, bc.exceptional)
    factor = bc.pullback(node.factor)
    acc = bc.pullback(node.accumulated) * bc.exceptional ** a
    _expand(tree, node.node_id, bc.chart, step, _child_pullback(node, bc),
            clean,
            factor, acc, 1, node.depth + 1, _child_strict(node, bc))


# ---------------------------------------------------------------------------
# tree verification
# ---------------------------------------------------------------------------

def verify_tree(tree):
    """Check the final-state contract of a finished tree.

    Along every edge the invariant must drop strictly, and on every leaf
    the composed pullback of the input generators must equal the
    accumulated exceptional element times the remaining transform. Raises
    EngineError on the first violation; returns the number of leaves.
    """
    for node in tree.nodes:
        if node.parent_id is None or node.invariant is None:
            continue
        parent = tree.node(node.parent_id)
        if parent.invariant is None:
            continue
        if compare_invariants(node.invariant, parent.invariant) >= 0:
            raise EngineError("invariant did not drop along an edge",
                              chart=node.chart.name,
                              parent=format_invariant(parent.invariant),
                              child=format_invariant(node.invariant))
    leaves = tree.leaves()
    for leaf in leaves:
        pulled = tree.pull_to(leaf, tree.root_gens)
        target = leaf.transform.multiply_poly(leaf.accumulated)
        if not Ideal(leaf.chart.ring, pulled).equals(target):
            raise EngineError("leaf does not satisfy the pullback contract",
                              chart=leaf.chart.name, status=leaf.status)
    return len(leaves)


# ---------------------------------------------------------------------------
# embedded resolution through principalization
# ---------------------------------------------------------------------------

def resolve_embedded(chart, ideal_, codim, config=None):
    """Resolve a subvariety by principalizing its ideal.

    Detects the synchronized stage at which the strict transform is blown
    up (the first chart whose invariant is codim ones followed by inf) and
    returns (stage, Z-charts): toroidal orbifold charts of the resolved
    subvariety, one for each detection chart, in tree order.
    """
    config = config or EngineConfig()
    codim = int(codim)
    assert codim >= 1
    tree = BlowupTree(chart, ideal_.gens, 1, config)
    one = chart.ring.one()
    _expand(tree, None, chart, None, None, ideal_, one, one, 0, 0, ideal_)
    hits, stray = _detect_stage(tree, codim)
    if not hits:
        raise NotSynchronized("no chart reached the stage pattern",
                              codim=codim)
    if stray:
        raise NotSynchronized(
            "strict transform survives past the detected stage",
            charts=[n.chart.name for n in stray])
    depths = sorted({n.depth for n in hits})
    if len(depths) != 1:
        raise NotSynchronized(
            "components are blown up at different stages",
            stages=depths)
    charts = [_z_chart(n, codim, config) for n in hits]
    return depths[0], charts


def _detect_stage(tree, codim):
    prefix = (Fraction(1),) * codim
    hits, stray = [], []

    def visit(node):
        if node.strict is not None and node.strict.is_unit():
            return
        inv = node.invariant
        if (len(inv) == codim + 1 and inv[:codim] == prefix
                and math.isinf(inv[codim])):
            hits.append(node)
            return
        kids = tree.children(node.node_id)
        if not kids:
            if node.strict is not None and not node.strict.is_zero():
                stray.append(node)
            return
        for kid in kids:
            visit(kid)

    visit(tree.root)
    return hits, stray


def _z_chart(node, codim, config):
    return _z_descend(node.chart, node.clean_part, codim, config)


def _z_descend(chart, ideal_, depth_left, config):
    """Re-run the contact descent, restricting the chart along the way."""
    if depth_left == 0:
        if not ideal_.is_zero():
            raise NotSynchronized(
                "stage pattern without a vanishing restriction",
                chart=chart.name)
        return chart
    order = chart.max_logord(ideal_)
    if math.isinf(order):
        raise NotSynchronized("stage pattern on an unclean chart",
                              chart=chart.name)
    gens = list(ideal_.gens)
    shifts = 0
    while True:
        h = homogenize(chart, Ideal(chart.ring, gens), order)
        sel = select_maximal_contact(chart, h, order)
        if sel is None:
            raise NoMaximalContact("no maximal contact element on the chart",
                                   chart=chart.name, order=order)
        if sel[0] == "divisor":
            if depth_left != 1:
                raise NotSynchronized(
                    "divisor passage above the last restriction level",
                    chart=chart.name)
            return _collapse_divisor(chart, sel[1])
        name, shift = sel[1], sel[2]
        if shift:
            if shifts >= config.max_shifts:
                raise NoMaximalContact(
                    "contact straightening did not stabilize",
                    chart=chart.name, coordinate=name)
            shifts += 1
            gens = [chart.ring.substitute_coordinate(p, name, -shift)
                    for p in gens]
            continue
        coeff = coefficient_ideal(chart, h, order)
        sub, carry = chart.restrict_to_hypersurface(name)
        rest = Ideal(sub.ring, [carry(p) for p in coeff.ideal.gens])
        return _z_descend(sub, rest, depth_left - 1, config)


def _collapse_divisor(chart, element):
    """The chart of a divisor cut out by a unit plus one monomial.

    Quotients the lattice by the monomial's direction and drops it from
    the monoid; ordinary variables and the remaining generators survive.
    """
    const = None
    mono = None
    for exps, coeff in element.terms():
        if not any(exps):
            const = coeff
        elif mono is None:
            mono = exps
        else:
            raise NotSynchronized("divisor is not unit plus one monomial",
                                  chart=chart.name,
                                  element=chart.ring.format(element))
    if const is None or mono is None:
        raise NotSynchronized("divisor is not unit plus one monomial",
                              chart=chart.name,
                              element=chart.ring.format(element))
    vec = (0,) * chart.rank
    for name, e in zip(chart.ring.names, mono):
        if not e:
            continue
        if chart.ring.is_ordinary(name):
            raise NotSynchronized(
                "divisor monomial touches an ordinary variable",
                chart=chart.name, element=chart.ring.format(element))
        vec = vec_add(vec, vec_scale(chart.vector_of(name), e))
    vec = tuple(int(x) for x in vec)
    spread = 0
    for x in vec:
        spread = gcd(spread, abs(x))
    if spread != 1:
        raise NotSynchronized("divisor direction is imprimitive",
                              chart=chart.name,
                              element=chart.ring.format(element))
    basis_map, inverse = quotient_map(vec)
    cols = range(1, len(vec))

    def project(v):
        moved = tuple(sum(v[i] * basis_map[i][j] for i in range(len(v)))
                      for j in range(len(vec)))
        return tuple(int(moved[j]) for j in cols)

    pairs = []
    for name in chart.monomial_names:
        image = project(chart.vector_of(name))
        if any(image):
            pairs.append((name, image))
    characters = []
    for char in chart.characters:
        lam = char.lattice_part
        moved = [sum(Fraction(inverse[k][i]) * lam[i]
                     for i in range(len(lam))) for k in range(len(lam))]
        if moved[0].denominator != 1:
            raise NotSynchronized(
                "orbifold character does not descend to the divisor",
                chart=chart.name)
        characters.append(type(char)(tuple(moved[1:]), char.ordinary_part))
    name = "{}|{}=0".format(chart.name, chart.ring.format(element))
    return Chart(name, chart.ordinary, pairs, characters=tuple(characters),
                 parent=chart)
