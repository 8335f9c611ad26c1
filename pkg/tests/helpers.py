"""Shared chart builders, fixture loading, and brute-force oracles."""

import itertools
import os

from logprin import Chart, KummerCenter, order_reduce, parse_problem, principalize
from logprin.ring import Ideal

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE_DIR = os.path.normpath(os.path.join(HERE, os.pardir, "fixtures"))
GOLDEN_DIR = os.path.join(FIXTURE_DIR, "golden")

FIXTURE_NAMES = (
    "vertical_tangent",
    "fat_point",
    "torus_diagonal",
    "cusp",
    "sparse_cube",
    "tangent_parabola",
    "split_quadric",
    "coordinate_line",
)

# run kind behind each committed golden trace
ORDER_REDUCE_GOLDENS = ("vertical_tangent", "sparse_cube")


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name + ".json")


def fixture_text(name):
    with open(fixture_path(name), encoding="utf-8") as fh:
        return fh.read()


def golden_text(name, kind="trace"):
    path = os.path.join(GOLDEN_DIR, "{}.{}.json".format(name, kind))
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_fixture(name):
    return parse_problem(fixture_text(name))


def principal_tree(name):
    spec = load_fixture(name)
    return principalize(spec.chart, spec.ideal, spec.config)


def golden_tree(name):
    """The tree whose trace is committed under fixtures/golden."""
    spec = load_fixture(name)
    if name in ORDER_REDUCE_GOLDENS:
        return order_reduce(spec.chart, spec.marked(), spec.config)
    return principalize(spec.chart, spec.ideal, spec.config)


def aff():
    return Chart("aff", ("x",), [("u", (1,))])


def plane():
    return Chart("plane", ("x", "y"), [])


def surf():
    return Chart("surf", (), [("u", (1, 0)), ("v", (0, 1))])


def mixed():
    return Chart("mix", ("x", "y"), [("u", (1, 0)), ("v", (0, 1))])


def parse_ideal(chart, texts):
    return Ideal(chart.ring, [chart.ring.parse(t) for t in texts])


def rand_poly(chart, rng, deg):
    terms = rng.randint(1, 3)
    p = chart.ring.zero()
    names = list(chart.ring.names)
    for _ in range(terms):
        t = chart.ring.one() * rng.choice([-2, -1, 1, 2, 3])
        for _ in range(rng.randint(0, deg)):
            t = t * chart.ring.var(rng.choice(names))
        p = p + t
    return p


def derivation_closure(chart, ideal):
    cur = ideal
    while True:
        nxt = chart.derive(cur)
        if nxt.equals(cur):
            return cur
        cur = nxt


def saturation_oracle(chart, ideal, bound):
    """Smallest monomial ideal containing ideal, by exhaustive scan.

    Iterates the derivation to a fixpoint, then collects every monomial
    of degree at most bound that the fixpoint contains.
    """
    closure = derivation_closure(chart, ideal)
    hits = []
    k = len(chart.monomial_names)
    for exps in itertools.product(range(bound + 1), repeat=k):
        m = chart.ring.one()
        for name, e in zip(chart.monomial_names, exps):
            m = m * chart.ring.var(name) ** e
        if closure.contains(m):
            hits.append(m)
    assert hits, "no monomial in the closure up to the bound"
    return Ideal(chart.ring, hits)


def tree_edges(tree):
    for node in tree.nodes:
        if node.step is not None:
            yield tree.node(node.parent_id), node


def tree_depth(tree):
    return max(node.depth for node in tree.nodes)


def reembedded_input(spec, name="h"):
    """The fixture problem with one fresh ordinary coordinate adjoined."""
    big, carry = spec.chart.with_free_variable(name)
    gens = [carry(g) for g in spec.gens] + [big.ring.var(name)]
    return big, Ideal(big.ring, gens)


def _without_one(big_names, base_names):
    big_names = tuple(big_names)
    base_names = tuple(base_names)
    for i in range(len(big_names)):
        if big_names[:i] + big_names[i + 1:] == base_names:
            return i
    raise AssertionError("not one extra name: {!r} vs {!r}".format(
        big_names, base_names))


def assert_reembedding_isomorphic(base, big):
    """Match a tree against its re-embedded twin node by node.

    Every blowup of the big tree must use the base center plus exactly one
    extra ordinary coordinate, and produce the base charts plus one extra
    chart that is immediately a principal leaf.
    """
    assert big.blowup_count == base.blowup_count
    _match_nodes(base, base.root, big, big.root)


def _match_nodes(base, bnode, big, gnode):
    assert gnode.status == bnode.status
    assert tuple(gnode.chart.monomial_names) == tuple(bnode.chart.monomial_names)
    _without_one(gnode.chart.ordinary, bnode.chart.ordinary)
    base_kids = base.children(bnode.node_id)
    big_kids = big.children(gnode.node_id)
    if not base_kids:
        assert not big_kids
        return
    bcen = base_kids[0].step.center
    gcen = big_kids[0].step.center
    extra = _without_one(gcen.ordinary, bcen.ordinary)
    shrunk = KummerCenter(gcen.ordinary[:extra] + gcen.ordinary[extra + 1:],
                          gcen.vectors, gcen.index).normalized()
    want = bcen.normalized()
    assert shrunk.ordinary == want.ordinary
    assert shrunk.vectors == want.vectors
    assert shrunk.index == want.index
    spare = big_kids[extra]
    assert spare.status == "leaf-principal"
    assert spare.clean_part.is_unit()
    assert not big.children(spare.node_id)
    rest = big_kids[:extra] + big_kids[extra + 1:]
    assert len(rest) == len(base_kids)
    for bkid, gkid in zip(base_kids, rest):
        _match_nodes(base, bkid, big, gkid)
