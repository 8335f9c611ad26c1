"""Kummer centers, blowup charts, and admissibility of marked ideals."""

import random

import pytest

from logprin.blowup import (DivisorCenter, KummerCenter, admissible, blow_up,
                            controlled_transform, normalized_power,
                            strict_transform)
from logprin.calculus import homogenize, is_clean, monomial_saturation
from logprin.errors import NotDivisible
from logprin.ring import Ideal

from helpers import (FIXTURE_NAMES, aff, load_fixture, mixed, parse_ideal,
                     principal_tree, rand_poly, tree_edges)


def test_center_normalization():
    c = KummerCenter(("x",), [(9,)], 6).normalized()
    assert c.ordinary == ("x",)
    assert c.vectors == ((3,),)
    assert c.index == 2
    c = KummerCenter(("x",), [(2,)], 2).normalized()
    assert c.vectors == ((1,),)
    assert c.index == 1


def test_center_describe():
    a = aff()
    half = KummerCenter(("x",), [(1,)], 2)
    assert half.describe(a) == {
        "ordinary": ["x"], "root": {"monomials": ["u"], "index": 2}}
    assert KummerCenter(("x",), (), 1).describe(a) == {"ordinary": ["x"]}
    d = DivisorCenter(a.ring.parse("u - 1"))
    assert d.describe(a) == {"divisor": "u - 1"}


def test_normalized_power_of_square_root_center():
    a = aff()
    cover, carry, power = normalized_power(a, KummerCenter(("x",), [(1,)], 2), 2)
    assert power.basis_strings() == ["x^2", "x*w", "w^2"]
    assert cover.describe()["monomial"] == {"w": [1]}
    assert cover.ring.format(carry(a.ring.parse("u"))) == "w^2"


def test_admissibility_marks():
    a = aff()
    pair = parse_ideal(a, ["x^2", "u"])
    half = KummerCenter(("x",), [(1,)], 2)
    assert admissible(a, pair, 2, half)
    assert admissible(a, pair.power(2), 4, half)
    assert not admissible(a, pair, 3, half)
    d = DivisorCenter(a.ring.parse("u - 1"))
    assert admissible(a, parse_ideal(a, ["u - 1"]), 1, d)
    assert not admissible(a, parse_ideal(a, ["x"]), 1, d)


def test_blow_up_square_root_center_charts():
    a = aff()
    charts = blow_up(a, KummerCenter(("x",), [(1,)], 2))
    assert [bc.label for bc in charts] == ["x", "w"]
    xc, wc = charts
    assert xc.chart.describe() == {
        "name": "aff/x",
        "ordinary": [],
        "monomial": {"x": [0, 1], "v": [1, -2]},
        "lattice": [["1", "0"], ["0", "1"]],
        "characters": [],
        "relations": [],
    }
    assert wc.chart.describe() == {
        "name": "aff/w",
        "ordinary": ["y"],
        "monomial": {"w": [1]},
        "lattice": [["1/2"]],
        "characters": [{"order": 2, "weights": {"y": 1, "w": 1}}],
        "relations": [],
    }


def test_blow_up_ordinary_center_charts():
    a = aff()
    charts = blow_up(a, KummerCenter(("x",), [(2,)], 1))
    assert [bc.label for bc in charts] == ["x", "u^2"]
    xc, uc = charts
    assert xc.chart.describe() == {
        "name": "aff/x",
        "ordinary": [],
        "monomial": {"x": [0, 1], "u": [1, 0], "v": [2, -1]},
        "lattice": [["1", "0"], ["0", "1"]],
        "characters": [],
        "relations": ["u^2 - x*v"],
    }
    assert uc.chart.describe() == {
        "name": "aff/u^2",
        "ordinary": ["y"],
        "monomial": {"u": [1]},
        "lattice": [["1"]],
        "characters": [],
        "relations": [],
    }


def test_exceptional_generates_center_pullback():
    a = aff()
    center = KummerCenter(("x",), [(2,)], 1)
    gens = [a.ring.parse("x"), a.ring.parse("u^2")]
    for bc in blow_up(a, center):
        ring_ = bc.chart.ring
        pulled = Ideal(ring_, [bc.pullback(g) for g in gens])
        assert pulled.equals(Ideal(ring_, [bc.exceptional]))


def test_controlled_transform_divisibility_failure():
    a = aff()
    pair = parse_ideal(a, ["x^2", "u"])
    xc = blow_up(a, KummerCenter(("x",), [(1,)], 1))[0]
    with pytest.raises(NotDivisible) as err:
        controlled_transform(xc, pair.gens, 2)
    assert err.value.message == "pullback is not divisible by the exceptional power"
    assert err.value.data == {"chart": "aff/x", "mark": 2, "exceptional": "x"}


def test_strict_transform_clears_center_power():
    a = aff()
    pair = parse_ideal(a, ["x^2", "u"])
    xc = blow_up(a, KummerCenter(("x",), [(1,)], 2))[0]
    assert strict_transform(xc, pair.gens).basis_strings() == ["1"]


def test_order_non_increase_on_fixture_edges():
    checked = 0
    for name in FIXTURE_NAMES:
        tree = principal_tree(name)
        for parent, child in tree_edges(tree):
            if child.step.kind not in ("contact", "divisor"):
                continue
            clean = child.clean_part
            if child.step.kind == "divisor":
                residue = child.step.exceptional ** (child.step.mark - tree.mark)
                clean = clean.colon(residue)
            if clean.is_zero():
                continue
            assert child.chart.max_logord(clean) <= child.step.mark
            checked += 1
    assert checked >= 30


def test_cleaning_steps_produce_clean_parts():
    checked = 0
    for name in FIXTURE_NAMES:
        tree = principal_tree(name)
        for parent, child in tree_edges(tree):
            if child.step.kind not in ("initial-cleaning", "final-cleaning"):
                continue
            assert is_clean(child.chart, child.clean_part)
            checked += 1
    rng = random.Random(41)
    while checked < 30:
        chart = [aff(), mixed()][checked % 2]
        base = Ideal(chart.ring, [rand_poly(chart, rng, 2)
                                  for _ in range(rng.randint(1, 2))])
        if base.is_zero() or not is_clean(chart, base):
            continue
        k = rng.randint(1, 3)
        mono = chart.ring.var(chart.monomial_names[0]) ** k
        scaled = base.multiply_poly(mono)
        sat = monomial_saturation(chart, scaled)
        center = KummerCenter((), sat, 1)
        children = blow_up(chart, center)
        assert len(children) == 1
        moved = controlled_transform(children[0], scaled.gens, 1)
        assert is_clean(children[0].chart, moved)
        checked += 1
    assert checked >= 30


def _edge_admissibility_inputs():
    for name in FIXTURE_NAMES:
        tree = principal_tree(name)
        seen = set()
        for parent, child in tree_edges(tree):
            if parent.node_id in seen:
                continue
            seen.add(parent.node_id)
            if child.step.kind in ("initial-cleaning", "final-cleaning"):
                yield parent.chart, parent.transform, tree.mark, child.step.center
            else:
                yield (parent.chart, parent.clean_part, child.step.mark,
                       child.step.center)


def test_admissibility_square_biconditional():
    checked = 0
    for chart, ideal, mark, center in _edge_admissibility_inputs():
        square = ideal.power(2)
        assert admissible(chart, ideal, mark, center)
        assert admissible(chart, square, 2 * mark, center)
        assert (admissible(chart, ideal, mark + 1, center) ==
                admissible(chart, square, 2 * (mark + 1), center))
        checked += 1
    assert checked >= 30


def test_homogenize_preserves_admissibility_on_fixtures():
    for name in ("vertical_tangent", "sparse_cube", "cusp", "split_quadric",
                 "tangent_parabola", "fat_point"):
        tree = principal_tree(name)
        root = tree.root
        kids = tree.children(root.node_id)
        step = kids[0].step
        if step.kind not in ("contact", "divisor"):
            continue
        chart = root.chart
        part = root.clean_part
        b = step.mark
        h = homogenize(chart, part, b)
        assert admissible(chart, part, b, step.center)
        assert admissible(chart, h, b, step.center)
        assert (admissible(chart, part, b + 1, step.center) ==
                admissible(chart, h, b + 1, step.center))


def test_cosupport_contains_the_admissible_center():
    a = aff()
    pair = parse_ideal(a, ["x^2", "u"])
    cosupport = a.derive(pair)
    assert cosupport.basis_strings() == ["x", "u"]
    center = KummerCenter(("x",), [(1,)], 2)
    cover, carry, _ = normalized_power(a, center, 2)
    vanishing = Ideal(cover.ring, [cover.ring.var("x"), cover.ring.var("w")])
    moved = Ideal(cover.ring, [carry(g) for g in cosupport.gens])
    assert vanishing.contains_ideal(moved)
