"""Marked-ideal calculus: saturation, homogenization, contact selection."""

import math
import random

from logprin.calculus import (coefficient_ideal, derivation_level, homogenize,
                              is_balanced, is_clean, monomial_saturation,
                              select_maximal_contact)
from logprin.ring import Ideal

from helpers import (aff, derivation_closure, load_fixture, mixed, parse_ideal,
                     plane, rand_poly, saturation_oracle, surf)

FINITE_ORDER_FIXTURES = ("vertical_tangent", "fat_point", "cusp", "sparse_cube",
                         "tangent_parabola", "split_quadric", "coordinate_line")


def test_monomial_saturation_frozen():
    a = aff()
    assert monomial_saturation(a, parse_ideal(a, ["x*u"])) == [(1,)]
    assert monomial_saturation(a, parse_ideal(a, ["x^2", "u"])) == [(0,)]
    s = surf()
    assert monomial_saturation(s, parse_ideal(s, ["u - v"])) == [(0, 1), (1, 0)]


def test_monomial_saturation_matches_exhaustive_oracle():
    rng = random.Random(13)
    checked = 0
    for t in range(50):
        chart = [aff(), mixed(), surf()][t % 3]
        ideal = Ideal(chart.ring, [rand_poly(chart, rng, 4)
                                   for _ in range(rng.randint(1, 2))])
        while ideal.is_zero():
            ideal = Ideal(chart.ring, [rand_poly(chart, rng, 4)])
        closure = derivation_closure(chart, ideal)
        bound = max(sum(m) for g in closure.groebner()
                    for m, _ in chart.ring.coefficients(g))
        oracle = saturation_oracle(chart, ideal, bound)
        sat = Ideal(chart.ring, [chart.monomial_poly(v)
                                 for v in monomial_saturation(chart, ideal)])
        assert sat.equals(oracle)
        checked += 1
    assert checked == 50


def test_clean_and_balanced_flags():
    a = aff()
    assert is_clean(a, parse_ideal(a, ["x^2", "u"]))
    assert is_balanced(a, parse_ideal(a, ["x^2", "u"]))
    assert is_balanced(a, parse_ideal(a, ["x*u"]))
    assert not is_clean(a, parse_ideal(a, ["x*u"]))
    s = surf()
    assert not is_clean(s, parse_ideal(s, ["u - v"]))
    assert not is_balanced(s, parse_ideal(s, ["u - v"]))


def test_derivation_level_frozen():
    a = aff()
    sparse = parse_ideal(a, ["x^3", "x*u^3", "u^6"])
    assert derivation_level(a, sparse, 1).basis_strings() == ["u^3", "x^2"]
    assert derivation_level(a, sparse, 2).basis_strings() == ["u^3", "x"]
    assert derivation_level(a, sparse, 0).equals(sparse)


def test_homogenize_frozen():
    a = aff()
    pair = parse_ideal(a, ["x^2", "u"])
    h = homogenize(a, pair, 2)
    assert h.basis_strings() == ["x^2", "u"]
    assert a.max_logord(h) == 2
    sparse = parse_ideal(a, ["x^3", "x*u^3", "u^6"])
    hs = homogenize(a, sparse, 3)
    assert hs.equals(hs + sparse)
    assert a.max_logord(hs) == 3


def test_homogenize_keeps_order_on_fixtures():
    for name in FINITE_ORDER_FIXTURES:
        spec = load_fixture(name)
        chart = spec.chart
        b = chart.max_logord(spec.ideal)
        assert b != math.inf
        h = homogenize(chart, spec.ideal, b)
        assert chart.max_logord(h) == b
        assert h.equals(h + spec.ideal)


def test_coefficient_ideal_frozen():
    a = aff()
    pair = coefficient_ideal(a, parse_ideal(a, ["x^2", "u"]), 2)
    assert pair.mark == 2
    assert pair.ideal.basis_strings() == ["x^2", "u"]
    sparse = coefficient_ideal(a, parse_ideal(a, ["x^3", "x*u^3", "u^6"]), 3)
    assert sparse.mark == 6
    assert sparse.ideal.basis_strings() == ["u^9", "x^2*u^6", "x^4*u^3", "x^6"]
    sub, carry = a.restrict_to_hypersurface("x")
    restricted = Ideal(sub.ring, [carry(g) for g in sparse.ideal.gens])
    assert restricted.basis_strings() == ["u^9"]


def test_select_maximal_contact():
    a = aff()
    h = homogenize(a, parse_ideal(a, ["x^2", "u"]), 2)
    kind, name, shift = select_maximal_contact(a, h, 2)
    assert (kind, name) == ("coordinate", "x")
    assert not shift
    p = plane()
    ht = homogenize(p, parse_ideal(p, ["x^2 - 2*x*y^2 + y^4 + y^5"]), 2)
    kind, name, shift = select_maximal_contact(p, ht, 2)
    assert (kind, name) == ("coordinate", "x")
    assert p.ring.format(shift) == "y^2"
    s = surf()
    assert select_maximal_contact(s, parse_ideal(s, ["u - v"]), 1) is None
    kind, g = select_maximal_contact(a, parse_ideal(a, ["u - 1"]), 1)
    assert kind == "divisor"
    assert a.ring.format(g) == "u - 1"


def _derive_upto(chart, ideal, i):
    out = ideal
    for _ in range(i):
        out = chart.derive(out)
    return out


def test_derive_commutes_with_restriction_in_tangent_scope():
    # generators congruent to x-free polynomials modulo x^(i+1): the i-th
    # derivation tower never clears the x factor, so restriction commutes
    rng = random.Random(29)
    checked = 0
    for t in range(36):
        chart = [aff(), plane(), mixed()][t % 3]
        ring = chart.ring
        i = rng.randint(1, 2)
        gens = []
        for _ in range(rng.randint(1, 2)):
            g = ring.substitute(rand_poly(chart, rng, 2), "x", ring.zero())
            h = rand_poly(chart, rng, 2)
            gens.append(g + ring.var("x") ** (i + 1) * h)
        ideal = Ideal(ring, gens)
        sub, carry = chart.restrict_to_hypersurface("x")
        left = Ideal(sub.ring,
                     [carry(p) for p in _derive_upto(chart, ideal, i).gens])
        right = _derive_upto(sub, Ideal(sub.ring,
                                        [carry(p) for p in ideal.gens]), i)
        assert left.equals(right)
        checked += 1
    assert checked == 36


def test_restricted_derivations_lift():
    # one-sided inclusion for arbitrary ideals: every derivation of the
    # hypersurface extends to the ambient chart
    rng = random.Random(31)
    checked = 0
    for t in range(36):
        chart = [aff(), plane(), mixed()][t % 3]
        ideal = Ideal(chart.ring, [rand_poly(chart, rng, 2)
                                   for _ in range(rng.randint(1, 2))])
        i = rng.randint(1, 2)
        sub, carry = chart.restrict_to_hypersurface("x")
        left = Ideal(sub.ring,
                     [carry(p) for p in _derive_upto(chart, ideal, i).gens])
        right = _derive_upto(sub, Ideal(sub.ring,
                                        [carry(p) for p in ideal.gens]), i)
        assert left.contains_ideal(right)
        checked += 1
    assert checked == 36


def test_restriction_commutation_needs_the_tangent_scope():
    # outside the scope the inclusion is strict: the x-derivative sees
    # x-multiples that the restriction kills
    p = plane()
    ideal = parse_ideal(p, ["x*y"])
    sub, carry = p.restrict_to_hypersurface("x")
    left = Ideal(sub.ring, [carry(q) for q in _derive_upto(p, ideal, 1).gens])
    right = _derive_upto(sub, Ideal(sub.ring,
                                    [carry(q) for q in ideal.gens]), 1)
    assert left.basis_strings() == ["y"]
    assert right.basis_strings() == []
    a = aff()
    sparse = parse_ideal(a, ["x^3", "x*u^3", "u^6"])
    sub, carry = a.restrict_to_hypersurface("x")
    left = Ideal(sub.ring, [carry(q) for q in _derive_upto(a, sparse, 1).gens])
    right = _derive_upto(sub, Ideal(sub.ring,
                                    [carry(q) for q in sparse.gens]), 1)
    assert left.basis_strings() == ["u^3"]
    assert right.basis_strings() == ["u^6"]
    assert left.contains_ideal(right)
    assert not right.contains_ideal(left)


def test_derive_scales_monomial_factors():
    # D(N * I) = N * D(I) for an invertible monomial factor N
    rng = random.Random(37)
    checked = 0
    for t in range(36):
        chart = [aff(), mixed(), surf()][t % 3]
        ring = chart.ring
        ideal = Ideal(ring, [rand_poly(chart, rng, 2)
                             for _ in range(rng.randint(1, 2))])
        exps = [rng.randint(0, 2) for _ in chart.monomial_names]
        if not any(exps):
            exps[0] = 1
        n = ring.one()
        for name, e in zip(chart.monomial_names, exps):
            n = n * ring.var(name) ** e
        left = chart.derive(ideal.multiply_poly(n))
        right = chart.derive(ideal).multiply_poly(n)
        assert left.equals(right)
        checked += 1
    assert checked == 36
