"""Polynomial layer: parsing, canonical formatting, Groebner membership."""

import random

import pytest

from logprin.chart import Chart
from logprin.errors import ParseError
from logprin.ring import Ideal, ideal

from helpers import aff, mixed, parse_ideal, plane, rand_poly


def test_format_orders_terms_by_grevlex():
    ring = plane().ring
    assert ring.format(ring.parse("y*x + x^2")) == "x^2 + x*y"
    assert ring.format(ring.parse("3 - x")) == "-x + 3"
    assert ring.format(ring.zero()) == "0"
    assert ring.format(ring.one()) == "1"


def test_parse_format_round_trip():
    chart = mixed()
    rng = random.Random(5)
    for _ in range(40):
        p = rand_poly(chart, rng, 3)
        text = chart.ring.format(p)
        assert chart.ring.format(chart.ring.parse(text)) == text


def test_parse_rational_coefficients():
    ring = aff().ring
    p = ring.parse("1/2*x")
    assert ring.format(p) == "1/2*x"
    assert ring.format(p + p) == "x"


def test_parse_errors_carry_position():
    ring = plane().ring
    with pytest.raises(ParseError) as err:
        ring.parse("x +")
    assert err.value.message == "unexpected end of input"
    assert err.value.data == {"text": "x +", "pos": 2}
    with pytest.raises(ParseError) as err:
        ring.parse("x^-2")
    assert err.value.message == "expected nonnegative integer exponent"
    assert err.value.data["pos"] == 2
    with pytest.raises(ParseError) as err:
        ring.parse("q + 1")
    assert err.value.message == "unknown variable 'q'"
    assert err.value.data["pos"] == 0
    with pytest.raises(ParseError) as err:
        ring.parse("2 ** x")
    assert err.value.message == "unexpected '*'"
    assert err.value.data["pos"] == 3
    with pytest.raises(ParseError) as err:
        ring.parse("(x")
    assert err.value.message == "bad character '('"
    assert err.value.data["pos"] == 0


def test_groebner_basis_is_deterministic():
    chart = plane()
    gens = ["x^2 + y^2 - 1", "x*y - 1"]
    first = parse_ideal(chart, gens).groebner()
    strings = [chart.ring.format(g) for g in first]
    assert strings == ["y^3 + x - y", "x^2 + y^2 - 1", "x*y - 1"]
    again = parse_ideal(chart, list(reversed(gens)))
    assert [chart.ring.format(g) for g in again.groebner()] == strings


def test_membership_respects_ideal_arithmetic():
    chart = mixed()
    rng = random.Random(11)
    for _ in range(30):
        gens = [rand_poly(chart, rng, 2) for _ in range(2)]
        others = [rand_poly(chart, rng, 2) for _ in range(2)]
        i = Ideal(chart.ring, gens)
        combo = gens[0] * others[0] + gens[1] * others[1]
        assert i.contains(combo)
        assert i.normal_form(combo) == chart.ring.zero()
        if not i.contains(others[0]):
            assert not i.contains(combo + others[0])


def test_colon_undoes_a_principal_factor():
    chart = aff()
    rng = random.Random(17)
    m = chart.ring.parse("x*u")
    for _ in range(20):
        base = Ideal(chart.ring, [rand_poly(chart, rng, 2) for _ in range(2)])
        scaled = base.multiply_poly(m)
        back = scaled.colon(m)
        assert back.equals(base)


def test_power_is_additive():
    chart = plane()
    i = parse_ideal(chart, ["x^2 + y", "x*y"])
    assert (i.power(2) * i.power(3)).equals(i.power(5))
    assert i.power(1).equals(i)
    assert i.power(0).is_unit()


def test_partial_satisfies_leibniz():
    chart = mixed()
    ring = chart.ring
    rng = random.Random(23)
    for _ in range(30):
        f = rand_poly(chart, rng, 3)
        g = rand_poly(chart, rng, 3)
        name = rng.choice(["x", "y"])
        lhs = ring.partial(f * g, name)
        rhs = f * ring.partial(g, name) + ring.partial(f, name) * g
        assert ring.format(lhs) == ring.format(rhs)


def test_relations_enter_membership_silently():
    # monoid generated by (0,1), (1,0), (2,-1): one binomial relation
    sing = Chart("sing", (), [("x", (0, 1)), ("u", (1, 0)), ("v", (2, -1))])
    ring = sing.ring
    assert sing.describe()["relations"] == ["u^2 - x*v"]
    rel = ring.parse("u^2 - x*v")
    assert Ideal(ring, []).contains(rel)
    assert Ideal(ring, [rel]).equals(Ideal(ring, []))
    assert ideal(ring, "u^2").equals(ideal(ring, "x*v"))
    assert ideal(ring, "x", "u").contains(ring.parse("u^2"))


def test_ideal_zero_and_unit_flags():
    chart = aff()
    assert Ideal(chart.ring, []).is_zero()
    assert parse_ideal(chart, ["0"]).is_zero()
    assert parse_ideal(chart, ["2"]).is_unit()
    assert not parse_ideal(chart, ["x"]).is_unit()
    assert parse_ideal(chart, ["x", "1 - x"]).is_unit()
