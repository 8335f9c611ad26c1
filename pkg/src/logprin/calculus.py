"""Marked ideals and the order-reduction calculus on a chart.

Everything here measures or rearranges an ideal on a single chart:
derivation levels, the monomial saturation (the fixed point of repeated
logarithmic differentiation), homogenization, coefficient ideals, and the
choice of maximal contact. Blowups live elsewhere.
"""

import math
from fractions import Fraction
from math import factorial

from .errors import NotMonomialFixpoint
from .lattice import minimal_ideal_gens
from .ring import Ideal

INF = math.inf


class MarkedIdeal:
    """An ideal together with its control mark (a positive integer)."""

    __slots__ = ("ideal", "mark")

    def __init__(self, ideal, mark):
        assert mark >= 1
        self.ideal = ideal
        self.mark = int(mark)

    def __repr__(self):
        return "MarkedIdeal({}, {})".format(self.ideal.basis_strings(),
                                            self.mark)


def derivation_level(chart, ideal, level):
    """The level-th iterated derivation ideal D^(<= level)."""
    cur = ideal
    for _ in range(level):
        cur = chart.derive(cur)
    return cur


def monomial_saturation(chart, ideal):
    """Minimal monoid-ideal generators of the derivation fixed point M(I).

    Repeated logarithmic differentiation stabilizes; the stable ideal must
    be generated by monomials in the monomial variables (that it is, is
    the structural fact the engine relies on; NotMonomialFixpoint reports
    a violation with the offending basis). The unit ideal comes back as
    the single zero vector, the monoid's empty monomial.
    """
    assert not ideal.is_zero(), "monomial saturation of the zero ideal"
    cur = ideal
    while True:
        nxt = chart.derive(cur)
        if nxt.equals(cur):
            break
        cur = nxt
    if cur.is_unit():
        return [(0,) * chart.rank]
    relations = Ideal(chart.ring, [])
    vectors = []
    basis = cur.groebner()
    for g in basis:
        if not relations.normal_form(g):
            continue
        terms = chart.ring.coefficients(g)
        if len(terms) != 1:
            raise NotMonomialFixpoint(
                "derivation fixed point is not monomial",
                basis=[chart.ring.format(b) for b in basis],
                offending=chart.ring.format(g))
        mono, _ = terms[0]
        vec = [0] * chart.rank
        for name, e in zip(chart.ring.names, mono):
            if not e:
                continue
            if name not in chart.vector_by_name:
                raise NotMonomialFixpoint(
                    "derivation fixed point involves an ordinary variable",
                    basis=[chart.ring.format(b) for b in basis],
                    offending=chart.ring.format(g))
            for i, x in enumerate(chart.vector_of(name)):
                vec[i] += e * x
        vectors.append(tuple(vec))
    assert vectors, "stable non-unit ideal with empty monomial basis"
    return minimal_ideal_gens(chart.monoid, vectors)


def is_clean(chart, ideal):
    """Clean means the monomial saturation is the unit ideal."""
    return monomial_saturation(chart, ideal) == [(0,) * chart.rank]


def is_balanced(chart, ideal):
    """Balanced means the monomial saturation is principal."""
    return len(monomial_saturation(chart, ideal)) == 1


def homogenize(chart, ideal, a):
    """H(I, a) = I + sum_{i=1}^{a-1} D^(<=i)(I) * T^i, T = D^(<=a-1)(I).

    Leaves marked order and admissible centers unchanged while making
    maximal contact available; at a <= 1 it is the identity.
    """
    if a <= 1:
        return ideal
    levels = chart.derive_tower(ideal, a - 1)
    top = levels[a - 1]
    out = levels[0]
    power = None
    for i in range(1, a):
        power = top if power is None else power * top
        out = out + levels[i] * power
    return out


def coefficient_ideal(chart, ideal, a):
    """C(I, a) = sum_{i=0}^{a-1} (D^(<=i)(I))^(a!/(a-i)), marked a!."""
    assert a >= 1
    mark = factorial(a)
    levels = chart.derive_tower(ideal, a - 1)
    out = None
    for i in range(a):
        piece = levels[i].power(mark // (a - i))
        out = piece if out is None else out + piece
    return MarkedIdeal(out, mark)


def select_maximal_contact(chart, homogenized, b):
    """Choose maximal contact for a homogenized ideal of logarithmic order b.

    Returns ("coordinate", name, shift) when some ordinary variable x has
    x - shift in T = D^(<=b-1), shift free of x: after straightening by
    the shift, V(x) is a maximal contact hypersurface. Otherwise returns
    ("divisor", g) for the first basis element of T with a unit constant
    term, a candidate principal center; the caller must verify it actually
    carries the coefficient ideal. Returns None when neither pattern shows.
    """
    T = derivation_level(chart, homogenized, b - 1)
    assert not T.is_unit(), "contact requested above the logarithmic order"
    relations = Ideal(chart.ring, [])
    basis = [g for g in T.groebner() if relations.normal_form(g)]
    for name in chart.ordinary:
        var = chart.ring.var(name)
        shift = T.normal_form(var)
        if shift == var:
            continue
        idx = chart.ring.index(name)
        if all(m[idx] == 0 for m, _ in chart.ring.coefficients(shift)):
            return ("coordinate", name, shift)
    for name in chart.ordinary:
        found = _linear_contact(chart.ring, basis, name)
        if found is not None:
            return ("coordinate", name, found)
    for g in basis:
        constant = [c for m, c in chart.ring.coefficients(g) if not any(m)]
        if constant and constant[0] != 0:
            return ("divisor", g)
    return None


def _linear_contact(ring_, basis, name):
    """The straightening shift from a basis element linear in one variable.

    Looks for c*x + r with c a nonzero scalar and r free of x; the contact
    is then x - shift for shift = -r/c. Monomial orders that put the
    leading term inside r hide such elements from normal form reduction.
    """
    idx = ring_.index(name)
    for g in basis:
        terms = ring_.coefficients(g)
        if max(m[idx] for m, _ in terms) != 1:
            continue
        scalar = None
        rest = ring_.zero()
        for m, c in terms:
            if m[idx] == 0:
                rest += ring_.const(c) * ring_.monomial_of(m)
            elif any(e for j, e in enumerate(m) if j != idx):
                scalar = None
                break
            else:
                scalar = c
        if scalar is not None:
            return rest * ring_.const(Fraction(-1) / scalar)
    return None
