"""Lattice layer: monoid ideal saturation, Hilbert bases, refinements."""

import random
from fractions import Fraction

from logprin.lattice import (Lattice, Monoid, hilbert_basis, ideal_power,
                             ideal_saturate, monoid_member,
                             refinement_characters, snf_transform)


def test_saturate_quadrant_corner():
    quad = Monoid(2, [(1, 0), (0, 1)])
    sat = ideal_saturate(quad, [(2, 0), (0, 2)])
    assert sat == [(0, 2), (1, 1), (2, 0)]
    assert ideal_saturate(quad, sat) == sat


def test_saturate_square_of_corner():
    quad = Monoid(2, [(1, 0), (0, 1)])
    square = ideal_power(quad, [(2, 0), (0, 2)], 2)
    sat = ideal_saturate(quad, square)
    assert sat == [(0, 4), (1, 3), (2, 2), (3, 1), (4, 0)]


def test_saturate_power_containment():
    # (J^sat)^j lies inside (J^j)^sat, seeded generators
    quad = Monoid(2, [(1, 0), (0, 1)])
    rng = random.Random(3)
    for _ in range(15):
        gens = [(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(3)]
        gens = [g for g in gens if g != (0, 0)] or [(1, 1)]
        j = rng.randint(2, 3)
        sat_then_power = ideal_power(quad, ideal_saturate(quad, gens), j)
        power_then_sat = ideal_saturate(quad, ideal_power(quad, gens, j))
        for v in sat_then_power:
            assert any(quad.divides(w, v) for w in power_then_sat)


def test_hilbert_basis_fills_gaps():
    assert hilbert_basis([(1, 0), (1, 2)]) == [(1, 0), (1, 1), (1, 2)]
    assert hilbert_basis([(1, 0), (1, 3)]) == [(1, 0), (1, 1), (1, 2), (1, 3)]
    assert hilbert_basis([(1, 0, 0), (0, 1, 0), (1, 1, 2)]) == [
        (0, 1, 0), (1, 0, 0), (1, 1, 2), (1, 1, 1)]


def test_hilbert_basis_is_minimal():
    for gens in ([(1, 0), (1, 2)], [(1, 0), (1, 3)],
                 [(1, 0, 0), (0, 1, 0), (1, 1, 2)]):
        basis = hilbert_basis(gens)
        for i, v in enumerate(basis):
            rest = basis[:i] + basis[i + 1:]
            assert not monoid_member(v, rest, sum)


def test_hilbert_basis_generates():
    rng = random.Random(9)
    for _ in range(10):
        gens = [(1, rng.randint(0, 4)) for _ in range(3)]
        basis = hilbert_basis(gens)
        for g in gens:
            assert monoid_member(g, basis, sum)


def test_smith_form_of_diagonal():
    rows, left, right = snf_transform([[2, 0], [0, 3]])
    assert rows == [(1, 0), (0, 6)]
    assert len(left) == 2 and len(right) == 2


def test_index_of_half_lattice():
    std = Lattice.standard(1)
    half = Lattice([[Fraction(1, 2)]], 1)
    assert std.index_in(half) == 2
    assert std.index_in(std) == 1


def test_refinement_characters_of_half_lattice():
    std = Lattice.standard(1)
    half = Lattice([[Fraction(1, 2)]], 1)
    assert refinement_characters(std, half) == [(Fraction(1, 2),)]
    assert refinement_characters(std, std) == []


def test_coords_round_trip_through_refinement():
    std = Lattice.standard(2)
    finer = std.refine([(Fraction(1, 2), Fraction(1, 2))])
    rows = std.coords_in(finer)
    for i, b in enumerate(std.basis):
        assert finer.to_ambient(rows[i]) == b
    assert std.index_in(finer) == 2
