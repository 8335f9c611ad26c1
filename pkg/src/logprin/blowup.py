"""Kummer blowups of toroidal orbifold charts.

A Kummer center is generated by ordinary coordinates together with d-th
roots of a monomial ideal. Blowing one up produces one chart per center
generator; on each, that generator becomes the exceptional monomial, the
other generators divide by it, and the monoid is saturated again. Deck
characters of the root cover ride along, and the purely toric ones are
folded away where folding cannot disturb parent monomials or the
exceptional.
"""

from fractions import Fraction
from math import gcd

from .chart import (Chart, Character, ORDINARY_POOL, RATIO_POOL, _term_map,
                    fresh_name)
from .errors import EmptyCenter, NotDivisible
from .lattice import (hilbert_basis, ideal_power, ideal_saturate,
                      minimal_ideal_gens, vec_sub)
from .ring import Ideal


class KummerCenter:
    """(x_1, ..., x_k, N^(1/d)): ordinary coordinates and monomial roots.

    vectors generate the monomial ideal N in chart lattice coordinates and
    index is the root order d. No vectors forces index 1.
    """

    __slots__ = ("ordinary", "vectors", "index")

    def __init__(self, ordinary=(), vectors=(), index=1):
        self.ordinary = tuple(ordinary)
        self.vectors = tuple(tuple(int(x) for x in v) for v in vectors)
        self.index = int(index)
        assert self.index >= 1
        if not self.vectors:
            self.index = 1
        if not self.ordinary and not self.vectors:
            raise EmptyCenter("center has no generators")

    def normalized(self):
        """Reduce the root: divide the index and all vectors by their gcd."""
        if not self.vectors:
            return self
        g = self.index
        for v in self.vectors:
            for x in v:
                g = gcd(g, abs(x))
        if g <= 1:
            return self
        vecs = [tuple(x // g for x in v) for v in self.vectors]
        return KummerCenter(self.ordinary, vecs, self.index // g)

    def describe(self, chart):
        out = {"ordinary": list(self.ordinary)}
        if self.vectors:
            out["root"] = {
                "monomials": [chart.ring.format(chart.monomial_poly(v))
                              for v in self.vectors],
                "index": self.index,
            }
        return out

    def __repr__(self):
        return "KummerCenter({}, {}, {})".format(
            self.ordinary, [list(v) for v in self.vectors], self.index)


class DivisorCenter:
    """A principal Cartier center: the divisor of one chart element."""

    __slots__ = ("element",)

    def __init__(self, element):
        self.element = element

    def describe(self, chart):
        return {"divisor": chart.ring.format(self.element)}

    def __repr__(self):
        return "DivisorCenter({})".format(self.element)


class BlowupChart:
    """One chart of a blowup: the new chart, the blowdown map for
    polynomials, and the exceptional element."""

    __slots__ = ("chart", "label", "pullback", "exceptional")

    def __init__(self, chart, label, pullback, exceptional):
        self.chart = chart
        self.label = label
        self.pullback = pullback
        self.exceptional = exceptional


def blow_up(chart, center):
    """All charts of the blowup of the center, in generator order."""
    if isinstance(center, DivisorCenter):
        return [_divisor_chart(chart, center)]
    center = center.normalized()
    cover, carry, root_vecs = _root_cover(chart, center)
    mono_gens = minimal_ideal_gens(cover.monoid, root_vecs)
    children = []
    for name in center.ordinary:
        children.append(_ordinary_chart(chart, cover, center, mono_gens,
                                        name))
    for nu in mono_gens:
        children.append(_monomial_chart(chart, cover, center, mono_gens, nu))
    assert children
    return children


def _root_cover(chart, center):
    """Refine the chart by the center's roots; returns (cover, carry, vecs)
    with vecs the root vectors in cover coordinates."""
    if not center.vectors:
        return chart, (lambda p: p), []
    if center.index == 1:
        for v in center.vectors:
            assert chart.monoid.in_cone(v)
        return chart, (lambda p: p), list(center.vectors)
    cover, carry = chart.refined(center.vectors, center.index)
    vecs = []
    for v in center.vectors:
        amb = tuple(Fraction(x, center.index)
                    for x in chart.lattice.to_ambient(v))
        c = cover.lattice.from_ambient(amb)
        assert c is not None
        vecs.append(c)
    return cover, carry, vecs


def _parent_protection(parent, target_dim):
    """Parent basis vectors, padded to the child's ambient dimension."""
    pad = target_dim - parent.lattice.ambient_dim
    return [tuple(row) + (Fraction(0),) * pad
            for row in parent.lattice.basis]


def _rename_ordinary(center, keep, taken):
    """Fresh names for the ordinary center coordinates that turn into
    ratio variables (every one except the chart's own generator)."""
    renames = {}
    for n in center.ordinary:
        if n == keep:
            continue
        fresh = fresh_name(ORDINARY_POOL, taken)
        taken.add(fresh)
        renames[n] = fresh
    return renames


def _ordinary_chart(parent, cover, center, mono_gens, xi):
    ext = cover.lattice.extend(1)
    e_coords = (0,) * cover.rank + (1,)
    e_amb = ext.to_ambient(e_coords)

    def lift(v):
        c = ext.from_ambient(cover.lattice.to_ambient(v) + (Fraction(0),))
        assert c is not None
        return c

    taken = set(cover.ring.names) - (set(center.ordinary) - {xi})
    renames = _rename_ordinary(center, xi, taken)
    rays = [(0, xi, e_coords)]
    for i, name in enumerate(cover.monomial_names):
        rays.append((1 + i, name, lift(cover.vector_of(name))))
    for i, nu in enumerate(mono_gens):
        rays.append((100 + i, None, vec_sub(lift(nu), e_coords)))
    gens = hilbert_basis([r[2] for r in rays])
    pairs = _name_rays(gens, rays, RATIO_POOL, taken)
    ordinary = tuple(renames.get(n, n) for n in cover.ordinary if n != xi)
    chars = []
    for ch in cover.characters:
        w_xi = ch.on_ordinary(xi)
        lam = ch.lattice_part + (w_xi,)
        weights = {}
        for n in cover.ordinary:
            if n == xi:
                continue
            if n in renames:
                weights[renames[n]] = ch.on_ordinary(n) - w_xi
            else:
                weights[n] = ch.on_ordinary(n)
        chars.append(Character(lam, weights))
    child = Chart("{}/{}".format(parent.name, xi), ordinary, pairs,
                  lattice=ext, characters=chars, parent=parent)
    protect = _parent_protection(parent, ext.ambient_dim) + [e_amb]
    child, _ = child.discharge(protect)
    return _finish(parent, child, center, renames, e_amb, xi)


def _monomial_chart(parent, cover, center, mono_gens, nu0):
    label = cover.ring.format(cover.monomial_poly(nu0))
    nu0_amb = cover.lattice.to_ambient(nu0)
    taken = set(cover.ring.names) - set(center.ordinary)
    renames = _rename_ordinary(center, None, taken)
    rays = [(0, None, nu0)]
    for i, name in enumerate(cover.monomial_names):
        rays.append((1 + i, name, cover.vector_of(name)))
    extra = 0
    for nu in mono_gens:
        if nu != nu0:
            rays.append((100 + extra, None, vec_sub(nu, nu0)))
            extra += 1
    gens = hilbert_basis([r[2] for r in rays])
    pairs = _name_rays(gens, rays, RATIO_POOL, taken)
    ordinary = tuple(renames.get(n, n) for n in cover.ordinary)
    chars = []
    for ch in cover.characters:
        w_nu = ch.on_vector(nu0)
        weights = {}
        for n in cover.ordinary:
            if n in renames:
                weights[renames[n]] = ch.on_ordinary(n) - w_nu
            else:
                weights[n] = ch.on_ordinary(n)
        chars.append(Character(ch.lattice_part, weights))
    child = Chart("{}/{}".format(parent.name, label.replace(" ", "")),
                  ordinary, pairs, lattice=cover.lattice, characters=chars,
                  parent=parent)
    protect = (_parent_protection(parent, cover.lattice.ambient_dim)
               + [tuple(nu0_amb)])
    child, _ = child.discharge(protect)
    return _finish(parent, child, center, renames, nu0_amb, label)


def _finish(parent, child, center, renames, exc_amb, label):
    pull = _blowdown_map(parent, child, center.ordinary, renames, exc_amb)
    exc_coords = child.lattice.from_ambient(tuple(exc_amb))
    assert exc_coords is not None
    exceptional = child.monomial_poly(exc_coords)
    child.var_images = {n: pull(parent.ring.var(n))
                        for n in parent.ring.names}
    return BlowupChart(child, label, pull, exceptional)


def _divisor_chart(parent, center):
    label = parent.ring.format(center.element)
    child = Chart("{}/{}".format(parent.name, label.replace(" ", "")),
                  parent.ordinary, parent.monomial_pairs(),
                  lattice=parent.lattice, characters=parent.characters,
                  parent=parent)
    pull = _term_map(parent, child)
    child.var_images = {n: pull(parent.ring.var(n))
                        for n in parent.ring.names}
    return BlowupChart(child, label, pull, pull(center.element))


def _name_rays(gens, rays, pool, taken):
    """Name a Hilbert basis from the rays that spawned it.

    rays holds (priority, name, vector) with lower priorities displayed
    first; a basis element matching a rayed vector takes its name, the
    rest draw fresh pool names.
    """
    info = {}
    for prio, name, vec in rays:
        v = tuple(vec)
        cur = info.get(v)
        if cur is None:
            info[v] = [prio, name]
        else:
            cur[0] = min(cur[0], prio)
            if cur[1] is None:
                cur[1] = name
    named = []
    fresh = []
    for g in gens:
        prio, name = info.get(tuple(g), (None, None))
        if name is not None:
            named.append((prio, name, g))
        else:
            fresh.append(g)
    named.sort(key=lambda t: t[0])
    pairs = [(n, g) for _, n, g in named]
    for g in fresh:
        name = fresh_name(pool, taken)
        taken.add(name)
        pairs.append((name, g))
    return pairs


def _blowdown_map(parent, child, center_ordinary, renames, exc_amb):
    """Term-by-term pullback of parent polynomials to a blowup chart.

    A center coordinate contributes the exceptional times its ratio
    variable (no ratio for the generator the chart sits on); monomial
    parts travel by ambient vector; everything else maps by name.
    """
    dim = child.lattice.ambient_dim
    exc = tuple(exc_amb) + (Fraction(0),) * (dim - len(exc_amb))

    def pull(poly):
        out = child.ring.zero()
        for mono, coeff in parent.ring.coefficients(poly):
            amb = [Fraction(0)] * dim
            factor = child.ring.const(coeff)
            for name, e in zip(parent.ring.names, mono):
                if not e:
                    continue
                if name in parent.vector_by_name:
                    vec_amb = parent.lattice.to_ambient(
                        parent.vector_of(name))
                    for i, x in enumerate(vec_amb):
                        amb[i] += e * x
                    continue
                if name in center_ordinary:
                    for i, x in enumerate(exc):
                        amb[i] += e * x
                    name = renames.get(name)
                    if name is None:
                        continue
                factor = factor * child.ring.var(name) ** e
            coords = child.lattice.from_ambient(amb)
            assert coords is not None and child.monoid.contains(coords), \
                "pullback left the chart monoid"
            out = out + factor * child.monomial_poly(coords)
        return out

    return pull


# ---------------------------------------------------------------------------
# admissibility and transforms
# ---------------------------------------------------------------------------


def normalized_power(chart, center, mark):
    """(J^mark)^nor as an ideal on the center's root cover.

    Returns (cover, carry, ideal): the sum over j of the saturated
    monomial part of the j-th root power times the ordinary part to the
    power mark - j.
    """
    center = center.normalized()
    cover, carry, root_vecs = _root_cover(chart, center)
    ordinary = Ideal(cover.ring,
                     [cover.ring.var(n) for n in center.ordinary])
    total = None
    for j in range(mark + 1):
        mono_vecs = ideal_saturate(
            cover.monoid, ideal_power(cover.monoid, root_vecs, j))
        if not mono_vecs:
            continue
        part = Ideal(cover.ring,
                     [cover.monomial_poly(v) for v in mono_vecs])
        part = part * ordinary.power(mark - j)
        total = part if total is None else total + part
    assert total is not None
    return cover, carry, total


def admissible(chart, ideal, mark, center):
    """Does the marked ideal sit inside the normalized mark-th power of
    the center?"""
    if isinstance(center, DivisorCenter):
        f = center.element ** mark
        return Ideal(chart.ring, [f]).contains_ideal(ideal)
    cover, carry, power = normalized_power(chart, center, mark)
    moved = Ideal(cover.ring, [carry(g) for g in ideal.gens])
    return power.contains_ideal(moved)


def controlled_transform(blowup_chart, gens, mark):
    """Divide the pulled-back ideal exactly by the mark-th power of the
    exceptional; NotDivisible reports a failure of admissibility."""
    ring_ = blowup_chart.chart.ring
    pulled = Ideal(ring_, [blowup_chart.pullback(g) for g in gens])
    if pulled.is_zero():
        return pulled
    f = blowup_chart.exceptional ** mark
    quotient = pulled.colon(f)
    back = Ideal(ring_, [q * f for q in quotient.gens])
    if not back.equals(pulled):
        raise NotDivisible(
            "pullback is not divisible by the exceptional power",
            chart=blowup_chart.chart.name, mark=mark,
            exceptional=ring_.format(blowup_chart.exceptional))
    return quotient


def strict_transform(blowup_chart, gens):
    """Saturate the pulled-back ideal by the exceptional element."""
    ring_ = blowup_chart.chart.ring
    pulled = Ideal(ring_, [blowup_chart.pullback(g) for g in gens])
    out, _ = pulled.saturate(blowup_chart.exceptional)
    return out
