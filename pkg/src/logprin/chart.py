"""Affine toroidal orbifold charts and their logarithmic derivations.

A chart is Spec of k[ordinary vars][monoid] presented by named monomial
variables (one per monoid generator, with toric relations between them),
together with deck characters recording a finite abelian cover. The chart
carries enough structure to differentiate ideals logarithmically, measure
logarithmic order, restrict to coordinate hypersurfaces, and fold away
deck data that acts purely torically.
"""

from fractions import Fraction
import math
from math import gcd

from .errors import ValidationError
from .lattice import (Lattice, Monoid, evaluate_character, factor_over_gens,
                      hilbert_basis, invariant_sublattice, solve_left,
                      toric_relations, vec_scale)
from .ring import ChartRing, Ideal

INF = math.inf

ORDINARY_POOL = ("y", "z")
RATIO_POOL = ("v", "r", "q")
ROOT_POOL = ("w", "s", "t")


def fresh_name(pool, taken):
    for name in pool:
        if name not in taken:
            return name
    k = 2
    while True:
        for name in pool:
            cand = "{}{}".format(name, k)
            if cand not in taken:
                return cand
        k += 1


class Character:
    """One deck character: a lattice functional plus ordinary-variable weights.

    The functional part acts on monomial variables through their lattice
    vectors; the ordinary part records weights picked up by ratio variables
    whose denominators were monomial. All values live in Q/Z.
    """

    __slots__ = ("lattice_part", "ordinary_part")

    def __init__(self, lattice_part, ordinary_part=()):
        self.lattice_part = tuple(Fraction(x) % 1 for x in lattice_part)
        if isinstance(ordinary_part, dict):
            ordinary_part = ordinary_part.items()
        cleaned = {}
        for name, w in ordinary_part:
            w = Fraction(w) % 1
            if w:
                cleaned[name] = w
        self.ordinary_part = tuple(sorted(cleaned.items()))

    def on_vector(self, vec):
        return evaluate_character(self.lattice_part, vec)

    def on_ordinary(self, name):
        return dict(self.ordinary_part).get(name, Fraction(0))

    def key(self):
        return (self.lattice_part, self.ordinary_part)

    def __eq__(self, other):
        return isinstance(other, Character) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Character({}, {})".format(self.lattice_part,
                                          dict(self.ordinary_part))


def _lcm(a, b):
    return a * b // gcd(a, b)


class Chart:
    """One affine toroidal orbifold chart of the blowup tree."""

    def __init__(self, name, ordinary, monomial_pairs, lattice=None,
                 characters=(), parent=None, var_images=None):
        ordinary = tuple(ordinary)
        monomial_pairs = [(n, tuple(int(x) for x in v))
                          for n, v in monomial_pairs]
        if lattice is None:
            rank = len(monomial_pairs[0][1]) if monomial_pairs else 0
            lattice = Lattice.standard(rank)
        vectors = [v for _, v in monomial_pairs]
        if monomial_pairs and _span_rank(vectors) < lattice.rank:
            assert not characters, \
                "cannot shrink a lattice that carries characters"
            lattice, monomial_pairs = _shrink_to_span(lattice, monomial_pairs)
            vectors = [v for _, v in monomial_pairs]
        if not monomial_pairs and lattice.rank > 0:
            assert not characters
            lattice = Lattice.standard(0)
        self.name = name
        self.lattice = lattice
        self.monomial_names = tuple(n for n, _ in monomial_pairs)
        self.vector_by_name = {n: v for n, v in monomial_pairs}
        self.monoid = Monoid(lattice.rank, vectors)
        self.ring = ChartRing(ordinary=ordinary,
                              monomial=self.monomial_names)
        rels = toric_relations(self.ring, vectors) if monomial_pairs else []
        self.ring.attach_relations(rels)
        self.characters = tuple(ch for ch in characters
                                if not self._char_trivial(ch))
        self.parent = parent
        self.var_images = dict(var_images) if var_images else None

    # -- basic structure ------------------------------------------------

    @property
    def ordinary(self):
        return self.ring.ordinary

    @property
    def rank(self):
        return self.lattice.rank

    def vector_of(self, name):
        return self.vector_by_name[name]

    def monomial_pairs(self):
        return [(n, self.vector_by_name[n]) for n in self.monomial_names]

    def monomial_poly(self, vec):
        """The ring monomial with the given lattice vector."""
        vec = tuple(int(x) for x in vec)
        mults = factor_over_gens(
            self.monoid, vec,
            gens=[self.vector_by_name[n] for n in self.monomial_names])
        exps = [0] * self.ring.nvars
        for name, m in zip(self.monomial_names, mults):
            exps[self.ring.index(name)] = m
        return self.ring.monomial_of(exps)

    def char_weight(self, char, name):
        if name in self.vector_by_name:
            return char.on_vector(self.vector_by_name[name])
        return char.on_ordinary(name)

    def char_order(self, char):
        m = 1
        for name in self.ring.names:
            m = _lcm(m, self.char_weight(char, name).denominator)
        for x in char.lattice_part:
            m = _lcm(m, x.denominator)
        return m

    def _char_trivial(self, char):
        return (all(x.denominator == 1 for x in char.lattice_part)
                and not char.ordinary_part)

    def describe(self):
        """Plain-data description used by serialization and reports."""
        return {
            "name": self.name,
            "ordinary": list(self.ordinary),
            "monomial": {n: list(self.vector_by_name[n])
                         for n in self.monomial_names},
            "lattice": [[_frac_str(x) for x in row]
                        for row in self.lattice.basis],
            "characters": [self._char_data(ch) for ch in self.characters],
            "relations": [self.ring.format(r) for r in self.ring.relations],
        }

    def _char_data(self, char):
        order = self.char_order(char)
        weights = {}
        for name in self.ring.names:
            w = self.char_weight(char, name)
            weights[name] = int(w * order) % order
        return {"order": order, "weights": weights}

    # -- logarithmic calculus -------------------------------------------

    def derive(self, ideal):
        """One derivation step: the ideal plus all logarithmic derivatives.

        Uses the reduced basis of the ideal, which generates the same
        result since reduction happens modulo the ideal itself.
        """
        gens = list(ideal.groebner())
        extra = []
        for g in gens:
            for name in self.ordinary:
                extra.append(self.ring.partial(g, name))
            for k in range(self.rank):
                weights = {n: self.vector_by_name[n][k]
                           for n in self.monomial_names}
                extra.append(self.ring.weight_scale(g, weights))
        return Ideal(self.ring, gens + extra)

    def derive_tower(self, ideal, levels):
        """The chain ideal, D(ideal), ..., up to the given number of steps."""
        chain = [ideal]
        for _ in range(levels):
            chain.append(self.derive(chain[-1]))
        return chain

    def max_logord(self, ideal):
        """min { a : the a-th derivation step is the unit ideal }, or INF.

        The chain is increasing, so stabilization short of the unit ideal
        means no level ever reaches it.
        """
        cur = ideal
        count = 0
        while True:
            if cur.is_unit():
                return count
            nxt = self.derive(cur)
            if nxt.equals(cur):
                return INF
            cur = nxt
            count += 1

    # -- chart surgery ---------------------------------------------------

    def restrict_to_hypersurface(self, name):
        """The chart cut out by an ordinary variable, with the cut map.

        Returns (chart, carry) where carry maps polynomials of this chart
        into the restricted one by sending the variable to zero.
        """
        assert name in self.ordinary
        rest = tuple(n for n in self.ordinary if n != name)
        sub = Chart("{}|{}=0".format(self.name, name), rest,
                    self.monomial_pairs(), lattice=self.lattice,
                    characters=self.characters)

        def carry(poly):
            dropped = self.ring.substitute(poly, name, self.ring.zero())
            mapping = {n: sub.ring.var(n) for n in sub.ring.names}
            mapping[name] = sub.ring.zero()
            return self.ring.transfer(dropped, sub.ring, mapping)

        return sub, carry

    def with_free_variable(self, name):
        """The chart times an affine line, with the inclusion map."""
        assert name not in self.ring.names
        big = Chart(self.name, (name,) + self.ordinary,
                    self.monomial_pairs(), lattice=self.lattice,
                    characters=self.characters)

        def carry(poly):
            mapping = {n: big.ring.var(n) for n in self.ring.names}
            return self.ring.transfer(poly, big.ring, mapping)

        return big, carry

    def refined(self, roots, d):
        """The Kummer cover adjoining d-th roots of the given monomials.

        roots are monoid vectors in current coordinates. Returns
        (chart, carry) where the new chart has the refined lattice, the
        saturated monoid regenerated with named variables (old names kept
        for unchanged vectors, fresh root names otherwise), and the deck
        characters of the cover appended; carry maps polynomials over.
        """
        from .lattice import refinement_characters, transport_character

        roots = [tuple(int(x) for x in v) for v in roots]
        assert all(self.monoid.contains(v) for v in roots)
        if d == 1 or not roots:
            return self, lambda p: p
        new_lattice = self.lattice.refine(
            [tuple(Fraction(x, d) for x in self.lattice.to_ambient(v))
             for v in roots])
        ray_coords = []
        for v in roots:
            amb = tuple(Fraction(x, d) for x in self.lattice.to_ambient(v))
            c = new_lattice.from_ambient(amb)
            assert c is not None
            ray_coords.append(c)
        for name in self.monomial_names:
            amb = self.lattice.to_ambient(self.vector_of(name))
            c = new_lattice.from_ambient(amb)
            assert c is not None
            ray_coords.append(c)
        gens = hilbert_basis(ray_coords)
        pairs = []
        taken = set(self.ring.names)
        old_ambient = {n: self.lattice.to_ambient(self.vector_of(n))
                       for n in self.monomial_names}
        for g in gens:
            amb = new_lattice.to_ambient(g)
            name = None
            for cand in self.monomial_names:
                if old_ambient[cand] == amb:
                    name = cand
                    break
            if name is None:
                name = fresh_name(ROOT_POOL, taken)
                taken.add(name)
            pairs.append((name, g))
        pairs = _stable_pair_order(pairs, self.monomial_names)
        chars = [Character(transport_character(ch.lattice_part, self.lattice,
                                               new_lattice),
                           ch.ordinary_part)
                 for ch in self.characters]
        chars += [Character(lam) for lam in
                  refinement_characters(self.lattice, new_lattice)]
        cover = Chart(self.name, self.ordinary, pairs, lattice=new_lattice,
                      characters=chars, parent=self.parent)
        carry = _term_map(self, cover)
        if self.var_images is not None:
            cover.var_images = {n: carry(img)
                                for n, img in self.var_images.items()}
        return cover, carry

    def discharge(self, protect=()):
        """Fold deck characters that act trivially on ordinary variables.

        Such a character acts through the torus, so the quotient is again a
        toroidal chart: the lattice shrinks to the invariant sublattice and
        the monomial variables regroup to its monoid generators. Characters
        that are non-integral on a protected ambient vector are kept: they
        still carry structure the caller needs, such as the root of an
        exceptional monomial. Returns (chart, carry); carry maps invariant
        polynomials over.
        """
        chart = self
        protect = [tuple(Fraction(x) for x in v) for v in protect]

        def carry(poly):
            return poly

        while True:
            folding = []
            for ch in chart.characters:
                if chart._char_trivial(ch):
                    continue
                if any(w.denominator != 1 for _, w in ch.ordinary_part):
                    continue
                ok = True
                for amb in protect:
                    coords = _span_coords(chart.lattice, amb)
                    val = sum(l * c for l, c in zip(ch.lattice_part, coords))
                    if Fraction(val).denominator != 1:
                        ok = False
                        break
                if ok:
                    folding.append(ch)
            if not folding:
                return chart, carry
            chart, step = chart._fold(folding)
            prev = carry

            def carry(poly, _prev=prev, _step=step):
                return _step(_prev(poly))

    def _fold(self, folding):
        inv_rows = invariant_sublattice([ch.lattice_part for ch in folding],
                                        self.rank)
        new_basis = [self.lattice.to_ambient(row) for row in inv_rows]
        new_lattice = Lattice(new_basis, self.lattice.ambient_dim)
        # cone rays, rescaled to primitive vectors of the smaller lattice
        rays = []
        for name in self.monomial_names:
            amb = self.lattice.to_ambient(self.vector_of(name))
            rays.append(_primitive_in(new_lattice, amb))
        gens = hilbert_basis(rays)
        pairs = []
        taken = set(self.ring.names)
        for g in gens:
            amb = new_lattice.to_ambient(g)
            name = None
            for cand in self.monomial_names:
                cand_amb = self.lattice.to_ambient(self.vector_of(cand))
                if _parallel_same_direction(cand_amb, amb):
                    name = cand
                    break
            if name is None:
                name = fresh_name(RATIO_POOL, taken)
                taken.add(name)
            pairs.append((name, g))
        pairs = _stable_pair_order(pairs, self.monomial_names)
        kept = []
        for ch in self.characters:
            if ch in folding:
                continue
            lam = tuple(sum(Fraction(b) * l for b, l in
                            zip(row, ch.lattice_part)) for row in inv_rows)
            kept.append(Character(lam, ch.ordinary_part))
        folded = Chart(self.name, self.ordinary, pairs, lattice=new_lattice,
                       characters=kept, parent=self.parent,
                       var_images=None)
        step = _term_map(self, folded)
        if self.var_images is not None:
            folded.var_images = {n: step(img)
                                 for n, img in self.var_images.items()}
        return folded, step


def _span_coords(lattice, ambient):
    """Rational coordinates of an ambient vector in the lattice basis."""
    sol = solve_left(lattice.basis, tuple(Fraction(x) for x in ambient))
    assert sol is not None, "vector outside the lattice span"
    return sol


def _stable_pair_order(pairs, old_names):
    """Keep surviving names in their previous relative order, new ones after."""
    old_pos = {n: i for i, n in enumerate(old_names)}
    fallback = len(old_names)
    return sorted(pairs, key=lambda p: (old_pos.get(p[0], fallback),
                                        pairs.index(p)))


def _term_map(old, new):
    """Term-by-term transfer between charts on the same underlying space.

    Ordinary variables map by name; the monomial part of each term maps
    through its ambient lattice vector, which must land in the new chart's
    monoid. Total on polynomials defined on the new chart, which is all
    the callers ever move.
    """

    def carry(poly):
        out = new.ring.zero()
        for mono, coeff in old.ring.coefficients(poly):
            vec = [0] * old.rank
            ord_exps = []
            for name, e in zip(old.ring.names, mono):
                if not e:
                    continue
                if name in old.vector_by_name:
                    for i, x in enumerate(old.vector_of(name)):
                        vec[i] += e * x
                else:
                    ord_exps.append((name, e))
            amb = old.lattice.to_ambient(vec)
            new_vec = new.lattice.from_ambient(amb)
            assert new_vec is not None and new.monoid.contains(new_vec), \
                "polynomial does not live on the target chart"
            term = new.monomial_poly(new_vec) * new.ring.const(coeff)
            for name, e in ord_exps:
                for _ in range(e):
                    term = term * new.ring.var(name)
            out = out + term
        return out

    return carry


def _span_rank(vectors):
    from .lattice import _rat_rank
    return _rat_rank([v for v in vectors if any(v)])


def _shrink_to_span(lattice, monomial_pairs):
    """Replace the lattice by the saturated span of the monomial vectors."""
    from .lattice import saturated_span_basis
    vectors = [v for _, v in monomial_pairs]
    span = saturated_span_basis(vectors)
    new_basis = [lattice.to_ambient(row) for row in span]
    new_lattice = Lattice(new_basis, lattice.ambient_dim)
    pairs = []
    for name, v in monomial_pairs:
        c = solve_left(span, v)
        assert c is not None and all(f.denominator == 1 for f in c)
        pairs.append((name, tuple(int(f) for f in c)))
    return new_lattice, pairs


def _primitive_in(lattice, ambient):
    """Smallest positive multiple of an ambient vector lying in the lattice."""
    for k in range(1, 1000):
        scaled = tuple(Fraction(x) * k for x in ambient)
        c = lattice.from_ambient(scaled)
        if c is not None:
            from .lattice import _primitive
            return _primitive(c)
    raise AssertionError("no lattice point on the ray")


def _parallel_same_direction(a, b):
    """Do two ambient vectors span the same ray?"""
    a = tuple(Fraction(x) for x in a)
    b = tuple(Fraction(x) for x in b)
    if not any(a) or not any(b):
        return False
    ratio = None
    for x, y in zip(a, b):
        if bool(x) != bool(y):
            return False
        if x:
            r = y / x
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None and ratio > 0


def _frac_str(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "{}/{}".format(x.numerator, x.denominator)
