"""Exact polynomial algebra on a chart's coordinate ring.

Everything runs over QQ. A ChartRing fixes the variable split (ordinary
variables first, then monomial generators) and the degrevlex order on the
full tuple; that order never changes for the lifetime of the chart. Ideals
are generator lists with a lazily computed reduced Groebner basis; the
binomial relations of the chart are adjoined silently wherever membership
is decided, and never listed as generators of anything.
"""

from fractions import Fraction
import string

from sympy import QQ
from sympy.polys.groebnertools import groebner as _buchberger
from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import ring as _ring

from .errors import ParseError

_NAME_START = set(string.ascii_letters + "_")
_NAME_CHARS = _NAME_START | set(string.digits)


def _coeff_to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


class ChartRing:
    """QQ[ordinary..., monomial...] in degrevlex, plus optional relations.

    Parameters
    ----------
    ordinary : iterable of str
        Names of the ordinary (free) variables. They rank above the
        monomial block in the term order.
    monomial : iterable of str
        Names of the monoid generator variables.
    relations : iterable of polynomials, optional
        Defining relations of the chart (the toric ideal of its monoid).
        Adjoined automatically in membership tests.
    """

    def __init__(self, ordinary=(), monomial=(), relations=()):
        self.ordinary = tuple(ordinary)
        self.monomial = tuple(monomial)
        self.names = self.ordinary + self.monomial
        seen = set()
        for n in self.names:
            assert n and n[0] in _NAME_START and all(ch in _NAME_CHARS for ch in n), n
            assert n not in seen, f"duplicate variable {n!r}"
            seen.add(n)
        if self.names:
            made = _ring(",".join(self.names), QQ, order=grevlex)
            self._sring, self._gens = made[0], tuple(made[1:])
        else:
            made = _ring([], QQ, order=grevlex)
            self._sring, self._gens = made[0], ()
        self._by_name = dict(zip(self.names, self._gens))
        self.relations = ()
        self._aux = None
        if relations:
            self.attach_relations(relations)

    def attach_relations(self, relations):
        """Install the chart relations; allowed once, right after construction."""
        assert not self.relations, "relations already attached"
        rels = []
        for r in relations:
            if isinstance(r, str):
                r = self.parse(r)
            assert r.ring is self._sring, "relation from a foreign ring"
            if r:
                rels.append(r.monic())
        rels.sort(key=_sort_key(self))
        self.relations = tuple(rels)

    # -- basic construction --------------------------------------------

    @property
    def nvars(self):
        return len(self.names)

    def var(self, name):
        return self._by_name[name]

    def is_ordinary(self, name):
        return name in self.ordinary

    def zero(self):
        return self._sring.zero

    def one(self):
        return self._sring.one

    def const(self, q):
        q = Fraction(q)
        return self._sring.one * QQ(q.numerator, q.denominator)

    def monomial_of(self, exps):
        """Monomial from an exponent tuple over the full variable list."""
        exps = tuple(int(e) for e in exps)
        assert len(exps) == self.nvars and all(e >= 0 for e in exps)
        return self._sring.from_dict({exps: QQ(1)})

    def index(self, name):
        return self.names.index(name)

    # -- text form ------------------------------------------------------

    def parse(self, text):
        """Parse the documented polynomial grammar into a ring element.

        Grammar: signed sums of products of factors, a factor being an
        integer literal, a p/q rational literal, or a variable with an
        optional nonnegative integer exponent. Explicit '*' only, no
        parentheses, whitespace insignificant.
        """
        toks = _tokenize(text)
        parser = _Parser(self, toks, text)
        poly = parser.expr()
        parser.expect_end()
        return poly

    def format(self, poly):
        """Canonical text form: terms in ring order, '^' powers, explicit '*'."""
        if not poly:
            return "0"
        parts = []
        for mono, coeff in poly.terms():
            frac = _coeff_to_fraction(coeff)
            body = []
            for name, e in zip(self.names, mono):
                if e == 1:
                    body.append(name)
                elif e > 1:
                    body.append(f"{name}^{e}")
            mag = abs(frac)
            if not body or mag != 1:
                body.insert(0, str(mag))
            term = "*".join(body)
            if not parts:
                parts.append(term if frac > 0 else "-" + term)
            else:
                parts.append(("+ " if frac > 0 else "- ") + term)
        return " ".join(parts)

    def coefficients(self, poly):
        """Terms as (exponent tuple, Fraction) pairs in ring order."""
        return [(m, _coeff_to_fraction(c)) for m, c in poly.terms()]

    # -- calculus helpers ----------------------------------------------

    def partial(self, poly, name):
        """Formal partial derivative with respect to an ordinary variable."""
        assert self.is_ordinary(name)
        return poly.diff(self.var(name))

    def weight_scale(self, poly, weight_of_name):
        """Scale each term by an integer weight of its monomial part.

        weight_of_name maps a variable name to an integer (missing names
        weigh zero); a term gets multiplied by the dot product of its
        exponents with those weights. This is how the monomial derivations
        u d/du act.
        """
        out = {}
        for mono, coeff in poly.terms():
            w = 0
            for name, e in zip(self.names, mono):
                if e:
                    w += e * weight_of_name.get(name, 0)
            if w:
                out[mono] = coeff * QQ(w)
        return self._sring.from_dict(out)

    def substitute(self, poly, name, repl):
        """Ring map sending the variable `name` to `repl`, fixing the rest."""
        i = self.index(name)
        powers = {0: self.one()}

        def pw(e):
            if e not in powers:
                powers[e] = pw(e - 1) * repl
            return powers[e]

        acc = self.zero()
        for mono, coeff in poly.terms():
            rest = list(mono)
            e = rest[i]
            rest[i] = 0
            acc += self._sring.from_dict({tuple(rest): coeff}) * pw(e)
        return acc

    def substitute_coordinate(self, poly, name, shift):
        """Straightening map x -> x - shift (inverse is x -> x + shift)."""
        assert self.is_ordinary(name)
        return self.substitute(poly, name, self.var(name) - shift)

    # -- transfer between rings ----------------------------------------

    def transfer(self, poly, other, mapping):
        """Image of `poly` under name -> element-of-`other` given by mapping."""
        acc = other.zero()
        for mono, coeff in poly.terms():
            term = other.const(_coeff_to_fraction(coeff))
            for name, e in zip(self.names, mono):
                if e:
                    img = mapping[name]
                    for _ in range(e):
                        term = term * img
            acc += term
        return acc

    # -- elimination scratch ring --------------------------------------

    def _aux_ring(self):
        """Lex ring with a fresh leading variable, for elimination tricks."""
        if self._aux is None:
            tname = "T_"
            while tname in self._by_name:
                tname += "_"
            made = _ring(",".join((tname,) + self.names) if self.names else tname,
                         QQ, order=lex)
            self._aux = (made[0], made[1])
        return self._aux

    def _to_aux(self, poly, aux):
        return aux.from_dict({(0,) + m: c for m, c in poly.terms()})

    def _from_aux(self, poly):
        out = {}
        for mono, coeff in poly.terms():
            assert mono[0] == 0
            out[mono[1:]] = coeff
        return self._sring.from_dict(out)


class _Parser:
    def __init__(self, ring_, toks, text):
        self.ring = ring_
        self.toks = toks
        self.text = text
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        pos = tok[2] if tok else (self.toks[-1][2] if self.toks else 0)
        raise ParseError(msg, text=self.text, pos=pos)

    def expect_end(self):
        tok = self.peek()
        if tok is not None:
            self.fail(f"unexpected {tok[1]!r}", tok)

    def expr(self):
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * self.ring.const(sign)
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                nxt = self.term()
                acc = acc + nxt if tok[1] == "+" else acc - nxt
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        tok = self.take()
        if tok is None:
            self.fail("unexpected end of input")
        kind, val, pos = tok
        if kind == "num":
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.take()
                if den is None or den[0] != "num":
                    self.fail("expected integer denominator", den or tok)
                if int(den[1]) == 0:
                    self.fail("zero denominator", den)
                return self.ring.const(Fraction(int(val), int(den[1])))
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.ring._by_name:
                self.fail(f"unknown variable {val!r}", tok)
            base = self.ring.var(val)
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "^":
                self.take()
                exp = self.take()
                if exp is None or exp[0] != "num":
                    self.fail("expected nonnegative integer exponent", exp or tok)
                return base ** int(exp[1])
            return base
        self.fail(f"unexpected {val!r}", tok)


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^/":
            toks.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
            continue
        if ch in _NAME_START:
            j = i
            while j < n and text[j] in _NAME_CHARS:
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"bad character {ch!r}", text=text, pos=i)
    return toks


class Ideal:
    """Ideal of a ChartRing, presented by generators.

    The reduced Groebner basis of (generators + chart relations) is computed
    on first use and cached; it is the canonical form used for equality,
    membership and serialization.
    """

    def __init__(self, ring_, gens):
        self.ring = ring_
        cleaned = []
        for g in gens:
            assert g.ring is ring_._sring, "generator from a foreign ring"
            if g:
                cleaned.append(g.monic())
        cleaned.sort(key=_sort_key(ring_))
        dedup = []
        for g in cleaned:
            if not dedup or dedup[-1] != g:
                dedup.append(g)
        self.gens = tuple(dedup)
        self._gb = None

    # -- canonical form -------------------------------------------------

    def groebner(self):
        """Reduced Groebner basis of gens + relations, descending order."""
        if self._gb is None:
            seq = list(self.gens) + list(self.ring.relations)
            seq = [g for g in seq if g]
            if not seq:
                self._gb = ()
            else:
                self._gb = tuple(_buchberger(seq, self.ring._sring))
        return self._gb

    def normal_form(self, f):
        gb = self.groebner()
        if not gb:
            return f
        return f.rem(list(gb))

    def contains(self, f):
        return not self.normal_form(f)

    def contains_ideal(self, other):
        assert other.ring is self.ring
        return all(self.contains(g) for g in other.gens)

    def equals(self, other):
        assert other.ring is self.ring
        return self.groebner() == other.groebner()

    def is_unit(self):
        gb = self.groebner()
        return len(gb) == 1 and gb[0] == self.ring.one()

    def is_zero(self):
        return not self.groebner()

    def basis_strings(self):
        return [self.ring.format(g) for g in self.groebner()]

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        assert other.ring is self.ring
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        assert other.ring is self.ring
        prods = [a * b for a in self.gens for b in other.gens]
        return Ideal(self.ring, prods)

    def power(self, k):
        """k-th power; the zero-th power is the unit ideal by convention."""
        assert k >= 0
        if k == 0:
            return Ideal(self.ring, [self.ring.one()])
        acc = self
        for _ in range(k - 1):
            acc = acc * self
        return acc

    def multiply_poly(self, f):
        return Ideal(self.ring, [f * g for g in self.gens])

    # -- colon and saturation ------------------------------------------

    def colon(self, f):
        """(I : f) in the chart's quotient ring, via lex elimination."""
        if not f:
            return Ideal(self.ring, [self.ring.one()])
        if f.is_ground:
            return Ideal(self.ring, self.gens)
        aux, t = self.ring._aux_ring()
        seq = [t * self.ring._to_aux(g, aux)
               for g in list(self.gens) + list(self.ring.relations) if g]
        fa = self.ring._to_aux(f, aux)
        seq.append((aux.one - t) * fa)
        gb = _buchberger(seq, aux) if seq else []
        quotients = []
        for g in gb:
            if g.degree(t) > 0:
                continue
            q = g.exquo(fa)
            quotients.append(self.ring._from_aux(q))
        return Ideal(self.ring, quotients)

    def saturate(self, f):
        """Iterated colon by f until it stabilizes.

        Returns (saturation, steps) where steps counts the strict growth
        steps, so an ideal already saturated reports 0.
        """
        cur = self
        steps = 0
        while True:
            nxt = cur.colon(f)
            if nxt.groebner() == cur.groebner():
                return cur, steps
            cur = nxt
            steps += 1


def _sort_key(ring_):
    order = ring_._sring.order

    def key(p):
        return tuple((order(m), m, str(c)) for m, c in p.terms())

    return key


def ideal(ring_, *gens):
    """Convenience constructor, accepting text or ring elements."""
    out = []
    for g in gens:
        out.append(ring_.parse(g) if isinstance(g, str) else g)
    return Ideal(ring_, out)
