"""Lattices, sharp monoids and their ideals, all exact.

Lattice elements are integer coordinate tuples with respect to the chart's
current basis; the basis rows live in a fixed ambient rational space so that
refinements (adjoining d-th roots) and extensions (a new free axis for an
exceptional coordinate) stay comparable across a blowup tree.

Cone computations use brute-force facet enumeration over generator subsets,
which is exact and entirely adequate at the scale this engine targets
(rank <= 5, a handful of generators). Integer kernels and spans go through a
hand-rolled Hermite normal form with transform, so everything stays in plain
ints and Fractions.
"""

from fractions import Fraction
import itertools
from math import gcd

from .errors import NotSharp

# ---------------------------------------------------------------------------
# exact linear algebra on tuples
# ---------------------------------------------------------------------------


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a, c):
    return tuple(c * x for x in a)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    if g <= 1:
        return tuple(v)
    return tuple(int(x) // g for x in v)


def _rat_rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    rank = 0
    for c in range(len(m[0])):
        piv = None
        for r in range(rank, len(m)):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def solve_left(rows, target):
    """Exact solution x of x * rows = target over the rationals, or None.

    Used with independent rows, where the solution is unique when it exists.
    """
    n = len(rows)
    if n == 0:
        return () if not any(target) else None
    cols = len(rows[0])
    # equations indexed by columns of `rows`, unknowns x_1..x_n
    aug = [[Fraction(rows[r][c]) for r in range(n)] for c in range(cols)]
    rhs = [Fraction(t) for t in target]
    row = 0
    pivots = []
    for col in range(n):
        piv = None
        for r in range(row, cols):
            if aug[r][col]:
                piv = r
                break
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        rhs[row], rhs[piv] = rhs[piv], rhs[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        rhs[row] *= inv
        for r in range(cols):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
                rhs[r] -= f * rhs[row]
        pivots.append((row, col))
        row += 1
    sol = [Fraction(0)] * n
    for r, col in pivots:
        sol[col] = rhs[r]
    for r in range(cols):
        lhs = sum(aug[r][c] * sol[c] for c in range(n))
        if lhs != rhs[r]:
            return None
    return tuple(sol)


def hermite_with_transform(rows):
    """Row Hermite form with transform: (H, U, rank) with U * A = H.

    U is unimodular, H is upper echelon with positive pivots and entries
    above each pivot reduced into [0, pivot). Zero rows of H sit at the
    bottom; their U rows are a basis of the left integer kernel of A.
    """
    A = [list(map(int, r)) for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(m):
        while True:
            piv = None
            for i in range(r, n):
                if A[i][c] and (piv is None or abs(A[i][c]) < abs(A[piv][c])):
                    piv = i
            if piv is None:
                break
            if piv != r:
                A[r], A[piv] = A[piv], A[r]
                U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, n):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < n and c < m and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    H = [tuple(row) for row in A]
    return H, [tuple(row) for row in U], r


def row_hnf(rows):
    """Canonical basis (Hermite rows, zeros dropped) of an integer row span."""
    rows = [tuple(int(x) for x in r) for r in rows if any(r)]
    if not rows:
        return []
    H, _, rank = hermite_with_transform(rows)
    return [tuple(h) for h in H[:rank]]


def left_integer_kernel(rows):
    """Canonical basis of {x integer : x * A = 0} for integer rows A."""
    rows = [tuple(r) for r in rows]
    if not rows:
        return []
    _, U, rank = hermite_with_transform(rows)
    return row_hnf(U[rank:])


def _transpose(rows):
    return [tuple(r[i] for r in rows) for i in range(len(rows[0]))]


def orthogonal_normals(vectors):
    """Canonical basis of integer functionals vanishing on all vectors."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return []
    return left_integer_kernel(_transpose(vectors))


def saturated_span_basis(vectors):
    """Canonical basis of span_Q(vectors) intersected with Z^dim.

    The intersection is saturated by construction: it is the integer
    solution set of the rational equations cutting out the span.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors if any(v)]
    if not vectors:
        return []
    dim = len(vectors[0])
    normals = orthogonal_normals(vectors)
    if not normals:
        return [tuple(1 if i == j else 0 for j in range(dim))
                for i in range(dim)]
    return left_integer_kernel(_transpose(normals))


def snf_transform(rows):
    """Smith normal form with transforms: (D, U, V) with U * A * V = D.

    U and V are unimodular; D is diagonal with nonnegative entries in
    divisibility order. Textbook pivot-and-reduce, fine for the small
    matrices that show up in deck-group computations.
    """
    A = [list(map(int, r)) for r in rows]
    n = len(A)
    m = len(A[0]) if n else 0
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def row_op(i, j, q):
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):
        for r in range(n):
            A[r][i] -= q * A[r][j]
        for r in range(m):
            V[r][i] -= q * V[r][j]

    k = 0
    while k < min(n, m):
        piv = None
        for i in range(k, n):
            for j in range(k, m):
                if A[i][j] and (piv is None
                                or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        if piv[0] != k:
            A[k], A[piv[0]] = A[piv[0]], A[k]
            U[k], U[piv[0]] = U[piv[0]], U[k]
        if piv[1] != k:
            for r in range(n):
                A[r][k], A[r][piv[1]] = A[r][piv[1]], A[r][k]
            for r in range(m):
                V[r][k], V[r][piv[1]] = V[r][piv[1]], V[r][k]
        dirty = False
        for i in range(k + 1, n):
            if A[i][k]:
                row_op(i, k, A[i][k] // A[k][k])
                if A[i][k]:
                    dirty = True
        if not dirty:
            for j in range(k + 1, m):
                if A[k][j]:
                    col_op(j, k, A[k][j] // A[k][k])
                    if A[k][j]:
                        dirty = True
        if dirty:
            continue
        bad = None
        for i in range(k + 1, n):
            if any(A[i][j] % A[k][k] for j in range(k + 1, m)):
                bad = i
                break
        if bad is not None:
            row_op(k, bad, -1)
            continue
        if A[k][k] < 0:
            A[k] = [-a for a in A[k]]
            U[k] = [-a for a in U[k]]
        k += 1
    D = [tuple(r) for r in A]
    return D, [tuple(r) for r in U], [tuple(r) for r in V]


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------


def facet_normals(vectors):
    """Primitive inward facet normals of the full-dimensional cone(vectors).

    Raises NotSharp when the generators span a cone containing a line.
    Every facet of a finitely generated full-dimensional cone is spanned by
    dim-1 independent generators, so scanning generator subsets is complete.
    """
    vectors = [tuple(v) for v in vectors if any(v)]
    assert vectors, "facets of the zero cone are undefined"
    dim = len(vectors[0])
    assert _rat_rank(vectors) == dim, "cone is not full-dimensional"
    if dim == 1:
        signs = {1 if v[0] > 0 else -1 for v in vectors}
        if len(signs) > 1:
            raise NotSharp("generators span a line", generators=vectors)
        return [(signs.pop(),)]
    normals = set()
    for subset in itertools.combinations(range(len(vectors)), dim - 1):
        rows = [vectors[i] for i in subset]
        if _rat_rank(rows) != dim - 1:
            continue
        kern = orthogonal_normals(rows)
        if len(kern) != 1:
            continue
        n = _primitive(kern[0])
        for cand in (n, vec_scale(n, -1)):
            if all(dot(cand, v) >= 0 for v in vectors):
                normals.add(tuple(cand))
    if not normals or _rat_rank(sorted(normals)) < dim:
        raise NotSharp("cone contains a line", generators=vectors)
    return sorted(normals)


# ---------------------------------------------------------------------------
# Hilbert bases
# ---------------------------------------------------------------------------


def hilbert_basis(vectors):
    """Hilbert basis of the saturation of the monoid generated by vectors.

    Returns the unique minimal generating set of
    cone(vectors) intersected with the saturated span lattice,
    in canonical (degree, lex) order. Raises NotSharp on a non-sharp cone.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors if any(v)]
    if not vectors:
        return []
    span = saturated_span_basis(vectors)
    coords = []
    for v in vectors:
        c = solve_left(span, v)
        assert c is not None and all(f.denominator == 1 for f in c), \
            "generator outside its own saturated span lattice"
        coords.append(tuple(int(f) for f in c))
    hb = _hilbert_full_dim(coords)
    return [combine(c, span) for c in hb]


def combine(coeffs, rows):
    """Integer combination sum_i coeffs[i] * rows[i]."""
    acc = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            for i, x in enumerate(r):
                acc[i] += c * x
    return tuple(acc)


def _hilbert_full_dim(vectors):
    dim = len(vectors[0])
    facets = facet_normals(vectors)
    rays = _extreme_rays(vectors, facets, dim)
    grading = tuple(sum(col) for col in zip(*facets))

    def deg(v):
        return dot(grading, v)

    candidates = {tuple(r) for r in rays}
    for simplex in _triangulate(rays, facets, dim):
        candidates.update(_parallelepiped_points(simplex))
    candidates.discard((0,) * dim)
    candidates = [c for c in candidates if all(dot(n, c) >= 0 for n in facets)]
    candidates.sort(key=lambda v: (deg(v), v))
    basis = []
    for c in candidates:
        if not monoid_member(c, basis, deg):
            basis.append(c)
    basis.sort(key=lambda v: (deg(v), v))
    return basis


def _extreme_rays(vectors, facets, dim):
    rays = set()
    for v in vectors:
        if dim == 1:
            rays.add(_primitive(v))
            continue
        zero = [n for n in facets if dot(n, v) == 0]
        if zero and _rat_rank(zero) == dim - 1:
            rays.add(_primitive(v))
    assert rays, "sharp full-dimensional cone must have extreme rays"
    return sorted(rays)


def _triangulate(rays, facets, dim):
    """Stellar triangulation from the first ray; simplices as ray lists."""
    rays = sorted(set(rays))
    if dim == 1 or (len(rays) == dim and _rat_rank(rays) == dim):
        return [rays]
    r0 = rays[0]
    simplices = []
    for n in facets:
        if dot(n, r0) == 0:
            continue
        face = [r for r in rays if dot(n, r) == 0]
        if not face:
            continue
        for sub in _triangulate_face(face):
            simplex = [r0] + sub
            if _rat_rank(simplex) == dim:
                simplices.append(simplex)
    assert simplices, "triangulation produced no simplices"
    return simplices


def _triangulate_face(face_rays):
    """Triangulate a proper face inside its own span coordinates."""
    span = saturated_span_basis(face_rays)
    coords = []
    for v in face_rays:
        c = solve_left(span, v)
        assert c is not None
        coords.append(tuple(int(f) for f in c))
    facets = facet_normals(coords)
    rays = _extreme_rays(coords, facets, len(span))
    return [[combine(c, span) for c in simplex]
            for simplex in _triangulate(rays, facets, len(span))]


def _parallelepiped_points(simplex):
    """Integer points of {sum t_i r_i : 0 <= t_i < 1}, rays independent."""
    dim = len(simplex[0])
    lo = [0] * dim
    hi = [0] * dim
    for r in simplex:
        for i, x in enumerate(r):
            if x < 0:
                lo[i] += x
            else:
                hi[i] += x
    points = []
    for cand in itertools.product(*(range(lo[i], hi[i] + 1)
                                    for i in range(dim))):
        if not any(cand):
            continue
        t = solve_left(simplex, cand)
        if t is not None and all(0 <= f < 1 for f in t):
            points.append(tuple(cand))
    return points


def monoid_member(v, gens, deg):
    """Is v a nonnegative integer combination of gens? Bounded DFS.

    deg must be a strictly positive grading on the nonzero vectors
    involved, which bounds the search depth.
    """
    v = tuple(v)
    if not any(v):
        return True
    if not gens:
        return False
    seen = set()

    def rec(cur, start):
        if not any(cur):
            return True
        if deg(cur) <= 0:
            return False
        if (cur, start) in seen:
            return False
        seen.add((cur, start))
        for i in range(start, len(gens)):
            if deg(gens[i]) > deg(cur):
                continue
            if rec(vec_sub(cur, gens[i]), i):
                return True
        return False

    return rec(v, 0)


# ---------------------------------------------------------------------------
# lattices with a remembered ambient embedding
# ---------------------------------------------------------------------------


class Lattice:
    """Free abelian group of finite rank embedded in a rational ambient space.

    Elements are integer coordinate tuples with respect to `basis`, whose
    rows are rational ambient vectors. The ambient space is shared along a
    chart's history so refined lattices stay comparable with their parents.
    """

    __slots__ = ("rank", "ambient_dim", "basis")

    def __init__(self, basis, ambient_dim):
        basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        for row in basis:
            assert len(row) == ambient_dim
        assert _rat_rank(basis) == len(basis), "basis rows must be independent"
        self.rank = len(basis)
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def standard(cls, rank):
        return cls([tuple(Fraction(1 if i == j else 0) for j in range(rank))
                    for i in range(rank)], rank)

    def __eq__(self, other):
        return (isinstance(other, Lattice)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Lattice(rank={}, ambient_dim={})".format(
            self.rank, self.ambient_dim)

    def to_ambient(self, coords):
        assert len(coords) == self.rank
        acc = [Fraction(0)] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c:
                for i, x in enumerate(row):
                    acc[i] += c * x
        return tuple(acc)

    def from_ambient(self, ambient):
        """Integer coordinates of an ambient vector, or None if outside."""
        sol = solve_left(self.basis, tuple(Fraction(x) for x in ambient))
        if sol is None or any(f.denominator != 1 for f in sol):
            return None
        return tuple(int(f) for f in sol)

    def coords_in(self, finer):
        """Integer matrix A with row i = coords of self.basis[i] in `finer`.

        Requires self to be a finite-index sublattice of `finer` (same
        rational span).
        """
        rows = []
        for b in self.basis:
            c = finer.from_ambient(b)
            assert c is not None, "lattice is not contained in the finer one"
            rows.append(c)
        return rows

    def refine(self, new_ambient_vectors):
        """Smallest lattice containing self and the given ambient vectors."""
        rows = list(self.basis) + [tuple(Fraction(x) for x in v)
                                   for v in new_ambient_vectors]
        den = 1
        for row in rows:
            for x in row:
                d = x.denominator
                den = den * d // gcd(den, d)
        int_rows = [tuple(int(x * den) for x in row) for row in rows]
        basis = [tuple(Fraction(x, den) for x in row)
                 for row in row_hnf(int_rows)]
        assert len(basis) == self.rank, "refinement changed the rank"
        return Lattice(basis, self.ambient_dim)

    def extend(self, count):
        """Grow the ambient space by `count` fresh unit axes."""
        n = self.ambient_dim
        basis = [row + (Fraction(0),) * count for row in self.basis]
        for k in range(count):
            basis.append(tuple(Fraction(1 if i == n + k else 0)
                               for i in range(n + count)))
        return Lattice(basis, n + count)

    def index_in(self, finer):
        rows = self.coords_in(finer)
        D, _, _ = snf_transform(rows)
        idx = 1
        for i in range(len(D)):
            idx *= abs(D[i][i])
        assert idx > 0, "not finite index"
        return idx


# ---------------------------------------------------------------------------
# characters (deck data of a Kummer cover)
# ---------------------------------------------------------------------------


def _reduce_char(vals):
    return tuple(Fraction(v) % 1 for v in vals)


def char_order(char):
    m = 1
    for v in char:
        d = v.denominator
        m = m * d // gcd(m, d)
    return m


def refinement_characters(old, new):
    """Characters of new/old as functionals on new-lattice coordinates.

    One character per nontrivial invariant factor of the inclusion, each a
    tuple of Fractions in [0, 1); evaluation is the dot product mod 1.
    """
    A = old.coords_in(new)
    D, _, V = snf_transform(A)
    chars = []
    r = new.rank
    for i in range(r):
        d = D[i][i] if i < len(D) and i < len(D[i]) else 0
        assert d != 0, "inclusion is not finite index"
        if abs(d) == 1:
            continue
        col = tuple(Fraction(V[j][i], d) for j in range(r))
        chars.append(_reduce_char(col))
    return chars


def transport_character(char, old, new):
    """Extend a character on `old` coordinates to `new` coordinates.

    Any extension represents the same deck element modulo the refinement
    characters, which accompany it in the chart's character list.
    """
    out = []
    for b in new.basis:
        c = solve_left(old.basis, b)
        assert c is not None, "lattices do not share a rational span"
        out.append(sum(ci * li for ci, li in zip(c, char)))
    return _reduce_char(out)


def evaluate_character(char, coords):
    return sum(l * c for l, c in zip(char, coords)) % 1


def invariant_sublattice(chars, rank):
    """Coordinate rows of {a : every character is integral on a}."""
    if not chars:
        return [tuple(1 if i == j else 0 for j in range(rank))
                for i in range(rank)]
    m = 1
    for ch in chars:
        m = m * char_order(ch) // gcd(m, char_order(ch))
    cols = [tuple(int(l * m) for l in ch) for ch in chars]
    k = len(cols)
    # (x, y) with x * (m*char) = m * y, i.e. kernel of [chars^T | -m I]
    stacked = []
    for i in range(rank):
        stacked.append(tuple(cols[j][i] for j in range(k)))
    for j in range(k):
        stacked.append(tuple(-m if i == j else 0 for i in range(k)))
    kern = left_integer_kernel(stacked)
    rows = [v[:rank] for v in kern if any(v[:rank])]
    basis = row_hnf(rows)
    assert len(basis) == rank, "invariant sublattice lost rank"
    return basis


def quotient_map(vector):
    """Projection data for a quotient by one primitive lattice vector.

    Returns (V, Vinv) where V is unimodular, coords c = x * V put the
    vector at e_1, and dropping c_1 is the quotient map. Vinv maps back.
    """
    v = tuple(int(x) for x in vector)
    assert any(v), "cannot quotient by zero"
    assert v == _primitive(v), "quotient vector must be primitive"
    D, _, V = snf_transform([v])
    assert abs(D[0][0]) == 1
    return V, _mat_inverse_int(V)


def _mat_inverse_int(rows):
    """Inverse of a unimodular integer matrix, exact, integer entries."""
    n = len(rows)
    out = []
    for i in range(n):
        unit = tuple(1 if j == i else 0 for j in range(n))
        sol = solve_left(rows, unit)
        # row i of the inverse solves row * M = e_i with M rows given
        assert sol is not None and all(f.denominator == 1 for f in sol)
        out.append(tuple(int(f) for f in sol))
    # out rows satisfy out[i] * M = e_i, so out = M^{-1} acting from the left
    return out


# ---------------------------------------------------------------------------
# sharp monoids and their ideals
# ---------------------------------------------------------------------------


class Monoid:
    """Finitely generated sharp submonoid of a lattice, full rank in it.

    Generators are kept as given (deduped, minimalized, canonical order);
    the monoid need not be saturated. Facet normals describe the rational
    cone it spans.
    """

    __slots__ = ("rank", "gens", "facets", "saturated", "_grading")

    def __init__(self, rank, gens):
        gens = [tuple(int(x) for x in g) for g in gens if any(g)]
        self.rank = rank
        if rank == 0 or not gens:
            assert not gens, "generators in a rank-zero lattice"
            assert rank == 0, "monoid must span its lattice"
            self.gens = ()
            self.facets = ()
            self.saturated = True
            self._grading = ()
            return
        assert all(len(g) == rank for g in gens)
        assert _rat_rank(gens) == rank, "monoid must span its lattice"
        facets = facet_normals(gens)
        self.facets = tuple(facets)
        self._grading = tuple(sum(col) for col in zip(*facets))
        ordered = sorted(set(gens), key=lambda g: (self.deg(g), g))
        minimal = []
        for g in ordered:
            if not monoid_member(g, [h for h in ordered if h != g], self.deg):
                minimal.append(g)
        self.gens = tuple(minimal)
        hb = hilbert_basis(list(self.gens))
        self.saturated = sorted(hb) == sorted(self.gens)

    @classmethod
    def saturated_from(cls, rank, vectors):
        """The saturated monoid generated by the vectors."""
        vectors = [tuple(v) for v in vectors if any(v)]
        if rank == 0 or not vectors:
            return cls(rank, [])
        return cls(rank, hilbert_basis(vectors))

    def deg(self, v):
        return dot(self._grading, v)

    def in_cone(self, v):
        return all(dot(n, v) >= 0 for n in self.facets)

    def contains(self, v):
        v = tuple(v)
        if len(v) != self.rank:
            return False
        if not any(v):
            return True
        if not self.in_cone(v):
            return False
        if self.saturated:
            return True
        return monoid_member(v, list(self.gens), self.deg)

    def divides(self, a, b):
        """a <= b in the monoid order, i.e. b - a lies in the monoid."""
        return self.contains(vec_sub(b, a))

    def __eq__(self, other):
        return (isinstance(other, Monoid) and self.rank == other.rank
                and self.gens == other.gens)

    def __hash__(self):
        return hash((self.rank, self.gens))

    def __repr__(self):
        return "Monoid(rank={}, gens={})".format(self.rank, list(self.gens))


def factor_over_gens(monoid, v, gens=None):
    """Canonical factorization of v as multiplicities over generators.

    Earlier generators greedily take maximal multiplicity, with DFS
    backtracking; deterministic, and total on monoid members. The optional
    `gens` list overrides monoid.gens (same monoid, chart-chosen order).
    """
    gens = list(monoid.gens if gens is None else gens)
    v = tuple(v)
    if not any(v):
        return (0,) * len(gens)
    deg = monoid.deg
    fail = set()

    def rec(cur, start):
        if not any(cur):
            return (0,) * (len(gens) - start)
        if start >= len(gens) or deg(cur) <= 0:
            return None
        if (cur, start) in fail:
            return None
        g = gens[start]
        dg = deg(g)
        top = deg(cur) // dg
        for mult in range(top, -1, -1):
            rest = vec_sub(cur, vec_scale(g, mult))
            if not monoid.in_cone(rest):
                continue
            tail = rec(rest, start + 1)
            if tail is not None:
                return (mult,) + tail
        fail.add((cur, start))
        return None

    out = rec(v, 0)
    assert out is not None, "vector is not a monoid element"
    return out


def minimal_ideal_gens(monoid, vectors):
    """Minimal generators of the monoid ideal generated by the vectors."""
    vecs = sorted({tuple(int(x) for x in v) for v in vectors},
                  key=lambda v: (monoid.deg(v), v) if monoid.rank else (0, v))
    out = []
    for v in vecs:
        if not any(monoid.divides(w, v) for w in out):
            out.append(v)
    return out


def ideal_sum(monoid, a, b):
    return minimal_ideal_gens(monoid, list(a) + list(b))


def ideal_product(monoid, a, b):
    return minimal_ideal_gens(monoid, [vec_add(x, y) for x in a for y in b])


def ideal_power(monoid, vectors, k):
    assert k >= 0
    if k == 0:
        return [(0,) * monoid.rank]
    out = list(vectors)
    for _ in range(k - 1):
        out = ideal_product(monoid, out, vectors)
    return out


def ideal_saturate(monoid, vectors):
    """Integral closure of a monoid ideal: monoid points of its Newton
    polyhedron conv(vectors) + cone(monoid), as minimal generators.

    Enumerates monoid elements up to a multiplicity bound and checks that
    the bound was not tight, so the result is exact.
    """
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        return []
    if monoid.rank == 0:
        return [()]
    if any(not any(v) for v in vecs):
        return [(0,) * monoid.rank]
    homog = [v + (1,) for v in vecs] + [g + (0,) for g in monoid.gens]
    facets = facet_normals(homog)

    def in_poly(v):
        vv = tuple(v) + (1,)
        return all(dot(n, vv) >= 0 for n in facets)

    bound = monoid.rank * max(sum(abs(x) for x in v) for v in vecs)
    frontier = {(0,) * monoid.rank: 0}
    elements = dict(frontier)
    for step in range(bound + 1):
        nxt = {}
        for v, mult in frontier.items():
            for g in monoid.gens:
                w = vec_add(v, g)
                if w not in elements or elements[w] > mult + 1:
                    nxt[w] = mult + 1
        merged = {}
        for w, mlt in nxt.items():
            if w not in elements:
                merged[w] = mlt
            elements[w] = min(elements.get(w, mlt), mlt)
        frontier = merged
        if not frontier:
            break
    members = [v for v in elements if any(v) and in_poly(v)]
    gens = minimal_ideal_gens(monoid, members)
    assert all(elements[g] <= bound for g in gens), \
        "saturation enumeration bound was tight; raise it"
    return gens


def toric_relations(ring_, vectors):
    """Defining relations of the semigroup ring on the given vectors.

    The variables are the ring's monomial variables, matched by position.
    Returns the reduced basis of the lattice-kernel binomial ideal
    saturated by the product of the variables, as ring elements.
    """
    from .ring import Ideal

    vectors = [tuple(v) for v in vectors]
    assert len(ring_.monomial) == len(vectors)
    if not vectors:
        return []
    kernel = left_integer_kernel(vectors)
    if not kernel:
        return []
    offset = len(ring_.ordinary)
    binomials = []
    for k in kernel:
        plus = [0] * ring_.nvars
        minus = [0] * ring_.nvars
        for i, e in enumerate(k):
            if e > 0:
                plus[offset + i] = e
            elif e < 0:
                minus[offset + i] = -e
        binomials.append(ring_.monomial_of(plus) - ring_.monomial_of(minus))
    ideal = Ideal(ring_, binomials)
    product = ring_.one()
    for name in ring_.monomial:
        product = product * ring_.var(name)
    saturated, _ = ideal.saturate(product)
    return list(saturated.groebner())
