"""Labelled polytopes: exact representation, combinatorics and constructions.

A labelled polytope is ``{x : L_j(x) = <u_j, x> + lambda_j >= 0}`` with the
labels ``L_j`` carried explicitly, together with an optional lattice of
normals. All data are :class:`fractions.Fraction`.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, floor, prod
import itertools

from .affine import AffineFunction, PLConvexFunction
from .errors import (DegenerateLabelling, EpsTooLarge, InputError, MissingLattice,
                     NotVertex, RNotDominant, SingularMatrix, UnboundedOrEmpty)
from .linalg import (det, dot, frac, fraction_str, inverse, lattice_basis, matvec,
                     nullspace, primitive, rank, solve, transpose, vec)

__all__ = [
    "LabelledPolytope", "VertexData", "Face", "DelzantReport", "Fan",
    "enumerate_vertices", "verify", "blow_up", "product", "weighted_projective",
    "test_configuration", "compute_fan", "lattice_points", "affine_transform",
    "interval", "box", "standard_simplex",
]


@dataclass(frozen=True)
class VertexData:
    coords: tuple
    active: frozenset


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by its vertex indices."""

    vertices: frozenset
    labels: frozenset
    dim: int


@dataclass
class DelzantReport:
    compact: bool
    simple: bool
    rational: object   # True / False / None ("not evaluated")
    integral: object
    failures: list = field(default_factory=list)

    @property
    def delzant(self):
        return bool(self.compact and self.simple and self.integral)

    def as_dict(self):
        def flag(v):
            return "not evaluated" if v is None else v
        return {"compact": self.compact, "simple": self.simple,
                "rational": flag(self.rational), "integral": flag(self.integral),
                "failures": list(self.failures)}


@dataclass(frozen=True)
class Fan:
    cones: tuple    # ((label indices of the face, (normals...)), ...)

    def rays(self):
        return [gens[0] for face, gens in self.cones if len(gens) == 1]


def _affine_rank(points):
    points = list(points)
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]])


class LabelledPolytope:
    """Half-space description with explicit labels and optional lattice.

    Parameters
    ----------
    labels : sequence of AffineFunction
        The labelling; the polytope is where every label is nonnegative.
    lattice : sequence of vectors, optional
        Basis vectors (the columns of the lattice matrix) of the lattice in
        which the normals are expected to live.
    prune : bool
        Drop redundant labels instead of rejecting them. Used internally
        when clipping polytopes; the first of two labels that cut out the
        same facet is kept.

    Compact inputs are checked for full-dimensionality and for a minimal
    labelling (every label cuts out a facet). Unbounded inputs are accepted
    so that :func:`verify` can report them.
    """

    def __init__(self, labels, lattice=None, *, prune=False):
        labels = [l if isinstance(l, AffineFunction) else AffineFunction(*l) for l in labels]
        if not labels:
            raise InputError("empty labelling")
        m = labels[0].dim
        if m < 1:
            raise InputError("dimension must be positive")
        for j, L in enumerate(labels):
            if L.dim != m:
                raise InputError(f"label {j} has dimension {L.dim}, expected {m}")
            if L.is_constant():
                raise DegenerateLabelling(f"label {j} has zero normal", j)
        if lattice is not None:
            lattice = tuple(vec(b) for b in lattice)
            if len(lattice) != m or any(len(b) != m for b in lattice):
                raise InputError("lattice basis must be m vectors of length m")
            if det(transpose(lattice)) == 0:
                raise InputError("lattice basis is singular")
        self.dim = m
        self.lattice = lattice
        labels = self._drop_multiples(labels, prune)
        self.labels = tuple(labels)
        if prune:
            self._prune()
        if len(self.labels) < m + 1:
            raise InputError(f"need at least {m + 1} labels, got {len(self.labels)}")
        if self.is_compact:
            self._check_full_and_minimal()

    @staticmethod
    def _drop_multiples(labels, prune):
        kept = []
        for j, L in enumerate(labels):
            dup = None
            for i, K in enumerate(kept):
                if _positive_multiple(L, K):
                    dup = i
                    break
            if dup is not None:
                if not prune:
                    raise DegenerateLabelling(
                        f"label {j} is a positive multiple of an earlier label", j)
                continue
            kept.append(L)
        return kept

    def _prune(self):
        if not self.is_compact:
            raise UnboundedOrEmpty("cannot prune labels of an unbounded region")
        verts = self._vertex_list()
        if _affine_rank(v.coords for v in verts) < self.dim:
            raise DegenerateLabelling("polytope is not full-dimensional")
        seen = set()
        keep = []
        for j in range(len(self.labels)):
            on = frozenset(i for i, v in enumerate(verts) if j in v.active)
            if on and _affine_rank(verts[i].coords for i in on) == self.dim - 1 \
                    and on not in seen:
                seen.add(on)
                keep.append(j)
        self.labels = tuple(self.labels[j] for j in keep)
        self.__dict__.pop("vertices", None)

    def _check_full_and_minimal(self):
        verts = self.vertices
        m = self.dim
        if _affine_rank(v.coords for v in verts) < m:
            raise DegenerateLabelling("polytope is not full-dimensional")
        seen = {}
        for j in range(len(self.labels)):
            on = frozenset(i for i, v in enumerate(verts) if j in v.active)
            if not on or _affine_rank(verts[i].coords for i in on) != m - 1:
                raise DegenerateLabelling(f"label {j} is redundant (does not cut out a facet)", j)
            if on in seen:
                raise DegenerateLabelling(
                    f"label {j} cuts out the same facet as label {seen[on]}", j)
            seen[on] = j

    # -- basic data ---------------------------------------------------------

    @property
    def normals(self):
        return [L.linear for L in self.labels]

    @property
    def offsets(self):
        return [L.constant for L in self.labels]

    @property
    def n_labels(self):
        return len(self.labels)

    def values(self, x):
        return [L(x) for L in self.labels]

    def contains(self, x, strict=False):
        vals = self.values(x)
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def with_labels(self, labels, *, lattice="same", prune=False):
        return LabelledPolytope(labels, self.lattice if lattice == "same" else lattice,
                                prune=prune)

    def __eq__(self, other):
        return (isinstance(other, LabelledPolytope) and self.labels == other.labels
                and self.lattice == other.lattice)

    def __hash__(self):
        return hash((self.labels, self.lattice))

    def __repr__(self):
        return f"LabelledPolytope(dim={self.dim}, labels={len(self.labels)})"

    # -- combinatorics ------------------------------------------------------

    @cached_property
    def is_compact(self):
        return _recession_cone_trivial(self.normals, self.dim)

    def _vertex_list(self):
        m = self.dim
        found = {}
        labels = self.labels
        for S in combinations(range(len(labels)), m):
            A = [list(labels[j].linear) for j in S]
            try:
                x = solve(A, [-labels[j].constant for j in S])
            except SingularMatrix:
                continue
            x = tuple(x)
            if x in found:
                continue
            vals = [L(x) for L in labels]
            if all(v >= 0 for v in vals):
                found[x] = frozenset(j for j, v in enumerate(vals) if v == 0)
        if not found:
            raise UnboundedOrEmpty("no vertex: region is empty or contains a line")
        return [VertexData(x, found[x]) for x in sorted(found)]

    @cached_property
    def vertices(self):
        return tuple(self._vertex_list())

    @cached_property
    def faces(self):
        """All nonempty faces, keyed by their vertex index sets."""
        if not self.is_compact:
            raise UnboundedOrEmpty("face lattice requested for an unbounded region")
        verts = self.vertices
        everything = frozenset(range(len(verts)))
        facet_sets = []
        for j in range(len(self.labels)):
            facet_sets.append(frozenset(i for i, v in enumerate(verts) if j in v.active))
        found = {everything}
        frontier = {everything}
        while frontier:
            new = set()
            for F in frontier:
                for S in facet_sets:
                    G = F & S
                    if G and G not in found:
                        new.add(G)
            found |= new
            frontier = new
        out = {}
        for F in found:
            labs = frozenset.intersection(*(verts[i].active for i in F)) if F != everything \
                else frozenset()
            out[F] = Face(F, labs, _affine_rank(verts[i].coords for i in F))
        return out

    def faces_of_dim(self, k):
        return sorted((f for f in self.faces.values() if f.dim == k),
                      key=lambda f: sorted(f.vertices))

    def subfaces(self, face):
        """Faces of dimension ``face.dim - 1`` contained in ``face``."""
        return sorted((g for g in self.faces.values()
                       if g.dim == face.dim - 1 and g.vertices < face.vertices),
                      key=lambda g: sorted(g.vertices))

    def facet(self, j):
        """The facet cut out by label ``j``."""
        verts = frozenset(i for i, v in enumerate(self.vertices) if j in v.active)
        return self.faces[verts]

    @property
    def whole(self):
        return self.faces[frozenset(range(len(self.vertices)))]

    def vertex_centroid(self):
        vs = self.vertices
        n = len(vs)
        return tuple(sum(v.coords[i] for v in vs) / n for i in range(self.dim))

    def lattice_matrix(self):
        if self.lattice is None:
            raise MissingLattice("operation needs a lattice basis")
        return transpose([list(b) for b in self.lattice])

    def lattice_coords(self, u):
        """Coordinates of a normal ``u`` in the lattice basis."""
        return solve(self.lattice_matrix(), list(u))


def _positive_multiple(L, K):
    ratio = None
    for a, b in itertools.chain(zip(L.linear, K.linear), [(L.constant, K.constant)]):
        if (a == 0) != (b == 0):
            return False
        if a == 0:
            continue
        r = a / b
        if r <= 0 or (ratio is not None and r != ratio):
            return False
        ratio = r
    return True


def _recession_cone_trivial(normals, m):
    """True iff ``{d != 0 : <u_j, d> >= 0 for all j}`` is empty.

    If the normals do not span, the cone contains a line. Otherwise the
    cone is pointed and is nontrivial exactly when it has an extreme ray,
    which is cut out by ``m - 1`` independent tight constraints.
    """
    U = [list(u) for u in normals]
    if rank(U) < m:
        return False
    if m == 1:
        candidates = [[Fraction(1)], [Fraction(-1)]]
    else:
        candidates = []
        for S in combinations(range(len(U)), m - 1):
            sub = [U[j] for j in S]
            if rank(sub) < m - 1:
                continue
            d = nullspace(sub, m)[0]
            candidates.append(d)
            candidates.append([-x for x in d])
    for d in candidates:
        if all(dot(u, d) >= 0 for u in U):
            return False
    return True


# -- operations ---------------------------------------------------------------

def enumerate_vertices(P):
    """Vertices of ``P`` sorted lexicographically, with their active labels."""
    return list(P.vertices)


def verify(P):
    """Check the Delzant conditions, returning a :class:`DelzantReport`.

    ``rational`` and ``integral`` are ``None`` when ``P`` has no lattice.
    """
    failures = []
    m = P.dim
    compact = P.is_compact
    if not compact:
        failures.append("not compact: nonzero recession direction exists")
    try:
        verts = P.vertices
    except UnboundedOrEmpty as exc:
        failures.append(f"no vertices: {exc}")
        verts = ()
    simple = bool(verts)
    for i, v in enumerate(verts):
        if len(v.active) != m:
            simple = False
            failures.append(f"vertex {i} {_fmt(v.coords)}: {len(v.active)} active labels, expected {m}")
        elif rank([list(P.labels[j].linear) for j in sorted(v.active)]) < m:
            simple = False
            failures.append(f"vertex {i} {_fmt(v.coords)}: active normals not a basis")
    if P.lattice is None:
        return DelzantReport(compact, simple, None, None, failures)
    rational = True
    coords = []
    for j, u in enumerate(P.normals):
        c = P.lattice_coords(u)
        coords.append(c)
        if any(x.denominator != 1 for x in c):
            rational = False
            failures.append(f"label {j}: normal {_fmt(u)} not in the lattice")
    integral = rational and bool(verts)
    if rational:
        for i, v in enumerate(verts):
            if len(v.active) != m:
                integral = False
                failures.append(f"vertex {i} {_fmt(v.coords)}: {len(v.active)} active normals "
                                f"cannot form a lattice basis")
                continue
            gens = [coords[j] for j in sorted(v.active)]
            basis = lattice_basis(gens)
            if len(basis) < m or abs(det(basis)) != 1:
                integral = False
                d = abs(det(basis)) if len(basis) == m else 0
                failures.append(
                    f"vertex {i} {_fmt(v.coords)}: active normals span a sublattice of index {d}"
                    if d else f"vertex {i} {_fmt(v.coords)}: active normals do not span the lattice")
    else:
        integral = False
        failures.append("integral: fails because some normal is not in the lattice")
    return DelzantReport(compact, simple, rational, integral, failures)


def _fmt(v):
    return "(" + ", ".join(fraction_str(x) for x in v) + ")"


def _find_vertex(P, vertex):
    if isinstance(vertex, int):
        try:
            return P.vertices[vertex]
        except IndexError as exc:
            raise NotVertex(f"no vertex with index {vertex}") from exc
    coords = vertex.coords if isinstance(vertex, VertexData) else vec(vertex)
    for v in P.vertices:
        if v.coords == tuple(coords):
            return v
    raise NotVertex(f"{_fmt(coords)} is not a vertex")


def blow_up(P, vertex, eps):
    """Cut off the simple vertex ``vertex`` at distance ``eps``.

    With a lattice the cut passes through ``v + eps*w_i`` for the primitive
    inward edge vectors ``w_i`` (in the dual lattice); without one the edge
    vectors are scaled so that each active label equals ``eps`` there.
    """
    eps = frac(eps)
    if eps <= 0:
        raise EpsTooLarge("eps must be positive")
    v = _find_vertex(P, vertex)
    m = P.dim
    active = sorted(v.active)
    U = [list(P.labels[j].linear) for j in active]
    if len(active) != m or rank(U) < m:
        raise NotVertex(f"vertex {_fmt(v.coords)} is not simple")
    W = transpose(inverse(U))    # column k: <u_i, w_k> = delta_ik
    scales = []
    for k in range(m):
        w = W[k]
        if P.lattice is not None:
            # coordinates of w in the dual lattice are its pairings with the basis
            c = matvec(transpose(P.lattice_matrix()), w)
            i = next(i for i, x in enumerate(c) if x != 0)
            scales.append(primitive(c)[i] / c[i])   # primitive w is s*w, <u_k, s*w> = s
        else:
            scales.append(Fraction(1))
    new_label = AffineFunction.constant_function(m, -eps)
    for k, j in enumerate(active):
        new_label = new_label + P.labels[j].scale(1 / scales[k])
    for u in P.vertices:
        if u.coords != v.coords and not new_label(u.coords) > 0:
            raise EpsTooLarge(f"eps={eps} cuts vertex {_fmt(u.coords)}")
    return LabelledPolytope(list(P.labels) + [new_label], P.lattice)


def product(P1, P2):
    m1, m2 = P1.dim, P2.dim
    labels = [L.extend(after=m2) for L in P1.labels] + [L.extend(before=m1) for L in P2.labels]
    lattice = None
    if P1.lattice is not None and P2.lattice is not None:
        z1, z2 = (Fraction(0),) * m1, (Fraction(0),) * m2
        lattice = [tuple(b) + z2 for b in P1.lattice] + [z1 + tuple(b) for b in P2.lattice]
    return LabelledPolytope(labels, lattice)


def weighted_projective(a):
    """Labelled simplex and lattice of the weighted projective space ``CP^m_a``.

    ``L_j = (a_0...a_m / a_j) x_j`` for ``j = 1..m`` and
    ``L_{m+1} = (a_0...a_m / a_0)(1/2 - sum x_j)``.
    """
    a = [int(x) for x in a]
    if len(a) < 2 or any(x <= 0 for x in a):
        raise InputError("weights must be at least two positive integers")
    from math import gcd
    g = 0
    for x in a:
        g = gcd(g, x)
    if g != 1:
        raise InputError("weights must have gcd 1")
    m = len(a) - 1
    Pi = prod(a)
    labels = []
    gens = []
    for j in range(1, m + 1):
        c = Fraction(Pi, a[j])
        e = [Fraction(0)] * m
        e[j - 1] = c
        labels.append(AffineFunction(e, 0))
        gens.append(e)
    c0 = Fraction(Pi, a[0])
    labels.append(AffineFunction([-c0] * m, c0 / 2))
    gens.append([c0] * m)
    basis = lattice_basis(gens)
    return LabelledPolytope(labels, basis)


def test_configuration(P, f, R):
    """The ``(m+1)``-polytope ``{x in P, 0 <= t <= R - f(x)}``.

    Labels are the labels of ``P``, ``t``, and ``R - t - f_i`` for each
    piece ``f_i``; pieces that never support the roof are dropped.
    """
    R = frac(R)
    m = P.dim
    if f.dim != m:
        raise InputError("PL function dimension does not match the polytope")
    for v in P.vertices:      # R - f is concave: its minimum is at a vertex
        if R - f(v.coords) <= 0:
            raise RNotDominant(f"R - f <= 0 at vertex {_fmt(v.coords)}")
    e_t = AffineFunction((Fraction(0),) * m + (Fraction(1),), 0)
    labels = [L.extend(after=1) for L in P.labels] + [e_t]
    for fi in f.pieces:
        labels.append(AffineFunction(tuple(-a for a in fi.linear) + (Fraction(-1),),
                                     R - fi.constant))
    lattice = None
    if P.lattice is not None:
        lattice = [tuple(b) + (Fraction(0),) for b in P.lattice] + \
                  [(Fraction(0),) * m + (Fraction(1),)]
    return LabelledPolytope(labels, lattice, prune=True)


test_configuration.__test__ = False     # not a pytest test despite the name


def compute_fan(P):
    """One cone per face, generated by the normals of the labels vanishing on it."""
    cones = []
    for face in sorted(P.faces.values(), key=lambda F: (-F.dim, sorted(F.labels))):
        idx = tuple(sorted(face.labels))
        cones.append((idx, tuple(P.labels[j].linear for j in idx)))
    return Fan(tuple(cones))


def lattice_points(P):
    """Points of the dual lattice lying in ``P`` (boundary included), sorted."""
    B = P.lattice_matrix()
    if not P.is_compact:
        raise UnboundedOrEmpty("lattice points of an unbounded region")
    Bt = transpose(B)
    # c = B^T x are the integer coordinates of x in the dual lattice
    coords = [matvec(Bt, v.coords) for v in P.vertices]
    lo = [floor(min(c[i] for c in coords)) for i in range(P.dim)]
    hi = [ceil(max(c[i] for c in coords)) for i in range(P.dim)]
    BtInv = inverse(Bt)
    out = []
    for c in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        x = tuple(matvec(BtInv, [Fraction(k) for k in c]))
        if P.contains(x):
            out.append(x)
    return sorted(out)


def affine_transform(P, A, b):
    """Push ``P`` forward along ``T(x) = A x + b``.

    Labels become ``L o T^{-1}``; normals and the lattice basis transform
    by ``A^{-T}``.
    """
    A = [list(vec(r)) for r in A]
    b = list(vec(b))
    AinvT = transpose(inverse(A))
    labels = []
    for L in P.labels:
        u = matvec(AinvT, L.linear)
        labels.append(AffineFunction(u, L.constant - dot(u, b)))
    lattice = None
    if P.lattice is not None:
        lattice = [matvec(AinvT, bb) for bb in P.lattice]
    return LabelledPolytope(labels, lattice)


# -- fixtures -------------------------------------------------------------------

def interval(a=0, b=1, r_left=1, r_right=1, lattice=True):
    """Labelled interval ``[a, b]`` with labels ``(x-a)/r_left, (b-x)/r_right``."""
    a, b, rl, rr = frac(a), frac(b), frac(r_left), frac(r_right)
    labels = [AffineFunction([1 / rl], -a / rl), AffineFunction([-1 / rr], b / rr)]
    return LabelledPolytope(labels, [[1]] if lattice else None)


def box(*sides):
    """Axis-aligned box ``prod [0, s_i]`` with standard lattice."""
    m = len(sides)
    labels = []
    for i, s in enumerate(sides):
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        labels.append(AffineFunction(e, 0))
        labels.append(AffineFunction([-x for x in e], frac(s)))
    std = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    return LabelledPolytope(labels, std)


def standard_simplex(m, size=1):
    """``{x_j >= 0, size - sum x_j >= 0}`` with standard lattice."""
    labels = []
    for i in range(m):
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        labels.append(AffineFunction(e, 0))
    labels.append(AffineFunction([Fraction(-1)] * m, frac(size)))
    std = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    return LabelledPolytope(labels, std)
