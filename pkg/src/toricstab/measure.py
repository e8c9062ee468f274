"""Exact integration over a labelled polytope and over its boundary.

The boundary carries the measure ``dsigma`` defined facet by facet through
``dL_j ^ dsigma = -dv``; it is always treated as a positive measure, so on
the facet ``F_j`` it equals Euclidean surface measure divided by ``|u_j|``.

Volume integrals use a pulling triangulation (each face is coned from its
lexicographically smallest vertex), which is valid for non-simple
polytopes too, and closed-form simplex moments up to degree two.
"""
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .affine import AffineFunction, PLConvexFunction
from .errors import DegenerateSimplex, ToricError
from .linalg import det, dot
from .polytope import LabelledPolytope

__all__ = [
    "MomentTable", "Subdivision", "Cell", "moments", "facet_sigma_simplex",
    "simplex_moments", "triangulate", "pl_subdivision", "integrate_pl",
    "affine_integral", "affine_product_integral", "affine_boundary_integral",
]


@dataclass(frozen=True)
class MomentTable:
    """Exact moments of a polytope and of its facets.

    ``second[i][j]`` is the integral of ``x_i x_j``; ``facet_mass[j]`` and
    ``facet_first[j][i]`` are dsigma-integrals of ``1`` and ``x_i`` over the
    facet of label ``j``.
    """

    vol: Fraction
    first: tuple
    second: tuple
    facet_mass: tuple
    facet_first: tuple

    @property
    def dim(self):
        return len(self.first)

    @property
    def boundary_mass(self):
        return sum(self.facet_mass, Fraction(0))

    @property
    def boundary_first(self):
        return tuple(sum((row[i] for row in self.facet_first), Fraction(0))
                     for i in range(self.dim))

    @property
    def barycenter(self):
        return tuple(x / self.vol for x in self.first)


Cell = namedtuple("Cell", "piece polytope parent_labels")
Cell.__doc__ = """Region of a PL subdivision where ``piece`` attains the maximum.

``parent_labels`` maps label indices of the cell polytope to the labels of
the original polytope they came from (crease labels are absent)."""


@dataclass(frozen=True)
class Subdivision:
    regions: tuple


def triangulate(P, face=None, apex=None):
    """Simplices (tuples of vertex indices) dissecting ``face``.

    The face is coned from ``apex`` (default: its lexicographically
    smallest vertex) over a recursive triangulation of the subfaces not
    containing the apex.
    """
    memo = {}

    def rec(F, top):
        key = (F.vertices, top)
        if key in memo:
            return memo[key]
        if F.dim == 0:
            out = [tuple(F.vertices)]
        else:
            a = top if top is not None else min(F.vertices)
            out = []
            for G in P.subfaces(F):
                if a in G.vertices:
                    continue
                out.extend((a,) + s for s in rec(G, None))
        memo[key] = out
        return out

    F = P.whole if face is None else face
    if apex is not None and apex not in F.vertices:
        raise ValueError("apex is not a vertex of the face")
    return rec(F, apex)


def simplex_moments(points):
    """Volume, first and second moments of a full-dimensional simplex.

    Uses ``int x_i x_j = V/((m+1)(m+2)) (sum_k p_ki p_kj + s_i s_j)`` with
    ``s = sum_k p_k``.
    """
    m = len(points) - 1
    p0 = points[0]
    V = abs(det([[a - b for a, b in zip(p, p0)] for p in points[1:]])) / factorial(m)
    s = [sum(p[i] for p in points) for i in range(m)]
    first = [V * s[i] / (m + 1) for i in range(m)]
    c = V / ((m + 1) * (m + 2))
    second = [[c * (sum(p[i] * p[j] for p in points) + s[i] * s[j]) for j in range(m)]
              for i in range(m)]
    return V, first, second


def facet_sigma_simplex(points, normal):
    """dsigma-measure of an ``(m-1)``-simplex lying in a hyperplane with normal ``normal``.

    Computed as ``|det(v_2 - v_1, ..., v_m - v_1, w)| / (m-1)!`` with
    ``w = u / <u, u>`` so that ``<u, w> = 1``.
    """
    u = [Fraction(x) for x in normal]
    nn = dot(u, u)
    if nn == 0:
        raise DegenerateSimplex("zero normal")
    w = [x / nn for x in u]
    p0 = points[0]
    cols = [[a - b for a, b in zip(p, p0)] for p in points[1:]] + [w]
    val = abs(det(cols)) / factorial(len(points) - 1)
    if val == 0:
        raise DegenerateSimplex("simplex does not span the facet hyperplane")
    return val


def moments(P, root=None):
    """Exact :class:`MomentTable` of ``P``.

    ``root`` optionally selects the vertex index the top-level cone is
    pulled from; the result does not depend on it.
    """
    m = P.dim
    coords = [v.coords for v in P.vertices]
    vol = Fraction(0)
    first = [Fraction(0)] * m
    second = [[Fraction(0)] * m for _ in range(m)]
    for simplex in triangulate(P, apex=root):
        V, f1, f2 = simplex_moments([coords[i] for i in simplex])
        vol += V
        for i in range(m):
            first[i] += f1[i]
            for j in range(m):
                second[i][j] += f2[i][j]
    masses = []
    facet_first = []
    for j, L in enumerate(P.labels):
        F = P.facet(j)
        mass = Fraction(0)
        mom = [Fraction(0)] * m
        for simplex in triangulate(P, F):
            pts = [coords[i] for i in simplex]
            s = facet_sigma_simplex(pts, L.linear)
            mass += s
            for i in range(m):
                mom[i] += s * sum(p[i] for p in pts) / m
        masses.append(mass)
        facet_first.append(tuple(mom))
    return MomentTable(vol, tuple(first), tuple(tuple(r) for r in second),
                       tuple(masses), tuple(facet_first))


# -- contractions of a moment table with affine functions ------------------------

def affine_integral(mt, f):
    """Integral of the affine function ``f`` over the polytope."""
    return f.constant * mt.vol + dot(f.linear, mt.first)


def affine_product_integral(mt, f, g):
    """Integral of ``f * g`` for affine ``f, g``."""
    m = mt.dim
    quad = sum((f.linear[i] * g.linear[j] * mt.second[i][j]
                for i in range(m) for j in range(m)), Fraction(0))
    lin = dot([f.constant * b + g.constant * a for a, b in zip(f.linear, g.linear)], mt.first)
    return f.constant * g.constant * mt.vol + lin + quad


def affine_boundary_integral(mt, f, labels=None):
    """dsigma-integral of affine ``f`` over the facets listed in ``labels`` (default all)."""
    idx = range(len(mt.facet_mass)) if labels is None else labels
    return sum((f.constant * mt.facet_mass[j] + dot(f.linear, mt.facet_first[j]) for j in idx),
               Fraction(0))


# -- PL functions -----------------------------------------------------------------

def pl_subdivision(P, f):
    """Cells ``P ∩ {f_i >= f_k for all k}``, skipping empty and thin ones."""
    pieces = f.pieces
    regions = []
    parent_index = {L: j for j, L in enumerate(P.labels)}
    for i, fi in enumerate(pieces):
        extra = []
        empty = False
        for k, fk in enumerate(pieces):
            if k == i:
                continue
            g = fi - fk
            if g.is_constant():
                # identical pieces: the lowest index owns the region
                if g.constant < 0 or (g.constant == 0 and k < i):
                    empty = True
                    break
                continue
            extra.append(g)
        if empty:
            continue
        if not extra:
            cell = P
        else:
            try:
                cell = LabelledPolytope(list(P.labels) + extra, P.lattice, prune=True)
            except ToricError:
                continue
        parents = {q: parent_index[L] for q, L in enumerate(cell.labels) if L in parent_index}
        regions.append(Cell(i, cell, parents))
    return Subdivision(tuple(regions))


def _cell_moments(sub):
    for cell in sub.regions:
        yield cell, moments(cell.polytope)


def integrate_pl(P, f, subdivision=None):
    """Exact ``(int_P f dv, int_{dP} f dsigma)`` for a PL convex ``f``."""
    sub = pl_subdivision(P, f) if subdivision is None else subdivision
    vol_int = Fraction(0)
    bdry = Fraction(0)
    for cell, mt in _cell_moments(sub):
        fi = f.pieces[cell.piece]
        vol_int += affine_integral(mt, fi)
        bdry += affine_boundary_integral(mt, fi, sorted(cell.parent_labels))
    return vol_int, bdry
