"""Extremal affine function, Donaldson-Futaki invariant and stability probes.

For a labelled polytope the Futaki functional is

    F(f) = 2 * int_{dP} f dsigma - int_P s f dv

where ``s`` is the extremal affine function, characterised by ``F`` vanishing
on every affine ``f``. All quantities here are exact rationals except the
``l2`` norm, which needs a square root.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import gcd, sqrt

from .affine import AffineFunction, PLConvexFunction
from .errors import (InputError, NotNormalized, SingularMatrix, SingularSystem,
                     ToricError, XStarNotInterior)
from .linalg import dot, frac, solve, vec
from .measure import (affine_boundary_integral, affine_integral, affine_product_integral,
                      integrate_pl, moments, pl_subdivision)
from .polytope import LabelledPolytope, test_configuration

__all__ = [
    "ExtremalFunction", "StabilityReport", "MonotoneLabelling", "extremal_affine",
    "futaki", "normalize_star", "star_norm", "crease_scan", "scan_directions",
    "monotone_labelling", "futaki_via_configuration", "NORMS",
]

NORMS = ("star", "l1", "l2")


@dataclass(frozen=True)
class ExtremalFunction:
    """``s(x) = a0 + <a, x>``."""

    a0: Fraction
    a: tuple

    def __call__(self, x):
        return self.a0 + dot(self.a, x)

    def as_affine(self):
        return AffineFunction(self.a, self.a0)

    def is_constant(self):
        return all(c == 0 for c in self.a)


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of :func:`crease_scan`.

    ``min_ratio`` is the smallest ``F(f) / ||f||`` seen; ``witness`` is the
    crease attaining it. ``min_ratio_exact`` is ``None`` for the ``l2`` norm.
    A positive minimum is evidence, not a certificate.
    """

    min_ratio: float
    witness: PLConvexFunction
    tested: int
    margin_norm: str
    min_ratio_exact: object = None
    direction: tuple = ()
    offset: Fraction = Fraction(0)


@dataclass(frozen=True)
class MonotoneLabelling:
    x_star: tuple
    labels_star: tuple
    lam: Fraction
    polytope: LabelledPolytope
    extremal: ExtremalFunction


def _mt(P, mt):
    return moments(P) if mt is None else mt


def extremal_affine(P, mt=None):
    """Solve for the extremal affine function of ``P``.

    The unknowns ``(a0, a)`` satisfy

        [[vol,   first^T],    [a0]       [sum_j mass_j      ]
         [first, second ]] .  [a ]  = 2 .[sum_j facet_first_j]

    which is the statement ``F(1) = F(x_i) = 0``.
    """
    mt = _mt(P, mt)
    m = mt.dim
    A = [[mt.vol] + list(mt.first)]
    for i in range(m):
        A.append([mt.first[i]] + list(mt.second[i]))
    rhs = [2 * mt.boundary_mass] + [2 * c for c in mt.boundary_first]
    try:
        sol = solve(A, rhs)
    except SingularMatrix as exc:
        raise SingularSystem("moment matrix is singular; polytope is degenerate") from exc
    return ExtremalFunction(sol[0], tuple(sol[1:]))


def futaki(P, f, *, mt=None, s=None):
    """Exact Donaldson-Futaki invariant of the PL convex function ``f``."""
    if isinstance(f, AffineFunction):
        f = PLConvexFunction.affine(f)
    mt = _mt(P, mt)
    s = extremal_affine(P, mt) if s is None else s
    sa = s.as_affine()
    bdry = Fraction(0)
    vol_term = Fraction(0)
    for cell in pl_subdivision(P, f).regions:
        cm = moments(cell.polytope)
        fi = f.pieces[cell.piece]
        bdry += affine_boundary_integral(cm, fi, sorted(cell.parent_labels))
        vol_term += affine_product_integral(cm, sa, fi)
    return 2 * bdry - vol_term


def _default_x0(P, mt=None):
    return _mt(P, mt).barycenter


def _supporting_piece(f, x0):
    return f.pieces[min(f.active(x0))]


def normalize_star(P, f, x0=None, *, mt=None):
    """Subtract from ``f`` its supporting affine function at ``x0``.

    The subgradient is the gradient of the lowest-index piece active at
    ``x0`` (default: the barycenter). The result is convex, nonnegative and
    vanishes at ``x0``.
    """
    x0 = _default_x0(P, mt) if x0 is None else vec(x0)
    if not P.contains(x0, strict=True):
        raise InputError("normalization point must be interior")
    g = _supporting_piece(f, x0)
    return f.shift(g)


def _check_normalized(f, x0):
    if f(x0) != 0:
        raise NotNormalized(f"f(x0) = {f(x0)}, expected 0")
    if not any(p.is_constant() for i, p in enumerate(f.pieces) if i in f.active(x0)):
        raise NotNormalized("no active piece at x0 is identically zero")


def star_norm(P, f, x0=None, *, norm="star", mt=None):
    """Norm of a normalized PL function.

    ``norm="star"`` is the boundary integral ``int_{dP} f dsigma`` (exact),
    ``"l1"`` is ``int_P f dv`` (exact) and ``"l2"`` is the float
    ``sqrt(int_P f^2 dv)``.
    """
    if norm not in NORMS:
        raise InputError(f"unknown norm {norm!r}; choose one of {NORMS}")
    x0 = _default_x0(P, mt) if x0 is None else vec(x0)
    _check_normalized(f, x0)
    if norm == "l2":
        total = Fraction(0)
        for cell in pl_subdivision(P, f).regions:
            fi = f.pieces[cell.piece]
            total += affine_product_integral(moments(cell.polytope), fi, fi)
        return sqrt(total)
    vol_int, bdry = integrate_pl(P, f)
    return bdry if norm == "star" else vol_int


# -- crease scan ------------------------------------------------------------------

def scan_directions(m, bound):
    """Primitive integer vectors up to sign with ``max |p_i| <= bound``.

    The sign is fixed by making the first nonzero entry positive.
    """
    out = []
    for p in iproduct(range(-bound, bound + 1), repeat=m):
        nz = [x for x in p if x != 0]
        if not nz or nz[0] < 0:
            continue
        g = 0
        for x in p:
            g = gcd(g, x)
        if g == 1:
            out.append(p)
    return sorted(out)


def crease_scan(P, denom_bound, offsets, *, directions=None, norm="star", x0=None):
    """Minimise ``F(f) / ||f||`` over simple creases ``max(0, <p, x> - c)``.

    Directions are all primitive ``p`` with ``|p|_inf <= denom_bound`` (only
    enumerated for ``m <= 2``; pass ``directions`` otherwise). Offsets are
    the ``offsets`` interior points of a uniform grid on the support
    interval of ``<p, x>``. Each crease is normalized at ``x0`` (default:
    the barycenter) before its norm is taken. Since ``F`` kills affine
    functions, ``F(f)`` equals ``F`` of the normalized function.
    """
    if norm not in NORMS:
        raise InputError(f"unknown norm {norm!r}; choose one of {NORMS}")
    m = P.dim
    if directions is None:
        if m > 2:
            raise InputError("direction enumeration is limited to m <= 2; pass directions")
        directions = scan_directions(m, int(denom_bound))
    offsets = int(offsets)
    if offsets < 1:
        raise InputError("need at least one offset")
    mt = moments(P)
    s = extremal_affine(P, mt)
    x0 = mt.barycenter if x0 is None else vec(x0)
    best = None
    tested = 0
    for p in directions:
        p = vec(p)
        vals = [dot(p, v.coords) for v in P.vertices]
        a, b = min(vals), max(vals)
        if a == b:
            continue
        for k in range(1, offsets + 1):
            c = a + (b - a) * k / (offsets + 1)
            f = PLConvexFunction.crease(AffineFunction(p, -c))
            g = _supporting_piece(f, x0)
            F = futaki(P, f, mt=mt, s=s)
            if norm == "l2":
                nrm = star_norm(P, f.shift(g), x0, norm="l2", mt=mt)
            else:
                vol_int, bdry = integrate_pl(P, f)
                if norm == "star":
                    nrm = bdry - affine_boundary_integral(mt, g)
                else:
                    nrm = vol_int - affine_integral(mt, g)
            if nrm == 0:
                continue        # f is affine on P
            tested += 1
            ratio = F / nrm if norm != "l2" else float(F) / nrm
            key = (ratio, tuple(p), c)
            if best is None or key < best[0]:
                best = (key, f)
    if best is None:
        raise InputError("no crease meets the interior of the polytope")
    (ratio, p, c), f = best
    exact = ratio if norm != "l2" else None
    return StabilityReport(float(ratio), f, tested, norm, exact, p, c)


# -- monotone labelling -----------------------------------------------------------

def monotone_labelling(P):
    """Rescale the labels so that the extremal function becomes constant.

    Work in coordinates ``y = x - x0`` around the barycenter with labels
    rescaled to ``L_j(x0) = 1``. There

        y*_i = (vol * int_{dP} y_i dsigma - int_P y_i dv * int_{dP} dsigma) / vol^2

    and the new labels are ``L_j / L_j(x*)``, which all equal 1 at ``x*``.
    """
    m = P.dim
    x0 = moments(P).barycenter
    shifted = []
    for L in P.labels:
        c = L(x0)
        shifted.append(AffineFunction(L.linear, c).scale(1 / c))
    mt = moments(LabelledPolytope(shifted))
    vol = mt.vol
    ystar = [(vol * mt.boundary_first[i] - mt.first[i] * mt.boundary_mass) / vol ** 2
             for i in range(m)]
    xstar = tuple(y + c for y, c in zip(ystar, x0))
    if not P.contains(xstar, strict=True):
        raise XStarNotInterior(f"x* = {tuple(str(x) for x in xstar)} is not interior")
    labels = tuple(L.scale(1 / L(xstar)) for L in P.labels)
    Pstar = LabelledPolytope(labels, P.lattice)
    s = extremal_affine(Pstar)
    if not s.is_constant() or any(L(xstar) != 1 for L in labels):
        raise ToricError("monotone labelling postcondition failed")
    return MonotoneLabelling(xstar, labels, Fraction(1), Pstar, s)


# -- test configurations ----------------------------------------------------------

def futaki_via_configuration(P, f, R):
    """``F(f)`` recomputed from the test-configuration polytope.

    With ``Q = {x in P, 0 <= t <= R - f(x)}`` the boundary of ``Q`` splits
    into the floor (a copy of ``P``), the roof and the walls over ``dP``,
    which gives

        F(f) = int_Q s dv - 2 int_{dQ} dsigma + 4 vol(P).
    """
    if isinstance(f, AffineFunction):
        f = PLConvexFunction.affine(f)
    R = frac(R)
    Q = test_configuration(P, f, R)
    mtP = moments(P)
    s = extremal_affine(P, mtP)
    mtQ = moments(Q)
    s_ext = AffineFunction(tuple(s.a) + (Fraction(0),), s.a0)
    return affine_integral(mtQ, s_ext) - 2 * mtQ.boundary_mass + 4 * mtP.vol
