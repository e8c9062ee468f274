"""Quadrature rules over labelled polytopes and their facets.

Two families:

* exact rules: Gauss-Legendre on collapsed (Duffy) coordinates over a
  pulling triangulation, exact for polynomials of a given degree;
* graded rules for integrands that are smooth inside but only ``L log L``
  regular at the boundary. The polytope is cut along its barycentric flag
  subdivision, so in each piece the boundary is reached as some collapsed
  coordinate tends to 1, and each coordinate uses composite Gauss rules on
  ``[0, 1/2], [1/2, 3/4], ...`` accumulating at 1.
"""
from functools import lru_cache
from itertools import product as iproduct

import numpy as np

from .measure import triangulate

__all__ = ["Rule", "gauss_graded", "duffy_rule", "exact_volume_rule", "exact_facet_rules",
           "graded_volume_rule", "graded_facet_rules", "flags"]


class Rule:
    """Points ``(N, m)`` and weights ``(N,)``; ``integrate`` sums ``w * f(X)``."""

    def __init__(self, points, weights):
        self.points = np.asarray(points, dtype=float)
        self.weights = np.asarray(weights, dtype=float)

    def __len__(self):
        return len(self.weights)

    def integrate(self, values):
        return float(np.sum(self.weights * values))

    @staticmethod
    def concat(rules):
        rules = list(rules)
        return Rule(np.concatenate([r.points for r in rules]),
                    np.concatenate([r.weights for r in rules]))


def _gauss(n):
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1) / 2, w / 2


def gauss_graded(n, levels):
    """Composite ``n``-point Gauss rule on ``[0, 1]`` graded toward 1."""
    t0, w0 = _gauss(n)
    cuts = [0.0] + [1.0 - 2.0 ** -k for k in range(1, levels + 1)] + [1.0]
    ts, ws = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        ts.append(a + (b - a) * t0)
        ws.append((b - a) * w0)
    return np.concatenate(ts), np.concatenate(ws)


def duffy_rule(pts, t1d, w1d, extra=None):
    """Map a tensor rule on ``[0,1]^k`` onto the simplex ``pts[0..k]``.

    ``x = p_0 + t_1 (d_1 + t_2 (d_2 + ...))`` with ``d_i = p_i - p_{i-1}``,
    Jacobian ``|det(d_1..d_k[, extra])| * prod t_i^(k-i)``. ``extra`` is
    the transversal vector used for the facet measure.
    """
    pts = np.asarray(pts, dtype=float)
    k = len(pts) - 1
    cols = [pts[i] - pts[i - 1] for i in range(1, k + 1)]
    if extra is not None:
        cols.append(np.asarray(extra, dtype=float))
    jac = abs(np.linalg.det(np.array(cols).T)) if cols else 1.0
    if k == 0:
        return Rule(pts[:1], np.array([jac]))
    T = np.array(list(iproduct(t1d, repeat=k)))
    W = np.prod(np.array(list(iproduct(w1d, repeat=k))), axis=1)
    X = np.repeat(pts[:1], len(T), axis=0)
    scale = np.ones(len(T))
    for i in range(k):
        scale = scale * T[:, i]
        X = X + scale[:, None] * cols[i][None, :]
        W = W * T[:, i] ** (k - 1 - i)
    return Rule(X, W * jac)


def _coords(P):
    return np.array([[float(c) for c in v.coords] for v in P.vertices])


def _centroid(V, face):
    return V[sorted(face.vertices)].mean(axis=0)


def flags(P, face):
    """Chains of centroids ``face > ... > vertex`` (the barycentric flag simplices)."""
    V = _coords(P)
    out = []

    def rec(F, chain):
        chain = chain + [_centroid(V, F)]
        if F.dim == 0:
            out.append(np.array(chain))
            return
        for G in P.subfaces(F):
            rec(G, chain)

    rec(face, [])
    return out


def _facet_vector(L):
    u = np.array([float(a) for a in L.linear])
    return u / u.dot(u)


@lru_cache(maxsize=64)
def graded_volume_rule(P, n, levels):
    t, w = gauss_graded(n, levels)
    return Rule.concat(duffy_rule(ch, t, w) for ch in flags(P, P.whole))


@lru_cache(maxsize=64)
def graded_facet_rules(P, n, levels):
    """One graded rule per label for the facet measure dsigma."""
    t, w = gauss_graded(n, levels)
    return tuple(Rule.concat(duffy_rule(ch, t, w, _facet_vector(L)) for ch in flags(P, P.facet(j)))
                 for j, L in enumerate(P.labels))


@lru_cache(maxsize=64)
def exact_volume_rule(P, degree):
    m = P.dim
    t, w = _gauss(max(1, (degree + m) // 2 + 1))
    V = _coords(P)
    return Rule.concat(duffy_rule(V[list(s)], t, w) for s in triangulate(P))


@lru_cache(maxsize=64)
def exact_facet_rules(P, degree):
    m = P.dim
    t, w = _gauss(max(1, (degree + m - 1) // 2 + 1))
    V = _coords(P)
    return tuple(Rule.concat(duffy_rule(V[list(s)], t, w, _facet_vector(L))
                             for s in triangulate(P, P.facet(j)))
                 for j, L in enumerate(P.labels))
