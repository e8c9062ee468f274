"""Symplectic potentials, Abreu scalar curvature and the relative K-energy.

A potential is ``u = 1/2 sum_j L_j log L_j + q`` with ``q`` a polynomial.
Writing ``G = Hess u`` and ``H = G^{-1}``, the derivatives of ``H`` follow
from differentiating ``G H = I``:

    H_{,k}  = -H G_k H
    H_{,kl} = H G_k H G_l H + H G_l H G_k H - H G_kl H

and the scalar curvature is ``s = -sum_ij H_{ij,ij}``. Everything is batched
over points with numpy.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (EmptyCrease, InputError, NoConvergence, NotConvexAt, NotMonotone,
                     OnBoundary, QuadratureNotConverged, ToricError)
from .extremal import extremal_affine
from .linalg import vec
from .measure import moments, triangulate
from .polynomial import Polynomial
from .polytope import LabelledPolytope
from .quadrature import (Rule, duffy_rule, exact_facet_rules, exact_volume_rule,
                         graded_facet_rules, graded_volume_rule, _gauss)

__all__ = [
    "SymplecticPotential", "DerivativeBundle", "MetricSample", "BoundaryReport",
    "RicciPotentialReport", "guillemin", "derivatives", "metric_sample", "metric_arrays",
    "check_boundary_conditions", "l2_projection_check", "legendre", "inverse_gradient",
    "k_energy", "ricci_potential", "crease_futaki_via_H", "interior_grid",
]


class SymplecticPotential:
    """Canonical potential of ``polytope`` plus a polynomial correction."""

    def __init__(self, polytope, correction=None):
        self.polytope = polytope
        m = polytope.dim
        self.correction = Polynomial.zero(m) if correction is None else correction
        if self.correction.dim != m:
            raise InputError("correction dimension does not match the polytope")
        self._U = np.array([[float(a) for a in L.linear] for L in polytope.labels])
        self._lam = np.array([float(L.constant) for L in polytope.labels])

    @property
    def dim(self):
        return self.polytope.dim

    def with_correction(self, q):
        return SymplecticPotential(self.polytope, q)

    def __add__(self, q):
        return SymplecticPotential(self.polytope, self.correction + q)

    def label_values(self, X):
        return np.atleast_2d(X) @ self._U.T + self._lam

    def arrays(self, X, order=4):
        """``(value, grad, G, G3, G4)`` at ``(N, m)`` points.

        Raises :class:`OnBoundary` if some label is not positive.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Lv = self.label_values(X)
        if np.any(Lv <= 0):
            i = int(np.argmax(np.any(Lv <= 0, axis=1)))
            raise OnBoundary(f"point {X[i].tolist()} is not interior")
        U = self._U
        q = self.correction
        logL = np.log(Lv)
        value = 0.5 * np.sum(Lv * logL, axis=1) + q(X)
        grad = 0.5 * (logL + 1.0) @ U + q.derivative_tensor(X, 1)
        G = np.einsum("nj,ja,jb->nab", 0.5 / Lv, U, U) + q.derivative_tensor(X, 2)
        out = [value, grad, G]
        if order >= 3:
            out.append(np.einsum("nj,ja,jb,jc->nabc", -0.5 / Lv ** 2, U, U, U)
                       + q.derivative_tensor(X, 3))
        if order >= 4:
            out.append(np.einsum("nj,ja,jb,jc,jd->nabcd", 1.0 / Lv ** 3, U, U, U, U)
                       + q.derivative_tensor(X, 4))
        return tuple(out)

    def __call__(self, X):
        return self.arrays(X, order=2)[0]


def guillemin(P):
    """The canonical potential ``1/2 sum L_j log L_j``."""
    return SymplecticPotential(P)


@dataclass
class DerivativeBundle:
    value: float
    grad: np.ndarray
    G: np.ndarray
    G3: np.ndarray
    G4: np.ndarray


@dataclass
class MetricSample:
    x: np.ndarray
    H: np.ndarray
    scalar_curvature: float
    ricci: np.ndarray


def derivatives(u, x):
    value, grad, G, G3, G4 = u.arrays(np.asarray(x, dtype=float)[None, :])
    return DerivativeBundle(float(value[0]), grad[0], G[0], G3[0], G4[0])


def metric_arrays(u, X):
    """Batched ``(H, dH, ddH, s, ricci)``.

    ``dH[n, i, j, k] = H_{ij,k}`` and ``ddH[n, i, j, k, l] = H_{ij,kl}``.
    Raises :class:`NotConvexAt` at the first point where ``G`` is not
    positive definite.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    _, _, G, G3, G4 = u.arrays(X)
    try:
        C = np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        C = None
    if C is None or not np.all(np.isfinite(C)):
        bad = np.linalg.eigvalsh(G).min(axis=1) <= 0
        i = int(np.argmax(bad))
        raise NotConvexAt(f"Hessian not positive definite at {X[i].tolist()}", X[i])
    H = np.linalg.inv(G)
    H = 0.5 * (H + np.swapaxes(H, 1, 2))
    A = np.einsum("nia,nabk,nbj->nkij", H, G3, H)        # H G_k H
    dH = -np.moveaxis(A, 1, 3)
    T = np.einsum("nkia,nabl,nbj->nijkl", A, G3, H)       # H G_k H G_l H
    ddH = T + np.swapaxes(T, 3, 4) - np.einsum("nia,nabkl,nbj->nijkl", H, G4, H)
    s = -np.einsum("nijij->n", ddH)
    ricci = -0.5 * np.einsum("nijik->nkj", ddH)
    return H, dH, ddH, s, ricci


def metric_sample(u, x):
    x = np.asarray(x, dtype=float)
    H, _, _, s, ricci = metric_arrays(u, x[None, :])
    return MetricSample(x, H[0], float(s[0]), ricci[0])


def interior_grid(P, n, margin=0.0):
    """Points of an ``n^m`` tensor grid over the bounding box, kept if interior.

    A point is kept when every label exceeds ``margin``; the grid uses cell
    midpoints so boundary points never appear.
    """
    V = np.array([[float(c) for c in v.coords] for v in P.vertices])
    lo, hi = V.min(axis=0), V.max(axis=0)
    axes = [lo[i] + (hi[i] - lo[i]) * (np.arange(n) + 0.5) / n for i in range(P.dim)]
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, P.dim)
    U = np.array([[float(a) for a in L.linear] for L in P.labels])
    lam = np.array([float(L.constant) for L in P.labels])
    keep = np.all(X @ U.T + lam > margin, axis=1)
    return X[keep]


# -- boundary behaviour -------------------------------------------------------------

@dataclass
class BoundaryReport:
    facet: int
    passed: bool
    max_deviation: float
    H_limit: list            # extrapolated H(u_j, .) per base point
    dH_limit: list           # extrapolated (u_j^T H_{,k} u_j)_k per base point
    expected_dH: list


def _extrapolate(deltas, values):
    """Value at 0 of the interpolating polynomial through ``(deltas, values)`` (Neville)."""
    d = np.asarray(deltas, dtype=float)
    P = [np.asarray(v, dtype=float) for v in values]
    n = len(d)
    for k in range(1, n):
        P = [(d[i + k] * P[i] - d[i] * P[i + 1]) / (d[i + k] - d[i]) for i in range(n - k)]
    return P[0]


def check_boundary_conditions(u, j, approach_samples=5, tol=1e-6, delta0=0.02):
    """Check ``H(u_j, .) -> 0`` and ``dH(u_j, u_j) -> 2 u_j`` on the facet ``j``.

    Base points are spread over the facet (its centroid and points pulled
    halfway toward each facet vertex). From each base point ``b`` we move
    toward the polytope's vertex centroid ``c`` by ``delta (c - b)`` for
    five geometric ``delta`` and extrapolate to ``delta = 0``.
    """
    P = u.polytope
    V = np.array([[float(c) for c in v.coords] for v in P.vertices])
    F = P.facet(j)
    fv = V[sorted(F.vertices)]
    fc = fv.mean(axis=0)
    bases = [fc] + [0.5 * (fc + v) for v in fv]
    bases = bases[:max(1, approach_samples)]
    c = V.mean(axis=0)
    uj = np.array([float(a) for a in P.labels[j].linear])
    deltas = delta0 * 0.5 ** np.arange(5)
    H_lim, dH_lim = [], []
    dev = 0.0
    for b in bases:
        X = b[None, :] + deltas[:, None] * (c - b)[None, :]
        H, dH, _, _, _ = metric_arrays(u, X)
        Hu = np.einsum("nij,j->ni", H, uj)
        dHuu = np.einsum("nijk,i,j->nk", dH, uj, uj)
        h0 = _extrapolate(deltas, Hu)
        d0 = _extrapolate(deltas, dHuu)
        H_lim.append(h0.tolist())
        dH_lim.append(d0.tolist())
        dev = max(dev, float(np.max(np.abs(h0))), float(np.max(np.abs(d0 - 2 * uj))))
    return BoundaryReport(j, dev <= tol, dev, H_lim, dH_lim, (2 * uj).tolist())


# -- integrals ---------------------------------------------------------------------

def _refine(compute, n, levels, tol, steps=4):
    """Evaluate ``compute(n, levels)`` on successively finer rules until two agree."""
    prev = compute(n, levels)
    for _ in range(steps):
        n, levels = n + 2, levels + 4
        cur = compute(n, levels)
        if np.max(np.abs(np.asarray(cur) - np.asarray(prev))) <= tol * max(1.0, np.max(np.abs(cur))):
            return cur
        prev = cur
    raise QuadratureNotConverged(f"refinements still differ after {steps} steps")


def l2_projection_check(u, grid_density=6, tol=1e-10, levels=8):
    """L^2(dv) projection of the scalar curvature onto affine functions.

    Returns the array ``(a0, a_1, ..., a_m)`` of ``a0 + <a, x>``. The Gram
    matrix comes from exact moments; the right-hand side
    ``(int s, int s x_i)`` from graded quadrature, refined until stable.
    """
    P = u.polytope
    mt = moments(P)
    m = P.dim
    gram = np.empty((m + 1, m + 1))
    gram[0, 0] = float(mt.vol)
    gram[0, 1:] = gram[1:, 0] = [float(c) for c in mt.first]
    gram[1:, 1:] = [[float(c) for c in row] for row in mt.second]

    def rhs(n, lv):
        rule = graded_volume_rule(P, n, lv)
        s = metric_arrays(u, rule.points)[3]
        basis = np.hstack([np.ones((len(rule), 1)), rule.points])
        return np.array([rule.integrate(s * basis[:, i]) for i in range(m + 1)])

    return np.linalg.solve(gram, _refine(rhs, grid_density, levels, tol))


def _futaki_parts(u, s, n, levels):
    """``F(u_0)`` of the canonical part by graded quadrature."""
    P = u.polytope
    u0 = guillemin(P)
    vol = graded_volume_rule(P, n, levels)
    bdry = 0.0
    for j, rule in enumerate(graded_facet_rules(P, n, levels)):
        Lv = u0.label_values(rule.points)
        Lv[:, j] = 1.0             # L_j log L_j vanishes on its own facet
        bdry += rule.integrate(0.5 * np.sum(Lv * np.log(Lv), axis=1))
    sval = s[0] + vol.points @ s[1]
    return 2 * bdry - vol.integrate(sval * u0(vol.points))


def _futaki_polynomial(P, q, s):
    if not q:
        return 0.0
    deg = q.degree + 1
    vol = exact_volume_rule(P, deg)
    bdry = sum(r.integrate(q(r.points)) for r in exact_facet_rules(P, q.degree))
    return 2 * bdry - vol.integrate((s[0] + vol.points @ s[1]) * q(vol.points))


def k_energy(u, grid_density=6, tol=1e-7, levels=10):
    """Relative K-energy ``F(u) - int (log det Hess u - log det Hess u_0) dv``.

    ``F(u_0)`` and the log-determinant term use graded quadrature, ``F(q)``
    an exact polynomial rule. The value is computed on two fixed rules
    (``grid_density`` and one refinement); they must agree to ``tol``. The
    node set depends only on the arguments, so values along a segment of
    potentials are directly comparable.
    """
    P = u.polytope
    ext = extremal_affine(P)
    s = (float(ext.a0), np.array([float(c) for c in ext.a]))
    fq = _futaki_polynomial(P, u.correction, s)
    u0 = guillemin(P)

    def total(n, lv):
        rule = graded_volume_rule(P, n, lv)
        G = u.arrays(rule.points, order=2)[2]
        G0 = u0.arrays(rule.points, order=2)[2]
        sign, ld = np.linalg.slogdet(G)
        if np.any(sign <= 0):
            i = int(np.argmax(sign <= 0))
            raise NotConvexAt("Hessian not positive definite", rule.points[i])
        ld0 = np.linalg.slogdet(G0)[1]
        return _futaki_parts(u, s, n, lv) + fq - rule.integrate(ld - ld0)

    a = total(grid_density, levels)
    b = total(grid_density + 2, levels + 4)
    if abs(a - b) > tol * max(1.0, abs(b)):
        raise QuadratureNotConverged(f"K-energy refinements differ by {abs(a - b):.3g}")
    return b


# -- Legendre transform ----------------------------------------------------------------

def legendre(u, x):
    """``y = grad u(x)`` and ``phi(y) = <y, x> - u(x)``."""
    x = np.asarray(x, dtype=float)
    value, grad, _ = u.arrays(x[None, :], order=2)
    y = grad[0]
    return y, float(y @ x - value[0])


def inverse_gradient(u, y, tol=1e-12, max_iter=200, x0=None):
    """Solve ``grad u(x) = y`` by damped Newton on ``u(x) - <y, x>``.

    Steps are halved until the iterate stays interior and either the
    (strictly convex) objective or the gradient residual decreases.
    """
    y = np.asarray(y, dtype=float)
    P = u.polytope
    x = np.array([float(c) for c in P.vertex_centroid()]) if x0 is None else np.asarray(x0, float)

    def psi(z):
        return float(u(z[None, :])[0] - y @ z)

    def residual(z):
        return float(np.linalg.norm(u.arrays(z[None, :], order=2)[1][0] - y))

    best = (np.inf, x)
    for _ in range(max_iter):
        _, grad, G = u.arrays(x[None, :], order=2)
        r = grad[0] - y
        res = float(np.linalg.norm(r))
        if res < best[0]:
            best = (res, x.copy())
        if res <= tol:
            return x
        step = -np.linalg.solve(G[0], r)
        t = 1.0
        f0 = psi(x)
        while t > 1e-14:
            z = x + t * step
            if np.all(u.label_values(z) > 0):
                # near the root psi stops resolving progress; fall back to the residual
                if psi(z) <= f0 + 1e-4 * t * (r @ step) or residual(z) < res:
                    break
            t *= 0.5
        else:
            break
        x = z
    raise NoConvergence(f"Newton did not reach tol={tol}; best residual {best[0]:.3g}", best[1])


# -- monotone polytopes ------------------------------------------------------------

@dataclass
class RicciPotentialReport:
    points: np.ndarray
    values: np.ndarray
    max_abs: float
    boundary_min_label: np.ndarray
    boundary_values: np.ndarray
    lam: float


def ricci_potential(u, x_star, grid=12, margin=1e-3):
    """Sample ``log det Hess u - (2/lam)(-u + sum (x_i - x*_i) u_{,i})``.

    ``x_star`` must satisfy ``L_j(x*) = lam`` for every label (checked
    exactly). Besides the grid, the report holds samples on rays from ``x*``
    to each facet centroid at ``min L = 10^-1 ... 10^-6``; these stay
    bounded because the function extends smoothly to the boundary.
    """
    P = u.polytope
    xs = vec(x_star)
    vals = {L(xs) for L in P.labels}
    if len(vals) != 1 or min(vals) <= 0:
        raise NotMonotone("labels do not take a common positive value at x_star")
    lam = float(vals.pop())
    xf = np.array([float(c) for c in xs])

    def f(X):
        value, grad, G = u.arrays(X, order=2)
        return np.linalg.slogdet(G)[1] - (2 / lam) * (-value + np.sum((X - xf) * grad, axis=1))

    X = interior_grid(P, grid, margin)
    F = f(X)
    V = np.array([[float(c) for c in v.coords] for v in P.vertices])
    pts, mins = [], []
    for j in range(P.n_labels):
        b = V[sorted(P.facet(j).vertices)].mean(axis=0)
        for k in range(1, 7):
            # L_j is affine with L_j(b) = 0, so this point has L_j = 10^-k
            t = 1 - 10.0 ** -k / lam
            pts.append(xf + t * (b - xf))
    pts = np.array(pts)
    mins = u.label_values(pts).min(axis=1)
    return RicciPotentialReport(X, F, float(np.max(np.abs(F))), mins, f(pts), lam)


# -- crease integrals ------------------------------------------------------------------

def crease_futaki_via_H(u, crease, quad_density=8):
    """``int_F H(dL, dL) dsigma`` over ``F = P ∩ {L = 0}``.

    The crease measure is fixed by ``dL ^ dsigma = dv``. ``F`` is cut into
    simplices exactly (as the facet of ``P ∩ {L >= 0}``) and each simplex
    gets a collapsed Gauss rule.
    """
    P = u.polytope
    try:
        cell = LabelledPolytope(list(P.labels) + [crease], P.lattice, prune=True)
    except ToricError as exc:
        raise EmptyCrease("crease does not cut the interior of the polytope") from exc
    if crease not in cell.labels:
        raise EmptyCrease("crease does not cut the interior of the polytope")
    j = cell.labels.index(crease)
    a = np.array([float(c) for c in crease.linear])
    w = a / a.dot(a)
    t, wt = _gauss(quad_density)
    V = np.array([[float(c) for c in v.coords] for v in cell.vertices])
    rule = Rule.concat(duffy_rule(V[list(s)], t, wt, w) for s in triangulate(cell, cell.facet(j)))
    H = np.linalg.inv(u.arrays(rule.points, order=2)[2])
    return rule.integrate(np.einsum("nij,i,j->n", H, a, a))
