"""Extremal potentials on labelled intervals.

On ``[alpha, beta]`` with labels ``(x - alpha)/r_l`` and ``(beta - x)/r_r``
the equation ``-(1/u'')'' = s`` says that ``H = 1/u''`` is a cubic with
``-H'' = s``. The boundary conditions pin it down:

    H(alpha) = H(beta) = 0,   H'(alpha) = 2 r_l,   H'(beta) = -2 r_r.

Writing ``H = (x - alpha)(beta - x) l(x)`` the last two conditions give
``l(alpha) = 2 r_l / (beta - alpha)`` and ``l(beta) = 2 r_r / (beta - alpha)``,
both positive, so ``l`` and hence ``H`` is positive on the open interval for
every choice of labels.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .affine import AffineFunction
from .errors import InputError, NotPositive, OnBoundary, ToricError
from .extremal import extremal_affine
from .linalg import solve
from .polytope import interval

__all__ = ["AbreuSolution1D", "IntervalPotential", "solve_1d", "positivity_1d",
           "potential_from_H", "interval_data", "poly_eval", "poly_deriv"]


def poly_eval(c, x):
    """Horner evaluation of ``sum c_k x^k``."""
    out = 0 * x
    for a in reversed(c):
        out = out * x + a
    return out


def poly_deriv(c):
    return tuple(k * c[k] for k in range(1, len(c))) or (Fraction(0),)


@dataclass(frozen=True)
class AbreuSolution1D:
    alpha: Fraction
    beta: Fraction
    r_left: Fraction
    r_right: Fraction
    H: tuple          # coefficients c0..c3
    s: AffineFunction

    def H_at(self, x):
        return poly_eval(self.H, Fraction(x))

    def polytope(self):
        return interval(self.alpha, self.beta, self.r_left, self.r_right)


def interval_data(P):
    """``(alpha, beta, r_left, r_right)`` of a labelled interval."""
    if P.dim != 1 or P.n_labels != 2:
        raise InputError("expected a labelled interval (dimension 1, two labels)")
    left = [L for L in P.labels if L.linear[0] > 0]
    right = [L for L in P.labels if L.linear[0] < 0]
    if len(left) != 1 or len(right) != 1:
        raise InputError("interval labels must point inward from both ends")
    (Ll,), (Lr,) = left, right
    a, b = Ll.linear[0], -Lr.linear[0]
    return -Ll.constant / a, Lr.constant / b, 1 / a, 1 / b


def solve_1d(P):
    """Exact cubic ``H`` for the labelled interval ``P``.

    Raises ``ToricError`` if ``-H''`` disagrees with the extremal affine
    function computed from moments, which would indicate a convention bug.
    """
    alpha, beta, rl, rr = interval_data(P)
    A = [[Fraction(1), alpha, alpha ** 2, alpha ** 3],
         [Fraction(1), beta, beta ** 2, beta ** 3],
         [Fraction(0), Fraction(1), 2 * alpha, 3 * alpha ** 2],
         [Fraction(0), Fraction(1), 2 * beta, 3 * beta ** 2]]
    c = tuple(solve(A, [0, 0, 2 * rl, -2 * rr]))
    s = AffineFunction((-6 * c[3],), -2 * c[2])
    ext = extremal_affine(P)
    if (ext.a0, ext.a) != (s.constant, s.linear):
        raise ToricError("-H'' does not match the extremal affine function")
    return AbreuSolution1D(alpha, beta, rl, rr, c, s)


def _cofactor(sol):
    """Linear ``l`` with ``H = (x - alpha)(beta - x) l``, as ``(l0, l1)``."""
    a, b = sol.alpha, sol.beta
    # (x - a)(b - x) = -x^2 + (a + b) x - a b; divide H by it
    c0, c1, c2, c3 = sol.H
    l1 = -c3
    l0 = l1 * (a + b) - c2
    if (c1, c0) != (l0 * (a + b) - l1 * a * b, -l0 * a * b):
        raise ToricError("H does not vanish at both endpoints")
    return l0, l1


def positivity_1d(sol):
    """Whether ``H > 0`` on ``(alpha, beta)``, with a witness.

    The witness is the cofactor ``l`` (as ``(l0, l1)``) when positive, or a
    point of the open interval where ``H <= 0``.
    """
    l0, l1 = _cofactor(sol)
    la, lb = l0 + l1 * sol.alpha, l0 + l1 * sol.beta
    if la >= 0 and lb >= 0 and (la, lb) != (0, 0):
        return True, {"cofactor": (l0, l1)}
    a, b = sol.alpha, sol.beta
    if la < 0:
        edge = b if l1 == 0 else min(b, -l0 / l1)
        x = (a + edge) / 2
    elif lb < 0:
        edge = a if l1 == 0 else max(a, -l0 / l1)
        x = (edge + b) / 2
    else:
        x = (a + b) / 2          # l vanishes identically
    return False, {"point": x, "H": sol.H_at(x)}


class IntervalPotential:
    """Numerical potential with ``u'' = 1/H``, normalized at the midpoint.

    Values come from the Cauchy formula ``u(x) = int_c^x (x - t) / H(t) dt``
    with adaptive quadrature; second and higher derivatives are closed form.
    Exposes the same ``arrays`` interface as
    :class:`toricstab.potential.SymplecticPotential`.
    """

    def __init__(self, sol):
        self.sol = sol
        self.polytope = sol.polytope()
        self.c = [float(a) for a in sol.H]
        self.d1 = [float(a) for a in poly_deriv(sol.H)]
        self.d2 = [float(a) for a in poly_deriv(poly_deriv(sol.H))]
        self.mid = float((sol.alpha + sol.beta) / 2)
        self._a, self._b = float(sol.alpha), float(sol.beta)
        self.dim = 1

    def label_values(self, X):
        X = np.atleast_2d(X)[:, 0]
        return np.stack([X - self._a, self._b - X], axis=1)

    def _H(self, t):
        return poly_eval(self.c, t)

    def _u(self, x):
        val = integrate.quad(lambda t: (x - t) / self._H(t), self.mid, x, epsabs=1e-13,
                             epsrel=1e-12, limit=200)[0]
        der = integrate.quad(lambda t: 1.0 / self._H(t), self.mid, x, epsabs=1e-13,
                             epsrel=1e-12, limit=200)[0]
        return val, der

    def arrays(self, X, order=4):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        x = X[:, 0]
        if np.any(x <= self._a) or np.any(x >= self._b):
            raise OnBoundary("point outside the open interval")
        vals = [self._u(t) for t in x]
        value = np.array([v for v, _ in vals])
        grad = np.array([g for _, g in vals])[:, None]
        H = poly_eval(self.c, x)
        H1 = poly_eval(self.d1, x)
        H2 = poly_eval(self.d2, x)
        out = [value, grad, (1 / H)[:, None, None]]
        if order >= 3:
            out.append((-H1 / H ** 2)[:, None, None, None])
        if order >= 4:
            out.append(((2 * H1 ** 2 - H * H2) / H ** 3)[:, None, None, None, None])
        return tuple(out)

    def __call__(self, X):
        return self.arrays(X, order=2)[0]


def potential_from_H(sol):
    ok, _ = positivity_1d(sol)
    if not ok:
        raise NotPositive("H is not positive on the open interval")
    return IntervalPotential(sol)
