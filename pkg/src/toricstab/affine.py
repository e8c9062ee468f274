"""Affine and convex piecewise-affine functions with rational coefficients."""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .linalg import dot, frac, vec


@dataclass(frozen=True)
class AffineFunction:
    """``x -> <linear, x> + constant`` with exact rational coefficients."""

    linear: tuple
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "linear", vec(self.linear))
        object.__setattr__(self, "constant", frac(self.constant))

    @property
    def dim(self):
        return len(self.linear)

    def __call__(self, x):
        return dot(self.linear, x) + self.constant

    def evaluate(self, X):
        """Float evaluation on an ``(N, m)`` array of points."""
        X = np.asarray(X, dtype=float)
        return X @ np.array([float(a) for a in self.linear]) + float(self.constant)

    def __add__(self, other):
        return AffineFunction(tuple(a + b for a, b in zip(self.linear, other.linear)),
                              self.constant + other.constant)

    def __neg__(self):
        return AffineFunction(tuple(-a for a in self.linear), -self.constant)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return AffineFunction(tuple(c * a for a in self.linear), c * self.constant)

    def extend(self, before=0, after=0):
        """Same function on a product space with extra coordinates."""
        z = Fraction(0)
        return AffineFunction((z,) * before + self.linear + (z,) * after, self.constant)

    def is_constant(self):
        return all(a == 0 for a in self.linear)

    @classmethod
    def constant_function(cls, m, c):
        return cls((Fraction(0),) * m, frac(c))


@dataclass(frozen=True)
class PLConvexFunction:
    """Pointwise maximum of finitely many affine functions."""

    pieces: tuple

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InputError("a PL function needs at least one piece")
        m = pieces[0].dim
        if any(p.dim != m for p in pieces):
            raise InputError("PL pieces have inconsistent dimensions")
        object.__setattr__(self, "pieces", pieces)

    @property
    def dim(self):
        return self.pieces[0].dim

    def __call__(self, x):
        return max(p(x) for p in self.pieces)

    def evaluate(self, X):
        return np.max(np.stack([p.evaluate(X) for p in self.pieces]), axis=0)

    def active(self, x):
        """Indices of the pieces attaining the maximum at ``x``."""
        vals = [p(x) for p in self.pieces]
        top = max(vals)
        return [i for i, v in enumerate(vals) if v == top]

    def shift(self, g):
        """Subtract the affine function ``g`` from every piece."""
        return PLConvexFunction(tuple(p - g for p in self.pieces))

    def scale(self, c):
        if Fraction(c) < 0:
            raise InputError("negative multiple of a convex function is not convex")
        return PLConvexFunction(tuple(p.scale(c) for p in self.pieces))

    @classmethod
    def affine(cls, f):
        return cls((f,))

    @classmethod
    def crease(cls, L):
        """The simple PL function ``max(0, L)``."""
        return cls((AffineFunction.constant_function(L.dim, 0), L))
