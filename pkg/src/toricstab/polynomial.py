"""Sparse multivariate polynomials with float coefficients.

Used as the smooth correction added to the canonical potential. Derivatives
are taken term by term, so every tensor below is exact up to rounding.
"""
from itertools import combinations_with_replacement, permutations

import numpy as np

from .errors import InputError


class Polynomial:
    """``sum_k c_k x^{e_k}`` stored as ``{exponent tuple: coefficient}``.

    Parameters
    ----------
    terms : dict or iterable of (exponents, coeff)
    dim : int, optional
        Needed only when ``terms`` is empty.
    """

    def __init__(self, terms=(), dim=None):
        items = terms.items() if isinstance(terms, dict) else terms
        out = {}
        for e, c in items:
            e = tuple(int(k) for k in e)
            if any(k < 0 for k in e):
                raise InputError("negative exponent")
            out[e] = out.get(e, 0.0) + float(c)
        dims = {len(e) for e in out}
        if len(dims) > 1:
            raise InputError("monomials have inconsistent dimensions")
        if dims:
            d = dims.pop()
            if dim is not None and dim != d:
                raise InputError(f"polynomial has dimension {d}, expected {dim}")
            dim = d
        if dim is None:
            raise InputError("dimension of the zero polynomial must be given")
        self.dim = dim
        self.terms = {e: c for e, c in sorted(out.items()) if c != 0.0}

    @classmethod
    def zero(cls, dim):
        return cls({}, dim)

    @classmethod
    def affine(cls, linear, constant=0.0):
        m = len(linear)
        terms = {(0,) * m: constant}
        for i, a in enumerate(linear):
            e = [0] * m
            e[i] = 1
            terms[tuple(e)] = a
        return cls(terms, m)

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0.0) + c
        return Polynomial(t, self.dim)

    def __mul__(self, c):
        return Polynomial({e: c * v for e, v in self.terms.items()}, self.dim)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * -1.0

    def __repr__(self):
        return f"Polynomial({self.terms!r})"

    def diff(self, i):
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = out.get(tuple(f), 0.0) + c * e[i]
        return Polynomial(out, self.dim)

    def __call__(self, X):
        """Evaluate on ``(N, m)`` points (or a single point)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        out = np.zeros(len(X))
        for e, c in self.terms.items():
            out += c * np.prod(X ** np.array(e), axis=1)
        return out[0] if single else out

    def derivative_tensor(self, X, order):
        """Array of shape ``(N,) + (m,) * order`` of partial derivatives."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        m = self.dim
        out = np.zeros((len(X),) + (m,) * order)
        if not self.terms:
            return out
        for idx in combinations_with_replacement(range(m), order):
            p = self
            for i in idx:
                p = p.diff(i)
            if not p.terms:
                continue
            vals = p(X)
            for perm in set(permutations(idx)):
                out[(slice(None),) + perm] = vals
        return out
