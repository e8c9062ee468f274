from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from toricstab.errors import InputError, SingularMatrix
from toricstab.linalg import (det, frac, inverse, lattice_basis, nullspace, primitive, rank,
                              solve)

small = st.integers(-6, 6)


def square_matrices(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_frac_parsing():
    assert frac("3/6") == Fraction(1, 2)
    assert frac(" -7 ") == -7
    with pytest.raises(InputError):
        frac(0.5)
    with pytest.raises(InputError):
        frac("1/0")
    with pytest.raises(InputError):
        frac(True)


@settings(max_examples=60, deadline=None)
@given(square_matrices(3))
def test_det_matches_numpy(A):
    exact = det([[Fraction(x) for x in r] for r in A])
    assert abs(float(exact) - np.linalg.det(np.array(A, float))) < 1e-8


@settings(max_examples=60, deadline=None)
@given(square_matrices(3), st.lists(small, min_size=3, max_size=3))
def test_solve_roundtrip(A, b):
    M = [[Fraction(x) for x in r] for r in A]
    if det(M) == 0:
        with pytest.raises(SingularMatrix):
            solve(M, b)
        return
    x = solve(M, b)
    assert [sum(M[i][j] * x[j] for j in range(3)) for i in range(3)] == [Fraction(v) for v in b]
    Minv = inverse(M)
    ident = [[sum(M[i][k] * Minv[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert ident == [[int(i == j) for j in range(3)] for i in range(3)]


def test_nullspace_and_rank():
    A = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert rank(A) == 1
    for v in nullspace(A):
        assert sum(a * b for a, b in zip(A[0], v)) == 0


def test_primitive():
    assert primitive([Fraction(2, 3), Fraction(4, 3)]) == [1, 2]
    assert primitive([Fraction(-6), Fraction(0), Fraction(9)]) == [-2, 0, 3]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=2, max_size=4))
def test_lattice_basis_index(gens):
    # oracle: the index of the lattice spanned by integer vectors in Z^2 is
    # the gcd of all 2x2 minors
    from math import gcd
    g = 0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            g = gcd(g, gens[i][0] * gens[j][1] - gens[i][1] * gens[j][0])
    B = lattice_basis(gens)
    if g == 0:
        assert len(B) < 2
    else:
        assert len(B) == 2 and abs(det(B)) == g
