"""
Extremal potentials on an interval
==================================

On a labelled interval the extremal equation integrates in closed form:
H = 1/u'' is a cubic fixed by its boundary values. We solve it exactly,
check that the Futaki invariant of a crease at y equals H(y), and rebuild
the potential numerically.
"""
from fractions import Fraction

import numpy as np

from toricstab import AffineFunction, PLConvexFunction, futaki, interval
from toricstab.abreu1d import positivity_1d, potential_from_H, solve_1d
from toricstab.potential import metric_arrays

P = interval(0, 3, Fraction(1, 2), 2)
sol = solve_1d(P)
print("H coefficients:", [str(c) for c in sol.H])
print("extremal s:", sol.s.constant, "+", sol.s.linear[0], "x")
ok, witness = positivity_1d(sol)
print("positive:", ok, "with cofactor", [str(c) for c in witness["cofactor"]])

for y in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)):
    f = PLConvexFunction.crease(AffineFunction([1], -y))
    print(f"y = {y}: F = {futaki(P, f)}, H(y) = {sol.H_at(y)}")

u = potential_from_H(sol)
X = np.linspace(0.1, 2.9, 8)[:, None]
print("scalar curvature of the rebuilt potential:", np.round(metric_arrays(u, X)[3], 9))
print("extremal values:                          ",
      np.round([float(sol.s([x])) for x in X[:, 0]], 9))
