"""
Extremal affine functions and Futaki invariants
===============================================

Everything here is exact: moments, the extremal affine function and the
Futaki invariant of a piecewise-linear convex function are all rationals.
"""
from fractions import Fraction

from toricstab import (AffineFunction, PLConvexFunction, box, extremal_affine, futaki,
                       futaki_via_configuration, interval, moments, standard_simplex)

# the three basic fixtures have constant extremal function
for name, P in [("interval", interval()), ("square", box(1, 1)),
                ("simplex", standard_simplex(2, Fraction(1, 2)))]:
    s = extremal_affine(P)
    print(f"{name:9s} vol = {moments(P).vol}   s = {s.a0} + ({', '.join(map(str, s.a))}) . x")

# unequal labels tilt the extremal function: {x, (1 - x)/2}
P = interval(0, 1, 1, 2)
s = extremal_affine(P)
print("\nlabels x, (1-x)/2 :  s =", s.a0, "+", s.a[0], "x")

# Futaki invariant of a simple crease, and the same number recovered from
# the test-configuration polytope one dimension up
sq = box(1, 1)
f = PLConvexFunction.crease(AffineFunction([1, 1], -1))
print("\nF(max(0, x1 + x2 - 1)) on the square:", futaki(sq, f))
print("same via the test configuration (R = 2):", futaki_via_configuration(sq, f, 2))

# affine functions are always in the kernel
print("F(3 x1 - x2 + 2) =", futaki(sq, AffineFunction([3, -1], 2)))
