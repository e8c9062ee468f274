"""
Scalar curvature of symplectic potentials
=========================================

The canonical potential of a polytope is ``1/2 sum L log L``. For the
interval, square and triangle it already solves the extremal equation, so
its scalar curvature is the constant extremal value. Adding a polynomial
correction changes the pointwise curvature but not its L^2 projection onto
affine functions.
"""
from fractions import Fraction

import numpy as np

from toricstab import Polynomial, box, guillemin, standard_simplex
from toricstab.potential import (check_boundary_conditions, interior_grid, l2_projection_check,
                                 metric_arrays)

tri = standard_simplex(2, Fraction(1, 2))
X = interior_grid(tri, 12)
s = metric_arrays(guillemin(tri), X)[3]
print(f"triangle: {len(X)} grid points, s in [{s.min():.12g}, {s.max():.12g}]")

sq = box(1, 1)
u = guillemin(sq) + Polynomial({(2, 2): 0.05}, 2)
s = metric_arrays(u, interior_grid(sq, 10))[3]
print(f"perturbed square: s ranges over [{s.min():.4f}, {s.max():.4f}]")
print("its affine projection:", np.round(l2_projection_check(u), 10))

# H = (Hess u)^-1 degenerates on the facets in a prescribed way
for j in range(sq.n_labels):
    rep = check_boundary_conditions(u, j)
    print(f"facet {j}: limits within {rep.max_deviation:.1e} -> {'ok' if rep.passed else 'FAIL'}")
