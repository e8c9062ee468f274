"""Exact computations on labelled polytopes and toric extremal metrics."""
from .affine import AffineFunction, PLConvexFunction
from .errors import ToricError
from .polytope import (LabelledPolytope, blow_up, box, compute_fan, interval, lattice_points,
                       product, standard_simplex, test_configuration, verify,
                       weighted_projective)
from .measure import integrate_pl, moments
from .extremal import (crease_scan, extremal_affine, futaki, futaki_via_configuration,
                       monotone_labelling, normalize_star, star_norm)
from .polynomial import Polynomial
from .potential import (SymplecticPotential, guillemin, k_energy, l2_projection_check,
                        legendre, inverse_gradient, metric_sample)
from .abreu1d import positivity_1d, potential_from_H, solve_1d

__version__ = "0.1.0"
