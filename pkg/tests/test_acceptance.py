"""Acceptance suite: twelve end-to-end criteria.

Each test prints one ``PASS``/``FAIL`` line and must finish in under ten
seconds. The lines are also collected and repeated in the pytest terminal
summary, so they show up without ``-s``.
"""
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_affine, random_interval, random_pl, random_polygon, random_polytope
from toricstab.abreu1d import poly_deriv, poly_eval, positivity_1d, solve_1d
from toricstab.affine import AffineFunction, PLConvexFunction
from toricstab.errors import XStarNotInterior
from toricstab.extremal import (crease_scan, extremal_affine, futaki, futaki_via_configuration,
                                monotone_labelling)
from toricstab.measure import affine_boundary_integral, moments
from toricstab.polynomial import Polynomial
from toricstab.polytope import blow_up, box, interval, standard_simplex, verify
from toricstab.potential import (crease_futaki_via_H, guillemin, interior_grid,
                                 inverse_gradient, k_energy, l2_projection_check, legendre,
                                 metric_sample)
from toricstab.quadrature import graded_volume_rule

F = Fraction
TIME_LIMIT = 10.0
VERDICTS = []


class Criterion:
    """Context manager timing one criterion and printing its verdict."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < TIME_LIMIT
        why = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}"
        if exc_type is None and not ok:
            why = f"took {elapsed:.1f}s"
        line = (f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'} "
                f"[{elapsed:5.2f}s] {self.title}: {why}")
        VERDICTS.append(line)
        print(line)
        if exc_type is None:
            assert elapsed < TIME_LIMIT, f"criterion {self.number} took {elapsed:.1f}s"
        return False


def _hand_extremal(vol, first, second, masses, mass_first):
    A = np.block([[np.array([[vol]]), np.array([first])],
                  [np.array(first)[:, None], np.array(second)]])
    b = 2 * np.concatenate([[sum(masses)], np.sum(mass_first, axis=0)])
    return np.linalg.solve(A, b)


def test_01_extremal_constants():
    with Criterion(1, "extremal constants 4, 8, 24") as c:
        results = {}
        for name, P, s in [("interval", interval(), 4), ("square", box(1, 1), 8),
                           ("simplex", standard_simplex(2, F(1, 2)), 24)]:
            e = extremal_affine(P)
            assert e.a0 == s and all(a == 0 for a in e.a), name
            results[name] = e.a0
        # independent solves from hand-computed moments
        oracle = {
            "interval": _hand_extremal(1, [0.5], [[1 / 3]], [1, 1], [[0], [1]]),
            "square": _hand_extremal(1, [0.5, 0.5], [[1 / 3, 1 / 4], [1 / 4, 1 / 3]],
                                     [1, 1, 1, 1], [[0, 0.5], [0.5, 0], [1, 0.5], [0.5, 1]]),
            "simplex": _hand_extremal(1 / 8, [1 / 48, 1 / 48], [[1 / 192, 1 / 384],
                                                              [1 / 384, 1 / 192]],
                                      [0.5, 0.5, 0.5], [[0, 1 / 8], [1 / 8, 0], [1 / 8, 1 / 8]]),
        }
        for name, sol in oracle.items():
            assert np.allclose(sol, [float(results[name])] + [0] * (len(sol) - 1), atol=1e-10)
        c.detail = ", ".join(f"{k}: s = {v}" for k, v in results.items())


def test_02_guillemin_scalar_curvature():
    with Criterion(2, "Guillemin scalar curvature equals extremal constant") as c:
        worst = 0.0
        for P in (interval(), box(1, 1), standard_simplex(2, F(1, 2))):
            s = float(extremal_affine(P).a0)
            n = 100 if P.dim == 1 else 10
            X = interior_grid(P, n)
            while len(X) < 100:
                n += 1
                X = interior_grid(P, n)
            for x in X[:100]:
                rel = abs(metric_sample(guillemin(P), x).scalar_curvature - s) / s
                worst = max(worst, rel)
        assert worst <= 1e-9
        c.detail = f"300 points, max relative deviation {worst:.2e}"


def test_03_futaki_vanishes_on_affine():
    with Criterion(3, "Futaki vanishes on affine functions") as c:
        rng = random.Random(2024)
        for k in range(200):
            m = 1 + k % 3
            P = random_polytope(rng, m)
            assert futaki(P, random_affine(rng, m)) == 0
        c.detail = "200 random pairs, exact zero"


def test_04_crease_identity():
    with Criterion(4, "crease identity") as c:
        P = interval(0, 1, 1, 2)
        f = PLConvexFunction.crease(AffineFunction([1], F(-1, 2)))
        val = futaki(P, f)
        assert val == F(3, 4) and val == solve_1d(P).H_at(F(1, 2))
        sq = box(1, 1)
        L = AffineFunction([1, 1], -1)
        exact = futaki(sq, PLConvexFunction.crease(L))
        assert exact == F(2, 3)
        approx = crease_futaki_via_H(guillemin(sq), L)
        assert abs(approx - 2 / 3) <= 1e-8
        c.detail = f"interval 3/4 = H(1/2); square 2/3, H-quadrature error {abs(approx - 2 / 3):.1e}"


def test_05_mass_identity():
    with Criterion(5, "mass identity") as c:
        rng = random.Random(55)
        for k in range(200):
            m = 1 + k % 3
            P = random_polytope(rng, m)
            f = random_affine(rng, m)
            mt = moments(P)
            total = [sum((affine_boundary_integral(mt, f, [j]) * P.labels[j].linear[i]
                          for j in range(P.n_labels)), F(0)) for i in range(m)]
            assert total == [-mt.vol * a for a in f.linear]
        c.detail = "200 random polytopes, exact"


def test_06_test_configuration_cross_check():
    with Criterion(6, "test configuration cross-check") as c:
        rng = random.Random(66)
        for k in range(50):
            m = 1 + k % 2
            P = random_polytope(rng, m)
            f = random_pl(rng, m)
            R = max(f(v.coords) for v in P.vertices) + F(rng.randint(1, 6), rng.randint(1, 3))
            assert futaki_via_configuration(P, f, R) == futaki(P, f)
        c.detail = "50 fixtures in dimensions 1 and 2, exact"


def test_07_one_dimensional_existence():
    with Criterion(7, "1D existence") as c:
        rng = random.Random(77)
        for _ in range(500):
            P = random_interval(rng)
            sol = solve_1d(P)
            a, b = sol.alpha, sol.beta
            d1 = poly_deriv(sol.H)
            d2 = poly_deriv(d1)
            assert poly_eval(sol.H, a) == 0 and poly_eval(sol.H, b) == 0
            assert poly_eval(d1, a) == 2 * sol.r_left and poly_eval(d1, b) == -2 * sol.r_right
            ext = extremal_affine(P)
            # -H'' is affine, so two points pin it down
            assert -poly_eval(d2, a) == ext([a]) and -poly_eval(d2, b) == ext([b])
            assert positivity_1d(sol)[0]
        c.detail = "500 random intervals: boundary conditions, -H'' = extremal, H > 0"


def test_08_monotone_labelling():
    with Criterion(8, "monotone labelling") as c:
        M = monotone_labelling(interval())
        assert M.x_star == (F(1, 2),)
        assert M.labels_star == (AffineFunction([2], 0), AffineFunction([-2], 2))
        assert M.extremal.a0 == 2 and M.extremal.is_constant()
        assert monotone_labelling(box(1, 1)).x_star == (F(1, 2), F(1, 2))
        rng = random.Random(88)
        done = skipped = 0
        while done < 100:
            try:
                M = monotone_labelling(random_polygon(rng))
            except XStarNotInterior:
                skipped += 1
                continue
            assert M.extremal.is_constant()
            done += 1
        c.detail = f"fixtures exact; 100 random polygons constant ({skipped} with x* outside)"


def test_09_l2_projection_independence():
    with Criterion(9, "L2 projection independent of the potential") as c:
        sq = box(1, 1)
        worst = 0.0
        for q in (Polynomial.zero(2), Polynomial({(2, 2): 0.05}, 2),
                  Polynomial({(3, 0): 0.03, (0, 3): 0.03}, 2)):
            u = guillemin(sq) + q
            # convexity at every node of the finest rule the check can use
            for n, lv in ((6, 8), (8, 12), (10, 16)):
                G = u.arrays(graded_volume_rule(sq, n, lv).points, order=2)[2]
                assert np.linalg.eigvalsh(G).min() > 0
            proj = l2_projection_check(u)
            worst = max(worst, float(np.max(np.abs(proj - [8, 0, 0]))))
        assert worst <= 1e-6
        c.detail = f"three potentials, max deviation from (8,0,0) {worst:.1e}"


def test_10_k_energy_convexity():
    with Criterion(10, "K-energy convexity") as c:
        rng = np.random.default_rng(10)
        fixtures = [box(1, 1), interval(), standard_simplex(2, F(1, 2)), interval(0, 1, 1, 2)]
        worst = np.inf
        for k in range(20):
            P = fixtures[k % 4]
            m = P.dim

            def corr():
                terms = {}
                while len(terms) < 2:
                    e = tuple(int(i) for i in rng.integers(0, 4, size=m))
                    if 2 <= sum(e) <= 4:
                        terms[e] = float(rng.uniform(-0.04, 0.04))
                return Polynomial(terms, m)

            qa, qb = corr(), corr()
            ts = np.linspace(0, 1, 5)
            E = [k_energy(guillemin(P) + (qa * (1 - t) + qb * t), grid_density=4, tol=1e-6,
                          levels=8) for t in ts]
            worst = min(worst, min(E[i - 1] + E[i + 1] - 2 * E[i] for i in range(1, 4)))
        assert worst >= -1e-8
        c.detail = f"20 segments, smallest second difference {worst:.2e}"


def test_11_legendre_and_blow_up():
    with Criterion(11, "Legendre round trip and blow-up") as c:
        rng = np.random.default_rng(11)
        u = guillemin(box(1, 1)) + Polynomial({(2, 2): 0.05}, 2)
        worst = 0.0
        for x in rng.uniform(0.01, 0.99, size=(100, 2)):
            y, _ = legendre(u, x)
            worst = max(worst, float(np.max(np.abs(inverse_gradient(u, y) - x))))
        assert worst <= 1e-10
        B = blow_up(box(1, 1), 0, F(1, 4))
        assert moments(B).vol == F(31, 32) and verify(B).delzant
        c.detail = f"round-trip error {worst:.1e}; blow-up volume 31/32, Delzant"


def test_12_stability_probe():
    with Criterion(12, "crease scan positivity") as c:
        rep = crease_scan(box(1, 1), 3, 16)
        assert rep.min_ratio > 0
        rng = random.Random(12)
        intervals = [interval(), interval(0, 1, 1, 2), interval(0, 1, 1, 1000)]
        intervals += [random_interval(rng) for _ in range(40)]
        worst = min(crease_scan(P, 3, 16).min_ratio for P in intervals)
        assert worst > 0
        c.detail = f"square min ratio {rep.min_ratio:.4g}; 43 intervals, min {worst:.4g}"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
