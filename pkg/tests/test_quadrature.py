import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_polygon, random_polytope3
from toricstab.measure import moments
from toricstab.polytope import box, interval, standard_simplex
from toricstab.quadrature import (duffy_rule, exact_facet_rules, exact_volume_rule, flags,
                                  gauss_graded, graded_facet_rules, graded_volume_rule)


def _check_moments(P, rule, mt):
    X = rule.points
    assert rule.integrate(np.ones(len(rule))) == pytest.approx(float(mt.vol), rel=1e-13)
    for i in range(P.dim):
        assert rule.integrate(X[:, i]) == pytest.approx(float(mt.first[i]), rel=1e-12, abs=1e-13)
        for j in range(P.dim):
            assert rule.integrate(X[:, i] * X[:, j]) == \
                pytest.approx(float(mt.second[i][j]), rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("seed", range(4))
def test_exact_rules_reproduce_moments(seed):
    rng = random.Random(seed)
    for P in (random_polygon(rng), random_polytope3(rng)):
        mt = moments(P)
        _check_moments(P, exact_volume_rule(P, 2), mt)
        for j, rule in enumerate(exact_facet_rules(P, 1)):
            assert rule.integrate(np.ones(len(rule))) == \
                pytest.approx(float(mt.facet_mass[j]), rel=1e-12)
            for i in range(P.dim):
                assert rule.integrate(rule.points[:, i]) == \
                    pytest.approx(float(mt.facet_first[j][i]), rel=1e-12, abs=1e-13)


def test_graded_rules_reproduce_moments():
    P = random_polygon(random.Random(5))
    _check_moments(P, graded_volume_rule(P, 4, 6), moments(P))
    mt = moments(P)
    for j, rule in enumerate(graded_facet_rules(P, 4, 6)):
        assert rule.integrate(np.ones(len(rule))) == pytest.approx(float(mt.facet_mass[j]))


def test_exact_rule_degree():
    # oracle: int over the unit triangle of x^a y^b = a! b! / (a + b + 2)!
    rule = exact_volume_rule(standard_simplex(2), 6)
    X = rule.points
    for a, b in [(3, 3), (6, 0), (2, 4), (5, 1)]:
        ref = math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
        assert rule.integrate(X[:, 0] ** a * X[:, 1] ** b) == pytest.approx(ref, rel=1e-12)


def test_graded_rule_handles_log_singularity():
    # int_0^1 x log x dx = -1/4; the integrand's derivative blows up at 0
    t, w = gauss_graded(6, 20)
    assert np.sum(w) == pytest.approx(1, rel=1e-15)
    assert np.sum(w * (1 - t) * np.log(1 - t)) == pytest.approx(-0.25, abs=1e-11)
    P = interval()
    rule = graded_volume_rule(P, 6, 20)
    x = rule.points[:, 0]
    assert rule.integrate(x * np.log(x)) == pytest.approx(-0.25, abs=1e-12)


def test_graded_rule_converges_on_square():
    # int_[0,1]^2 (x log x + y log y) = -1/2; each refinement level gains accuracy
    errs = []
    for levels in (6, 10, 14):
        rule = graded_volume_rule(box(1, 1), 6, levels)
        X = rule.points
        errs.append(abs(rule.integrate(np.sum(X * np.log(X), axis=1)) + 0.5))
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-8


def test_duffy_rule_simplex_volume():
    t, w = gauss_graded(3, 0)
    pts = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1]], float)
    assert duffy_rule(pts, t, w).integrate(1.0) == pytest.approx(1 / 6)


def test_flags_count():
    # a square has 4 edges with 2 vertices each: 8 flags
    assert len(flags(box(1, 1), box(1, 1).whole)) == 8
    assert len(flags(box(1, 1, 1), box(1, 1, 1).whole)) == 48
    assert len(flags(interval(), interval().facet(0))) == 1
