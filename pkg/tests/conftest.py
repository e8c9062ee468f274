import math
import random
import sys
from fractions import Fraction

import pytest

from toricstab.affine import AffineFunction, PLConvexFunction
from toricstab.errors import ToricError
from toricstab.polytope import LabelledPolytope, box, interval, standard_simplex


def rand_frac(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_interval(rng):
    a = rand_frac(rng, -3, 3)
    b = a + Fraction(rng.randint(1, 12), rng.randint(1, 4))
    rl = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    rr = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    return interval(a, b, rl, rr)


def random_polygon(rng, kmin=3, kmax=7):
    """Polygon around the origin from k labels with small integer normals."""
    while True:
        k = rng.randint(kmin, kmax)
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        labels = []
        for a in angles:
            u = (round(4 * math.cos(a)), round(4 * math.sin(a)))
            if u == (0, 0):
                continue
            labels.append(AffineFunction(u, Fraction(rng.randint(1, 12), rng.randint(1, 3))))
        try:
            P = LabelledPolytope(labels, [[1, 0], [0, 1]], prune=True)
        except ToricError:
            continue
        if P.n_labels >= 3:
            return P


def random_polytope3(rng):
    """A box with a few random corner cuts, pruned to a minimal labelling."""
    while True:
        labels = list(box(*(rng.randint(1, 3) for _ in range(3))).labels)
        for _ in range(rng.randint(0, 3)):
            u = tuple(rng.choice([-1, 1]) * rng.randint(1, 2) for _ in range(3))
            labels.append(AffineFunction(u, Fraction(rng.randint(2, 8), 2)))
        try:
            return LabelledPolytope(labels, None, prune=True)
        except ToricError:
            continue


def random_polytope(rng, m):
    return {1: random_interval, 2: random_polygon, 3: random_polytope3}[m](rng)


def random_affine(rng, m):
    return AffineFunction(tuple(rand_frac(rng) for _ in range(m)), rand_frac(rng))


def random_pl(rng, m, pieces=None):
    k = rng.randint(2, 3) if pieces is None else pieces
    return PLConvexFunction(tuple(random_affine(rng, m) for _ in range(k)))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def unit_interval():
    return interval()


@pytest.fixture
def square():
    return box(1, 1)


@pytest.fixture
def half_simplex():
    return standard_simplex(2, Fraction(1, 2))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.VERDICTS):
            terminalreporter.write_line(line)
