"""Dense linear algebra over the rationals.

Everything here works on plain nested lists of :class:`fractions.Fraction`
and never touches floating point. Matrices are lists of rows.
"""
from fractions import Fraction
from math import gcd, lcm

from .errors import InputError, SingularMatrix

__all__ = [
    "frac", "vec", "mat", "dot", "matvec", "transpose", "det", "rank",
    "solve", "inverse", "nullspace", "lattice_basis", "primitive",
    "fraction_str",
]


def frac(x):
    """Coerce ``x`` to a Fraction.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats are refused so that exact inputs cannot silently pick up binary
    rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "/" in s:
                p, q = s.split("/")
                return Fraction(int(p), int(q))
            return Fraction(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs):
    return tuple(frac(x) for x in xs)


def mat(rows):
    return [list(vec(r)) for r in rows]


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def matvec(A, x):
    return [dot(row, x) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def _echelon(A):
    """Row-reduce a copy of ``A``; return (reduced rows, pivot columns, sign)."""
    M = [list(r) for r in A]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
            sign = -sign
        piv = M[r][c]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c] / piv
                Mi, Mr = M[i], M[r]
                for k in range(c, ncols):
                    Mi[k] -= f * Mr[k]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots, sign


def det(A):
    n = len(A)
    if n == 0:
        return Fraction(1)
    M, pivots, sign = _echelon(A)
    if len(pivots) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= M[i][i]
    return out


def rank(A):
    if not A or not A[0]:
        return 0
    return len(_echelon(A)[1])


def solve(A, b):
    """Solve the square system ``A x = b`` exactly.

    Raises :class:`SingularMatrix` if ``A`` is singular.
    """
    n = len(A)
    aug = [list(A[i]) + [Fraction(b[i])] for i in range(n)]
    M, pivots, _ = _echelon(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular")
    return [M[i][n] / M[i][i] for i in range(n)]


def inverse(A):
    n = len(A)
    aug = [list(A[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    M, pivots, _ = _echelon(aug)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular")
    return [[M[i][n + j] / M[i][i] for j in range(n)] for i in range(n)]


def nullspace(A, ncols=None):
    """Basis of ``{x : A x = 0}`` as a list of vectors."""
    if ncols is None:
        ncols = len(A[0])
    if not A:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    M, pivots, _ = _echelon(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -M[r][f] / M[r][c]
        basis.append(x)
    return basis


def _common_denominator(vectors):
    d = 1
    for v in vectors:
        for x in v:
            d = lcm(d, Fraction(x).denominator)
    return d


def primitive(v):
    """Positive rescaling of a rational vector to a primitive integer vector."""
    d = _common_denominator([v])
    ints = [int(Fraction(x) * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise InputError("zero vector has no primitive rescaling")
    return [Fraction(x // g) for x in ints]


def lattice_basis(generators):
    """Z-basis of the lattice spanned by rational ``generators``.

    Integer row reduction (Hermite style) after clearing denominators.
    Returns a list of basis vectors, possibly fewer than the ambient
    dimension if the generators do not have full rank.
    """
    gens = [list(map(Fraction, g)) for g in generators]
    if not gens:
        return []
    n = len(gens[0])
    d = _common_denominator(gens)
    rows = [[int(x * d) for x in g] for g in gens]
    basis = []
    col = 0
    while rows and col < n:
        rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                (new if r2[col] != 0 else rest).append(r2)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        rows = rest
        col += 1
    return [[Fraction(a, d) for a in b] for b in basis]
