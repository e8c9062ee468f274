"""JSON formats for polytopes, PL functions and polynomial corrections.

Rationals are written as strings ``"p/q"`` (or ``"p"``); JSON integers are
accepted on input, floats are not.

Polytope::

    {"dim": 2,
     "labels": [{"normal": ["1", "0"], "offset": "0"}, ...],
     "lattice": [["1", "0"], ["0", "1"]]}        # optional, basis vectors

PL function::

    {"pieces": [{"linear": ["0", "0"], "constant": "0"}, ...]}

Polynomial correction (float coefficients)::

    {"terms": [{"exponents": [2, 2], "coeff": 0.05}, ...]}
"""
import json
from fractions import Fraction

from .affine import AffineFunction, PLConvexFunction
from .errors import InputError
from .linalg import frac, fraction_str
from .polynomial import Polynomial
from .polytope import LabelledPolytope

__all__ = [
    "load_json", "polytope_from_dict", "polytope_to_dict", "pl_from_dict", "pl_to_dict",
    "polynomial_from_dict", "read_polytope", "read_pl", "read_polynomial", "rat", "num",
    "affine_to_dict",
]


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _get(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"{where}: missing key {key!r}")
    return d[key]


def _vector(xs, where):
    if not isinstance(xs, list):
        raise InputError(f"{where}: expected a list")
    return tuple(frac(x) for x in xs)


def polytope_from_dict(doc):
    """Build a :class:`LabelledPolytope`; a wrapping ``{"polytope": ...}`` is accepted."""
    if isinstance(doc, dict) and "labels" not in doc and "polytope" in doc:
        doc = doc["polytope"]
    m = _get(doc, "dim", "polytope")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InputError("polytope: dim must be a positive integer")
    labels = []
    for j, lab in enumerate(_get(doc, "labels", "polytope")):
        u = _vector(_get(lab, "normal", f"label {j}"), f"label {j} normal")
        if len(u) != m:
            raise InputError(f"label {j}: normal has length {len(u)}, expected {m}")
        labels.append(AffineFunction(u, frac(_get(lab, "offset", f"label {j}"))))
    lattice = doc.get("lattice")
    if lattice is not None:
        lattice = [_vector(b, "lattice") for b in lattice]
    return LabelledPolytope(labels, lattice)


def rat(x):
    return fraction_str(x)


def num(x):
    """Float rounded to 12 significant digits (for JSON output)."""
    return float(format(float(x), ".12g"))


def affine_to_dict(f):
    return {"linear": [rat(a) for a in f.linear], "constant": rat(f.constant)}


def polytope_to_dict(P):
    doc = {"dim": P.dim,
           "labels": [{"normal": [rat(a) for a in L.linear], "offset": rat(L.constant)}
                      for L in P.labels]}
    if P.lattice is not None:
        doc["lattice"] = [[rat(a) for a in b] for b in P.lattice]
    return doc


def pl_from_dict(doc, dim=None):
    pieces = []
    for k, p in enumerate(_get(doc, "pieces", "PL function")):
        lin = _vector(_get(p, "linear", f"piece {k}"), f"piece {k} linear")
        pieces.append(AffineFunction(lin, frac(_get(p, "constant", f"piece {k}"))))
    f = PLConvexFunction(pieces)
    if dim is not None and f.dim != dim:
        raise InputError(f"PL function has dimension {f.dim}, polytope has {dim}")
    return f


def pl_to_dict(f):
    return {"pieces": [affine_to_dict(p) for p in f.pieces]}


def polynomial_from_dict(doc, dim):
    terms = []
    for k, t in enumerate(_get(doc, "terms", "polynomial")):
        e = _get(t, "exponents", f"term {k}")
        c = _get(t, "coeff", f"term {k}")
        if not isinstance(e, list) or len(e) != dim or not all(isinstance(i, int) for i in e):
            raise InputError(f"term {k}: exponents must be {dim} integers")
        try:
            c = float(Fraction(c)) if isinstance(c, str) else float(c)
        except (TypeError, ValueError) as exc:
            raise InputError(f"term {k}: bad coefficient {c!r}") from exc
        terms.append((e, c))
    return Polynomial(terms, dim)


def read_polytope(path):
    return polytope_from_dict(load_json(path))


def read_pl(path, dim=None):
    return pl_from_dict(load_json(path), dim)


def read_polynomial(path, dim):
    return polynomial_from_dict(load_json(path), dim)
