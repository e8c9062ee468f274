"""Command-line interface: ``toricstab <command> POLYTOPE.json [options]``.

Every command prints one JSON document to stdout. Exit status is 0 on
success, 1 when a mathematical check fails (non-Delzant input, nonpositive
stability ratio, unbounded polytope, ...) and 2 for malformed input.
"""
import argparse
import csv
import json
import os
import sys

import numpy as np

from . import abreu1d, extremal, measure, polytope, potential
from .errors import InputError, MissingLattice, ToricError
from .io import (affine_to_dict, num, pl_to_dict, polytope_to_dict, rat, read_pl,
                 read_polynomial, read_polytope)
from .linalg import frac

__all__ = ["main", "run", "build_parser"]


class Result:
    def __init__(self, report, exit_code=0):
        self.report = report
        self.exit_code = exit_code


def _threads():
    raw = os.environ.get("TORICSTAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"TORICSTAB_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise InputError("TORICSTAB_THREADS must be >= 0")
    return n


def _potential(P, args):
    q = read_polynomial(args.perturb, P.dim) if getattr(args, "perturb", None) else None
    return potential.SymplecticPotential(P, q)


# -- commands -----------------------------------------------------------------

def cmd_verify(P, args):
    rep = polytope.verify(P)
    ok = rep.compact and rep.simple and rep.integral is not False
    out = rep.as_dict()
    out["delzant"] = rep.delzant if P.lattice is not None else "not evaluated"
    return Result(out, 0 if ok else 1)


def cmd_moments(P, args):
    mt = measure.moments(P)
    return Result({
        "vol": rat(mt.vol),
        "first": [rat(x) for x in mt.first],
        "second": [[rat(x) for x in row] for row in mt.second],
        "facet_mass": [rat(x) for x in mt.facet_mass],
        "facet_first": [[rat(x) for x in row] for row in mt.facet_first],
        "decimal": {"vol": num(mt.vol), "first": [num(x) for x in mt.first],
                    "facet_mass": [num(x) for x in mt.facet_mass]},
    })


def cmd_extremal(P, args):
    s = extremal.extremal_affine(P)
    return Result({"a0": rat(s.a0), "a": [rat(x) for x in s.a],
                   "decimal": {"a0": num(s.a0), "a": [num(x) for x in s.a]}})


def cmd_futaki(P, args):
    f = read_pl(args.pl, P.dim)
    F = extremal.futaki(P, f)
    return Result({"futaki": rat(F), "decimal": num(F)})


def cmd_scan(P, args):
    rep = extremal.crease_scan(P, args.bound, args.offsets, norm=args.norm)
    out = {"min_ratio": num(rep.min_ratio), "tested": rep.tested, "norm": rep.margin_norm,
           "witness": pl_to_dict(rep.witness),
           "direction": [rat(x) for x in rep.direction], "offset": rat(rep.offset)}
    if rep.min_ratio_exact is not None:
        out["min_ratio_exact"] = rat(rep.min_ratio_exact)
    return Result(out, 0 if rep.min_ratio > 0 else 1)


def cmd_scalar(P, args):
    u = _potential(P, args)
    X = potential.interior_grid(P, args.grid)
    H, _, _, s, _ = potential.metric_arrays(u, X)
    if args.csv:
        m = P.dim
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"x{i + 1}" for i in range(m)] + ["s"]
                       + [f"H{i + 1}{j + 1}" for i in range(m) for j in range(m)])
            for x, sv, h in zip(X, s, H):
                w.writerow([format(v, ".12g") for v in list(x) + [sv] + list(h.ravel())])
    ext = extremal.extremal_affine(P)
    ext_vals = float(ext.a0) + X @ np.array([float(a) for a in ext.a])
    return Result({"points": int(len(X)), "s_min": num(s.min()), "s_max": num(s.max()),
                   "max_dev_from_extremal": num(np.max(np.abs(s - ext_vals))),
                   "extremal": {"a0": rat(ext.a0), "a": [rat(x) for x in ext.a]}})


def cmd_blowup(P, args):
    Q = polytope.blow_up(P, args.vertex, args.eps)
    return Result(polytope_to_dict(Q))


def cmd_monotone(P, args):
    M = extremal.monotone_labelling(P)
    return Result({"x_star": [rat(x) for x in M.x_star],
                   "lambda": rat(M.lam),
                   "extremal": {"a0": rat(M.extremal.a0), "a": [rat(x) for x in M.extremal.a]},
                   "polytope": polytope_to_dict(M.polytope)})


def cmd_testconfig(P, args):
    f = read_pl(args.pl, P.dim)
    Q = polytope.test_configuration(P, f, args.R)
    direct = extremal.futaki(P, f)
    via = extremal.futaki_via_configuration(P, f, args.R)
    doc = polytope_to_dict(Q)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return Result({"polytope": doc, "futaki": rat(direct), "futaki_via_configuration": rat(via),
                   "agree": direct == via}, 0 if direct == via else 1)


def cmd_abreu1d(P, args):
    sol = abreu1d.solve_1d(P)
    ok, witness = abreu1d.positivity_1d(sol)
    out = {"interval": [rat(sol.alpha), rat(sol.beta)],
           "r_left": rat(sol.r_left), "r_right": rat(sol.r_right),
           "H": [rat(c) for c in sol.H], "s": affine_to_dict(sol.s), "positive": ok}
    out["witness"] = {k: ([rat(x) for x in v] if isinstance(v, tuple) else rat(v))
                      for k, v in witness.items()}
    if args.csv:
        n = args.samples
        a, b = float(sol.alpha), float(sol.beta)
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "H", "s", "u2"])
            for k in range(1, n + 1):
                x = a + (b - a) * k / (n + 1)
                H = float(abreu1d.poly_eval([float(c) for c in sol.H], x))
                s = float(sol.s.constant) + float(sol.s.linear[0]) * x
                w.writerow([format(v, ".12g") for v in (x, H, s, 1 / H)])
    return Result(out, 0 if ok else 1)


def cmd_kenergy(P, args):
    u = _potential(P, args)
    return Result({"k_energy": num(potential.k_energy(u, args.grid))})


def cmd_fan(P, args):
    fan = polytope.compute_fan(P)
    return Result({"cones": [{"face": list(face), "generators": [[rat(a) for a in g] for g in gens]}
                             for face, gens in fan.cones],
                   "rays": [[rat(a) for a in r] for r in fan.rays()]})


def cmd_lattice_points(P, args):
    if P.lattice is None:
        raise MissingLattice("lattice-points needs a lattice basis in the polytope file")
    pts = polytope.lattice_points(P)
    return Result({"count": len(pts), "points": [[rat(a) for a in p] for p in pts]})


def cmd_boundary_check(P, args):
    u = _potential(P, args)
    reps = [potential.check_boundary_conditions(u, j, tol=args.tol) for j in range(P.n_labels)]
    ok = all(r.passed for r in reps)
    return Result({"passed": ok, "tol": args.tol,
                   "facets": [{"facet": r.facet, "passed": r.passed,
                               "max_deviation": num(r.max_deviation)} for r in reps]},
                  0 if ok else 1)


COMMANDS = {
    "verify": cmd_verify, "moments": cmd_moments, "extremal": cmd_extremal,
    "futaki": cmd_futaki, "scan": cmd_scan, "scalar": cmd_scalar, "blowup": cmd_blowup,
    "monotone": cmd_monotone, "testconfig": cmd_testconfig, "abreu1d": cmd_abreu1d,
    "kenergy": cmd_kenergy, "fan": cmd_fan, "lattice-points": cmd_lattice_points,
    "boundary-check": cmd_boundary_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser():
    p = _Parser(prog="toricstab", description="Exact computations on labelled polytopes.")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomized sampling")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("polytope", help="polytope JSON file")
        return sp

    add("verify", "Delzant conditions with witnesses")
    add("moments", "exact volume and facet moments")
    add("extremal", "extremal affine function")
    sp = add("futaki", "Donaldson-Futaki invariant of a PL function")
    sp.add_argument("--pl", required=True)
    sp = add("scan", "minimise F/||f|| over simple creases")
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--offsets", type=int, default=16)
    sp.add_argument("--norm", choices=extremal.NORMS, default="star")
    sp = add("scalar", "scalar curvature on an interior grid")
    sp.add_argument("--perturb")
    sp.add_argument("--grid", type=int, default=10)
    sp.add_argument("--csv")
    sp = add("blowup", "blow up a vertex")
    sp.add_argument("--vertex", type=int, required=True)
    sp.add_argument("--eps", type=frac, required=True)
    add("monotone", "monotone relabelling")
    sp = add("testconfig", "test-configuration polytope and Futaki cross-check")
    sp.add_argument("--pl", required=True)
    sp.add_argument("--R", type=frac, required=True)
    sp.add_argument("--out")
    sp = add("abreu1d", "exact extremal potential on a labelled interval")
    sp.add_argument("--csv")
    sp.add_argument("--samples", type=int, default=21)
    sp = add("kenergy", "relative K-energy")
    sp.add_argument("--perturb")
    sp.add_argument("--grid", type=int, default=6)
    add("fan", "normal fan")
    add("lattice-points", "lattice points of the polytope")
    sp = add("boundary-check", "boundary behaviour of H on every facet")
    sp.add_argument("--perturb")
    sp.add_argument("--tol", type=float, default=1e-6)
    return p


def run(argv):
    """Parse ``argv``, run one command and return a :class:`Result`."""
    try:
        args = build_parser().parse_args(argv)
        _threads()
        np.random.seed(args.seed)
        P = read_polytope(args.polytope)
        return COMMANDS[args.command](P, args)
    except (InputError, MissingLattice) as exc:
        return Result({"error": {"type": type(exc).__name__, "message": str(exc)}}, 2)
    except ToricError as exc:
        return Result({"error": {"type": type(exc).__name__, "message": str(exc)}}, 1)


def main(argv=None):
    res = run(sys.argv[1:] if argv is None else argv)
    json.dump(res.report, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
