"""
Probing uniform stability with simple creases
=============================================

``crease_scan`` evaluates F(f) / ||f|| for f = max(0, <d, x> + c) over
primitive directions d with entries bounded by ``bound`` and evenly spaced
crease positions, and reports the smallest ratio with its witness.
"""
from fractions import Fraction

from toricstab import blow_up, box, interval
from toricstab.extremal import crease_scan

for name, P in [("square", box(1, 1)),
                ("square blown up at a corner", blow_up(box(1, 1), 0, Fraction(1, 4))),
                ("interval x, (1-x)/1000", interval(0, 1, 1, 1000))]:
    rep = crease_scan(P, 2, 8)
    print(f"{name:30s} min ratio {rep.min_ratio:.6f} over {rep.tested} creases, "
          f"direction ({', '.join(map(str, rep.direction))}), offset {rep.offset}")
