"""
Pre-images of a ray
===================

Curves on which arg f is constant. Following the negative real axis
(phi = pi) back from infinity leads into a zero; following the ray through
f(b), b a zero of f', gives the curves that meet at the branch point.

Writes ``rays_176.svg`` (critical line dashed, zeros as dots, the branch
point as a square).
"""

import math
import sys

import numpy as np

from dhzeros import build_dh, characters as ch
from dhzeros.rays import curves_through_zero, to_svg, write_csv
from dhzeros.zeros import SearchRect, derivative_zero_between, find_zeros, mirror_check

out = sys.argv[1] if len(sys.argv) > 1 else "rays_176.svg"
f = build_dh(ch.get_character(5, 1)).evaluator()
bounds = SearchRect(-1, 2, 174, 179)

right = next(z for z in find_zeros(f, bounds) if z.location.real > 0.55)
pair = (right.location, mirror_check(f, right).mirror)

curves = []
for zero in pair:
    curves += curves_through_zero(f, zero, math.pi, bounds)

b = derivative_zero_between(f, pair)
phi_b = float(np.angle(f(b)))
curves += curves_through_zero(f, b, phi_b, bounds)

for c in curves:
    print(f"phi={c.phi:+.4f}  {len(c.points):4d} points  ends {c.ends}  max residual {c.max_ray_residual:.1e}")

with open(out, "w") as fh:
    fh.write(to_svg(curves, bounds, zeros=pair, marks=[b]))
print("wrote", out)

# the first curve as CSV (sigma, t, |f|, phase residual)
write_csv(curves[0], sys.stdout, f)
