"""
Zeros off the critical line
===========================

Count zeros with the argument principle, isolate them by bisection, polish
with Newton, and check that every zero off the line has a mirror image.
"""

from dhzeros import build_dh, characters as ch
from dhzeros.zeros import SearchRect, find_zeros, mirror_check, winding_number

f = build_dh(ch.get_character(5, 1)).evaluator()
rect = SearchRect(-1, 2, 80, 90)

print("zeros inside", rect.as_list(), ":", winding_number(f, rect))

for z in find_zeros(f, rect):
    z = mirror_check(f, z)
    tag = "on line " if z.on_critical_line else "OFF LINE"
    print(f"{tag}  {z.location.real:.10f} + {z.location.imag:.10f}i  |f| = {z.final_residual:.1e}"
          f"  mirror sigma = {z.mirror.real:.10f}")

# a region with nothing in it: |f - 1| < 1 for Re s >= 4
print("zeros in [4,6]x[0,10]:", winding_number(f, SearchRect(4, 6, 0, 10)))
