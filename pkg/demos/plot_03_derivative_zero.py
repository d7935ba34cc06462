"""
A zero of f' between a mirror pair
==================================

Between the two zeros of an off-line pair sits a zero of the derivative.
It is found by scanning a thin box around the segment joining them.
"""

from dhzeros import build_dh, characters as ch
from dhzeros.zeros import SearchRect, derivative, derivative_zero_between, find_zeros, mirror_check

f = build_dh(ch.get_character(5, 1)).evaluator()

zs = find_zeros(f, SearchRect(-1, 2, 174, 179))
right = next(z for z in zs if z.location.real > 0.55)
pair = (right.location, mirror_check(f, right).mirror)
print("pair:", pair)

b = derivative_zero_between(f, pair)
print("zero of f':", b, " |f'| =", abs(derivative(f)(b)))
print("f there:", f(b))
