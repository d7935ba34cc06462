"""
Building a Davenport-Heilbronn type function
=============================================

Start from a complex primitive character, read off its root number, and
mix the L-functions of the character and its conjugate into one Dirichlet
series with real coefficients.
"""

import math

import numpy as np

from dhzeros import build_dh, characters as ch
from dhzeros.dh import fe_residual, standard_grid

###############################################################################
# Characters mod 5. Label 1 sends the generator 2 to i.

for chi in ch.enumerate_characters(5):
    print(chi.label, [chi(n) for n in range(1, 6)], "parity", ch.parity(chi))

chi = ch.get_character(5, 1)

###############################################################################
# The root number and the mixing angle. theta is half the argument of eps.

spec = build_dh(chi)
print("epsilon  ", spec.epsilon)
print("tan theta", spec.tan_theta)
r = math.sqrt(1 + 1 / math.sqrt(5))
print("tan^2 theta", spec.tan_theta**2, "closed form", (math.sqrt(2) - r) / (math.sqrt(2) + r))

###############################################################################
# Coefficients repeat with period 5: 1, tan, -tan, -1, 0.

print([round(spec.coefficient(n), 6) for n in range(1, 11)])

###############################################################################
# The function satisfies f(s) = W(s) f(1 - s). Check it on 200 points.

res = fe_residual(spec, standard_grid())
print("max functional equation residual", res.max())

# nudging theta breaks it
print("perturbed:", fe_residual(spec.with_theta(spec.theta + 0.1), 2 + 10j))

###############################################################################
# Same story mod 7 with the odd order-6 character (chi(3) = exp(i pi/3)).

spec7 = build_dh(ch.get_character(7, 1))
print("mod 7 epsilon", spec7.epsilon, "Im/Re", spec7.epsilon.imag / spec7.epsilon.real)
print("mod 7 tan theta", spec7.tan_theta)
print("mod 7 residual", np.max(fe_residual(spec7, standard_grid())))
