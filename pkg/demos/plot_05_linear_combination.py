"""
Combining two functions with the same functional equation
=========================================================

Mod 13 has two odd conjugate pairs of order-12 characters, so it gives two
independent functions with the same W(s). The combination

    F(s) = f1(s0) f2(s) - f2(s0) f1(s)

has a zero at s0 by construction, but keeps the functional equation only
when f1(s0) and f2(s0) are real.
"""

from dhzeros.dh import fe_residual
from dhzeros.lincomb import build_same_fe_pair, combo_fe_residual, make_combo

pair = build_same_fe_pair(13)
print("characters", pair.f1.chi.label, pair.f2.chi.label, "kappa", pair.kappa)

s0 = 0.7 + 3j
F = make_combo(pair, s0)
print("c1 =", F.c1, " c2 =", F.c2)
print("|F(s0)| =", abs(F(s0)))

for s in (2 + 5j, 0.25 + 20j, -1 + 40j):
    print(f"s = {s}:  F residual {combo_fe_residual(F, s):.4f}   components "
          f"{fe_residual(pair.f1, s):.1e} {fe_residual(pair.f2, s):.1e}")

# a real s0 makes both constants real, and the equation survives
G = make_combo(pair, 2.0)
print("real s0:", G.c1, G.c2, "residual at 2+5i", combo_fe_residual(G, 2 + 5j))
