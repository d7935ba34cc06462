"""Linear combinations of two functions sharing one functional equation.

Given ``f1, f2`` with ``f_k(s) = W(s) conj(f_k(1 - conj s))``, the function

    F(s) = f1(s0) f2(s) - f2(s0) f1(s)

vanishes at ``s0`` by construction, yet it satisfies the same equation only
when both constants ``f_k(s0)`` are real: in general
``W(s) conj(F(1 - conj s)) = conj(c1) f2(s) - conj(c2) f1(s)``.

The two components are Davenport-Heilbronn-type functions with the same
modulus and parity (hence the same ``W``).  Their coefficients are real, so
``conj(f_k(1 - conj s)) = f_k(1 - s)`` and the conjugate form of the
equation is the plain ``f_k(s) = W(s) f_k(1 - s)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import characters as ch
from .dh import DHSpec, build_dh, eval_dh, eval_W, fe_residual, standard_grid
from .errors import NotEnoughPairs, VerificationFailure
from .lfunc import DEFAULT_PARAMS, EvalParams

FE_TOL = 1e-8


@dataclass(frozen=True)
class SameFEPair:
    f1: DHSpec
    f2: DHSpec
    witness: tuple[complex, complex]  # f1/f2 sampled at two points; they differ

    @property
    def q(self) -> int:
        return self.f1.q

    @property
    def kappa(self) -> int:
        return self.f1.kappa


@dataclass(frozen=True)
class ComboFunction:
    pair: SameFEPair
    s0: complex
    c1: complex
    c2: complex

    def __call__(self, s, params: EvalParams = DEFAULT_PARAMS):
        return combo_eval(self, s, params)


def build_same_fe_pair(q: int, params: EvalParams = DEFAULT_PARAMS, check_grid: bool = True) -> SameFEPair:
    """Two DH functions mod ``q`` from distinct conjugate pairs of equal parity.

    The highest-order pairs are preferred; each component is verified
    against the functional equation on :func:`~dhzeros.dh.standard_grid`.
    """
    by_parity: dict[int, list] = {}
    for chi, _ in ch.complex_pairs(q):
        by_parity.setdefault(ch.parity(chi), []).append(chi)
    options = [sorted(v, key=lambda c: (-c.order, c.label)) for v in by_parity.values() if len(v) >= 2]
    if not options:
        raise NotEnoughPairs(f"modulus {q} lacks two complex primitive conjugate pairs of equal parity")
    # prefer odd, then the parity class with the higher orders
    chis = sorted(options, key=lambda v: (-ch.parity(v[0]), -v[0].order))[0][:2]
    f1, f2 = build_dh(chis[0]), build_dh(chis[1])
    if check_grid:
        grid = standard_grid()
        for f in (f1, f2):
            worst = float(np.max(fe_residual(f, grid, params)))
            if worst >= FE_TOL:
                raise VerificationFailure(f"component {f.chi.label} mod {q}: FE residual {worst:.3g}")
    r = [complex(eval_dh(f1, s, params) / eval_dh(f2, s, params)) for s in (2.0, 3.0)]
    if abs(r[0] - r[1]) <= 1e-6:
        raise VerificationFailure("components look proportional")
    return SameFEPair(f1, f2, (r[0], r[1]))


def make_combo(pair: SameFEPair, s0: complex, params: EvalParams = DEFAULT_PARAMS) -> ComboFunction:
    s0 = complex(s0)
    return ComboFunction(pair, s0, complex(eval_dh(pair.f1, s0, params)), complex(eval_dh(pair.f2, s0, params)))


def combo_eval(combo: ComboFunction, s, params: EvalParams = DEFAULT_PARAMS):
    """``c1 f2(s) - c2 f1(s)``."""
    p = combo.pair
    return combo.c1 * eval_dh(p.f2, s, params) - combo.c2 * eval_dh(p.f1, s, params)


def combo_fe_residual(combo: ComboFunction, s, params: EvalParams = DEFAULT_PARAMS, floor: float = 1e-300):
    """Normalized ``|F(s) - W(s) conj(F(1 - conj s))|``."""
    z = np.asarray(s, dtype=complex)
    lhs = combo_eval(combo, z, params)
    rhs = eval_W(combo.pair.q, combo.pair.kappa, z) * np.conj(combo_eval(combo, 1 - np.conj(z), params))
    return np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs) + floor)


def demo(q: int = 13, s0: complex = 0.7 + 3j, samples=(2 + 5j, 0.25 + 20j, -1 + 40j),
         params: EvalParams = DEFAULT_PARAMS) -> dict:
    """Numbers behind the claim that ``F`` breaks the functional equation."""
    pair = build_same_fe_pair(q, params)
    combo = make_combo(pair, s0, params)
    pts = np.asarray(samples, dtype=complex)
    res = combo_fe_residual(combo, pts, params)
    comp = [fe_residual(pair.f1, pts, params), fe_residual(pair.f2, pts, params)]
    return {
        "q": q,
        "chars": [pair.f1.chi.label, pair.f2.chi.label],
        "kappa": pair.kappa,
        "s0": [s0.real, s0.imag],
        "c1": [combo.c1.real, combo.c1.imag],
        "c2": [combo.c2.real, combo.c2.imag],
        "value_at_s0": abs(complex(combo_eval(combo, s0, params))),
        "residual_at_samples": [{"s": [z.real, z.imag], "residual": float(r)} for z, r in zip(pts, res)],
        "component_residuals": [[float(x) for x in c] for c in comp],
    }
