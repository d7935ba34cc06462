"""Davenport-Heilbronn-type functions built from a conjugate character pair.

For a primitive complex character ``chi`` mod ``q`` with root number
``eps = tau(chi) / (i^kappa sqrt(q))`` choose ``theta`` with
``exp(-i theta) eps = exp(i theta)``.  Then

    f(s) = sec(theta)/2 * [exp(-i theta) L(s, chi) + exp(i theta) L(s, conj chi)]

has real Dirichlet coefficients ``sec(theta) Re(exp(-i theta) chi(n))`` and
satisfies ``f(s) = W(s) f(1 - s)`` with

    W(s) = 2^s q^(1/2 - s) pi^(s-1) Gamma(1 - s) sin(pi (s + kappa) / 2).

Building from ``conj chi`` instead gives ``theta -> -theta`` and the very
same function, so ``tan(theta)`` (the coefficient at the residue that
``chi`` sends to ``i``, for ``q = 5``) is intrinsic to the pair.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import characters as ch
from .characters import Character
from .errors import GammaPole, NotPrimitive, RealCharacter, RealRootNumber
from .lfunc import DEFAULT_PARAMS, EvalParams, dirichlet_L, log_gamma, periodic_series

_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)


def epsilon(chi: Character) -> complex:
    """Root number ``tau(chi) / (i^kappa sqrt(q))``."""
    tau = ch.gauss_sum(chi)  # raises NotPrimitive
    return tau / (1j ** ch.parity(chi) * math.sqrt(chi.modulus))


def theta_from_epsilon(eps: complex) -> float:
    """Half the principal argument of ``eps``: ``exp(-i theta) eps = exp(i theta)``."""
    if abs(eps.imag) < 1e-10:
        raise RealRootNumber(f"root number {eps:.12g} is real; the construction degenerates")
    return cmath.phase(eps) / 2


@dataclass(frozen=True)
class DHSpec:
    q: int
    chi: Character
    chi_bar: Character
    kappa: int
    epsilon: complex
    theta: float
    coefficients: np.ndarray = field(repr=False, compare=False)  # a_1..a_q, real

    @property
    def tan_theta(self) -> float:
        return math.tan(self.theta)

    def coefficient(self, n: int) -> float:
        return float(self.coefficients[(n - 1) % self.q])

    def __call__(self, s, params: EvalParams = DEFAULT_PARAMS):
        return eval_dh(self, s, params)

    def evaluator(self, params: EvalParams = DEFAULT_PARAMS):
        """Vectorised ``s -> f(s)`` with ``params`` bound, for the root finders."""
        return lambda s: eval_dh(self, s, params)

    def with_theta(self, theta: float) -> "DHSpec":
        """Same characters, different ``theta`` (breaks the functional equation)."""
        return DHSpec(self.q, self.chi, self.chi_bar, self.kappa, self.epsilon, theta,
                      _coefficients(self.chi, theta))

    def summary(self, n_coeffs: int = 12) -> dict:
        return {
            "q": self.q,
            "char": self.chi.label,
            "char_bar": self.chi_bar.label,
            "kappa": self.kappa,
            "epsilon": [self.epsilon.real, self.epsilon.imag],
            "theta": self.theta,
            "tan_theta": self.tan_theta,
            "coefficients": [self.coefficient(n) for n in range(1, n_coeffs + 1)],
        }


def _coefficients(chi: Character, theta: float) -> np.ndarray:
    rot = cmath.exp(-1j * theta)
    vals = np.array(chi.values(1), dtype=complex)
    return (rot * vals).real / math.cos(theta)


def build_dh(chi: Character) -> DHSpec:
    if not ch.is_primitive(chi):
        raise NotPrimitive(f"character {chi.label} mod {chi.modulus} is not primitive")
    if chi.is_real:
        raise RealCharacter(f"character {chi.label} mod {chi.modulus} is real")
    eps = epsilon(chi)
    theta = theta_from_epsilon(eps)
    return DHSpec(chi.modulus, chi, ch.conjugate(chi), ch.parity(chi), eps, theta,
                  _coefficients(chi, theta))


def series_coefficient(spec: DHSpec, n: int) -> float:
    """``sec(theta) Re(exp(-i theta) chi(n))``."""
    if n < 1:
        raise ValueError("n must be positive")
    return spec.coefficient(n)


def eval_dh(spec: DHSpec, s, params: EvalParams = DEFAULT_PARAMS, return_error: bool = False):
    """``f(s)``, summed directly from the real periodic coefficients.

    Identical by linearity to the combination of the two L-values; see
    :func:`eval_dh_from_L` for that route.
    """
    return periodic_series(spec.coefficients, s, params, return_error)


def eval_dh_from_L(spec: DHSpec, s, params: EvalParams = DEFAULT_PARAMS):
    """``f(s)`` as ``sec(theta)/2 [exp(-i theta) L(s, chi) + exp(i theta) L(s, conj chi)]``."""
    rot = cmath.exp(-1j * spec.theta)
    return (rot * dirichlet_L(spec.chi, s, params)
            + rot.conjugate() * dirichlet_L(spec.chi_bar, s, params)) / (2 * math.cos(spec.theta))


def _log_sin(z: np.ndarray) -> np.ndarray:
    """A logarithm of ``sin z`` that does not overflow for large ``|Im z|``."""
    out = np.empty_like(z)
    up = z.imag > 0
    zu, zd = z[up], z[~up]
    out[up] = math.log(0.5) + 0.5j * math.pi - 1j * zu + np.log1p(-np.exp(2j * zu))
    out[~up] = math.log(0.5) - 0.5j * math.pi + 1j * zd + np.log1p(-np.exp(-2j * zd))
    return out


def eval_W(q: int, kappa: int, s):
    """``2^s q^(1/2-s) pi^(s-1) Gamma(1-s) sin(pi (s+kappa)/2)``, assembled in log space."""
    z = np.asarray(s, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    one_minus = 1 - z
    bad = (one_minus.imag == 0) & (one_minus.real <= 0) & (one_minus.real == np.round(one_minus.real))
    if np.any(bad):
        raise GammaPole(f"Gamma(1 - s) has a pole at s = {z[bad][0].real:g}")
    logrest = z * _LOG2 + (0.5 - z) * math.log(q) + (z - 1) * _LOGPI + log_gamma(one_minus)
    arg = 0.5 * math.pi * (z + kappa)
    out = np.empty_like(z)
    # moderate heights: multiply by sin directly so its real zeros come out exact
    direct = np.abs(arg.imag) <= 30
    out[direct] = np.exp(logrest[direct]) * np.sin(arg[direct])
    out[~direct] = np.exp(logrest[~direct] + _log_sin(arg[~direct]))
    return out[0] if scalar else out


def fe_residual(spec: DHSpec, s, params: EvalParams = DEFAULT_PARAMS, floor: float = 1e-300):
    """Normalized ``|f(s) - W(s) f(1-s)| / (|f(s)| + |W(s) f(1-s)| + floor)``."""
    z = np.asarray(s, dtype=complex)
    lhs = eval_dh(spec, z, params)
    rhs = eval_W(spec.q, spec.kappa, z) * eval_dh(spec, 1 - z, params)
    return np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs) + floor)


def standard_grid(n_sigma: int = 10, n_t: int = 20, sigma=(-2.0, 3.0), t=(0.0, 150.0)) -> np.ndarray:
    """Cell-centred grid over a rectangle (200 points by default).

    Cell centres keep the grid off the real axis, where ``Gamma(1 - s)``
    has its poles.
    """
    ds = (sigma[1] - sigma[0]) / n_sigma
    dt = (t[1] - t[0]) / n_t
    ss = sigma[0] + ds * (np.arange(n_sigma) + 0.5)
    ts = t[0] + dt * (np.arange(n_t) + 0.5)
    return (ss[:, None] + 1j * ts[None, :]).ravel()


def find_character(q: int, predicate) -> Character:
    for chi in ch.enumerate_characters(q):
        if predicate(chi):
            return chi
    raise LookupError(f"no character mod {q} matches")
