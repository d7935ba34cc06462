"""Analytic continuation of Dirichlet series with periodic coefficients.

Everything here is vectorised over ``s``: scalars in, scalars out; arrays in,
arrays out.  The continuation uses Euler-Maclaurin summation of the Hurwitz
zeta function,

    zeta(s, a) = sum_{n<N} (n+a)^-s + (N+a)^(1-s)/(s-1) + (N+a)^-s / 2
                 + sum_{k=1}^{M} B_2k/(2k)! s(s+1)...(s+2k-2) (N+a)^(-s-2k+1),

with the shift ``N`` chosen per evaluation so that the first omitted
correction is below ``EvalParams.target_abs_tol``.  The starting shift is
``max(min_shift, ceil(shift_factor * |s|))`` (``shift_factor`` is the
constant ``c``, default 1); ``|s|`` rather than ``|Im s|`` keeps the
Pochhammer factors in check for large real parts too.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import Character
from .errors import PoleAtNonPositiveInteger, PoleAtOne, ToleranceNotReached

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps
_CHUNK = 1024  # rows of the (points x terms) work matrix per pass


@dataclass(frozen=True)
class EvalParams:
    target_abs_tol: float = 1e-12
    max_height: float = 250.0
    em_order: int = 12
    min_shift: int = 10
    shift_factor: float = 1.0
    max_shift: int = 200_000

    def __post_init__(self):
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if self.em_order < 1:
            raise ValueError("em_order must be >= 1")
        if self.min_shift < 1:
            raise ValueError("min_shift must be >= 1")


DEFAULT_PARAMS = EvalParams()


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number ``B_n`` (convention ``B_1 = -1/2``), exact."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return b[n]


@lru_cache(maxsize=None)
def _em_coefficients(order: int) -> np.ndarray:
    """``B_2k / (2k)!`` for ``k = 1..order+1`` (last one bounds the remainder)."""
    return np.array([float(bernoulli(2 * k) / math.factorial(2 * k)) for k in range(1, order + 2)])


# log Gamma ---------------------------------------------------------------

_STIRLING = np.array([float(bernoulli(2 * k) / (2 * k * (2 * k - 1))) for k in range(1, 11)])
_STIRLING_SHIFT = 15.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _check_gamma_poles(s: np.ndarray, exc=PoleAtNonPositiveInteger):
    bad = (s.imag == 0) & (s.real <= 0) & (s.real == np.round(s.real))
    if np.any(bad):
        raise exc(f"Gamma has a pole at s = {s[bad][0].real:g}")


def log_gamma(s):
    """Analytic ``log Gamma(s)`` (branch cut on the negative real axis).

    Agrees with :func:`scipy.special.loggamma` off the negative real axis.
    Points with ``Re s < 15`` are shifted up by the recurrence
    ``log Gamma(s) = log Gamma(s+m) - sum_k log(s+k)`` before the Stirling
    series is applied.
    """
    z = np.asarray(s, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    _check_gamma_poles(z)
    m = np.maximum(0, np.ceil(_STIRLING_SHIFT - z.real)).astype(int)
    # Neumaier-compensated sum: hundreds of terms reach |sum| ~ 1e3
    correction = np.zeros_like(z)
    comp = np.zeros_like(z)
    for k in range(int(m.max(initial=0))):
        active = k < m
        term = np.log(z[active] + k)
        acc = correction[active]
        new = acc + term
        big = np.abs(acc.real) >= np.abs(term.real)
        comp.real[active] += np.where(big, (acc.real - new.real) + term.real, (term.real - new.real) + acc.real)
        big = np.abs(acc.imag) >= np.abs(term.imag)
        comp.imag[active] += np.where(big, (acc.imag - new.imag) + term.imag, (term.imag - new.imag) + acc.imag)
        correction[active] = new
    correction += comp
    w = z + m
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _STIRLING[::-1]:
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series * inv - correction
    return out[0] if scalar else out


# Euler-Maclaurin core ------------------------------------------------------

def _remainder_bound(s: np.ndarray, x: np.ndarray, order: int) -> np.ndarray:
    """Bound on the Euler-Maclaurin remainder for shift point(s) ``x = N + a``.

    First omitted term times ``|s + 2M + 1| / (Re s + 2M + 1)``, the usual
    Backlund-type estimate valid for ``Re s > -(2M + 1)``.
    """
    coef = abs(_em_coefficients(order)[order])
    logpoch = np.zeros(s.shape)
    sigma_eff = s.real + 2 * order + 1
    with np.errstate(divide="ignore", invalid="ignore"):
        for j in range(2 * order + 1):
            logpoch += np.log(np.abs(s + j))
        factor = np.where(sigma_eff > 0.5, np.abs(s + 2 * order + 1) / np.maximum(sigma_eff, 0.5), np.inf)
        return coef * np.exp(logpoch - sigma_eff * np.log(x)) * factor


def choose_shift(s, a_min: float, params: EvalParams) -> int:
    """Smallest shift ``N`` (on a geometric ladder) meeting the tolerance at every ``s``."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if s.size == 0:
        return params.min_shift
    scale = float(np.max(np.abs(s)))
    if float(np.max(np.abs(s.imag))) > params.max_height:
        log.warning("evaluating above max_height=%g (|Im s| = %g)", params.max_height,
                    float(np.max(np.abs(s.imag))))
    n = max(params.min_shift, int(math.ceil(params.shift_factor * scale)))
    while True:
        bound = float(np.max(_remainder_bound(s, np.full(s.shape, n + a_min), params.em_order)))
        if bound <= params.target_abs_tol:
            return n
        if n >= params.max_shift:
            raise ToleranceNotReached(
                f"Euler-Maclaurin bound {bound:.3g} > {params.target_abs_tol:g} at N = {n}")
        n = min(params.max_shift, int(n * 1.25) + 1)


def _phi1(z: np.ndarray) -> np.ndarray:
    """``(exp(z) - 1) / z`` without cancellation near 0."""
    out = np.empty_like(z)
    small = np.abs(z) < 1e-3
    zs = z[small]
    out[small] = 1 + zs / 2 * (1 + zs / 3 * (1 + zs / 4 * (1 + zs / 5)))
    zb = z[~small]
    out[~small] = np.expm1(zb) / zb
    return out


def _periodic_sum(s: np.ndarray, coeffs: np.ndarray, q: int, params: EvalParams):
    """``sum_{a=1}^{q} coeffs[a-1] * sum_{k>=0} (qk + a)^-s`` and an error estimate.

    If ``sum(coeffs) == 0`` the series is entire and the Hurwitz poles at
    ``s = 1`` cancel; they are combined analytically so ``s = 1`` is allowed.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    support = np.nonzero(coeffs)[0]
    a_vals = (support + 1) / q
    cvals = coeffs[support]
    entire = abs(coeffs.sum()) < 1e-12 * max(1.0, float(np.abs(coeffs).sum()))
    if not entire and np.any(s == 1):
        raise PoleAtOne("series has a pole at s = 1")

    order = params.em_order
    N = choose_shift(s, float(a_vals.min()), params)
    bern = _em_coefficients(order)[:order]
    n = np.arange(N, dtype=float)

    total = np.zeros(s.shape, dtype=complex)
    err = np.zeros(s.shape)
    x_ref = N + 1.0
    for a, c in zip(a_vals, cvals):
        lb = np.log(n + a)
        x = N + a
        lx = math.log(x)
        for lo in range(0, s.size, _CHUNK):
            sl = slice(lo, lo + _CHUNK)
            ss = s[sl]
            terms = np.exp(-np.outer(ss, lb))
            partial = terms.sum(axis=1)
            xs = np.exp(-ss * lx)  # x^-s
            acc = xs / 2
            poch = ss.copy()
            xpow = xs / x
            for k in range(order):
                acc = acc + bern[k] * poch * xpow
                poch = poch * (ss + 2 * k + 1) * (ss + 2 * k + 2)
                xpow = xpow / (x * x)
            if entire:
                # (x^(1-s) - x_ref^(1-s)) / (s - 1), the x_ref parts cancel over a
                u = 1 - ss
                pole = -np.exp(u * math.log(x_ref)) * (lx - math.log(x_ref)) * _phi1(u * (lx - math.log(x_ref)))
            else:
                pole = x * xs / (ss - 1)
            total[sl] += c * (partial + pole + acc)
            mags = np.abs(terms).sum(axis=1)
            err[sl] += abs(c) * (EPS * mags * (1 + np.abs(ss) * lb[-1]))
        err += abs(c) * _remainder_bound(s, np.full(s.shape, x), order)
    qs = np.exp(-s * math.log(q))
    return total * qs, err * np.abs(qs)


def _as_array(s):
    z = np.asarray(s, dtype=complex)
    return z.ndim == 0, np.atleast_1d(z).ravel(), z.shape


def hurwitz_zeta(s, a, params: EvalParams = DEFAULT_PARAMS, return_error: bool = False):
    """Hurwitz zeta ``zeta(s, a)`` for rational ``0 < a <= 1``."""
    a = Fraction(a)
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    scalar, flat, shape = _as_array(s)
    if np.any(flat == 1):
        raise PoleAtOne("zeta(s, a) has a pole at s = 1")
    q, num = a.denominator, a.numerator
    coeffs = np.zeros(q)
    coeffs[num - 1] = 1.0
    val, err = _periodic_sum(flat, coeffs, q, params)
    val = val * np.exp(flat * math.log(q))  # sum (qk + num)^-s = q^-s zeta(s, a)
    err = err * np.abs(np.exp(flat * math.log(q)))
    if scalar:
        val, err = val[0], float(err[0])
    else:
        val, err = val.reshape(shape), err.reshape(shape)
    return (val, err) if return_error else val


def periodic_series(coeffs, s, params: EvalParams = DEFAULT_PARAMS, return_error: bool = False):
    """Continuation of ``sum_n coeffs[(n-1) % q] n^-s`` with ``q = len(coeffs)``."""
    coeffs = np.asarray(coeffs)
    scalar, flat, shape = _as_array(s)
    val, err = _periodic_sum(flat, coeffs, len(coeffs), params)
    if scalar:
        val, err = val[0], float(err[0])
    else:
        val, err = val.reshape(shape), err.reshape(shape)
    return (val, err) if return_error else val


def character_coefficients(chi: Character) -> np.ndarray:
    """``[chi(1), ..., chi(q)]``."""
    return np.array(chi.values(1), dtype=complex)


def dirichlet_L(chi: Character, s, params: EvalParams = DEFAULT_PARAMS, return_error: bool = False):
    """``L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)``."""
    return periodic_series(character_coefficients(chi), s, params, return_error)
