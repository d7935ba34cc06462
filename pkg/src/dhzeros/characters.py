"""Dirichlet characters with exact values.

A character mod ``q`` is stored as a table of rational *turns*: the entry
for ``n`` is ``r`` with ``chi(n) = exp(2 pi i r)``, ``0 <= r < 1``, or
``None`` when ``gcd(n, q) > 1``.  All group arithmetic (products,
conjugation, multiplicativity checks) is therefore exact.

Enumeration order
-----------------
``(Z/qZ)*`` is decomposed by the Chinese remainder theorem into cyclic
factors, ordered by increasing prime:

* ``p**e`` with ``p`` odd: one factor generated by the least primitive
  root mod ``p**e``;
* ``4``: one factor generated by ``-1``;
* ``2**e`` with ``e >= 3``: two factors generated by ``-1`` and ``5``.

Each generator is lifted to a residue mod ``q`` that is ``1`` modulo the
other prime-power components.  A character is an exponent vector
``(k_1, ..., k_r)`` with ``chi(g_j) = exp(2 pi i k_j / m_j)``, where
``m_j`` is the order of ``g_j``.  Characters are listed in lexicographic
order of their exponent vectors and ``label`` is the position in that
list, so label 0 is always the principal character.

For example mod 5 (generator 2) the character with ``chi(2) = i`` has
label 1; mod 7 (generator 3) label 1 is the odd character of order 6
with ``chi(3) = exp(pi i / 3)``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import NotPrimitive

Turn = Optional[Fraction]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n`` as ``[(p, e), ...]`` with ``p`` ascending."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def least_primitive_root(n: int) -> int:
    """Least generator of the cyclic group ``(Z/nZ)*``."""
    phi = euler_phi(n)
    for g in range(1, n):
        if math.gcd(g, n) == 1 and multiplicative_order(g, n) == phi:
            return g
    raise ValueError(f"(Z/{n}Z)* is not cyclic")


@dataclass(frozen=True)
class _Factor:
    modulus: int  # prime power the factor lives in
    generator: int  # generator lifted to a residue mod q
    order: int
    dlog: dict  # residue mod `modulus` -> exponent of the local generator


@lru_cache(maxsize=None)
def _decomposition(q: int) -> tuple[_Factor, ...]:
    factors = []
    for p, e in factorize(q):
        pe = p**e
        others = q // pe

        def lift(g, pe=pe, others=others):
            # CRT: x = g mod pe, x = 1 mod others
            if others == 1:
                return g % q
            t = ((g - 1) * pow(others, -1, pe)) % pe
            return (1 + others * t) % q

        if p == 2:
            if e == 1:
                continue
            # every unit mod 2^e is uniquely (-1)^a 5^b, b mod 2^(e-2)
            dl_minus, dl_five = {}, {}
            for a in range(2):
                for b in range(2 ** (e - 2)):
                    x = ((-1) ** a * pow(5, b, pe)) % pe
                    dl_minus[x] = a
                    dl_five[x] = b
            factors.append(_Factor(pe, lift(pe - 1), 2, dl_minus))
            if e >= 3:
                factors.append(_Factor(pe, lift(5), 2 ** (e - 2), dl_five))
        else:
            g = least_primitive_root(pe)
            order = pe - pe // p
            dl, x = {}, 1
            for k in range(order):
                dl[x] = k
                x = x * g % pe
            factors.append(_Factor(pe, lift(g), order, dl))
    return tuple(factors)


def generators(q: int) -> list[tuple[int, int]]:
    """The ``(generator mod q, order)`` pairs used for enumeration."""
    return [(f.generator, f.order) for f in _decomposition(q)]


@dataclass(frozen=True)
class Character:
    """A Dirichlet character mod ``modulus`` with exact turn-angle values."""

    modulus: int
    turns: tuple[Turn, ...]  # index n % modulus
    label: int = 0
    exponents: tuple[int, ...] = ()

    def __call__(self, n: int) -> complex:
        return value(self, n)

    def turn(self, n: int) -> Turn:
        return self.turns[n % self.modulus]

    @property
    def order(self) -> int:
        den = 1
        for r in self.turns:
            if r is not None:
                den = den * r.denominator // math.gcd(den, r.denominator)
        return den

    @property
    def is_real(self) -> bool:
        return all(r is None or r in (0, Fraction(1, 2)) for r in self.turns)

    @property
    def is_principal(self) -> bool:
        return all(r is None or r == 0 for r in self.turns)

    def values(self, start: int = 1) -> list[complex]:
        """Complex values at ``start, ..., start + q - 1``."""
        return [value(self, n) for n in range(start, start + self.modulus)]

    def __repr__(self):
        return f"Character(modulus={self.modulus}, label={self.label}, exponents={self.exponents})"


def _turn_to_complex(r: Turn) -> complex:
    if r is None:
        return 0j
    # exact for the common quarter turns, avoids 6e-17 crumbs
    if 4 % r.denominator == 0:
        return {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j,
                Fraction(3, 4): -1j}[r]
    if r > Fraction(1, 2):
        # conjugate characters then get bit-for-bit conjugate values
        return _turn_to_complex(1 - r).conjugate()
    return cmath.exp(2j * math.pi * float(r))


def character_from_exponents(q: int, exponents: Sequence[int], label: int = 0) -> Character:
    factors = _decomposition(q)
    if len(exponents) != len(factors):
        raise ValueError(f"expected {len(factors)} exponents for modulus {q}")
    turns: list[Turn] = []
    for n in range(q):
        if math.gcd(n, q) != 1:
            turns.append(None)
            continue
        r = Fraction(0)
        for f, k in zip(factors, exponents):
            r += Fraction(k * f.dlog[n % f.modulus], f.order)
        turns.append(r % 1)
    return Character(q, tuple(turns), label, tuple(int(k) % f.order for k, f in zip(exponents, factors)))


def enumerate_characters(q: int) -> list[Character]:
    """All ``phi(q)`` characters mod ``q`` in the documented order."""
    if q < 1:
        raise ValueError("modulus must be positive")
    orders = [f.order for f in _decomposition(q)]
    return [character_from_exponents(q, ks, label)
            for label, ks in enumerate(itertools.product(*(range(m) for m in orders)))]


def get_character(q: int, label: int) -> Character:
    chars = enumerate_characters(q)
    if not 0 <= label < len(chars):
        raise ValueError(f"label {label} out of range for modulus {q} ({len(chars)} characters)")
    return chars[label]


def value(chi: Character, n: int) -> complex:
    """``chi(n)`` as a complex number (0 off the reduced residues)."""
    return _turn_to_complex(chi.turns[n % chi.modulus])


def parity(chi: Character) -> int:
    """``kappa``: 0 for even characters, 1 for odd ones."""
    if chi.modulus <= 2:
        return 0
    return 0 if chi.turn(-1) == 0 else 1


def conjugate(chi: Character) -> Character:
    turns = tuple(None if r is None else (-r) % 1 for r in chi.turns)
    label = chi.label
    if chi.exponents:
        orders = [f.order for f in _decomposition(chi.modulus)]
        exps = tuple((-k) % m for k, m in zip(chi.exponents, orders))
        label = 0
        for k, m in zip(exps, orders):
            label = label * m + k
        return Character(chi.modulus, turns, label, exps)
    return Character(chi.modulus, turns, label, chi.exponents)


def conductor(chi: Character) -> int:
    q = chi.modulus
    for f in (d for d in range(1, q + 1) if q % d == 0):
        if all(chi.turns[n] == 0 for n in range(1, q, f) if math.gcd(n, q) == 1):
            return f
    return q


def is_primitive(chi: Character) -> bool:
    return conductor(chi) == chi.modulus


def gauss_sum(chi: Character) -> complex:
    """``tau(chi) = sum_{k=1}^q chi(k) exp(2 pi i k / q)`` for primitive ``chi``."""
    if not is_primitive(chi):
        raise NotPrimitive(f"character {chi.label} mod {chi.modulus} has conductor {conductor(chi)}")
    q = chi.modulus
    total = 0j
    for k in range(1, q + 1):
        r = chi.turn(k)
        if r is None:
            continue
        total += cmath.exp(2j * math.pi * float((r + Fraction(k, q)) % 1))
    return total


def complex_pairs(q: int, primitive_only: bool = True) -> list[tuple[Character, Character]]:
    """Conjugate pairs ``(chi, conj chi)`` of non-real characters, lower label first."""
    pairs = []
    for chi in enumerate_characters(q):
        if chi.is_real or (primitive_only and not is_primitive(chi)):
            continue
        bar = conjugate(chi)
        if chi.label < bar.label:
            pairs.append((chi, bar))
    return pairs
