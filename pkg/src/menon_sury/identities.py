"""Classical special cases of the character-weighted gcd sum, each coded
directly from its own formula (divisor sums by enumeration), so they can
serve as regression targets for the general closed form.
"""

from __future__ import annotations

import math

from .arith import divisors, euler_phi, factorize
from .characters import DirichletCharacter


def _divisor_power_sum(k: int, n: int) -> int:
    return sum(d**k for d in divisors(n))


def menon(n: int) -> int:
    """sum over units a of gcd(a - 1, n) = phi(n) tau(n)."""
    return euler_phi(n) * len(divisors(n))


def sury(n: int, r: int) -> int:
    """phi(n) sigma_r(n): one trivial character, r free b-variables."""
    return euler_phi(n) * _divisor_power_sum(r, n)


def li_kim(n: int, s: int, r: int) -> int:
    """s trivial characters: phi(n) prod_p (phi(p^m)^(s-1) p^(mr) - p^(m(s+r-1)) + sigma_{s+r-1}(p^m))."""
    total = euler_phi(n)
    for p, m in factorize(n):
        q = p**m
        phi_q = q - q // p
        total *= phi_q ** (s - 1) * q**r - q ** (s + r - 1) + _divisor_power_sum(s + r - 1, q)
    return total


def zhao_cao(chi: DirichletCharacter) -> int:
    """sum over units a of gcd(a - 1, n) chi(a) = phi(n) tau(n / d)."""
    n = chi.modulus
    return euler_phi(n) * len(divisors(n // chi.conductor))


def li_hu_kim(chi: DirichletCharacter, r: int) -> int:
    """One character, r b-variables: phi(n) sigma_r(n / d)."""
    n = chi.modulus
    return euler_phi(n) * _divisor_power_sum(r, n // chi.conductor)


def same_radical(n: int, d: int) -> bool:
    return math.prod(factorize(n).primes) == math.prod(factorize(d).primes)
