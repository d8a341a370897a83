"""Exact integer arithmetic functions.

Everything here works on Python ints, so there is no overflow at any size.
Functions that take a factorization also accept a plain positive int and
factor it on the fly.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Sequence, Union

TRIAL_DIVISION_LIMIT = 10**6

# Deterministic Miller-Rabin witnesses, valid for n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class DomainError(ValueError):
    """An argument lies outside the domain of an arithmetic operation."""


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer, primes ascending."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        primes = [p for p, _ in self.pairs]
        if primes != sorted(set(primes)):
            raise DomainError(f"primes must be strictly ascending: {primes}")
        for p, e in self.pairs:
            if e < 1 or not is_probable_prime(p):
                raise DomainError(f"bad factor {p}^{e}")

    @property
    def n(self) -> int:
        return math.prod(p**e for p, e in self.pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def radical(self) -> int:
        return math.prod(self.primes)

    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.pairs)

    def valuation(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


FactorLike = Union[int, Factorization]


def as_factorization(f: FactorLike) -> Factorization:
    if isinstance(f, Factorization):
        return f
    return factorize(f)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    limit = TRIAL_DIVISION_LIMIT
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(itertools.compress(range(limit + 1), sieve))


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed witnesses; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; the seeded RNG keeps factorize deterministic.
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> Factorization:
    """Trial division by primes below 10**6, then Pollard rho."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    found: dict[int, int] = {}
    rest = n
    for p in _small_primes():
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        _split_large(rest, found)
    return Factorization(tuple(sorted(found.items())))


def euler_phi(f: FactorLike) -> int:
    return math.prod(p ** (e - 1) * (p - 1) for p, e in as_factorization(f))


def phi_prime_power(p, m):
    return p**m - p ** (m - 1) if m > 0 else 1


def sigma_prime_power(r, p, m):
    """sigma_r(p^m) = 1 + p^r + ... + p^(m r)."""
    q = p**r
    total, term = 1, 1
    for _ in range(m):
        term = term * q
        total = total + term
    return total


def sigma(r: int, f: FactorLike) -> int:
    """Sum of r-th powers of the divisors; sigma(0, n) is the divisor count."""
    if r < 0:
        raise DomainError("sigma needs r >= 0")
    return math.prod(sigma_prime_power(r, p, e) for p, e in as_factorization(f))


def divisors(f: FactorLike) -> list[int]:
    divs = [1]
    for p, e in as_factorization(f):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def jordan_totient(r: int, f: FactorLike) -> int:
    """Number of r-tuples in (Z/n)^r whose gcd with n is 1."""
    if r < 1:
        raise DomainError("jordan_totient needs r >= 1")
    return math.prod(p ** (r * (e - 1)) * (p**r - 1) for p, e in as_factorization(f))


def radical(f: FactorLike) -> int:
    return as_factorization(f).radical()


def gcd_many(values: Iterable[int]) -> int:
    values = list(values)
    if not values:
        raise DomainError("gcd_many needs at least one value")
    return math.gcd(*values)


def lcm_many(values: Iterable[int]) -> int:
    return reduce(math.lcm, values, 1)


def valuation(p: int, n: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def crt_pair(a1: int, n1: int, a2: int, n2: int) -> int:
    """The x mod n1*n2 with x = a1 (n1) and x = a2 (n2); moduli coprime."""
    if math.gcd(n1, n2) != 1:
        raise DomainError(f"moduli {n1} and {n2} are not coprime")
    return (a1 + n1 * ((a2 - a1) * pow(n1, -1, n2))) % (n1 * n2)


def multiplicative_order(a: int, n: int, group_order: int, group_order_factors: Sequence[int]) -> int:
    order = group_order
    for q in group_order_factors:
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order
