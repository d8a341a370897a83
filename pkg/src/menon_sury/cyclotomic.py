"""Exact arithmetic in Z[zeta_L].

An element is stored as its coefficient vector in the power basis
1, x, ..., x^(phi(L)-1) modulo the L-th cyclotomic polynomial.  The
representation is a normal form, so equality is coefficient equality and a
rational integer is exactly an element whose only non-zero coefficient is
the constant one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .arith import DomainError, divisors, euler_phi

Poly = tuple[int, ...]


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_divmod_monic(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Long division by a monic polynomial; coefficients low degree first."""
    rem = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise DomainError("divisor must be monic")
    if len(rem) <= dd:
        return [], rem
    quo = [0] * (len(rem) - dd)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            quo[i - dd] = c
            for j in range(dd + 1):
                rem[i - dd + j] -= c * den[j]
    return quo, rem[:dd]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(L: int) -> Poly:
    """Phi_L as a coefficient tuple (constant term first)."""
    if L < 1:
        raise DomainError(f"no cyclotomic polynomial of index {L}")
    poly = [-1] + [0] * (L - 1) + [1]
    for d in divisors(L):
        if d < L:
            poly, rem = poly_divmod_monic(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise ArithmeticError(f"Phi_{d} does not divide x^{L} - 1")
    return tuple(_trim(poly))


@lru_cache(maxsize=None)
def degree(L: int) -> int:
    return euler_phi(L)


@lru_cache(maxsize=None)
def _reduction_table(L: int, k: int) -> Poly:
    # x^k mod Phi_L, cached per (level, power).
    phi = cyclotomic_polynomial(L)
    return tuple(poly_divmod_monic([0] * k + [1], phi)[1])


def reduce_mod_cyclotomic(coeffs: Sequence[int], L: int) -> Poly:
    phi = cyclotomic_polynomial(L)
    deg = len(phi) - 1
    _, rem = poly_divmod_monic(list(coeffs), phi)
    rem = list(rem) + [0] * (deg - len(rem))
    return tuple(rem)


@dataclass(frozen=True)
class RootOfUnityExponent:
    """zeta_level ** numerator."""

    numerator: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise DomainError(f"bad level {self.level}")
        if not 0 <= self.numerator < self.level:
            object.__setattr__(self, "numerator", self.numerator % self.level)

    def at_level(self, level: int) -> "RootOfUnityExponent":
        if level % self.level:
            raise DomainError(f"level {self.level} does not divide {level}")
        return RootOfUnityExponent(self.numerator * (level // self.level), level)

    def __mul__(self, other: "RootOfUnityExponent") -> "RootOfUnityExponent":
        if other.level != self.level:
            raise DomainError("level mismatch")
        return RootOfUnityExponent(self.numerator + other.numerator, self.level)


@dataclass(frozen=True)
class CyclotomicInteger:
    level: int
    coefficients: Poly

    def __post_init__(self):
        if len(self.coefficients) != degree(self.level):
            raise DomainError(
                f"level {self.level} needs {degree(self.level)} coefficients, "
                f"got {len(self.coefficients)}"
            )

    @classmethod
    def from_polynomial(cls, level: int, coeffs: Sequence[int]) -> "CyclotomicInteger":
        """Reduce an arbitrary polynomial in zeta_level to normal form."""
        return cls(level, reduce_mod_cyclotomic(coeffs, level))

    @classmethod
    def from_int(cls, level: int, c: int) -> "CyclotomicInteger":
        return cls(level, (c,) + (0,) * (degree(level) - 1))

    @classmethod
    def zero(cls, level: int) -> "CyclotomicInteger":
        return cls.from_int(level, 0)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def __add__(self, other):
        return add(self, _coerce(other, self.level))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInteger(self.level, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        return add(self, -_coerce(other, self.level))

    def __rsub__(self, other):
        return add(-self, _coerce(other, self.level))

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(other, self)
        return mul(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coefficients) if c]
        return f"CyclotomicInteger<{self.level}>({' + '.join(terms) or '0'})"


def _coerce(x, level: int) -> CyclotomicInteger:
    if isinstance(x, CyclotomicInteger):
        return x
    if isinstance(x, int):
        return CyclotomicInteger.from_int(level, x)
    raise TypeError(f"cannot combine {type(x).__name__} with a cyclotomic integer")


def _check_levels(a: CyclotomicInteger, b: CyclotomicInteger) -> None:
    if a.level != b.level:
        raise DomainError(f"level mismatch: {a.level} vs {b.level}")


def from_root(e: RootOfUnityExponent, level: Optional[int] = None) -> CyclotomicInteger:
    """zeta_L ** k in normal form; `level` is the ambient level, default e.level."""
    if level is None:
        level = e.level
    if e.level != level:
        raise DomainError(f"root at level {e.level} used at ambient level {level}")
    k = e.numerator
    deg = degree(level)
    if k < deg:
        coeffs = [0] * deg
        coeffs[k] = 1
        return CyclotomicInteger(level, tuple(coeffs))
    return CyclotomicInteger(level, _padded(_reduction_table(level, k), deg))


def _padded(c: Sequence[int], deg: int) -> Poly:
    return tuple(c) + (0,) * (deg - len(c))


def add(a: CyclotomicInteger, b: CyclotomicInteger) -> CyclotomicInteger:
    _check_levels(a, b)
    return CyclotomicInteger(a.level, tuple(x + y for x, y in zip(a.coefficients, b.coefficients)))


def scale(c: int, a: CyclotomicInteger) -> CyclotomicInteger:
    return CyclotomicInteger(a.level, tuple(c * x for x in a.coefficients))


def mul(a: CyclotomicInteger, b: CyclotomicInteger) -> CyclotomicInteger:
    _check_levels(a, b)
    # Rational operands are common in character sums; skip the convolution.
    if a.is_rational():
        return scale(a.coefficients[0], b)
    if b.is_rational():
        return scale(b.coefficients[0], a)
    return CyclotomicInteger.from_polynomial(a.level, poly_mul(a.coefficients, b.coefficients))


def embed(a: CyclotomicInteger, M: int) -> CyclotomicInteger:
    """Image under zeta_L -> zeta_M^(M/L)."""
    if M < 1 or M % a.level:
        raise DomainError(f"cannot embed level {a.level} into level {M}")
    step = M // a.level
    poly = [0] * ((len(a.coefficients) - 1) * step + 1)
    for i, c in enumerate(a.coefficients):
        poly[i * step] = c
    return CyclotomicInteger.from_polynomial(M, poly)


def as_rational_integer(a: CyclotomicInteger) -> Optional[int]:
    if a.is_rational():
        return a.coefficients[0]
    return None


def root_sum(counts: Sequence[int], level: int) -> CyclotomicInteger:
    """sum_k counts[k] * zeta_level**k, for a histogram of exponents."""
    return CyclotomicInteger.from_polynomial(level, counts)
