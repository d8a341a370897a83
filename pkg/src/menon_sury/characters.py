"""Dirichlet characters modulo n as exponent vectors on canonical generators.

Canonical generators, per prime power component of (Z/n)^*:

* odd p^m: the smallest primitive root g of p, replaced by g + p when
  m >= 2 and g^(p-1) = 1 mod p^2;
* 2: no generators; 4: the residue 3 (order 2);
* 2^m, m >= 3: -1 (order 2) followed by 5 (order 2^(m-2)).

A character is named by its exponents e_i: chi(g_i) = zeta_{ord_i}^(e_i).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence

from .arith import DomainError, Factorization, euler_phi, factorize, lcm_many
from .cyclotomic import CyclotomicInteger, RootOfUnityExponent, root_sum

DLOG_TABLE_LIMIT = 10**6


@lru_cache(maxsize=None)
def primitive_root_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    qs = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class UnitComponent:
    """Generators of (Z/p^m)^*, residues taken mod p^m."""

    prime: int
    exponent: int
    generators: tuple[tuple[int, int], ...]

    @property
    def prime_power(self) -> int:
        return self.prime**self.exponent

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for _, o in self.generators)

    @property
    def size(self) -> int:
        return euler_phi(Factorization(((self.prime, self.exponent),)))

    def dlog(self, a: int) -> tuple[int, ...]:
        """Exponent vector of a on this component's generators."""
        a %= self.prime_power
        if self.prime_power <= DLOG_TABLE_LIMIT:
            try:
                return _dlog_table(self)[a]
            except KeyError:
                raise DomainError(f"{a} is not a unit mod {self.prime_power}") from None
        if a % self.prime == 0:
            raise DomainError(f"{a} is not a unit mod {self.prime_power}")
        return _dlog_pohlig_hellman(self, a)


@lru_cache(maxsize=None)
def unit_component(p: int, m: int) -> UnitComponent:
    q = p**m
    if p == 2:
        if m == 1:
            gens = ()
        elif m == 2:
            gens = ((3, 2),)
        else:
            gens = ((q - 1, 2), (5, 2 ** (m - 2)))
    else:
        g = primitive_root_mod_prime(p)
        if m >= 2 and pow(g, p - 1, p * p) == 1:
            g += p
        gens = ((g % q, p ** (m - 1) * (p - 1)),)
    return UnitComponent(p, m, gens)


@lru_cache(maxsize=256)
def _dlog_table(comp: UnitComponent) -> dict[int, tuple[int, ...]]:
    q = comp.prime_power
    table: dict[int, tuple[int, ...]] = {}
    if not comp.generators:
        table[1 % q] = ()
        return table
    ranges = [range(o) for o in comp.orders]
    if len(comp.generators) == 1:
        g = comp.generators[0][0]
        x = 1 % q
        for k in ranges[0]:
            table[x] = (k,)
            x = x * g % q
        return table
    (g0, _), (g1, o1) = comp.generators
    x0 = 1
    for i in ranges[0]:
        x = x0
        for j in ranges[1]:
            table[x] = (i, j)
            x = x * g1 % q
        x0 = x0 * g0 % q
    return table


def _bsgs(g: int, h: int, order: int, mod: int) -> int:
    step = math.isqrt(order) + 1
    baby = {}
    x = 1
    for j in range(step):
        baby.setdefault(x, j)
        x = x * g % mod
    giant = pow(g, -step, mod)
    y = h
    for i in range(step + 1):
        if y in baby:
            return (i * step + baby[y]) % order
        y = y * giant % mod
    raise ArithmeticError(f"{h} is not a power of {g} mod {mod}")


def discrete_log(g: int, h: int, order: int, mod: int) -> int:
    """log_g(h) in the cyclic group of the given order (Pohlig-Hellman)."""
    residues, moduli = [], []
    for q, e in factorize(order):
        qe = q**e
        cofactor = order // qe
        gq, hq = pow(g, cofactor, mod), pow(h, cofactor, mod)
        gamma = pow(gq, qe // q, mod)
        x = 0
        for k in range(e):
            hk = pow(pow(gq, -x, mod) * hq % mod, q ** (e - 1 - k), mod)
            x += _bsgs(gamma, hk, q, mod) * q**k
        residues.append(x)
        moduli.append(qe)
    x, m = 0, 1
    for r_, m_ in zip(residues, moduli):
        x = (x + m * ((r_ - x) * pow(m, -1, m_))) % (m * m_)
        m *= m_
    return x


def _dlog_pohlig_hellman(comp: UnitComponent, a: int) -> tuple[int, ...]:
    q = comp.prime_power
    if comp.prime != 2:
        g, o = comp.generators[0]
        return (discrete_log(g, a, o, q),)
    i = 0 if a % 4 == 1 else 1
    h = a if i == 0 else (-a) % q
    return (i, discrete_log(5, h, comp.generators[1][1], q))


@dataclass(frozen=True)
class UnitGroupStructure:
    modulus: int
    components: tuple[UnitComponent, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for c in self.components for o in c.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        """Exponent of the group, the lcm of generator orders."""
        return lcm_many(self.orders)

    @cached_property
    def global_generators(self) -> tuple[int, ...]:
        """Generators lifted to residues mod n (1 on the other components)."""
        n = self.modulus
        out = []
        for c in self.components:
            q = c.prime_power
            rest = n // q
            # x = g mod q, x = 1 mod rest
            for g, _ in c.generators:
                out.append((1 + rest * ((g - 1) * pow(rest, -1, q))) % n if rest > 1 else g % n)
        return tuple(out)

    def dlog(self, a: int) -> tuple[int, ...]:
        if math.gcd(a, self.modulus) != 1:
            raise DomainError(f"{a} is not a unit mod {self.modulus}")
        return tuple(x for c in self.components for x in c.dlog(a))

    def units(self) -> list[int]:
        n = self.modulus
        return [a for a in range(n) if math.gcd(a, n) == 1] if n > 1 else [0]

    def component_slices(self) -> list[tuple[UnitComponent, slice]]:
        out, start = [], 0
        for c in self.components:
            k = len(c.generators)
            out.append((c, slice(start, start + k)))
            start += k
        return out


@lru_cache(maxsize=1024)
def unit_group_structure(n: int) -> UnitGroupStructure:
    if n < 1:
        raise DomainError(f"no unit group mod {n}")
    comps = tuple(unit_component(p, m) for p, m in factorize(n))
    return UnitGroupStructure(n, comps)


def _local_conductor_exponent(comp: UnitComponent, exps: Sequence[int]) -> int:
    """Smallest j with the local character trivial on 1 + p^j Z."""
    p, m = comp.prime, comp.exponent
    if not any(exps):
        return 0
    if p != 2:
        e = exps[0]
        v = 0
        while e % p == 0 and v < m - 1:
            e //= p
            v += 1
        return max(1, m - v)
    if m == 2:
        return 2
    a, b = exps
    if b == 0:
        return 2
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    return m - v


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"bad modulus {self.modulus}")
        orders = self.structure.orders
        if len(self.exponents) != len(orders):
            raise DomainError(
                f"modulus {self.modulus} has {len(orders)} generators, "
                f"got {len(self.exponents)} exponents"
            )
        reduced = tuple(int(e) % o for e, o in zip(self.exponents, orders))
        object.__setattr__(self, "exponents", reduced)

    @classmethod
    def trivial(cls, n: int) -> "DirichletCharacter":
        return cls(n, (0,) * len(unit_group_structure(n).orders))

    @property
    def structure(self) -> UnitGroupStructure:
        return unit_group_structure(self.modulus)

    @cached_property
    def order(self) -> int:
        return lcm_many(o // math.gcd(o, e) for e, o in zip(self.exponents, self.structure.orders))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def conductor_exponents(self) -> tuple[tuple[int, int], ...]:
        """(p, t_p) with p^t_p the local conductor, for each p | modulus."""
        return tuple(
            (c.prime, _local_conductor_exponent(c, self.exponents[sl]))
            for c, sl in self.structure.component_slices()
        )

    @cached_property
    def conductor(self) -> int:
        return math.prod(p**t for p, t in self.conductor_exponents)

    def conductor_exponent(self, p: int) -> int:
        for q, t in self.conductor_exponents:
            if q == p:
                return t
        return 0

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def exponent_at(self, a: int, level: Optional[int] = None) -> int:
        """k with chi(a) = zeta_level^k (level defaults to the order)."""
        if level is None:
            level = self.order
        elif level % self.order:
            raise DomainError(f"character order {self.order} does not divide level {level}")
        logs = self.structure.dlog(a)
        k = sum(
            e * level // o * d for e, d, o in zip(self.exponents, logs, self.structure.orders)
        )
        return k % level

    def __call__(self, a: int, level: Optional[int] = None) -> RootOfUnityExponent:
        return eval_character(self, a, level)

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-e for e in self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.modulus != self.modulus:
            raise DomainError("characters have different moduli")
        return DirichletCharacter(
            self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def local(self, p: int) -> "DirichletCharacter":
        """The component of chi modulo the exact power of p dividing the modulus."""
        for c, sl in self.structure.component_slices():
            if c.prime == p:
                return DirichletCharacter(c.prime_power, self.exponents[sl])
        return DirichletCharacter.trivial(1)

    def lift(self, n: int) -> "DirichletCharacter":
        """The character mod n induced by chi, i.e. a -> chi(a mod modulus)."""
        if n % self.modulus:
            raise DomainError(f"cannot lift a character mod {self.modulus} to mod {n}")
        if n == self.modulus:
            return self
        G = unit_group_structure(n)
        exps = []
        for g, o in zip(G.global_generators, G.orders):
            # chi(g)^o = 1, so the value is a root of unity of order dividing o.
            level = math.lcm(self.order, o)
            exps.append(self.exponent_at(g % self.modulus, level) // (level // o))
        return DirichletCharacter(n, tuple(exps))

    def __str__(self) -> str:
        return format_character(self)


def eval_character(
    chi: DirichletCharacter, a: int, level: Optional[int] = None
) -> RootOfUnityExponent:
    if level is None:
        level = chi.order
    return RootOfUnityExponent(chi.exponent_at(a, level), level)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def format_character(chi: DirichletCharacter) -> str:
    return f"mod={chi.modulus};exps={','.join(map(str, chi.exponents))}"


def crt_decompose(
    chi: DirichletCharacter, n1: int, n2: int
) -> tuple[DirichletCharacter, DirichletCharacter]:
    if n1 * n2 != chi.modulus or math.gcd(n1, n2) != 1:
        raise DomainError(f"{n1} * {n2} is not a coprime split of {chi.modulus}")
    e1, e2 = [], []
    for c, sl in chi.structure.component_slices():
        (e1 if n1 % c.prime == 0 else e2).extend(chi.exponents[sl])
    return DirichletCharacter(n1, tuple(e1)), DirichletCharacter(n2, tuple(e2))


def enumerate_characters(n: int) -> list[DirichletCharacter]:
    """All phi(n) characters mod n, exponent vectors in lexicographic order."""
    orders = unit_group_structure(n).orders
    return [DirichletCharacter(n, e) for e in itertools.product(*(range(o) for o in orders))]


def iter_character_tuples(n: int, s: int) -> Iterator[tuple[DirichletCharacter, ...]]:
    return itertools.product(enumerate_characters(n), repeat=s)


@dataclass(frozen=True)
class FiltrationLevel:
    """U_j = 1 + p^j Z/p^m inside (Z/p^m)^*, with U_0 the whole unit group
    and U_{m+1} empty."""

    prime: int
    m: int
    j: int

    def __post_init__(self):
        if self.m < 1 or not 0 <= self.j <= self.m + 1:
            raise DomainError(f"no filtration level {self.j} for {self.prime}^{self.m}")

    @property
    def modulus(self) -> int:
        return self.prime**self.m

    @property
    def size(self) -> int:
        p, m, j = self.prime, self.m, self.j
        if j == 0:
            return p**m - p ** (m - 1)
        if j == m + 1:
            return 0
        return p ** (m - j)

    def members(self) -> list[int]:
        p, m, j = self.prime, self.m, self.j
        q = p**m
        if j == 0:
            return [a for a in range(1, q) if a % p]
        if j == m + 1:
            return []
        step = p**j
        return [(1 + step * k) % q for k in range(p ** (m - j))]

    def __contains__(self, a: int) -> bool:
        p, q, j = self.prime, self.modulus, self.j
        a %= q
        if j == 0:
            return a % p != 0
        if j == self.m + 1:
            return False
        return (a - 1) % p**j == 0

    def difference(self) -> list[int]:
        """V_j = U_j minus U_{j+1}."""
        nxt = FiltrationLevel(self.prime, self.m, self.j + 1) if self.j <= self.m else None
        return [a for a in self.members() if nxt is None or a not in nxt]


def _prime_power_parts(n: int) -> tuple[int, int]:
    f = factorize(n)
    if len(f) != 1:
        raise DomainError(f"{n} is not a prime power")
    return f.pairs[0]


def subgroup_sum(chi: DirichletCharacter, j: int, level: Optional[int] = None) -> CyclotomicInteger:
    """sum of chi(a) over U_j, by direct evaluation."""
    p, m = _prime_power_parts(chi.modulus)
    if not 0 <= j <= m:
        raise DomainError(f"level {j} out of range 0..{m}")
    if level is None:
        level = chi.order
    counts = [0] * level
    for a in FiltrationLevel(p, m, j).members():
        counts[chi.exponent_at(a, level)] += 1
    return root_sum(counts, level)


def product_subgroup_sum(chars: Sequence[DirichletCharacter], j: int) -> CyclotomicInteger:
    """sum over (U_j)^s of chi_1(a_1)...chi_s(a_s), by enumerating the product set."""
    n = chars[0].modulus
    p, m = _prime_power_parts(n)
    level = lcm_many(c.order for c in chars)
    members = FiltrationLevel(p, m, j).members()
    tables = [[c.exponent_at(a, level) for a in members] for c in chars]
    counts = [0] * level
    for ks in itertools.product(*tables):
        counts[sum(ks) % level] += 1
    return root_sum(counts, level)
