"""Exhaustive checks of the prime-power building blocks.

Each suite compares a closed statement about (Z/p^m)^* against direct
enumeration and returns a `SuiteResult`.  Used by the test suite and by
the `lemmas` CLI subcommand.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .arith import factorize, is_probable_prime
from .characters import FiltrationLevel, enumerate_characters, product_subgroup_sum, subgroup_sum
from .cyclotomic import CyclotomicInteger, as_rational_integer
from .menon import (
    count_b_tuples_prime_power,
    gcd_character_sum_branch,
    local_gcd_character_sum,
)
from .oracle import gcd_character_sums


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    branch_hits: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, msg: str) -> None:
        self.failures.append(msg)


def prime_powers_up_to(bound: int) -> list[tuple[int, int]]:
    """(p, m) with p^m <= bound, m >= 1, sorted by p^m."""
    out = []
    for p in range(2, bound + 1):
        if is_probable_prime(p):
            m = 1
            while p**m <= bound:
                out.append((p, m))
                m += 1
    return sorted(out, key=lambda pm: pm[0] ** pm[1])


def _expected_subgroup_sum(p: int, m: int, j: int, t: int) -> int:
    return FiltrationLevel(p, m, j).size if j >= t else 0


def check_subgroup_sums(bound: int = 128) -> SuiteResult:
    """Single character: sum over U_j of chi is #U_j when j >= t, else 0."""
    res = SuiteResult("subgroup character sum")
    for p, m in prime_powers_up_to(bound):
        for chi in enumerate_characters(p**m):
            t = chi.conductor_exponent(p)
            for j in range(m + 1):
                got = subgroup_sum(chi, j)
                want = CyclotomicInteger.from_int(got.level, _expected_subgroup_sum(p, m, j, t))
                res.checked += 1
                if got != want:
                    res.fail(f"{chi} j={j}: {got!r} != {want!r}")
    return res


def check_product_subgroup_sums(
    bound: int = 128, max_s: int = 3, direct_bound: int = 27, direct_max_s: int = 2
) -> SuiteResult:
    """s characters: the sum over (U_j)^s is (#U_j)^s when j >= max t_i, else 0.

    Checked for every tuple by multiplying the single-character sums (the
    sum over a product set factors), and by enumerating the product set
    directly for the smaller prime powers.
    """
    res = SuiteResult("product subgroup character sum")
    for p, m in prime_powers_up_to(bound):
        chars = enumerate_characters(p**m)
        ts = [chi.conductor_exponent(p) for chi in chars]
        for j in range(m + 1):
            size = FiltrationLevel(p, m, j).size
            values = []
            for chi in chars:
                v = as_rational_integer(subgroup_sum(chi, j))
                if v is None:
                    res.fail(f"{chi} j={j}: subgroup sum is not rational")
                values.append(v)
            if None in values:
                continue
            # The product only depends on each factor's (value, t) class, so
            # tuples are counted per class tuple with multiplicity.
            classes = Counter(zip(values, ts))
            for s in range(2, max_s + 1):
                for combo in itertools.product(classes.items(), repeat=s):
                    got = math.prod(v for (v, _), _ in combo)
                    want = size**s if j >= max(t for (_, t), _ in combo) else 0
                    res.checked += math.prod(c for _, c in combo)
                    if got != want:
                        res.fail(f"classes {combo} j={j}: {got} != {want}")
            if p**m > direct_bound:
                continue
            for s in range(1, direct_max_s + 1):
                for idx in itertools.product(range(len(chars)), repeat=s):
                    tup = [chars[i] for i in idx]
                    got = product_subgroup_sum(tup, j)
                    want = size**s if j >= max(ts[i] for i in idx) else 0
                    res.checked += 1
                    if got != CyclotomicInteger.from_int(got.level, want):
                        res.fail(f"direct {[str(c) for c in tup]} j={j}: {got!r} != {want}")
    return res


def check_b_tuple_counts(bound: int = 64, max_r: int = 3) -> SuiteResult:
    """#{b in (Z/p^m)^r : gcd(b, p^m) = p^k} against enumeration, every k."""
    res = SuiteResult("b-tuple gcd counts")
    for p, m in prime_powers_up_to(bound):
        q = p**m
        for r in range(0, max_r + 1):
            seen = Counter(math.gcd(*b, q) for b in itertools.product(range(q), repeat=r))
            for k in range(m + 1):
                got = count_b_tuples_prime_power(p, m, k, r)
                want = seen.get(p**k, 0)
                res.checked += 1
                if got != want:
                    res.fail(f"p={p} m={m} k={k} r={r}: {got} != {want}")
    return res


def check_gcd_character_sums(
    prime_powers: Optional[Iterable[int]] = None, max_s: int = 2
) -> SuiteResult:
    """The three-case gcd-character sum against per-k enumeration."""
    res = SuiteResult("gcd character sum")
    if prime_powers is None:
        prime_powers = (2, 4, 8, 16, 3, 9, 27, 5, 25, 49)
    for q in prime_powers:
        ((p, m),) = factorize(q).pairs
        chars = enumerate_characters(q)
        for s in range(1, max_s + 1):
            for tup in itertools.product(chars, repeat=s):
                u = max(c.conductor_exponent(p) for c in tup)
                directs = gcd_character_sums(tup, [p**k for k in range(m + 1)])
                for k, direct in enumerate(directs):
                    got = local_gcd_character_sum(p, m, k, tup, res.branch_hits)
                    res.checked += 1
                    if as_rational_integer(direct) != got:
                        branch = gcd_character_sum_branch(u, k)
                        res.fail(f"{[str(c) for c in tup]} k={k} ({branch}): {got} != {direct!r}")
    return res


def run_all(bound: int = 128, b_bound: int = 64, max_r: int = 3) -> list[SuiteResult]:
    return [
        check_subgroup_sums(bound),
        check_product_subgroup_sums(bound),
        check_b_tuple_counts(b_bound, max_r),
    ]
