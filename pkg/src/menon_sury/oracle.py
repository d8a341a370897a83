"""Brute-force evaluation of the character-weighted gcd sum

    S(n, r) = sum over a_1..a_s in (Z/n)^*, b_1..b_r in Z/n of
              gcd(a_1 - 1, ..., a_s - 1, b_1, ..., b_r, n) * chi_1(a_1) ... chi_s(a_s)

in Z[zeta_L], L the lcm of the character orders.  Sums are accumulated as a
histogram of root-of-unity exponents and reduced modulo Phi_L once at the
end, which is exact.
"""

from __future__ import annotations

import itertools
import math
import os
from functools import lru_cache
from typing import Sequence

import numpy as np

from .arith import divisors, euler_phi, factorize, jordan_totient, lcm_many
from .characters import DirichletCharacter, unit_group_structure
from .cyclotomic import CyclotomicInteger, as_rational_integer, root_sum

DEFAULT_COST_BUDGET = 10**8
MODES = ("naive", "grouped")
_CHUNK = 1 << 18


class CostBudgetExceeded(RuntimeError):
    """The enumeration would exceed the term budget; nothing was computed."""

    def __init__(self, terms: int, budget: int, mode: str):
        super().__init__(f"{mode} oracle needs {terms} terms, budget is {budget}")
        self.terms = terms
        self.budget = budget
        self.mode = mode


class NonIntegralSum(ArithmeticError):
    """An oracle sum failed to reduce to a rational integer."""


def default_budget() -> int:
    env = os.environ.get("MENON_COST_BUDGET")
    return int(env) if env else DEFAULT_COST_BUDGET


def oracle_cost(n: int, s: int, r: int, mode: str) -> int:
    f = factorize(n)
    if mode == "naive":
        return euler_phi(f) ** s * n**r
    if mode == "grouped":
        return euler_phi(f) ** s * len(divisors(f))
    raise ValueError(f"unknown oracle mode {mode!r}")


def check_budget(n: int, s: int, r: int, mode: str, budget: int | None = None) -> int:
    if budget is None:
        budget = default_budget()
    cost = oracle_cost(n, s, r, mode)
    if cost > budget:
        raise CostBudgetExceeded(cost, budget, mode)
    return cost


def _ambient_level(chars: Sequence[DirichletCharacter]) -> int:
    return lcm_many(c.order for c in chars)


def _naive_counts(n, r, chars, level):
    units = unit_group_structure(n).units()
    tables = [{a: c.exponent_at(a, level) for a in units} for c in chars]
    counts = [0] * level
    b_range = range(n)
    for a_tuple in itertools.product(units, repeat=len(chars)):
        k = sum(t[a] for t, a in zip(tables, a_tuple)) % level
        shifted = [a - 1 for a in a_tuple]
        for b_tuple in itertools.product(b_range, repeat=r):
            counts[k] += math.gcd(*shifted, *b_tuple, n)
    return counts


@lru_cache(maxsize=64)
def _unit_arrays(n: int):
    G = unit_group_structure(n)
    units = np.array(G.units(), dtype=np.int64)
    logs = np.array([G.dlog(int(a)) for a in units], dtype=np.int64).reshape(len(units), -1)
    return units, logs


@lru_cache(maxsize=4096)
def _exponent_table(chi: DirichletCharacter, level: int) -> np.ndarray:
    """chi(a) as exponents at `level`, for each unit in _unit_arrays order."""
    _, logs = _unit_arrays(chi.modulus)
    orders = chi.structure.orders
    if not orders:
        return np.zeros(logs.shape[0], dtype=np.int64)
    weights = np.array([e * level // o for e, o in zip(chi.exponents, orders)], dtype=object)
    # object dtype keeps the dot product exact for large levels
    return np.asarray(logs.astype(object) @ weights % level, dtype=np.int64)


def gcd_exponent_histogram(n: int, chars: Sequence[DirichletCharacter], level: int):
    """counts[g_index, k] = #{a in (Z/n^*)^s : gcd(a_i - 1, n) = divs[g_index],
    prod chi_i(a_i) = zeta_level^k}."""
    units, _ = _unit_arrays(n)
    divs = np.array(divisors(n), dtype=np.int64)
    phi = len(units)
    s = len(chars)
    tables = [_exponent_table(c, level) for c in chars]
    shifted = units - 1
    total = phi**s
    hist = np.zeros(len(divs) * level, dtype=np.int64)
    shape = (phi,) * s
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        coords = np.unravel_index(idx, shape)
        g = np.full(idx.shape, n, dtype=np.int64)
        k = np.zeros(idx.shape, dtype=np.int64)
        for c, t in zip(coords, tables):
            g = np.gcd(g, shifted[c])
            k += t[c]
        k %= level
        gi = np.searchsorted(divs, g)
        hist += np.bincount(gi * level + k, minlength=len(divs) * level)
    return [int(d) for d in divs], hist.reshape(len(divs), level)


def gcd_weights(n: int, r: int) -> dict[int, int]:
    """For each g | n: sum over b in (Z/n)^r of gcd(g, b_1, ..., b_r)."""
    divs = divisors(n)
    if r == 0:
        return {g: g for g in divs}
    # #{b : gcd(b, n) = e} = J_r(n / e)
    count = {e: jordan_totient(r, n // e) for e in divs}
    return {g: sum(math.gcd(g, e) * c for e, c in count.items()) for g in divs}


def _grouped_counts(n, r, chars, level):
    divs, hist = gcd_exponent_histogram(n, chars, level)
    w = gcd_weights(n, r)
    counts = [0] * level
    for gi, g in enumerate(divs):
        wg = w[g]
        row = hist[gi]
        for k in np.nonzero(row)[0]:
            counts[int(k)] += wg * int(row[k])
    return counts


def oracle_sum(
    n: int,
    r: int,
    chars: Sequence[DirichletCharacter],
    mode: str = "grouped",
    budget: int | None = None,
) -> CyclotomicInteger:
    """The sum as an element of Z[zeta_L]; raises CostBudgetExceeded first if too big."""
    if mode not in MODES:
        raise ValueError(f"unknown oracle mode {mode!r}")
    if any(c.modulus != n for c in chars):
        raise ValueError("all characters must be taken modulo n")
    check_budget(n, len(chars), r, mode, budget)
    level = _ambient_level(chars)
    counter = _naive_counts if mode == "naive" else _grouped_counts
    return root_sum(counter(n, r, chars, level), level)


def certify(value: CyclotomicInteger) -> int:
    z = as_rational_integer(value)
    if z is None:
        raise NonIntegralSum(f"oracle sum is not a rational integer: {value!r}")
    return z


def gcd_character_sum(chars: Sequence[DirichletCharacter], g: int) -> CyclotomicInteger:
    """sum over a in (Z/n^*)^s of gcd(a_1 - 1, ..., a_s - 1, g) chi_1(a_1)...chi_s(a_s),
    by direct enumeration; g must divide the modulus."""
    n = chars[0].modulus
    if n % g:
        raise ValueError(f"{g} does not divide {n}")
    level = _ambient_level(chars)
    units = unit_group_structure(n).units()
    tables = [[c.exponent_at(a, level) for a in units] for c in chars]
    counts = [0] * level
    for idx in itertools.product(range(len(units)), repeat=len(chars)):
        k = sum(t[i] for t, i in zip(tables, idx)) % level
        counts[k] += math.gcd(*(units[i] - 1 for i in idx), g)
    return root_sum(counts, level)


def gcd_character_sums(chars: Sequence[DirichletCharacter], gs: Sequence[int]) -> list[CyclotomicInteger]:
    """gcd_character_sum for several g at once, from one enumeration of the a-tuples."""
    n = chars[0].modulus
    if any(n % g for g in gs):
        raise ValueError(f"every g must divide {n}")
    level = _ambient_level(chars)
    divs, hist = gcd_exponent_histogram(n, chars, level)
    out = []
    for g in gs:
        counts = [0] * level
        for gi, e in enumerate(divs):
            w = math.gcd(e, g)
            for k in np.nonzero(hist[gi])[0]:
                counts[int(k)] += w * int(hist[gi][k])
        out.append(root_sum(counts, level))
    return out
