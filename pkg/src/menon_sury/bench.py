"""Closed form vs oracle timings on a fixed ladder of instances."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .arith import factorize
from .characters import DirichletCharacter
from .menon import MenonQuery, brute_force_oracle, closed_form_general, closed_form_prime_power
from .oracle import CostBudgetExceeded, oracle_cost

# 2^10 3^6 5^4 7^3 11^2
PERFORMANCE_MODULUS = 2**10 * 3**6 * 5**4 * 7**3 * 11**2
NAIVE_RUN_LIMIT = 2 * 10**6


class OpCounter:
    def __init__(self):
        self.count = 0


class CountingInt(int):
    """An int that counts every arithmetic operation it takes part in."""

    def __new__(cls, value, counter: OpCounter):
        obj = super().__new__(cls, value)
        obj.counter = counter
        return obj

    def _wrap(self, value):
        self.counter.count += 1
        return CountingInt(value, self.counter)

    def __add__(self, o):
        return self._wrap(int(self) + int(o))

    def __radd__(self, o):
        return self._wrap(int(o) + int(self))

    def __sub__(self, o):
        return self._wrap(int(self) - int(o))

    def __rsub__(self, o):
        return self._wrap(int(o) - int(self))

    def __mul__(self, o):
        return self._wrap(int(self) * int(o))

    def __rmul__(self, o):
        return self._wrap(int(o) * int(self))

    def __pow__(self, o):
        return self._wrap(int(self) ** int(o))

    def __rpow__(self, o):
        return self._wrap(int(o) ** int(self))


def closed_form_operation_count(q: MenonQuery) -> int:
    """Arithmetic operations used by the per-prime closed form, including
    the final product over primes."""
    counter = OpCounter()
    f = factorize(q.n)
    total = None
    for p, m in f:
        v = closed_form_prime_power(CountingInt(p, counter), m, q.r, q.conductor_exponents(p))
        total = v if total is None else total * v
    return max(counter.count, 1)


def performance_query() -> MenonQuery:
    """s = 4 primitive characters of mixed conductors, lifted to the big modulus."""
    chars = (
        DirichletCharacter(2**10, (1, 1)),
        DirichletCharacter(3**6, (1,)),
        DirichletCharacter(5**4 * 7**3, (1, 1)),
        DirichletCharacter(9, (1,)),
    )
    return MenonQuery(PERFORMANCE_MODULUS, 1, chars)


def ladder() -> list[MenonQuery]:
    return [
        MenonQuery(12, 1, (DirichletCharacter(3, (1,)),)),
        MenonQuery(32, 2, (DirichletCharacter(32, (0, 1)), DirichletCharacter.trivial(32))),
        MenonQuery(360, 1, (DirichletCharacter(9, (3,)), DirichletCharacter(8, (1, 0)))),
        MenonQuery(1001, 1, (DirichletCharacter(7, (1,)), DirichletCharacter(13, (2,)))),
        performance_query(),
    ]


@dataclass
class BenchRow:
    n: int
    s: int
    r: int
    oracle_terms: int
    closed_form_ops: int
    closed_form_ms: float
    oracle_mode: Optional[str]
    oracle_ms: Optional[float]
    matched: Optional[bool]

    @property
    def ratio(self) -> float:
        return self.oracle_terms / self.closed_form_ops

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "r": self.r,
            "oracle_terms": self.oracle_terms,
            "closed_form_ops": self.closed_form_ops,
            "ratio": round(self.ratio, 1),
            "closed_form_ms": round(self.closed_form_ms, 3),
            "oracle_mode": self.oracle_mode,
            "oracle_ms": None if self.oracle_ms is None else round(self.oracle_ms, 3),
            "matched": self.matched,
        }


def _time_ms(fn, repeat=1):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, (time.perf_counter() - t0) * 1000)
    return out, best


def bench_query(q: MenonQuery, budget: Optional[int] = None) -> BenchRow:
    report, closed_ms = _time_ms(lambda: closed_form_general(q), repeat=5)
    terms = oracle_cost(q.n, q.s, q.r, "naive")
    mode = "naive" if terms <= NAIVE_RUN_LIMIT else "grouped"
    try:
        value, oracle_ms = _time_ms(lambda: brute_force_oracle(q, mode, budget))
        matched = value == report.closed_form
    except CostBudgetExceeded:
        mode, oracle_ms, matched = None, None, None
    return BenchRow(q.n, q.s, q.r, terms, closed_form_operation_count(q), closed_ms, mode, oracle_ms, matched)


def run_bench(budget: Optional[int] = None) -> list[BenchRow]:
    return [bench_query(q, budget) for q in ladder()]
