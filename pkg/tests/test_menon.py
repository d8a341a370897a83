import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from menon_sury import identities
from menon_sury.arith import DomainError, euler_phi, factorize
from menon_sury.characters import DirichletCharacter, enumerate_characters
from menon_sury.menon import (
    BRANCH_BELOW,
    BRANCH_NONTRIVIAL,
    BRANCH_TRIVIAL,
    Agreement,
    MenonQuery,
    brute_force_oracle,
    closed_form_general,
    closed_form_prime_power,
    corollary_same_radical,
    count_b_tuples_prime_power,
    gcd_character_sum_from_exponents,
    lemma_route,
    local_gcd_character_sum,
    multiplicativity_check,
    split_query,
    verify,
)

chi = DirichletCharacter


@pytest.mark.parametrize("args, want", [((2, 2, 0, 2), 12), ((3, 2, 2, 5), 1), ((5, 1, 0, 1), 4)])
def test_b_tuple_count_examples(args, want):
    assert count_b_tuples_prime_power(*args) == want


def test_b_tuple_counts_partition_the_space():
    for p, m in ((2, 4), (3, 3), (5, 2), (7, 1)):
        for r in range(4):
            assert sum(count_b_tuples_prime_power(p, m, k, r) for k in range(m + 1)) == p ** (m * r)
    with pytest.raises(DomainError):
        count_b_tuples_prime_power(2, 2, 3, 1)


def test_gcd_character_sum_examples():
    hits = Counter()
    assert gcd_character_sum_from_exponents(3, 2, 0, [2], hits) == 0
    assert gcd_character_sum_from_exponents(3, 2, 2, [1], hits) == 12
    assert gcd_character_sum_from_exponents(2, 2, 1, [0, 0], hits) == 8
    assert hits == Counter({BRANCH_BELOW: 1, BRANCH_NONTRIVIAL: 1, BRANCH_TRIVIAL: 1})
    assert local_gcd_character_sum(3, 2, 2, [chi(9, (3,))]) == 12
    with pytest.raises(DomainError):
        local_gcd_character_sum(3, 2, 2, [chi(3, (1,))])


@pytest.mark.parametrize(
    "p, m, r, ts, want",
    [(3, 2, 1, [1], 24), (2, 2, 1, [0, 0], 26), (3, 2, 0, [2], 6), (3, 2, 0, [1, 1], 24), (3, 2, 0, [1, 2], 6)],
)
def test_closed_form_prime_power_examples(p, m, r, ts, want):
    assert closed_form_prime_power(p, m, r, ts) == want


def test_closed_form_prime_power_rejects():
    with pytest.raises(DomainError):
        closed_form_prime_power(3, 2, 0, [])
    with pytest.raises(DomainError):
        closed_form_prime_power(3, 2, 0, [3])
    with pytest.raises(DomainError):
        closed_form_prime_power(3, 2, -1, [0])


def test_closed_form_general_examples():
    rep = closed_form_general(MenonQuery(12, 1, (chi(3, (1,)),)))
    assert (rep.closed_form, rep.d, rep.n0) == (28, 3, 3)
    assert dict(rep.per_prime_factors) == {4: 14, 3: 2}
    assert closed_form_general(MenonQuery(12, 0, (chi(12, (0, 1)),))).closed_form == 12
    assert closed_form_general(MenonQuery(9, 1, (chi(9, (3,)),))).closed_form == 24
    assert closed_form_general(MenonQuery.trivial(1, 3, 2)).closed_form == 1
    for n in range(1, 200):
        for r in range(4):
            assert closed_form_general(MenonQuery.trivial(n, r, 1)).closed_form == euler_phi(n) * identities._divisor_power_sum(r, n)


def test_corollary_same_radical():
    assert corollary_same_radical(MenonQuery(9, 0, (chi(9, (1,)),))) == 6
    assert corollary_same_radical(MenonQuery(12, 1, (chi(3, (1,)),))) is None
    q = MenonQuery(8, 2, (chi(8, (1, 1)),) * 3)
    assert corollary_same_radical(q) == euler_phi(8)
    for n in range(2, 80):
        for c in enumerate_characters(n):
            q = MenonQuery(n, 1, (c,))
            cor = corollary_same_radical(q)
            if identities.same_radical(n, c.conductor):
                assert cor == closed_form_general(q).closed_form
            else:
                assert cor is None


def test_query_validation():
    with pytest.raises(DomainError):
        MenonQuery(9, 0, ())
    with pytest.raises(DomainError):
        MenonQuery(12, 0, (chi(5, (1,)),))
    with pytest.raises(DomainError):
        MenonQuery(0, 0, (chi.trivial(1),))
    with pytest.raises(DomainError):
        MenonQuery(9, -1, (chi.trivial(9),))
    q = MenonQuery(36, 0, (chi(9, (3,)),))
    assert q.characters[0].modulus == 36 and q.d == 3


def test_verify_examples():
    rep = verify(MenonQuery.trivial(4, 1, 2))
    assert (rep.closed_form, rep.oracle, rep.agreement) == (26, 26, Agreement.MATCHED)
    rep = verify(MenonQuery(9, 1, (chi(9, (3,)),)))
    assert (rep.closed_form, rep.agreement) == (24, Agreement.MATCHED)
    rep = verify(MenonQuery.trivial(10**12, 1, 1))
    assert rep.agreement == Agreement.SKIPPED and rep.oracle is None and rep.refusal
    d = rep.to_dict()
    assert set(d) == {"n", "r", "s", "characters", "d", "n0", "closed_form", "oracle", "agreement", "per_prime_factors"}
    assert d["agreement"] == "oracle-skipped"


def test_lemma_route_agrees_with_closed_form():
    for n in range(1, 60):
        chars = enumerate_characters(n)
        for a in chars[:6]:
            for b in chars[-4:]:
                for r in range(3):
                    q = MenonQuery(n, r, (a, b))
                    assert lemma_route(q) == closed_form_general(q).closed_form


def test_multiplicativity_examples():
    q = MenonQuery(36, 1, (chi(36, (1, 2)), chi.trivial(36)))
    assert multiplicativity_check(4, 9, q)
    q = MenonQuery(12, 0, (chi(12, (1, 1)),))
    assert multiplicativity_check(4, 3, q)
    q = MenonQuery(27, 1, (chi(27, (1,)),))
    assert multiplicativity_check(1, 27, q)
    with pytest.raises(DomainError):
        split_query(MenonQuery.trivial(12, 0, 1), 2, 6)
    a, b = split_query(MenonQuery.trivial(36, 1, 1), 4, 9)
    assert closed_form_general(a).closed_form * closed_form_general(b).closed_form == closed_form_general(
        MenonQuery.trivial(36, 1, 1)
    ).closed_form == 1092


def test_regression_against_classical_identities():
    for n in range(1, 201):
        assert closed_form_general(MenonQuery.trivial(n, 0, 1)).closed_form == identities.menon(n)
        for r in range(1, 4):
            assert closed_form_general(MenonQuery.trivial(n, r, 1)).closed_form == identities.sury(n, r)
    for n in range(1, 61):
        for s in range(1, 4):
            for r in range(3):
                assert closed_form_general(MenonQuery.trivial(n, r, s)).closed_form == identities.li_kim(n, s, r)
        for c in enumerate_characters(n):
            assert closed_form_general(MenonQuery(n, 0, (c,))).closed_form == identities.zhao_cao(c)
            for r in range(3):
                assert closed_form_general(MenonQuery(n, r, (c,))).closed_form == identities.li_hu_kim(c, r)


def test_conjugation_symmetry():
    for n in range(1, 31):
        chars = enumerate_characters(n)
        for a in chars:
            for b in chars[::3]:
                q = MenonQuery(n, 1, (a, b))
                qbar = MenonQuery(n, 1, (a.inverse(), b.inverse()))
                assert closed_form_general(q).closed_form == closed_form_general(qbar).closed_form
                assert brute_force_oracle(q) == brute_force_oracle(qbar)


def test_closed_form_depends_only_on_conductors():
    n = 72
    by_conductor = {}
    for c in enumerate_characters(n):
        v = closed_form_general(MenonQuery(n, 1, (c, c.inverse()))).closed_form
        by_conductor.setdefault(c.conductor, set()).add(v)
    assert all(len(v) == 1 for v in by_conductor.values())


@given(
    st.integers(1, 10**15),
    st.integers(0, 4),
    st.lists(st.integers(0, 6), min_size=1, max_size=4),
)
@settings(max_examples=200, deadline=None)
def test_global_matches_per_prime_for_large_n(n, r, seeds):
    # characters lifted from small divisors of n keep the query cheap
    small = [d for d in range(1, 50) if n % d == 0]
    chars = []
    for i, seed in enumerate(seeds):
        m = small[(seed + i) % len(small)]
        cs = enumerate_characters(m)
        chars.append(cs[seed % len(cs)])
    q = MenonQuery(n, r, tuple(chars))
    rep = closed_form_general(q)
    assert rep.closed_form == math.prod(v for _, v in rep.per_prime_factors)
    assert rep.closed_form % euler_phi(factorize(n)) == 0
    if rep.d == 1:
        assert rep.closed_form == identities.li_kim(n, q.s, r)
