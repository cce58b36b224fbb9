import functools
import itertools
from math import comb

import pytest

from antichain_growth import constant_family, plan_for
from antichain_growth.antichain import (
    count_exact,
    count_exact_binomial,
    decode,
    enumerate_block,
    enumerate_up_to,
    level_counts,
    lower_bound,
)
from antichain_growth.bits import BitString
from antichain_growth.growth import PlanError
from antichain_growth.prefixcode import BlockIndex, codeword


@functools.lru_cache(maxsize=None)
def prefix_str(plan, idx):
    return str(codeword(plan, idx))


def conditions_hold(plan, idx, s: str) -> bool:
    """Membership in F_{k,i} straight from conditions (1)-(3), on a string."""
    k, i = idx
    ell = plan.ell_of(k)
    s = s + "0" * (ell - len(s))
    if len(s) != ell:
        return False
    if s[:k] != prefix_str(plan, idx):
        return False
    if s[k:].count("1") != i:
        return False
    if k > plan.k0 and "1" not in s[plan.ell_of(k - 1):]:
        return False
    return True


def brute_block(plan, idx, n):
    ell = plan.ell_of(idx.k)
    head = prefix_str(plan, idx)
    out = []
    for w in range(1 << ell):
        s = format(w, f"0{ell}b")
        if not s.startswith(head):
            continue
        if conditions_hold(plan, idx, s) and "1" not in s[n:]:
            out.append(s)
    return out


def member_oracle(plan, subset):
    """The block containing ``subset`` found by trying every (k, i) in the plan."""
    if not subset:
        return None
    hits = []
    for k in plan.ks():
        if k > plan.k0 and plan.ell_of(k - 1) >= max(subset):
            break  # later blocks need an element beyond ell_{k-1}
        if max(subset) > plan.ell_of(k):
            continue
        s = str(BitString.from_set(subset, plan.ell_of(k)))
        for i in range(1, plan.a_of(k) + 1):
            if conditions_hold(plan, BlockIndex(k, i), s):
                hits.append(BlockIndex(k, i))
    assert len(hits) <= 1, "blocks must be disjoint"
    return hits[0] if hits else None


@pytest.fixture
def const_plan():
    return plan_for(constant_family(3), 30)


def test_enumerate_block_constant(const_plan):
    got = [str(e.bits) for e in enumerate_block(const_plan, BlockIndex(3, 1), 4)]
    assert got == ["1011"] == brute_block(const_plan, BlockIndex(3, 1), 4)
    assert list(enumerate_block(const_plan, BlockIndex(3, 1), 4))[0].to_set() == {1, 3, 4}


def test_enumerate_block_empty_below_previous_reach(family):
    _, _, plan = family
    for k in list(plan.ks())[1:6]:
        for n in range(plan.n0, plan.ell_of(k - 1) + 1):
            assert list(enumerate_block(plan, BlockIndex(k, 1), n)) == []


def test_enumerate_block_worked(worked_plan):
    got = [str(e.bits) for e in enumerate_block(worked_plan, BlockIndex(2, 1), 3)]
    assert got == ["111"] == brute_block(worked_plan, BlockIndex(2, 1), 3)


def test_enumerate_block_matches_brute_force(family):
    _, _, plan = family
    for k in plan.ks():
        if plan.ell_of(k) > 14:
            break
        for i in range(1, plan.a_of(k) + 1):
            for n in range(plan.n0, plan.ell_of(k) + 1):
                got = [str(e.bits) for e in enumerate_block(plan, BlockIndex(k, i), n)]
                assert got == brute_block(plan, BlockIndex(k, i), n)  # same set, same canonical order


def test_enumerate_up_to_constant(const_plan):
    assert [sorted(e.to_set()) for e in enumerate_up_to(const_plan, 5)] == [[1, 2, 3], [1, 3, 4], [1, 4, 5]]
    assert [str(e.bits) for e in enumerate_up_to(const_plan, 3)] == ["111"]


def test_worked_plan_levels(worked_plan):
    assert len(list(enumerate_up_to(worked_plan, 3))) == 1
    assert len(list(enumerate_up_to(worked_plan, 4))) == count_exact(worked_plan, 4)


def test_enumerate_matches_subset_brute_force(family):
    _, _, plan = family
    n = 10
    if n < plan.n0:
        pytest.skip("family starts later")
    got = {e.to_set(): e.block for e in enumerate_up_to(plan, n)}
    expected = {}
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(1, n + 1), r):
            idx = member_oracle(plan, set(subset))
            if idx is not None:
                expected[frozenset(subset)] = idx
    assert got == expected


def test_no_duplicates_and_round_trip(family):
    _, _, plan = family
    n = 16
    elements = list(enumerate_up_to(plan, n))
    assert len({e.to_set() for e in elements}) == len(elements)
    for e in elements:
        assert decode(plan, e.to_set()) == e.block
        # suffix weight never exceeds a_k
        assert e.block.i <= plan.a_of(e.block.k)


def test_count_constant_family(const_plan):
    assert [count_exact(const_plan, n) for n in range(3, 25)] == [n - 2 for n in range(3, 25)]


def test_count_three_routes(family):
    _, _, plan = family
    for n in range(plan.n0, 17):
        c = count_exact(plan, n)
        assert c == count_exact_binomial(plan, n) == len(list(enumerate_up_to(plan, n)))


def test_count_routes_agree_to_200(family):
    _, _, plan = family
    counts = level_counts(plan, 200)
    for n, c in counts.items():
        assert c == count_exact(plan, n) == count_exact_binomial(plan, n)
    assert all(a <= b for a, b in zip(counts.counts, counts.counts[1:]))


def test_count_base_values(family):
    _, _, plan = family
    assert count_exact(plan, plan.n0) == 1
    ell0 = plan.ell_of(plan.k0)
    assert count_exact(plan, ell0) == 2 ** (ell0 - plan.k0) - 1


def test_lower_bound_dominates_f(family):
    _, seq, plan = family
    for n in range(plan.n0, 201):
        b = lower_bound(plan, n)
        assert count_exact(plan, n) >= b >= seq.value(n)


def test_decode_examples(const_plan):
    assert decode(const_plan, {1, 3, 4}) == BlockIndex(3, 1)
    assert decode(const_plan, set()) is None
    assert decode(const_plan, {1, 2, 3, 4}) is None
    with pytest.raises(ValueError):
        decode(const_plan, {0, 1})


def test_decode_needs_coverage():
    plan = plan_for(constant_family(3), 10)
    with pytest.raises(PlanError):
        decode(plan, {1, 20})


def test_decode_binomial_identity():
    # sum_{i=1}^{m} C(m, i) = 2^m - 1, the collapse behind the recurrence
    for m in range(0, 30):
        assert sum(comb(m, i) for i in range(1, m + 1)) == 2**m - 1
