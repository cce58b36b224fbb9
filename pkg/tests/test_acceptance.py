"""Exit criteria. Each test prints one PASS/FAIL line (also shown in the summary)."""

import itertools
import math
import random
import time
from math import comb

import pytest

from antichain_growth import constant_family, corollary_family, plan_for, random_table_family
from antichain_growth.antichain import (
    count_exact,
    decode,
    enumerate_up_to,
    level_counts,
    lower_bound,
)
from antichain_growth.bits import mask_to_set
from antichain_growth.dyadic import Dyadic
from antichain_growth.growth import ConstructionPlan
from antichain_growth.prefixcode import BlockIndex, codeword, codewords_iter
from antichain_growth.verify import (
    certify,
    check_antichain,
    check_claim1,
    check_kraft_series,
    check_sperner,
)

from conftest import ACCEPTANCE_LINES, all_families, planned

FAMILIES = all_families()
N_SMALL = 14
N_BIG = 200

# count_exact(n) * n * log2(n)^2 / 2^n over n in [50, 200] for eps = 1,
# computed once from the exact counts and frozen.
COROLLARY_RATIO_FLOOR = 0.5975195724


def report(number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_worked_example():
    plan = ConstructionPlan.from_lengths(2, [1, 3, 5])
    best = math.inf
    for _ in range(5):
        t = time.perf_counter()
        got = [str(w) for _, w in itertools.islice(codewords_iter(plan), 6)]
        best = min(best, time.perf_counter() - t)
    ok = got == ["11", "101", "100", "011", "0101", "0100"] and best < 1e-3
    report(1, ok, f"first six codewords {' '.join(got)} in {best * 1e6:.0f} us")


def test_02_antichain_desk_scale():
    t = time.perf_counter()
    bad = []
    sizes = []
    for name, seq in FAMILIES:
        plan = planned(name, seq)
        cert = check_antichain(enumerate_up_to(plan, N_SMALL))
        sizes.append(cert.values["size"])
        if not cert.passed:
            bad.append((name, cert.witness))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed <= 60
    report(2, ok, f"{len(FAMILIES)} families at n={N_SMALL}, max size {max(sizes)}, {elapsed:.1f}s, failures {bad}")


def test_03_three_way_count_equality():
    n = N_SMALL
    # decode every nonempty subset of [14] once, bucket by its largest element
    mismatches = []
    for name, seq in FAMILIES:
        plan = planned(name, seq)
        accepted_by_top = [0] * (n + 1)
        for mask in range(2, 1 << (n + 1), 2):
            s = mask_to_set(mask)
            if decode(plan, s) is not None:
                accepted_by_top[max(s)] += 1
        running = list(itertools.accumulate(accepted_by_top))
        for m in range(plan.n0, n + 1):
            triple = (count_exact(plan, m), sum(1 for _ in enumerate_up_to(plan, m)), running[m])
            if len(set(triple)) != 1:
                mismatches.append((name, m, triple))
    report(3, not mismatches, f"count = enumeration = decode-accepted for n <= {n}; mismatches {mismatches[:3]}")


def test_04_theorem_lower_bound():
    t = time.perf_counter()
    bad = []
    for name, seq in FAMILIES:
        plan = planned(name, seq)
        counts = level_counts(plan, N_BIG)
        for m, c in counts.items():
            b = lower_bound(plan, m)
            if not c >= b >= seq.value(m):
                bad.append((name, m))
    elapsed = time.perf_counter() - t
    report(4, not bad and elapsed <= 10, f"count >= 2^(n-k)-1 >= f_n for n <= {N_BIG}, {elapsed:.2f}s, failures {bad[:3]}")


def test_05_kraft_series():
    worst = Dyadic(0)
    bad = []
    for name, seq in FAMILIES:
        counts = level_counts(planned(name, seq), N_BIG)
        assert all(type(c) is int for c in counts.counts)
        cert = check_kraft_series(counts)
        total = cert.values["partial_sum"]
        assert isinstance(total, Dyadic) and type(total.numerator) is int
        worst = max(worst, total)
        if not cert.passed:
            bad.append(name)
    report(5, not bad, f"sum count_n/2^n <= 2 for all families; largest {float(worst.to_fraction()):.6f}")


def test_06_kraft_mass():
    bad = []
    for name, seq in FAMILIES:
        plan = planned(name, seq)
        cert = check_claim1(plan, seq)
        if not cert.passed or plan.s[-1] > Dyadic(1):
            bad.append((name, cert.witness))
    report(6, not bad, f"s_kmax <= 1 and per-block mass inequality for every k; failures {bad}")


def test_07_sperner():
    bad = []
    for name, seq in FAMILIES:
        for m, c in level_counts(planned(name, seq), N_BIG).items():
            if not check_sperner(c, m).passed:
                bad.append((name, m))
    report(7, not bad, f"count <= C(n, n/2) for n <= {N_BIG}; failures {bad[:3]}")


def test_08_two_route_codewords():
    bad = []
    checked = 0
    for name, seq in FAMILIES:
        plan = planned(name, seq)
        for idx, w in codewords_iter(plan, min(plan.k_max, 64)):
            checked += 1
            if codeword(plan, idx) != w:
                bad.append((name, idx))
    report(8, not bad, f"{checked} codewords agree between subtraction and digit extraction (k <= 64)")


def test_09_corollary_trend():
    seq = corollary_family(1)
    plan = planned("corollary", seq)
    ratios = [count_exact(plan, m) / 2**m * m * math.log2(m) ** 2 for m in range(50, 201)]
    lo = min(ratios)
    ok = lo > 0 and lo >= COROLLARY_RATIO_FLOOR * (1 - 1e-9) and math.isclose(lo, COROLLARY_RATIO_FLOOR, rel_tol=1e-9)
    report(9, ok, f"min ratio on [50,200] = {lo:.10f} (frozen {COROLLARY_RATIO_FLOOR}), max {max(ratios):.4f}")


def _mutate(rng, seq, plan):
    """One random change to a_k, ell_k or a codeword bit. Returns (label, plan, words)."""
    words = list(codewords_iter(plan))
    kind = rng.choice(["a", "ell", "bit"])
    k = rng.choice(list(plan.ks()))
    j = k - plan.k0
    delta = rng.choice([-2, -1, 1, 2])
    if kind == "bit":
        pos = rng.randrange(len(words))
        idx, w = words[pos]
        words[pos] = (idx, w.flip(rng.randint(1, w.length)))
        return f"bit {idx} pos", plan, words
    propagate = rng.random() < 0.5
    if kind == "a":
        new = plan.a[j] + delta
        if new < 1:
            new = plan.a[j] + 1
        if propagate:
            a = list(plan.a)
            a[j] = new
            mutated = ConstructionPlan.from_lengths(plan.k0, a)
        else:
            a = list(plan.a)
            a[j] = new
            mutated = ConstructionPlan(plan.k0, plan.ell, tuple(a), plan.s)
    else:
        new = plan.ell[j] + delta
        if propagate:
            a = list(plan.a)
            a[j] = new - k
            if a[j] < 1:
                a[j] = plan.a[j] + 1
            mutated = ConstructionPlan.from_lengths(plan.k0, a)
        else:
            ell = list(plan.ell)
            ell[j] = new
            mutated = ConstructionPlan(plan.k0, tuple(ell), plan.a, plan.s)
    try:
        words = list(codewords_iter(mutated))
    except Exception:
        words = None
    return f"{kind} k={k} {'propagated' if propagate else 'raw'}", mutated, words


def test_10_fault_injection():
    rng = random.Random(2024)
    n_max = 30
    missed = []
    caught_by = {}
    for trial in range(50):
        name, seq = FAMILIES[trial % len(FAMILIES)]
        plan = plan_for(seq, n_max)
        label, mutated, words = _mutate(rng, seq, plan)
        certs = certify(seq, mutated, n_max, cap=1 << 14, words=words)
        failed = [c for c in certs if not c.passed and c.kind in {"prefix_code", "claim1", "claim3", "antichain"}]
        if not failed or any(c.witness is None for c in failed):
            missed.append((trial, name, label))
        else:
            caught_by[failed[0].kind] = caught_by.get(failed[0].kind, 0) + 1
    report(10, not missed, f"50 seeded mutations all caught (first failing check: {caught_by}); missed {missed}")
