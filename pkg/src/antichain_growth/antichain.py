"""The family ``F``: blocks ``F_{k,i}``, level counts and membership.

``F_{k,i}`` holds the strings of length ``ell_k`` that

1. start with ``c_{k,i}``,
2. have exactly ``i`` ones after position ``k``,
3. for ``k > k0``, have a one after position ``ell_{k-1}``.

Strings are read as sets, so ``F ∩ 2^[n]`` keeps the members whose largest
element is at most ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Iterable, Iterator, Mapping

from .bits import BitString, set_to_mask
from .growth import ConstructionPlan, GrowthSequence, PlanError
from .prefixcode import BlockIndex, codeword

Codebook = Callable[[BlockIndex], BitString] | Mapping[BlockIndex, BitString]


@dataclass(frozen=True)
class Element:
    bits: BitString
    block: BlockIndex

    def to_set(self) -> frozenset[int]:
        return self.bits.to_set()

    @property
    def mask(self) -> int:
        return self.bits.mask


def _prefix(plan: ConstructionPlan, idx: BlockIndex, codebook: Codebook | None) -> BitString:
    if codebook is None:
        return codeword(plan, idx)
    if callable(codebook):
        return codebook(idx)
    return codebook[idx]


def _same_weight_words(weight: int, width: int) -> Iterator[int]:
    """All ``width``-bit words of the given weight in increasing order (Gosper)."""
    if weight == 0:
        yield 0
        return
    w = (1 << weight) - 1
    limit = 1 << width
    while w < limit:
        yield w
        low = w & -w
        ripple = w + low
        w = ripple | (((w ^ ripple) >> 2) // low)


def enumerate_block(
    plan: ConstructionPlan, idx: BlockIndex, n: int, codebook: Codebook | None = None
) -> Iterator[Element]:
    """Members of ``F_{k,i}`` inside ``[n]``, suffixes in increasing lexicographic order."""
    k, i = idx
    if not 1 <= i <= plan.a_of(k):
        raise PlanError(f"i={i} outside [1, a_{k}={plan.a_of(k)}]")
    ell_k, prev = plan.ell_of(k), plan.ell_of(k - 1)
    top = min(n, ell_k)
    if k > plan.k0 and top <= prev:
        return
    width = top - k
    if width < i:
        return
    head = _prefix(plan, idx, codebook)
    shift = ell_k - top
    # positions prev+1..top are the low (top - prev) bits of the window
    tail_mask = (1 << (top - prev)) - 1 if k > plan.k0 else -1
    for w in _same_weight_words(i, width):
        if w & tail_mask:
            yield Element(head.concat(BitString(ell_k - k, w << shift)), idx)


def _blocks_reaching(plan: ConstructionPlan, n: int) -> Iterator[int]:
    if n > plan.reach:
        raise PlanError(f"plan reaches n={plan.reach} only; n={n} needs a larger k_max")
    for k in plan.ks():
        if plan.ell_of(k - 1) >= n:
            break
        yield k


def enumerate_up_to(plan: ConstructionPlan, n: int, codebook: Codebook | None = None) -> Iterator[Element]:
    """Stream ``F ∩ 2^[n]`` in ``(k, i)`` order, then suffix order."""
    for k in _blocks_reaching(plan, n):
        for i in range(1, plan.a_of(k) + 1):
            yield from enumerate_block(plan, BlockIndex(k, i), n, codebook)


def _block_total(plan: ConstructionPlan, k: int, n: int) -> int:
    # sum_i C(m, i) over i in [1, a_k] collapses to 2^m - 1 since m <= a_k
    top = min(n, plan.ell_of(k))
    if k == plan.k0:
        return (1 << (top - k)) - 1
    prev = plan.ell_of(k - 1)
    if top <= prev:
        return 0
    return (1 << (top - k)) - (1 << (prev - k))


def count_exact(plan: ConstructionPlan, n: int) -> int:
    """``|F ∩ 2^[n]|`` from the block recurrence."""
    if n < plan.n0:
        raise ValueError(f"n={n} below n0={plan.n0}")
    return sum(_block_total(plan, k, n) for k in _blocks_reaching(plan, n))


def count_exact_binomial(plan: ConstructionPlan, n: int) -> int:
    """Same count summed block by block as ``C(n-k, i) - C(ell_{k-1}-k, i)``."""
    if n < plan.n0:
        raise ValueError(f"n={n} below n0={plan.n0}")
    total = 0
    for k in _blocks_reaching(plan, n):
        top = min(n, plan.ell_of(k))
        for i in range(1, plan.a_of(k) + 1):
            total += comb(top - k, i)
            if k > plan.k0:
                total -= comb(plan.ell_of(k - 1) - k, i)
    return total


@dataclass
class LevelCounts:
    n0: int
    n_max: int
    counts: list[int]

    def __getitem__(self, n: int) -> int:
        if not self.n0 <= n <= self.n_max:
            raise KeyError(n)
        return self.counts[n - self.n0]

    def items(self) -> Iterator[tuple[int, int]]:
        return zip(range(self.n0, self.n_max + 1), self.counts)

    def __len__(self) -> int:
        return len(self.counts)


def level_counts(plan: ConstructionPlan, n_max: int, n_min: int | None = None) -> LevelCounts:
    """Counts for every ``n`` in ``[n_min, n_max]`` in one sweep over the blocks."""
    n_min = plan.n0 if n_min is None else n_min
    if n_min < plan.n0:
        raise ValueError(f"n_min={n_min} below n0={plan.n0}")
    if n_max > plan.reach:
        raise PlanError(f"plan reaches n={plan.reach} only; n={n_max} needs a larger k_max")
    out = []
    base = 0  # |F ∩ 2^[ell_{k-1}]|
    for k in plan.ks():
        prev, ell_k = plan.ell_of(k - 1), plan.ell_of(k)
        for n in range(max(prev + 1, n_min), min(ell_k, n_max) + 1):
            out.append(base + _block_total(plan, k, n))
        if ell_k >= n_max:
            break
        base += _block_total(plan, k, ell_k)
    return LevelCounts(n_min, n_max, out)


def lower_bound(plan: ConstructionPlan, n: int) -> int:
    """``2**(n-k) - 1`` for the block ``k`` containing ``n``."""
    return (1 << (n - plan.block_of(n))) - 1


def decode(plan: ConstructionPlan, s: Iterable[int]) -> BlockIndex | None:
    """The block containing the set ``s``, or ``None`` if ``s`` is not in ``F``.

    The prefix of ``s`` is matched against the codeword values
    ``1 - s_{k-1} - i/2^k`` for increasing ``k``; at most one ``k`` can match.
    """
    s = set(s)
    if not s:
        return None
    if min(s) < 1:
        raise ValueError("sets must contain positive integers only")
    mask = set_to_mask(s)
    top = max(s)
    k0 = plan.k0
    word = 0
    for j in range(1, k0 + 1):
        word = (word << 1) | ((mask >> j) & 1)
    for k in range(k0, min(plan.k_max, top - 1) + 1):
        i = (1 << k) - plan.s_of(k - 1).widen(k).numerator - word
        if 1 <= i <= plan.a_of(k):
            if top > plan.ell_of(k):
                return None
            if (mask >> (k + 1)).bit_count() != i:
                return None
            if k > k0 and top <= plan.ell_of(k - 1):
                return None
            return BlockIndex(k, i)
        word = (word << 1) | ((mask >> (k + 1)) & 1)
    if top > plan.reach:
        raise PlanError(f"cannot decide membership of a set reaching {top}; plan reaches {plan.reach}")
    return None


def format_element(e: Element, style: str = "bits") -> str:
    if style == "bits":
        return str(e.bits)
    if style == "set":
        return "{" + ",".join(map(str, sorted(e.to_set()))) + "}"
    raise ValueError(f"unknown element style {style!r}")
