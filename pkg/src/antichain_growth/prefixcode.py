"""The greedy prefix code ``c_{k,i}``.

Codewords are listed by increasing index ``(k, i)`` and are then strictly
decreasing in lexicographic order. ``c_{k,i}`` is the length-``k`` string
whose binary value is ``1 - s_{k-1} - i / 2**k``; equivalently each word is
the previous value minus ``2**-k``, starting from 1.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple, Sequence

from .bits import BitString
from .dyadic import ONE, Dyadic, DyadicUnderflow, binary_digits, sub
from .growth import ConstructionPlan, PlanError


class CodewordError(ArithmeticError):
    """The codeword value left ``(0, 1)``: the plan over-spent its Kraft mass."""


class BlockIndex(NamedTuple):
    k: int
    i: int

    def __str__(self) -> str:
        return f"k={self.k} i={self.i}"


def _check_index(plan: ConstructionPlan, idx: BlockIndex) -> None:
    k, i = idx
    if not 1 <= i <= plan.a_of(k):
        raise PlanError(f"i={i} outside [1, a_{k}={plan.a_of(k)}]")


def codeword_value(plan: ConstructionPlan, idx: BlockIndex) -> Dyadic:
    k, i = idx
    try:
        v = sub(sub(ONE, plan.s_of(k - 1)), Dyadic(i, k))
    except DyadicUnderflow:
        raise CodewordError(f"1 - s_{k - 1} - {i}/2^{k} is negative") from None
    if v.numerator == 0:
        raise CodewordError(f"1 - s_{k - 1} - {i}/2^{k} is zero")
    return v


def codeword(plan: ConstructionPlan, idx: BlockIndex) -> BitString:
    """Closed form: the first ``k`` digits of ``1 - s_{k-1} - i / 2**k``."""
    _check_index(plan, idx)
    return binary_digits(codeword_value(plan, idx), idx.k)


def codewords_iter(plan: ConstructionPlan, k_max: int | None = None) -> Iterator[tuple[BlockIndex, BitString]]:
    """Iterative form: subtract ``2**-k`` from the running value, lazily."""
    if k_max is None:
        k_max = plan.k_max
    if k_max > plan.k_max:
        raise PlanError(f"plan only covers k <= {plan.k_max}, asked for {k_max}")
    value = ONE
    for k in range(plan.k0, k_max + 1):
        step = Dyadic(1, k)
        for i in range(1, plan.a_of(k) + 1):
            try:
                value = sub(value.widen(k), step)
            except DyadicUnderflow:
                raise CodewordError(f"running value went negative at k={k} i={i}") from None
            if value.numerator == 0:
                raise CodewordError(f"running value hit zero at k={k} i={i}")
            yield BlockIndex(k, i), binary_digits(value, k)


def check_prefix_free(words: Iterable[BitString]) -> tuple[BitString, BitString] | None:
    """``None`` if no word is a prefix of another, else ``(ancestor, descendant)``.

    In sorted order any word that prefixes another also prefixes its
    immediate successor, so one pass over neighbours suffices. Duplicates
    count as a violation.
    """
    ordered = sorted(words)
    for u, w in zip(ordered, ordered[1:]):
        if u.is_prefix_of(w):
            return u, w
    return None


def check_reverse_lex(words: Sequence[BitString]) -> tuple[BitString, BitString] | None:
    """``None`` if strictly lexicographically decreasing with a 1-over-0 split.

    Each consecutive pair must first differ at a position where the earlier
    word has 1 and the later 0; a pair related by prefix has no such
    position and is reported.
    """
    for x, y in zip(words, words[1:]):
        j = x.first_difference(y)
        if j is None or not (x[j] == 1 and y[j] == 0):
            return x, y
    return None


def format_codewords(pairs: Iterable[tuple[BlockIndex, BitString]], annotate: bool = False) -> Iterator[str]:
    for (k, i), word in pairs:
        yield f"{k},{i},{word}" if annotate else str(word)
