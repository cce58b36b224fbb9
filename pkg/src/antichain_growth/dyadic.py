"""Exact dyadic rationals ``m / 2**e`` and binary-expansion digits."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable

from .bits import BitString

_TEXT = re.compile(r"^\s*(\d+)\s*/\s*2\^(\d+)\s*$")


class DyadicUnderflow(ArithmeticError):
    """Subtraction would leave the nonnegative dyadics."""


@total_ordering
@dataclass(frozen=True, slots=True, eq=False)
class Dyadic:
    """Nonnegative dyadic rational kept in fixed-point form.

    The exponent is never reduced automatically, so ``Dyadic(6, 3)`` stays
    ``6/2^3``. Equality, ordering and hashing are by value.
    """

    numerator: int
    exponent: int = 0

    def __post_init__(self) -> None:
        if self.numerator < 0:
            raise ValueError(f"negative numerator {self.numerator}")
        if self.exponent < 0:
            raise ValueError(f"negative exponent {self.exponent}")

    @classmethod
    def parse(cls, text: str) -> Dyadic:
        match = _TEXT.match(text)
        if match is None:
            raise ValueError(f"expected 'm/2^e', got {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def pow2(cls, e: int) -> Dyadic:
        """The value ``2**-e``."""
        return cls(1, e)

    def widen(self, e: int) -> Dyadic:
        """Same value at exponent ``e`` (must not lose bits)."""
        if e < self.exponent:
            if self.numerator & ((1 << (self.exponent - e)) - 1):
                raise ValueError(f"{self} is not representable at exponent {e}")
            return Dyadic(self.numerator >> (self.exponent - e), e)
        return Dyadic(self.numerator << (e - self.exponent), e)

    def reduced(self) -> Dyadic:
        if self.numerator == 0:
            return Dyadic(0, 0)
        tz = (self.numerator & -self.numerator).bit_length() - 1
        shift = min(tz, self.exponent)
        return Dyadic(self.numerator >> shift, self.exponent - shift)

    def _aligned(self, other: Dyadic) -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __add__(self, other: Dyadic) -> Dyadic:
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    def __sub__(self, other: Dyadic) -> Dyadic:
        return sub(self, other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a == b

    def __lt__(self, other: Dyadic | int) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        a, b, _ = self._aligned(other)
        return a < b

    def __hash__(self) -> int:
        r = self.reduced()
        return hash((r.numerator, r.exponent))

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self})"

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)


ZERO = Dyadic(0)
ONE = Dyadic(1)


def sub(a: Dyadic, b: Dyadic) -> Dyadic:
    """Exact ``a - b``; raises :class:`DyadicUnderflow` when ``b > a``."""
    x, y, e = a._aligned(b)
    if y > x:
        raise DyadicUnderflow(f"{b} exceeds {a}")
    return Dyadic(x - y, e)


def binary_digits(x: Dyadic, k: int) -> BitString:
    """First ``k`` binary digits of ``x`` in ``(0, 1]``.

    ``x = 1`` is read as ``0.111...`` and yields the all-ones string.
    Otherwise the digits are the truncation of ``x`` to ``k`` places.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if x <= ZERO or x > ONE:
        raise ValueError(f"digit extraction needs 0 < x <= 1, got {x}")
    if x == ONE:
        return BitString(k, (1 << k) - 1)
    if x.exponent >= k:
        word = x.numerator >> (x.exponent - k)
    else:
        word = x.numerator << (k - x.exponent)
    return BitString(k, word)


def value_of(bits: BitString) -> Dyadic:
    """``sum(d_j / 2**j)`` for the digits of ``bits``."""
    return Dyadic(bits.word, bits.length)


def kraft_sum(lengths: Iterable[int]) -> Dyadic:
    """Exact ``sum(2**-l)`` over a multiset of word lengths."""
    lengths = list(lengths)
    if not lengths:
        return ZERO
    if min(lengths) < 1:
        raise ValueError("word lengths must be positive")
    e = max(lengths)
    return Dyadic(sum(1 << (e - l) for l in lengths), e)
