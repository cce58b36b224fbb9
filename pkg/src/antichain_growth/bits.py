"""Finite binary strings, doubling as finite subsets of the positive integers.

Position ``j`` (1-indexed, left to right) of a string corresponds to the
integer ``j``. Two integer encodings are used:

* ``word``: the string read as a big-endian binary number, so a string of
  length ``k`` with word ``w`` has dyadic value ``w / 2**k``;
* ``mask``: a set encoding with bit ``j`` set iff ``j`` is in the set. Bit 0
  is never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True, slots=True)
class BitString:
    length: int
    word: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"negative length {self.length}")
        if self.word < 0 or self.word >> self.length:
            raise ValueError(f"word {self.word} does not fit in {self.length} bits")

    @classmethod
    def parse(cls, text: str) -> BitString:
        text = text.strip()
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def from_set(cls, elements: Iterable[int], length: int | None = None) -> BitString:
        elements = set(elements)
        if any(j < 1 for j in elements):
            raise ValueError("set elements must be positive integers")
        top = max(elements, default=0)
        if length is None:
            length = top
        elif top > length:
            raise ValueError(f"element {top} exceeds length {length}")
        word = 0
        for j in elements:
            word |= 1 << (length - j)
        return cls(length, word)

    def __str__(self) -> str:
        return format(self.word, f"0{self.length}b") if self.length else ""

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        """Digit at 1-indexed position ``j``."""
        if not 1 <= j <= self.length:
            raise IndexError(j)
        return (self.word >> (self.length - j)) & 1

    def __lt__(self, other: BitString) -> bool:
        # Lexicographic; a proper prefix sorts first.
        common = min(self.length, other.length)
        a = self.word >> (self.length - common)
        b = other.word >> (other.length - common)
        if a != b:
            return a < b
        return self.length < other.length

    def __le__(self, other: BitString) -> bool:
        return self == other or self < other

    def __gt__(self, other: BitString) -> bool:
        return other < self

    def __ge__(self, other: BitString) -> bool:
        return other <= self

    def ones(self) -> int:
        return self.word.bit_count()

    def is_prefix_of(self, other: BitString) -> bool:
        if self.length > other.length:
            return False
        return other.word >> (other.length - self.length) == self.word

    def first_difference(self, other: BitString) -> int | None:
        """Smallest position where both strings are defined and differ."""
        common = min(self.length, other.length)
        diff = (self.word >> (self.length - common)) ^ (other.word >> (other.length - common))
        if not diff:
            return None
        return common - diff.bit_length() + 1

    def concat(self, other: BitString) -> BitString:
        return BitString(self.length + other.length, (self.word << other.length) | other.word)

    def flip(self, j: int) -> BitString:
        if not 1 <= j <= self.length:
            raise IndexError(j)
        return BitString(self.length, self.word ^ (1 << (self.length - j)))

    def to_set(self) -> frozenset[int]:
        return frozenset(j for j in range(1, self.length + 1) if self[j])

    @property
    def mask(self) -> int:
        return set_to_mask(self.to_set())


def set_to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for j in elements:
        mask |= 1 << j
    return mask


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)
