"""Explicit dense antichains of finite subsets of the natural numbers.

Given a growth sequence ``f_n`` with ``sum f_n / 2**n <= 1/4``, the package
builds an antichain whose level counts ``|F ∩ 2^[n]|`` are at least ``f_n``,
counts those levels exactly, and checks the classical upper bounds.
"""

from .antichain import (
    Element,
    LevelCounts,
    count_exact,
    count_exact_binomial,
    decode,
    enumerate_block,
    enumerate_up_to,
    level_counts,
)
from .bits import BitString
from .dyadic import Dyadic, binary_digits, kraft_sum, sub
from .growth import (
    ConstructionPlan,
    GrowthSequence,
    build_plan,
    constant_family,
    corollary_family,
    normalize_remark,
    plan_for,
    random_table_family,
    read_table,
    table_family,
    validate,
)
from .prefixcode import BlockIndex, check_prefix_free, check_reverse_lex, codeword, codewords_iter
from .verify import (
    Certificate,
    check_antichain,
    check_claim1,
    check_claim3,
    check_kraft_series,
    check_prefix_code,
    check_sperner,
)

__all__ = [
    "BitString",
    "BlockIndex",
    "Certificate",
    "ConstructionPlan",
    "Dyadic",
    "Element",
    "GrowthSequence",
    "LevelCounts",
    "binary_digits",
    "build_plan",
    "check_antichain",
    "check_claim1",
    "check_claim3",
    "check_kraft_series",
    "check_prefix_code",
    "check_prefix_free",
    "check_reverse_lex",
    "check_sperner",
    "codeword",
    "codewords_iter",
    "constant_family",
    "corollary_family",
    "count_exact",
    "count_exact_binomial",
    "decode",
    "enumerate_block",
    "enumerate_up_to",
    "kraft_sum",
    "level_counts",
    "normalize_remark",
    "plan_for",
    "random_table_family",
    "read_table",
    "sub",
    "table_family",
    "validate",
]
