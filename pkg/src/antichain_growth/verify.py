"""Certificates for the antichain property and the bounds around it.

Every check returns a :class:`Certificate` carrying exact values; a failed
certificate always carries a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .antichain import Element, LevelCounts, enumerate_up_to, level_counts
from .bits import BitString, mask_to_set, set_to_mask
from .dyadic import ONE, Dyadic, value_of
from .growth import ConstructionPlan, GrowthSequence, PlanError
from .prefixcode import (
    BlockIndex,
    CodewordError,
    check_prefix_free,
    check_reverse_lex,
    codeword_value,
    codewords_iter,
)

TWO = Dyadic(2)


@dataclass
class Certificate:
    kind: str
    scope: str
    passed: bool
    witness: Any = None
    values: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.passed != (self.witness is None):
            raise ValueError("a certificate has a witness iff it failed")

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "scope": self.scope,
            "verdict": self.verdict,
            "values": {k: _jsonable(v) for k, v in self.values.items()},
            "witness": _jsonable(self.witness),
        }


def _jsonable(v: Any) -> Any:
    if isinstance(v, Dyadic):
        return str(v.reduced())
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    if isinstance(v, BitString):
        return str(v)
    if isinstance(v, BlockIndex):
        return {"k": v.k, "i": v.i}
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _as_mask(x) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Element):
        return x.mask
    if isinstance(x, BitString):
        return x.mask
    return set_to_mask(x)


def check_antichain(elements: Iterable) -> Certificate:
    """All-pairs containment test on bitset words.

    Accepts sets of positive integers, :class:`Element`, :class:`BitString`
    or raw masks. The witness is ``(A, B)`` with ``A ⊆ B``, earliest ``B``
    first. Equal sets listed twice are reported as well.
    """
    masks = [_as_mask(x) for x in elements]
    width = max((m.bit_length() for m in masks), default=0)
    hit = _first_containment_np(masks) if width < 63 else _first_containment(masks)
    scope = f"{len(masks)} sets"
    if hit is None:
        return Certificate("antichain", scope, True, values={"size": len(masks)})
    a, b = hit
    return Certificate("antichain", scope, False, (mask_to_set(a), mask_to_set(b)), {"size": len(masks)})


def _first_containment(masks: Sequence[int]) -> tuple[int, int] | None:
    weights = [m.bit_count() for m in masks]
    for j, b in enumerate(masks):
        wb = weights[j]
        for i in range(j):
            a, wa = masks[i], weights[i]
            if wa <= wb and a & ~b == 0:
                return a, b
            if wb <= wa and b & ~a == 0:
                return b, a
    return None


def _first_containment_np(masks: Sequence[int]) -> tuple[int, int] | None:
    arr = np.array(masks, dtype=np.int64)
    for j in range(1, len(arr)):
        b = arr[j]
        head = arr[:j]
        sub = (head & ~b) == 0
        sup = (b & ~head) == 0
        bad = np.flatnonzero(sub | sup)
        if bad.size:
            i = int(bad[0])
            a = masks[i]
            return (a, masks[j]) if sub[i] else (masks[j], a)
    return None


def check_sperner(count: int, n: int) -> Certificate:
    bound = comb(n, n // 2)
    values = {"n": n, "count": count, "bound": bound}
    if count <= bound:
        return Certificate("sperner", f"n={n}", True, values=values)
    return Certificate("sperner", f"n={n}", False, {"n": n, "count": count}, values)


def check_kraft_series(counts: LevelCounts | Mapping[int, int]) -> Certificate:
    """Exact partial sum of ``count_n / 2**n``, which must not exceed 2."""
    items = list(counts.items())
    if not items:
        return Certificate("kraft_series", "empty", True, values={"partial_sum": Dyadic(0)})
    e = max(n for n, _ in items)
    total = Dyadic(sum(c << (e - n) for n, c in items), e)
    scope = f"n={min(n for n, _ in items)}..{e}"
    values = {"partial_sum": total, "bound": TWO}
    if total <= TWO:
        return Certificate("kraft_series", scope, True, values=values)
    # witness: first n where the running sum crosses 2
    run = Dyadic(0)
    for n, c in sorted(items):
        run = run + Dyadic(c, n)
        if run > TWO:
            return Certificate("kraft_series", scope, False, {"n": n, "partial_sum": run}, values)
    raise AssertionError("unreachable")


def check_claim1(plan: ConstructionPlan, seq: GrowthSequence | None = None) -> Certificate:
    """Kraft mass of the plan, its bookkeeping, and (with ``seq``) its derivation.

    Checks, in order: ``ell`` strictly increasing with ``ell_k >= k + 1``,
    ``a_k = ell_k - k``, ``s_k`` equal to the running sum of ``a_j / 2**j``,
    ``s_kmax <= 1``. Given the sequence it also checks that each ``ell_k`` is
    the largest ``n`` with ``f_n 2**(k+1) >= 2**n``, that
    ``(ell_k - ell_{k-1}) / 2**(k+1)`` is at most the mass of ``f`` over
    ``(ell_{k-1}, ell_k]``, and that ``s_kmax`` is at most four times the mass
    of ``f`` up to ``ell_kmax``.
    """
    scope = f"k={plan.k0}..{plan.k_max}"
    values: dict[str, Any] = {"s_kmax": plan.s[-1]}

    def fail(witness):
        return Certificate("claim1", scope, False, witness, values)

    acc = Dyadic(0)
    for k, ell_k, a_k, s_k in plan.rows():
        prev = plan.ell_of(k - 1)
        if ell_k <= prev or ell_k < k + 1:
            return fail({"k": k, "reason": "ell not increasing", "ell_k": ell_k, "ell_prev": prev})
        if a_k != ell_k - k or a_k < 1:
            return fail({"k": k, "reason": "a_k != ell_k - k", "a_k": a_k, "ell_k": ell_k})
        acc = acc + Dyadic(a_k, k)
        if s_k != acc:
            return fail({"k": k, "reason": "s_k mismatch", "s_k": s_k, "expected": acc})
    if plan.s[-1] > ONE:
        return fail({"k": plan.k_max, "reason": "s_kmax > 1", "s_k": plan.s[-1]})

    if seq is not None:
        if seq.n0 != plan.n0:
            return fail({"k": plan.k0, "reason": "k0 != n0 - 1", "n0": seq.n0})
        for k, ell_k, _, _ in plan.rows():
            if seq.value(ell_k) << (k + 1) < 1 << ell_k or seq.value(ell_k + 1) << (k + 1) >= 1 << (ell_k + 1):
                return fail({"k": k, "reason": "ell_k is not maximal", "ell_k": ell_k})
            prev = plan.ell_of(k - 1)
            lhs = Dyadic(ell_k - prev, k + 1)
            rhs = seq.partial_sum(ell_k, start=prev + 1)
            if lhs > rhs:
                return fail({"k": k, "reason": "block mass", "lhs": lhs, "rhs": rhs})
        mass = seq.partial_sum(plan.reach)
        values["f_mass_to_ell_kmax"] = mass
        if plan.s[-1] > Dyadic(4 * mass.numerator, mass.exponent):
            return fail({"k": plan.k_max, "reason": "s_kmax > 4 * f mass", "s_k": plan.s[-1]})
    return Certificate("claim1", scope, True, values=values)


def check_claim3(plan: ConstructionPlan, seq: GrowthSequence, n_max: int, counts: LevelCounts | None = None) -> Certificate:
    """``count_n >= 2**(n-k) - 1 >= f_n`` for ``n0 <= n <= n_max``."""
    if counts is None:
        counts = level_counts(plan, n_max)
    scope = f"n={plan.n0}..{n_max}"
    for n in range(plan.n0, n_max + 1):
        k = plan.block_of(n)
        bound = (1 << (n - k)) - 1
        c, f = counts[n], seq.value(n)
        if not c >= bound >= f:
            return Certificate("claim3", scope, False, {"n": n, "k": k, "count": c, "bound": bound, "f_n": f})
    return Certificate("claim3", scope, True, values={"n_checked": n_max - plan.n0 + 1})


def check_prefix_code(
    plan: ConstructionPlan, words: Sequence[tuple[BlockIndex, BitString]] | None = None
) -> Certificate:
    """Prefix-freeness, reverse-lexicographic order and codeword values.

    ``words`` defaults to the iterative generation. Each word is also checked
    against its closed-form value ``1 - s_{k-1} - i/2^k``.
    """
    scope = f"k={plan.k0}..{plan.k_max}"
    try:
        if words is None:
            words = list(codewords_iter(plan))
        values = {"words": len(words)}
        for idx, w in words:
            expected = codeword_value(plan, idx)
            if w.length != idx.k or value_of(w) != expected:
                return Certificate("prefix_code", scope, False, {"block": idx, "word": w, "expected": expected}, values)
    except CodewordError as exc:
        return Certificate("prefix_code", scope, False, {"error": str(exc)})
    only = [w for _, w in words]
    bad = check_prefix_free(only)
    if bad is not None:
        return Certificate("prefix_code", scope, False, {"reason": "prefix", "pair": bad}, values)
    bad = check_reverse_lex(only)
    if bad is not None:
        return Certificate("prefix_code", scope, False, {"reason": "order", "pair": bad}, values)
    return Certificate("prefix_code", scope, True, values=values)


DEFAULT_CAP = 1 << 22


def certify(
    seq: GrowthSequence | None,
    plan: ConstructionPlan,
    n_max: int,
    cap: int = DEFAULT_CAP,
    words: Sequence[tuple[BlockIndex, BitString]] | None = None,
    antichain_n: int | None = None,
) -> list[Certificate]:
    """Run the whole battery.

    The antichain check runs on level ``antichain_n`` (default: the largest
    level with at most ``cap`` members) and is skipped if that is too big.

    With ``words`` given, those codewords (rather than the plan's) drive
    the enumeration checked for the antichain property.
    """
    certs = [check_prefix_code(plan, words), check_claim1(plan, seq)]
    try:
        counts = level_counts(plan, n_max)
    except (PlanError, ValueError) as exc:
        # a malformed plan (e.g. ell_{k-1} < k) cannot even be counted
        certs.append(Certificate("claim3", f"n<={n_max}", False, {"error": str(exc)}))
        return certs
    if seq is not None:
        certs.append(check_claim3(plan, seq, n_max, counts))
    certs.append(check_kraft_series(counts))
    sperner = [check_sperner(c, n) for n, c in counts.items()]
    failed = [c for c in sperner if not c.passed]
    certs.append(failed[0] if failed else Certificate("sperner", f"n={plan.n0}..{n_max}", True, values={"levels": len(counts)}))
    if antichain_n is None:
        # counts are nondecreasing: check the largest level still under the cap
        fitting = [n for n, c in counts.items() if c <= cap]
        target = fitting[-1] if fitting else None
    else:
        target = antichain_n if counts[antichain_n] <= cap else None
    if target is not None:
        codebook = None if words is None else dict(words)
        try:
            elements = list(enumerate_up_to(plan, target, codebook))
        except KeyError as exc:
            certs.append(Certificate("antichain", f"n={target}", False, {"error": f"missing codeword {exc}"}))
        except (CodewordError, PlanError, ValueError) as exc:
            certs.append(Certificate("antichain", f"n={target}", False, {"error": str(exc)}))
        else:
            cert = check_antichain(elements)
            cert.scope = f"n={target}, {cert.scope}"
            certs.append(cert)
    return certs
