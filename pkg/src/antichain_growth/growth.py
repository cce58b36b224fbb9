"""Growth sequences ``f_n`` and the construction plan derived from them.

A growth sequence is a nondecreasing sequence of positive integers defined
for ``n >= n0`` with ``f_{n0} = 1``, ``f_{n+1} <= 2 f_n`` and
``sum_{n >= n0} f_n / 2**n <= 1/4``. The infinite sum is handled by a tail
certificate: every sequence can bound ``sum_{n > N} f_n / 2**n`` exactly
for any ``N``.

The plan holds ``k0 = n0 - 1`` and, for ``k >= k0``,

* ``ell_k``: the largest ``n`` with ``f_n / 2**n >= 2**-(k+1)``,
* ``a_k = ell_k - k``: the number of codewords of length ``k``,
* ``s_k = sum_{j=k0..k} a_j / 2**j``: the Kraft mass used up to length ``k``.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import mpmath

from .dyadic import ONE, ZERO, Dyadic

QUARTER = Dyadic(1, 2)


class SequenceDomainError(LookupError):
    """The sequence is not defined at the requested index."""


class PlanError(RuntimeError):
    """The plan cannot be built or does not cover a request."""


class GrowthSequence:
    """Base class for growth sequences.

    Subclasses provide :meth:`value` and :meth:`tail_bound`. ``last`` is the
    final defined index, or ``None`` when the sequence is infinite.
    """

    n0: int
    last: int | None = None
    checked_upto: int

    def value(self, n: int) -> int:
        raise NotImplementedError

    def tail_bound(self, N: int) -> Dyadic:
        """Exact upper bound on ``sum_{n > N} f_n / 2**n`` (``N >= n0 - 1``)."""
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    def __getitem__(self, n: int) -> int:
        return self.value(n)

    def _check_index(self, n: int) -> None:
        if n < self.n0:
            raise SequenceDomainError(f"f_{n} undefined below n0={self.n0}")
        if self.last is not None and n > self.last:
            raise SequenceDomainError(f"f_{n} undefined beyond last index {self.last}")

    def values(self, lo: int, hi: int) -> list[int]:
        return [self.value(n) for n in range(lo, hi + 1)]

    def partial_sum(self, N: int, start: int | None = None) -> Dyadic:
        """Exact ``sum_{n=start..N} f_n / 2**n`` (``start`` defaults to n0)."""
        lo = self.n0 if start is None else max(start, self.n0)
        if N < lo:
            return ZERO
        return Dyadic(sum(self.value(n) << (N - n) for n in range(lo, N + 1)), N)

    def certified_total(self) -> Dyadic:
        return self.partial_sum(self.checked_upto) + self.tail_bound(self.checked_upto)


class TableSequence(GrowthSequence):
    """Finite table ``f_{n0}, ..., f_L`` plus a rule for ``n > L``.

    With ``tail=None`` the table is extended by ``f_n = f_L``, which keeps
    both monotonicity conditions and has the exact tail ``f_L / 2**N``.
    With an explicit ``tail`` (a bound on ``sum_{n > L} f_n / 2**n``) the
    sequence is only defined up to ``L``.
    """

    def __init__(self, n0: int, values: Sequence[int], tail: Dyadic | None = None):
        if n0 < 1:
            raise ValueError(f"n0 must be positive, got {n0}")
        if not values:
            raise ValueError("empty table")
        self.n0 = n0
        self.table = tuple(int(v) for v in values)
        self.end = n0 + len(self.table) - 1
        self.declared_tail = tail
        self.last = None if tail is None else self.end
        self.checked_upto = self.end

    def value(self, n: int) -> int:
        self._check_index(n)
        if n > self.end:
            return self.table[-1]
        return self.table[n - self.n0]

    def tail_bound(self, N: int) -> Dyadic:
        if N >= self.end:
            if self.declared_tail is not None:
                if N > self.end:
                    raise SequenceDomainError(f"no tail certificate beyond index {self.end}")
                return self.declared_tail
            return Dyadic(self.table[-1], N)
        rest = self.partial_sum(self.end, start=N + 1)
        return rest + self.tail_bound(self.end)

    def describe(self) -> str:
        rule = "constant" if self.declared_tail is None else f"tail_bound={self.declared_tail}"
        return f"table(n0={self.n0}, rows={len(self.table)}, {rule})"


def constant_family(n0: int = 3) -> TableSequence:
    """``f_n = 1`` for all ``n >= n0``; the total mass is ``2**(1 - n0)``."""
    return TableSequence(n0, [1])


def table_family(values: Sequence[int], n0: int, tail: Dyadic | None = None) -> TableSequence:
    return TableSequence(n0, values, tail)


def read_table(source: str | Path | io.TextIOBase) -> TableSequence:
    """Parse the ``n,f_n`` CSV format with a ``#extend=`` or ``#tail_bound=`` footer."""
    if isinstance(source, (str, Path)) and not (isinstance(source, str) and "\n" in source):
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()

    rows: list[tuple[int, int]] = []
    directive = None
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or [c.strip() for c in lines[0].split(",")] != ["n", "f_n"]:
        raise ValueError("table must start with the header 'n,f_n'")
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            if directive is not None:
                raise ValueError(f"line {lineno}: duplicate footer directive")
            directive = line[1:].strip()
            continue
        if directive is not None:
            raise ValueError(f"line {lineno}: data after footer directive")
        (record,) = csv.reader([line])
        if len(record) != 2:
            raise ValueError(f"line {lineno}: expected 'n,f_n', got {line!r}")
        try:
            n, f = int(record[0]), int(record[1])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer entry in {line!r}") from None
        if rows and n != rows[-1][0] + 1:
            raise ValueError(f"line {lineno}: rows must be consecutive in n (got {n} after {rows[-1][0]})")
        rows.append((n, f))
    if not rows:
        raise ValueError("table has no rows")
    if directive is None:
        raise ValueError("missing footer '#extend=constant' or '#tail_bound=m/2^e'")

    key, _, val = directive.partition("=")
    key, val = key.strip(), val.strip()
    if key == "extend" and val == "constant":
        tail = None
    elif key == "tail_bound":
        tail = Dyadic.parse(val)
    else:
        raise ValueError(f"unknown footer directive {directive!r}")
    return TableSequence(rows[0][0], [f for _, f in rows], tail)


def format_table(seq: TableSequence) -> str:
    out = ["n,f_n"]
    out += [f"{seq.n0 + j},{f}" for j, f in enumerate(seq.table)]
    if seq.declared_tail is None:
        out.append("#extend=constant")
    else:
        out.append(f"#tail_bound={seq.declared_tail}")
    return "\n".join(out) + "\n"


def random_table_family(seed: int, n0_range=(3, 7), rows_range=(2, 28)) -> TableSequence:
    """Random valid table, reproducible from ``seed``.

    Each step keeps ``partial + f_N / 2**N <= 1/4``, which is the exact total
    under constant extension, so every prefix is a valid sequence.
    """
    rng = random.Random(seed)
    n0 = rng.randint(*n0_range)
    rows = rng.randint(*rows_range)
    values = [1]
    partial = Fraction(1, 1 << n0)
    for n in range(n0, n0 + rows - 1):
        f = values[-1]
        cap = min(2 * f, int((Fraction(1, 4) - partial) * (1 << n)))
        x = rng.randint(f, max(f, cap))
        values.append(x)
        partial += Fraction(x, 1 << (n + 1))
    return TableSequence(n0, values)


@dataclass(frozen=True)
class Violation:
    kind: str  # start | positive | monotone | ratio | sum
    n: int
    detail: str


@dataclass
class ValidationReport:
    n0: int
    N: int
    partial_sum: Dyadic
    tail: Dyadic
    violations: list[Violation] = field(default_factory=list)

    @property
    def total(self) -> Dyadic:
        return self.partial_sum + self.tail

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def lines(self) -> list[str]:
        head = f"n0={self.n0} N={self.N} sum<={self.total.reduced()} ({'valid' if self.valid else 'INVALID'})"
        return [head] + [f"  {v.kind} violation at n={v.n}: {v.detail}" for v in self.violations]


def validate(seq: GrowthSequence, N: int) -> ValidationReport:
    """Check the growth hypotheses for ``n0 <= n <= N`` and the certified sum.

    Violations are collected, never raised. For a sequence defined only up
    to ``last``, ``N`` is clamped there.
    """
    if N < seq.n0:
        raise ValueError(f"N={N} below n0={seq.n0}")
    if seq.last is not None:
        N = min(N, seq.last)
    vals = seq.values(seq.n0, N)
    out: list[Violation] = []
    if vals[0] != 1:
        out.append(Violation("start", seq.n0, f"f_n0 = {vals[0]}, expected 1"))
    for j, f in enumerate(vals):
        if f < 1:
            out.append(Violation("positive", seq.n0 + j, f"f_n = {f}"))
    for j in range(len(vals) - 1):
        n, f, g = seq.n0 + j, vals[j], vals[j + 1]
        if g < f:
            out.append(Violation("monotone", n, f"f_{n+1} = {g} < f_{n} = {f}"))
        if g > 2 * f:
            out.append(Violation("ratio", n, f"f_{n+1} = {g} > 2 f_{n} = {2 * f}"))
    partial = Dyadic(sum(f << (N - seq.n0 - j) for j, f in enumerate(vals)), N)
    tail = seq.tail_bound(N)
    report = ValidationReport(seq.n0, N, partial, tail, out)
    if report.total > QUARTER:
        out.append(Violation("sum", N, f"certified sum {report.total} exceeds 1/4"))
    return report


# --- formula-backed family -------------------------------------------------


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def _ceil_dyadic(x: mpmath.mpf, e: int = 64) -> Dyadic:
    # one extra unit absorbs rounding in x itself
    return Dyadic(int(mpmath.ceil(x * (1 << e))) + 1, e)


class CorollarySequence(GrowthSequence):
    """``f_n ~ c 2**n / (n log2(n)**(1 + eps))`` made into a valid sequence.

    ``f_{n0} = 1`` and ``f_{n+1} = min(2 f_n, max(f_n, floor(g(n+1))))`` with
    ``g`` the formula above. As long as ``g`` increases from ``n0`` onward,
    ``f_n <= max(1, g(n))``, and the tail past any ``M`` with ``g(M) >= 1`` is
    at most ``c * ln 2 / (eps * log2(M)**eps)`` (integral comparison).
    """

    PREC = 160

    def __init__(self, eps: Fraction, c: Fraction, n0: int, checked_upto: int = 256):
        self.eps = Fraction(eps)
        self.c = Fraction(c)
        self.n0 = n0
        self.checked_upto = max(checked_upto, n0)
        self._vals = [1]
        self._g_at_least_one: int | None = None

    def _floor_g(self, n: int) -> int:
        with mpmath.workprec(self.PREC + n):
            g = _mpf(self.c) * mpmath.ldexp(1, n) / (n * mpmath.log(n, 2) ** _mpf(1 + self.eps))
            # shave a relative hair so floor(g) never overshoots the true g
            return int(mpmath.floor(g * (1 - mpmath.ldexp(1, -100))))

    def value(self, n: int) -> int:
        self._check_index(n)
        while len(self._vals) <= n - self.n0:
            m = self.n0 + len(self._vals)
            f = self._vals[-1]
            self._vals.append(min(2 * f, max(f, self._floor_g(m))))
        return self._vals[n - self.n0]

    @property
    def formula_reaches_one(self) -> int:
        """First ``n >= n0`` with ``g(n) >= 1``."""
        if self._g_at_least_one is None:
            n = self.n0
            while self._floor_g(n) < 1:
                n += 1
            self._g_at_least_one = n
        return self._g_at_least_one

    def analytic_tail(self, M: int) -> Dyadic:
        with mpmath.workprec(self.PREC):
            x = _mpf(self.c) * mpmath.log(2) / (_mpf(self.eps) * mpmath.log(M, 2) ** _mpf(self.eps))
            return _ceil_dyadic(x)

    def tail_bound(self, N: int) -> Dyadic:
        M = max(N, self.checked_upto, self.formula_reaches_one)
        return self.partial_sum(M, start=N + 1) + self.analytic_tail(M)

    def formula(self, n: int) -> float:
        """Unfloored ``g(n)`` as a float, for reporting only."""
        return float(_mpf(self.c) * mpmath.ldexp(1, n) / (n * mpmath.log(n, 2) ** _mpf(1 + self.eps)))

    def describe(self) -> str:
        return f"corollary(eps={self.eps}, c={self.c}, n0={self.n0})"


def _formula_increasing_from(n: int, eps: Fraction) -> bool:
    # d/dx log g(x) = ln 2 - 1/x - (1+eps)/(x ln x); positive at n stays positive after
    with mpmath.workprec(128):
        return n * mpmath.log(2) > 1 + _mpf(1 + eps) / mpmath.log(n)


def corollary_family(
    eps: Fraction | str | int = 1,
    n_min: int | None = None,
    c: Fraction | str | None = None,
    checked_upto: int = 256,
) -> CorollarySequence:
    """Growth family with ``f_n`` of order ``2**n / (n log2(n)**(1+eps))``.

    ``n_min`` defaults to the first index from which the formula increases.
    ``c`` defaults to the largest multiple of 1/64 in (0, 1] whose certified
    total stays within 1/4.

    Raises
    ------
    ValueError
        If ``eps <= 0`` or no admissible constant exists for ``n_min``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if n_min is None:
        n_min = 3
        while not _formula_increasing_from(n_min, eps):
            n_min += 1
    if n_min < 3:
        raise ValueError(f"n_min={n_min}: the ones alone exceed 1/4 below n=3")
    if not _formula_increasing_from(n_min, eps):
        raise ValueError(f"formula is not increasing from n_min={n_min} for eps={eps}; tail cannot be certified")

    def fits(cc: Fraction) -> bool:
        return CorollarySequence(eps, cc, n_min, checked_upto).certified_total() <= QUARTER

    if c is not None:
        c = Fraction(c)
        if c <= 0:
            raise ValueError(f"c must be positive, got {c}")
        if not fits(c):
            raise ValueError(f"c={c} cannot be certified: total bound exceeds 1/4")
        return CorollarySequence(eps, c, n_min, checked_upto)

    if not fits(Fraction(1, 64)):
        raise ValueError(f"no scaling constant certifies eps={eps} from n_min={n_min}")
    # the certified total grows with c, so bisect on the numerator
    lo, hi = 1, 64
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if fits(Fraction(mid, 64)):
            lo = mid
        else:
            hi = mid - 1
    return CorollarySequence(eps, Fraction(lo, 64), n_min, checked_upto)


# --- downward extension for f_{n0} > 1 ---------------------------------------


class ExtendedSequence(GrowthSequence):
    """``base`` preceded by ``f_n = ceil(f_{n0} / 2**(n0 - n))`` for ``n' <= n < n0``."""

    def __init__(self, base: GrowthSequence, new_n0: int):
        self.base = base
        self.n0 = new_n0
        self.last = base.last
        self.checked_upto = base.checked_upto
        top = base.value(base.n0)
        self.prefix = [-(-top >> (base.n0 - n)) for n in range(new_n0, base.n0)]

    def value(self, n: int) -> int:
        self._check_index(n)
        if n < self.base.n0:
            return self.prefix[n - self.n0]
        return self.base.value(n)

    def tail_bound(self, N: int) -> Dyadic:
        if N >= self.base.n0 - 1:
            return self.base.tail_bound(N)
        head = self.partial_sum(self.base.n0 - 1, start=N + 1)
        return head + self.base.tail_bound(self.base.n0 - 1)

    def describe(self) -> str:
        return f"extended(n0={self.n0}, base={self.base.describe()})"


def normalize_remark(seq: GrowthSequence) -> GrowthSequence:
    """Re-base a sequence with ``f_{n0} > 1`` onto a start where ``f = 1``.

    Requires ``f_{n0} < 2**n0 / (8 n0)`` and a certified sum of at most
    ``1/4 - 2 n0 f_{n0} / 2**n0``. Sequences already starting at 1 are
    returned unchanged.
    """
    n0, top = seq.n0, seq.value(seq.n0)
    if top == 1:
        return seq
    if top < 1:
        raise ValueError(f"f_n0 = {top} is not positive")
    if not 8 * n0 * top < (1 << n0):
        raise ValueError(f"need f_n0 < 2^n0/(8 n0): {top} >= {Fraction(1 << n0, 8 * n0)}")
    penalty = Dyadic(2 * n0 * top, n0)
    total = seq.certified_total()
    if penalty > QUARTER or total > QUARTER - penalty:
        raise ValueError(f"need certified sum <= 1/4 - 2 n0 f_n0/2^n0: {total} exceeds the budget")
    new_n0 = n0 - (top - 1).bit_length()
    return ExtendedSequence(seq, new_n0)


# --- construction plan --------------------------------------------------------


@dataclass(frozen=True)
class ConstructionPlan:
    """Tables ``ell``, ``a``, ``s`` indexed by ``k - k0``.

    The plan is immutable; ``s`` entries are kept at exponent ``k``.
    """

    k0: int
    ell: tuple[int, ...]
    a: tuple[int, ...]
    s: tuple[Dyadic, ...]

    @classmethod
    def from_lengths(cls, k0: int, a: Sequence[int]) -> ConstructionPlan:
        """Plan fixed by codeword counts alone, with ``ell_k = k + a_k``."""
        ell, s, acc = [], [], ZERO
        for j, ak in enumerate(a):
            k = k0 + j
            ell.append(k + ak)
            acc = acc.widen(k) + Dyadic(ak, k)
            s.append(acc)
        return cls(k0, tuple(ell), tuple(a), tuple(s))

    @property
    def n0(self) -> int:
        return self.k0 + 1

    @property
    def k_max(self) -> int:
        return self.k0 + len(self.a) - 1

    def ell_of(self, k: int) -> int:
        if k == self.k0 - 1:
            return self.k0
        return self.ell[self._j(k)]

    def a_of(self, k: int) -> int:
        return self.a[self._j(k)]

    def s_of(self, k: int) -> Dyadic:
        if k == self.k0 - 1:
            return Dyadic(0, max(k, 0))
        return self.s[self._j(k)]

    def _j(self, k: int) -> int:
        j = k - self.k0
        if not 0 <= j < len(self.a):
            raise PlanError(f"k={k} outside planned range [{self.k0}, {self.k_max}]")
        return j

    def ks(self) -> range:
        return range(self.k0, self.k_max + 1)

    def block_of(self, n: int) -> int:
        """The ``k`` with ``ell_{k-1} < n <= ell_k``."""
        if n <= self.k0:
            raise PlanError(f"n={n} is below n0={self.n0}")
        lo, hi = 0, len(self.ell) - 1
        if n > self.ell[hi]:
            raise PlanError(f"n={n} beyond ell_kmax={self.ell[hi]}; extend the plan")
        while lo < hi:
            mid = (lo + hi) // 2
            if self.ell[mid] >= n:
                hi = mid
            else:
                lo = mid + 1
        return self.k0 + lo

    @property
    def reach(self) -> int:
        return self.ell[-1]

    def rows(self) -> Iterator[tuple[int, int, int, Dyadic]]:
        for j, k in enumerate(self.ks()):
            yield k, self.ell[j], self.a[j], self.s[j]


def default_scan_limit(k: int, n0: int) -> int:
    return 4 * (k + 1) + n0 + 64


def _ell_holds(seq: GrowthSequence, n: int, k: int) -> bool:
    return seq.value(n) << (k + 1) >= 1 << n


def build_plan(seq: GrowthSequence, k_max: int, scan_limit=default_scan_limit) -> ConstructionPlan:
    """Compute ``ell_k``, ``a_k``, ``s_k`` for ``k0 <= k <= k_max`` by forward scan."""
    if k_max < seq.n0 - 1:
        raise ValueError(f"k_max={k_max} below k0={seq.n0 - 1}")
    return _build(seq, lambda k, ell: k > k_max, scan_limit)


def plan_for(seq: GrowthSequence, n_max: int, scan_limit=default_scan_limit) -> ConstructionPlan:
    """Smallest plan whose last block reaches ``n_max``."""
    return _build(seq, lambda k, ell: bool(ell) and ell[-1] >= n_max, scan_limit)


def _build(seq: GrowthSequence, done, scan_limit) -> ConstructionPlan:
    k0 = seq.n0 - 1
    ell: list[int] = []
    a: list[int] = []
    s: list[Dyadic] = []
    acc = ZERO
    k = k0
    while not done(k, ell):
        prev = ell[-1] if ell else k0
        n = max(prev, seq.n0)
        if not _ell_holds(seq, n, k):
            raise PlanError(f"k={k}: f_{n} * 2^{k + 1} < 2^{n}; sequence is not valid")
        limit = prev + scan_limit(k, seq.n0)
        try:
            while _ell_holds(seq, n + 1, k):
                n += 1
                if n > limit:
                    raise PlanError(
                        f"k={k}: ell_k not found within {limit - prev} positions past {prev}; "
                        "f_n / 2^n does not decay as the tail certificate claims"
                    )
        except SequenceDomainError as exc:
            raise PlanError(f"k={k}: scan left the sequence's domain ({exc})") from None
        ell.append(n)
        a.append(n - k)
        acc = acc.widen(k) + Dyadic(n - k, k)
        s.append(acc)
        k += 1
    plan = ConstructionPlan(k0, tuple(ell), tuple(a), tuple(s))
    if plan.s[-1] > ONE:
        raise PlanError(f"s_{plan.k_max} = {plan.s[-1]} exceeds 1; sequence sum is too large")
    return plan
