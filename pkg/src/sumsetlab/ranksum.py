"""Rank-r sums of a family of bounded sets and the counting-function bounds on them.

For a family ``(A_1, ..., A_n)`` and an index set ``I`` of size ``r`` the
rank-r sum ``S_I`` is the sumset of the ``A_i`` with ``i ∈ I``; ``phi_r(m)``
adds the counting functions ``S_I(m)`` over all ``I`` of size ``r``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .errors import ContractViolation, ParseError, RangeError
from .intset import (
    BoundedIntSet,
    count,
    parse_members,
    range_mask,
    shift_or_sum,
    shnirelman_sumset,
    truncated_density,
)

__all__ = [
    "SetFamily",
    "RankProfile",
    "BoundReport",
    "MannReport",
    "PrefixReport",
    "rank_subsets",
    "rank_profile",
    "phi",
    "phi_closed_form",
    "gamma_star",
    "check_dyson_bound",
    "check_mann",
    "check_mann_all",
    "check_shnirelman_prefix",
]


@dataclass(frozen=True)
class SetFamily:
    """An ordered tuple of bounded sets sharing one bound; duplicates allowed."""

    bound: int
    sets: tuple[BoundedIntSet, ...]

    def __post_init__(self) -> None:
        if not self.sets:
            raise ContractViolation("a family needs at least one set")
        object.__setattr__(self, "sets", tuple(self.sets))
        for s in self.sets:
            if s.bound != self.bound:
                raise ContractViolation(f"set {s} does not have the family bound {self.bound}")

    @classmethod
    def of(cls, bound: int, *members: Iterable[int]) -> "SetFamily":
        return cls(bound, tuple(BoundedIntSet.of(bound, m) for m in members))

    @classmethod
    def from_bits(cls, bound: int, bits: Sequence[int]) -> "SetFamily":
        return cls(bound, tuple(BoundedIntSet(bound, b) for b in bits))

    @property
    def n(self) -> int:
        return len(self.sets)

    def __getitem__(self, i: int) -> BoundedIntSet:
        """1-based access: ``family[1]`` is ``A_1``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"family index {i} outside [1, {self.n}]")
        return self.sets[i - 1]

    def replace(self, i: int, s: BoundedIntSet) -> "SetFamily":
        sets = list(self.sets)
        sets[i - 1] = s
        return SetFamily(self.bound, tuple(sets))

    def prefix(self, k: int) -> "SetFamily":
        """The family of the first ``k`` sets."""
        return SetFamily(self.bound, self.sets[:k])

    def restrict(self, g: int) -> "SetFamily":
        return SetFamily(g, tuple(s.restrict(g) for s in self.sets))

    def encode(self) -> str:
        parts = ["{" + ",".join(map(str, s)) + "}" for s in self.sets]
        return f"g={self.bound};" + ";".join(parts)

    @classmethod
    def decode(cls, text: str) -> "SetFamily":
        segs = text.strip().split(";")
        m = re.fullmatch(r"g=(\d+)", segs[0].strip())
        if not m or len(segs) < 2:
            raise ParseError(f"expected 'g=<bound>;{{...}};...', got {text!r}")
        g = int(m.group(1))
        sets = []
        for seg in segs[1:]:
            seg = seg.strip()
            if not (seg.startswith("{") and seg.endswith("}")):
                raise ParseError(f"bad set segment {seg!r} in {text!r}")
            sets.append(BoundedIntSet.of(g, parse_members(seg[1:-1])))
        return cls(g, tuple(sets))

    def __str__(self) -> str:
        return self.encode()


def rank_subsets(n: int, r: int) -> list[tuple[int, ...]]:
    """All ``r``-element subsets of ``{1..n}`` in lexicographic order."""
    if not 1 <= r <= n:
        raise ContractViolation(f"rank_subsets needs 1 <= r <= n, got n={n}, r={r}")
    return list(combinations(range(1, n + 1), r))


@dataclass(frozen=True)
class RankProfile:
    """``table[r][m] = phi_r(m)`` for ``1 <= r <= n`` and ``0 <= m <= g``; row 0 is unused."""

    n: int
    bound: int
    table: tuple[tuple[int, ...], ...]

    def __call__(self, r: int, m: int) -> int:
        if not 1 <= r <= self.n:
            raise RangeError(f"rank r={r} outside [1, {self.n}]")
        if not 1 <= m <= self.bound:
            raise RangeError(f"m={m} outside [1, {self.bound}]")
        return self.table[r][m]


def _rank_sums(bits: Sequence[int], mask: int) -> list[int]:
    """Sumset bitset for every index subset, keyed by subset bitmask."""
    n = len(bits)
    sums = [0] * (1 << n)
    for sub in range(1, 1 << n):
        top = sub.bit_length() - 1
        rest = sub ^ (1 << top)
        sums[sub] = bits[top] if not rest else shift_or_sum(sums[rest], bits[top], mask)
    return sums


def _profile_table(bits: Sequence[int], g: int) -> list[list[int]]:
    n = len(bits)
    sums = _rank_sums(bits, range_mask(g))
    hist = [[0] * (g + 1) for _ in range(n + 1)]
    for sub in range(1, 1 << n):
        row = hist[sub.bit_count()]
        s = sums[sub]
        while s:
            low = s & -s
            row[low.bit_length() - 1] += 1
            s ^= low
    for row in hist:
        for m in range(1, g + 1):
            row[m] += row[m - 1]
    return hist


@lru_cache(maxsize=4096)
def rank_profile(family: SetFamily) -> RankProfile:
    """The full ``phi`` table; each ``S_I`` is built once from ``S_{I minus max}``."""
    table = _profile_table([s.bits for s in family.sets], family.bound)
    return RankProfile(family.n, family.bound, tuple(map(tuple, table)))


def phi(family: SetFamily, r: int, m: int) -> int:
    """``phi_r(m)``: the sum over all rank-r sums ``S_I`` of ``S_I(m)``."""
    if not 1 <= r <= family.n:
        raise RangeError(f"rank r={r} outside [1, {family.n}]")
    if not 1 <= m <= family.bound:
        raise RangeError(f"m={m} outside [1, {family.bound}]")
    return rank_profile(family).table[r][m]


def phi_closed_form(family: SetFamily, r: int, m: int) -> int:
    """``phi_1`` as a sum of counts and ``phi_n`` as the count of the full sumset."""
    if r == 1:
        return sum(count(s, m) for s in family.sets)
    if r == family.n:
        return count(shnirelman_sumset(family.sets), m)
    raise ContractViolation(f"closed forms exist only for r=1 and r=n, got r={r}")


def gamma_star(family: SetFamily) -> Fraction:
    """Largest ``gamma`` with ``phi_1(m) >= gamma m`` for every ``m <= g``."""
    g = family.bound
    running = [0] * (g + 1)
    for s in family.sets:
        c = 0
        for m in range(1, g + 1):
            c += (s.bits >> m) & 1
            running[m] += c
    num, den = running[1], 1
    for m in range(2, g + 1):
        if running[m] * den < num * m:
            num, den = running[m], m
    return Fraction(num, den)


@dataclass
class BoundReport:
    """Outcome of checking ``phi_r(m) >= C(n-1, r-1) min(1, gamma) m``."""

    gamma_star: Fraction
    violations: list[tuple[int, int, int, Fraction]] = field(default_factory=list)
    tight: list[tuple[int, int]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def check_dyson_bound(family: SetFamily, gamma: Fraction | None = None) -> BoundReport:
    """Check the rank-r lower bound on every ``(r, m)`` with exact arithmetic.

    ``gamma`` defaults to :func:`gamma_star`, the tightest admissible value.
    Equality cases are collected in ``tight``.
    """
    gam = gamma_star(family) if gamma is None else Fraction(gamma)
    delta = min(Fraction(1), gam)
    dn, dd = delta.numerator, delta.denominator
    prof = rank_profile(family)
    n = family.n
    report = BoundReport(gam)
    for r in range(1, n + 1):
        coef = comb(n - 1, r - 1) * dn
        row = prof.table[r]
        for m in range(1, family.bound + 1):
            lhs = row[m] * dd
            rhs = coef * m
            if lhs < rhs:
                report.violations.append((r, m, row[m], Fraction(rhs, dd)))
            elif lhs == rhs:
                report.tight.append((r, m))
    return report


@dataclass(frozen=True)
class MannReport:
    """Verdicts for the fundamental theorem and its finite corollary at one ``n``."""

    n: int
    c_n: int
    min_ratio: Fraction | None
    gamma: Fraction
    fundamental: bool
    corollary: bool

    @property
    def holds(self) -> bool:
        return self.fundamental and self.corollary


def _mann_reports(A: BoundedIntSet, B: BoundedIntSet, upto: int) -> list[MannReport]:
    if A.bound != B.bound:
        raise ContractViolation(f"mismatched bounds {A.bound} and {B.bound}")
    C = shnirelman_sumset([A, B]).bits
    out = []
    ca = cb = cc = 0
    gnum, gden = 0, 0  # running min of (A(m)+B(m))/m over m <= n
    cnum, cden = 0, 0  # same, restricted to m ∉ C; cden == 0 means empty
    for n in range(1, upto + 1):
        ca += (A.bits >> n) & 1
        cb += (B.bits >> n) & 1
        in_c = (C >> n) & 1
        cc += in_c
        s = ca + cb
        if not gden or s * gden < gnum * n:
            gnum, gden = s, n
        if not in_c and (not cden or s * cden < cnum * n):
            cnum, cden = s, n
        # An empty minimum means [1, n] ⊆ C, so the first branch holds.
        fundamental = cc == n or (cden > 0 and cc * cden >= cnum * n)
        corollary = cc * gden >= min(gnum, gden) * n
        out.append(
            MannReport(n, cc, Fraction(cnum, cden) if cden else None, Fraction(gnum, gden), fundamental, corollary)
        )
    return out


def check_mann(A: BoundedIntSet, B: BoundedIntSet, n: int) -> MannReport:
    """Check ``C(n)/n = 1`` or ``C(n)/n >= min_{m<=n, m∉C} (A(m)+B(m))/m`` where ``C = A+B``.

    Also checks ``C(n) >= min(1, gamma) n`` with ``gamma = min_{m<=n} (A(m)+B(m))/m``.
    """
    if not 1 <= n <= A.bound:
        raise RangeError(f"check_mann needs 1 <= n <= {A.bound}, got n={n}")
    return _mann_reports(A, B, n)[-1]


def check_mann_all(A: BoundedIntSet, B: BoundedIntSet) -> list[MannReport]:
    """:func:`check_mann` for every ``n`` in ``[1, g]`` in a single pass."""
    return _mann_reports(A, B, A.bound)


@dataclass
class PrefixReport:
    alpha: Fraction
    beta: Fraction
    bound: Fraction
    violations: list[tuple[int, int, Fraction]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def check_shnirelman_prefix(A: BoundedIntSet, B: BoundedIntSet) -> PrefixReport:
    """Check ``(A+B)(m) >= (alpha + beta - alpha beta) m`` for all ``m <= g``.

    ``alpha`` and ``beta`` are the truncated densities of ``A`` and ``B`` on ``[1, g]``.
    """
    if A.bound != B.bound:
        raise ContractViolation(f"mismatched bounds {A.bound} and {B.bound}")
    alpha = truncated_density(A)
    beta = truncated_density(B)
    bound = alpha + beta - alpha * beta
    C = shnirelman_sumset([A, B]).bits
    rep = PrefixReport(alpha, beta, bound)
    c = 0
    for m in range(1, A.bound + 1):
        c += (C >> m) & 1
        if c * bound.denominator < bound.numerator * m:
            rep.violations.append((m, c, bound * m))
    return rep
