"""Bounded sets of positive integers.

A :class:`BoundedIntSet` is a subset of ``{1, ..., g}`` stored as a Python
``int`` bitset: bit ``i`` is set iff ``i`` is a member.  Bit 0 is never set.
Sums follow the convention in which every summand is drawn from ``A ∪ {0}``,
so a sumset always contains each of its summands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import ContractViolation, ParseError, RangeError

__all__ = [
    "BoundedIntSet",
    "count",
    "shnirelman_sumset",
    "hfold_sumset",
    "translate",
    "truncated_density",
    "is_basis_up_to",
    "range_mask",
    "iter_bits",
    "shift_or_sum",
    "prefix_counts",
]


def range_mask(g: int) -> int:
    """Bitset of ``{1, ..., g}``."""
    return ((1 << (g + 1)) - 1) ^ 1 if g >= 1 else 0


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def shift_or_sum(a: int, b: int, mask: int) -> int:
    """Sum of two bitsets with 0 adjoined to both, truncated to ``mask``.

    Computes ``((A ∪ {0}) + (B ∪ {0})) ∩ mask`` by or-ing shifted copies of
    one operand, iterating over the sparser of the two.
    """
    a |= 1
    b |= 1
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out |= b << (low.bit_length() - 1)
        a ^= low
    return out & mask


def prefix_counts(bits: int, g: int) -> list[int]:
    """``[A(0), A(1), ..., A(g)]`` for the bitset ``bits``."""
    out = [0] * (g + 1)
    c = 0
    for i in range(1, g + 1):
        c += (bits >> i) & 1
        out[i] = c
    return out


@dataclass(frozen=True)
class BoundedIntSet:
    """A finite set of positive integers, all at most ``bound``."""

    bound: int
    bits: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.bound, int) or self.bound < 1:
            raise ContractViolation(f"bound must be a positive integer, got {self.bound!r}")
        if self.bits < 0 or self.bits & ~range_mask(self.bound):
            raise ContractViolation(f"members must lie in [1, {self.bound}]")

    @classmethod
    def of(cls, bound: int, members: Iterable[int] = ()) -> "BoundedIntSet":
        bits = 0
        for x in members:
            if not 1 <= x <= bound:
                raise ContractViolation(f"member {x} outside [1, {bound}]")
            bits |= 1 << x
        return cls(bound, bits)

    @classmethod
    def full(cls, bound: int) -> "BoundedIntSet":
        return cls(bound, range_mask(bound))

    @classmethod
    def truncating(cls, bound: int, members: Iterable[int]) -> "BoundedIntSet":
        """Build from arbitrary integers, keeping only those in ``[1, bound]``."""
        return cls.of(bound, (x for x in members if 1 <= x <= bound))

    @property
    def mask(self) -> int:
        return range_mask(self.bound)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and 1 <= x <= self.bound and bool((self.bits >> x) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def union(self, other: "BoundedIntSet") -> "BoundedIntSet":
        _same_bound(self, other)
        return BoundedIntSet(self.bound, self.bits | other.bits)

    def difference(self, other: "BoundedIntSet") -> "BoundedIntSet":
        _same_bound(self, other)
        return BoundedIntSet(self.bound, self.bits & ~other.bits)

    def intersection(self, other: "BoundedIntSet") -> "BoundedIntSet":
        _same_bound(self, other)
        return BoundedIntSet(self.bound, self.bits & other.bits)

    def issubset(self, other: "BoundedIntSet") -> bool:
        return not self.bits & ~other.bits

    def restrict(self, g: int) -> "BoundedIntSet":
        """The same members intersected with ``[1, g]``, re-bounded at ``g``."""
        return BoundedIntSet(g, self.bits & range_mask(g))

    def encode(self) -> str:
        return f"{self.bound}:{{{','.join(map(str, self))}}}"

    @classmethod
    def decode(cls, text: str) -> "BoundedIntSet":
        m = _SET_RE.fullmatch(text.strip())
        if not m:
            raise ParseError(f"expected 'g:{{a,b,...}}', got {text!r}")
        return cls.of(int(m.group(1)), parse_members(m.group(2)))

    def __str__(self) -> str:
        return self.encode()


_SET_RE = re.compile(r"(\d+):\{([^{}]*)\}")


def parse_members(body: str) -> list[int]:
    """Parse the inside of ``{a,b,c}``."""
    body = body.strip()
    if not body:
        return []
    try:
        return [int(tok) for tok in body.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad member list {{{body}}}") from exc


def _same_bound(*sets: BoundedIntSet) -> int:
    g = sets[0].bound
    for s in sets[1:]:
        if s.bound != g:
            raise ContractViolation(f"mismatched bounds {g} and {s.bound}")
    return g


def count(A: BoundedIntSet, x: int) -> int:
    """Number of members of ``A`` in ``[1, x]``."""
    if not 0 <= x <= A.bound:
        raise RangeError(f"count needs 0 <= x <= {A.bound}, got x={x}")
    return (A.bits & ((1 << (x + 1)) - 1)).bit_count()


def shnirelman_sumset(sets: Sequence[BoundedIntSet], bound: int | None = None) -> BoundedIntSet:
    """``{a_1 + ... + a_h : a_i ∈ A_i ∪ {0}} ∩ [1, g]``."""
    if not sets:
        raise ContractViolation("shnirelman_sumset needs at least one summand")
    g = _same_bound(*sets)
    if bound is not None and bound != g:
        raise ContractViolation(f"summands have bound {g}, requested bound {bound}")
    mask = range_mask(g)
    acc = sets[0].bits
    for s in sets[1:]:
        acc = shift_or_sum(acc, s.bits, mask)
    return BoundedIntSet(g, acc)


def hfold_sumset(A: BoundedIntSet, h: int, bound: int | None = None) -> BoundedIntSet:
    """``hA`` truncated to ``[1, g]``; computed by repeated doubling."""
    if h < 1:
        raise ContractViolation(f"h must be >= 1, got {h}")
    if bound is not None and bound != A.bound:
        raise ContractViolation(f"set has bound {A.bound}, requested bound {bound}")
    mask = A.mask
    result = None
    power = A.bits
    while h:
        if h & 1:
            result = power if result is None else shift_or_sum(result, power, mask)
        h >>= 1
        if h:
            power = shift_or_sum(power, power, mask)
    return BoundedIntSet(A.bound, result)


def translate(A: BoundedIntSet, t: int, bound: int | None = None) -> BoundedIntSet:
    """``{a + t : a ∈ A} ∩ [1, g]``; images outside the range are dropped."""
    g = A.bound if bound is None else bound
    bits = A.bits << t if t >= 0 else A.bits >> -t
    return BoundedIntSet(g, bits & range_mask(g))


def truncated_density(A: BoundedIntSet) -> Fraction:
    """``min_{1 <= n <= g} A(n)/n`` as an exact fraction."""
    best_num, best_den = 1, 1
    c = 0
    bits = A.bits
    for n in range(1, A.bound + 1):
        c += (bits >> n) & 1
        if c * best_den < best_num * n:
            best_num, best_den = c, n
    return Fraction(best_num, best_den)


def is_basis_up_to(A: BoundedIntSet, h: int, g: int) -> bool:
    """True iff every integer in ``[1, g]`` is a sum of at most ``h`` members of ``A``."""
    if h < 1:
        raise ContractViolation(f"h must be >= 1, got {h}")
    if not 1 <= g <= A.bound:
        raise RangeError(f"is_basis_up_to needs 1 <= g <= {A.bound}, got g={g}")
    cut = A.restrict(g)
    target = range_mask(g)
    return hfold_sumset(cut, h).bits & target == target
