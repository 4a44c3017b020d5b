"""Finite abelian groups ``Z/m_1 × ... × Z/m_k`` and sumset theorems in them.

Elements are encoded as mixed-radix indices in ``[0, |G|)`` with the last
coordinate varying fastest, and subsets as ``int`` bitsets over those
indices.  Translating a bitset by ``e`` is a per-axis block rotation, so a
sumset ``A + B`` costs ``min(|A|, |B|)`` rotations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import ContractViolation, ParseError, PreconditionError, ResourceError
from .intset import iter_bits, parse_members

__all__ = [
    "PASS",
    "FAIL",
    "NA",
    "FiniteAbelianGroup",
    "GroupSubset",
    "Subgroup",
    "minkowski_sum",
    "translate_set",
    "e_transform",
    "check_etransform_identities",
    "stabilizer",
    "enumerate_subgroups",
    "check_pigeonhole_cover",
    "check_chowla_cd",
    "check_kneser",
    "is_prime",
    "SUBGROUP_CAP",
]

PASS = "pass"
FAIL = "fail"
NA = "not-applicable"

SUBGROUP_CAP = 64


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/m_1 × ... × Z/m_k``; the empty product is the trivial group."""

    moduli: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", tuple(self.moduli))
        for m in self.moduli:
            if not isinstance(m, int) or m < 2:
                raise ContractViolation(f"cyclic factors need modulus >= 2, got {m!r}")

    @classmethod
    def cyclic(cls, m: int) -> "FiniteAbelianGroup":
        return cls(() if m == 1 else (m,))

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def full(self) -> int:
        return (1 << self.order) - 1

    @property
    def is_cyclic_presentation(self) -> bool:
        return len(self.moduli) <= 1

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for m in reversed(self.moduli):
            out.append(s)
            s *= m
        return tuple(reversed(out))

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple((x // s) % m for s, m in zip(self.strides, self.moduli))

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.moduli):
            raise ContractViolation(f"element {tuple(coords)} has wrong arity for {self}")
        return sum((c % m) * s for c, m, s in zip(coords, self.moduli, self.strides))

    @cached_property
    def _add_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.index([a + b for a, b in zip(self.coords(x), self.coords(y))]) for y in range(self.order))
            for x in range(self.order)
        )

    def add(self, x: int, y: int) -> int:
        return self._add_table[x][y]

    @cached_property
    def _neg_table(self) -> tuple[int, ...]:
        return tuple(self.index([-a for a in self.coords(x)]) for x in range(self.order))

    def neg(self, x: int) -> int:
        return self._neg_table[x]

    def check_element(self, e: int) -> None:
        if not isinstance(e, int) or not 0 <= e < self.order:
            raise ContractViolation(f"{e!r} is not an element index of {self}")

    @cached_property
    def _axis_masks(self) -> tuple[tuple[int, ...], ...]:
        # _axis_masks[j][t]: elements whose j-th coordinate is < m_j - t.
        out = []
        for j, m in enumerate(self.moduli):
            s = self.strides[j]
            row = [0] * m
            for t in range(m):
                bits = 0
                for x in range(self.order):
                    if (x // s) % m < m - t:
                        bits |= 1 << x
                row[t] = bits
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def _shift_plans(self) -> tuple[tuple[tuple[int, int, int, int], ...], ...]:
        # Per element: (keep, high, left, right) rotations, one per nonzero coordinate.
        plans = []
        for e in range(self.order):
            plan = []
            for j, t in enumerate(self.coords(e)):
                if t:
                    m, s = self.moduli[j], self.strides[j]
                    low = self._axis_masks[j][t]
                    plan.append((low, self.full & ~low, t * s, (m - t) * s))
            plans.append(tuple(plan))
        return tuple(plans)

    def shift_bits(self, bits: int, e: int) -> int:
        """Bitset of ``X + e`` for the bitset ``X``."""
        for low, high, left, right in self._shift_plans[e]:
            bits = ((bits & low) << left) | ((bits & high) >> right)
        return bits

    def sum_bits(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if a.bit_count() > b.bit_count():
            a, b = b, a
        out = 0
        for x in iter_bits(a):
            out |= self.shift_bits(b, x)
        return out

    def neg_bits(self, bits: int) -> int:
        neg = self._neg_table
        out = 0
        for x in iter_bits(bits):
            out |= 1 << neg[x]
        return out

    def encode(self) -> str:
        return "x".join(f"Z{m}" for m in self.moduli) if self.moduli else "Z1"

    @classmethod
    def decode(cls, text: str) -> "FiniteAbelianGroup":
        text = text.strip()
        if not re.fullmatch(r"Z\d+(xZ\d+)*", text):
            raise ParseError(f"expected a group like 'Z6' or 'Z2xZ4', got {text!r}")
        moduli = [int(p[1:]) for p in text.split("x")]
        if any(m < 1 for m in moduli):
            raise ParseError(f"moduli must be positive in {text!r}")
        return cls(tuple(m for m in moduli if m != 1))

    def __str__(self) -> str:
        return self.encode()

    def elements(self) -> range:
        return range(self.order)


@dataclass(frozen=True)
class GroupSubset:
    group: FiniteAbelianGroup
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.group.order:
            raise ContractViolation(f"subset bits exceed the carrier of {self.group}")

    @classmethod
    def of(cls, group: FiniteAbelianGroup, elements: Iterable[int]) -> "GroupSubset":
        bits = 0
        for e in elements:
            group.check_element(e)
            bits |= 1 << e
        return cls(group, bits)

    def __contains__(self, e: object) -> bool:
        return isinstance(e, int) and 0 <= e < self.group.order and bool((self.bits >> e) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def members(self) -> list[int]:
        return list(iter_bits(self.bits))

    def _same(self, other: "GroupSubset") -> None:
        if self.group != other.group:
            raise ContractViolation(f"subsets live in different groups {self.group} and {other.group}")

    def union(self, other: "GroupSubset") -> "GroupSubset":
        self._same(other)
        return GroupSubset(self.group, self.bits | other.bits)

    def intersection(self, other: "GroupSubset") -> "GroupSubset":
        self._same(other)
        return GroupSubset(self.group, self.bits & other.bits)

    def difference(self, other: "GroupSubset") -> "GroupSubset":
        self._same(other)
        return GroupSubset(self.group, self.bits & ~other.bits)

    def issubset(self, other: "GroupSubset") -> bool:
        self._same(other)
        return not self.bits & ~other.bits

    def negate(self) -> "GroupSubset":
        return GroupSubset(self.group, self.group.neg_bits(self.bits))

    def encode(self) -> str:
        return f"{self.group.encode()}:{{{','.join(map(str, self))}}}"

    @classmethod
    def decode(cls, text: str) -> "GroupSubset":
        m = re.fullmatch(r"([^:]+):\{([^{}]*)\}", text.strip())
        if not m:
            raise ParseError(f"expected 'Zm:{{...}}', got {text!r}")
        return cls.of(FiniteAbelianGroup.decode(m.group(1)), parse_members(m.group(2)))

    def __str__(self) -> str:
        return self.encode()


@dataclass(frozen=True)
class Subgroup:
    """A subset verified to contain 0 and be closed under ``+`` and negation."""

    carrier: GroupSubset

    def __post_init__(self) -> None:
        G, bits = self.carrier.group, self.carrier.bits
        if not bits & 1:
            raise ContractViolation(f"{self.carrier} does not contain the identity")
        if G.sum_bits(bits, bits) != bits:
            raise ContractViolation(f"{self.carrier} is not closed under addition")
        if G.neg_bits(bits) != bits:
            raise ContractViolation(f"{self.carrier} is not closed under negation")

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.carrier.group

    @property
    def order(self) -> int:
        return len(self.carrier)

    @property
    def is_proper(self) -> bool:
        return self.order < self.group.order

    def __str__(self) -> str:
        return self.carrier.encode()


def minkowski_sum(A: GroupSubset, B: GroupSubset) -> GroupSubset:
    """``{a + b : a ∈ A, b ∈ B}``; empty if either operand is empty."""
    A._same(B)
    return GroupSubset(A.group, A.group.sum_bits(A.bits, B.bits))


def translate_set(X: GroupSubset, e: int) -> GroupSubset:
    X.group.check_element(e)
    return GroupSubset(X.group, X.group.shift_bits(X.bits, e))


def e_transform(A: GroupSubset, B: GroupSubset, e: int) -> tuple[GroupSubset, GroupSubset]:
    """``(A ∪ (B + e), B ∩ (A - e))`` for ``e ∈ A``."""
    A._same(B)
    if not A.bits or not B.bits:
        raise PreconditionError("the e-transform needs nonempty A and B")
    if e not in A:
        raise PreconditionError(f"the e-transform needs e ∈ A, got e={e} for A={A}")
    G = A.group
    Ae = A.bits | G.shift_bits(B.bits, e)
    Be = B.bits & G.shift_bits(A.bits, G.neg(e))
    return GroupSubset(G, Ae), GroupSubset(G, Be)


@dataclass(frozen=True)
class EtransformReport:
    sum_contained: bool
    exchange: bool
    cardinality: bool
    zero_clause: bool | None

    @property
    def verdict(self) -> str:
        ok = self.sum_contained and self.exchange and self.cardinality and self.zero_clause is not False
        return PASS if ok else FAIL


def check_etransform_identities(A: GroupSubset, B: GroupSubset, e: int) -> EtransformReport:
    """Sumset containment, the exchange ``A(e) minus A = e + (B minus B(e))``, and ``|A|+|B|`` conservation."""
    Ae, Be = e_transform(A, B, e)
    G = A.group
    contained = not G.sum_bits(Ae.bits, Be.bits) & ~G.sum_bits(A.bits, B.bits)
    exchange = (Ae.bits & ~A.bits) == G.shift_bits(B.bits & ~Be.bits, e)
    cardinality = len(A) + len(B) == len(Ae) + len(Be)
    zero = None
    if 0 in B:
        zero = e in Ae and 0 in Be
    return EtransformReport(contained, exchange, cardinality, zero)


def stabilizer(X: GroupSubset) -> Subgroup:
    """``H(X) = {g : X + g = X}`` for nonempty ``X``."""
    if not X.bits:
        raise PreconditionError("the stabilizer is defined only for nonempty X")
    G = X.group
    x0 = (X.bits & -X.bits).bit_length() - 1
    h = 0
    # Any g with X + g = X maps x0 into X, so g ∈ X - x0.
    for y in X:
        g = G.add(y, G.neg(x0))
        if G.shift_bits(X.bits, g) == X.bits:
            h |= 1 << g
    return Subgroup(GroupSubset(G, h))


@lru_cache(maxsize=64)
def _subgroup_bits(G: FiniteAbelianGroup) -> tuple[int, ...]:
    cyclic = set()
    for g in G.elements():
        bits, x = 1, g
        while x:
            bits |= 1 << x
            x = G.add(x, g)
        cyclic.add(bits)
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for h in frontier:
            for c in cyclic:
                j = G.sum_bits(h, c)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return tuple(sorted(found, key=lambda b: (b.bit_count(), b)))


def enumerate_subgroups(G: FiniteAbelianGroup, cap: int = SUBGROUP_CAP) -> list[Subgroup]:
    """Every subgroup of ``G``, as joins of cyclic subgroups, ordered by size."""
    if G.order > cap:
        raise ResourceError(f"subgroup enumeration refused: |G|={G.order} exceeds cap {cap}", G.order, cap)
    return [Subgroup(GroupSubset(G, b)) for b in _subgroup_bits(G)]


@dataclass(frozen=True)
class PigeonholeReport:
    verdict: str
    size_sum: int
    order: int


def check_pigeonhole_cover(A: GroupSubset, B: GroupSubset) -> PigeonholeReport:
    """If ``|A| + |B| > |G|`` then ``A + B = G``."""
    A._same(B)
    if not A.bits or not B.bits:
        raise PreconditionError("pigeonhole cover needs nonempty A and B")
    G = A.group
    total = len(A) + len(B)
    if total <= G.order:
        return PigeonholeReport(NA, total, G.order)
    ok = G.sum_bits(A.bits, B.bits) == G.full
    return PigeonholeReport(PASS if ok else FAIL, total, G.order)


@dataclass(frozen=True)
class ChowlaReport:
    verdict: str
    mode: str
    sumset_size: int = 0
    bound: int = 0
    reason: str = ""
    descent: bool | None = None

    @property
    def tight(self) -> bool:
        return self.verdict == PASS and self.sumset_size == self.bound


def check_chowla_cd(m_or_p: int, A: GroupSubset, B: GroupSubset, mode: str = "chowla") -> ChowlaReport:
    """``|A + B| >= min(m, |A| + |B| - 1)`` in ``Z/m``.

    ``chowla`` mode requires ``0 ∈ B`` and every nonzero ``b ∈ B`` coprime to
    ``m``; instances outside that hypothesis come back not-applicable.  It
    also confirms that for each nonzero ``b ∈ B`` some ``e ∈ A`` has
    ``e + b ∉ A`` whenever ``|A|, |B| >= 2`` and ``A != G``.
    ``cauchy_davenport`` mode requires a prime modulus.
    """
    A._same(B)
    G = A.group
    if G.order != m_or_p or not G.is_cyclic_presentation:
        raise ContractViolation(f"expected subsets of Z/{m_or_p}, got subsets of {G}")
    if not A.bits or not B.bits:
        raise PreconditionError("Chowla and Cauchy-Davenport need nonempty A and B")
    m = m_or_p
    if mode == "chowla":
        if m < 2:
            raise PreconditionError(f"Chowla needs m >= 2, got m={m}")
        if 0 not in B:
            return ChowlaReport(NA, mode, reason="0 ∉ B")
        bad = [b for b in B if b and gcd(b, m) != 1]
        if bad:
            return ChowlaReport(NA, mode, reason=f"gcd({bad[0]}, {m}) != 1")
    elif mode in ("cauchy_davenport", "cd"):
        mode = "cauchy_davenport"
        if not is_prime(m):
            raise PreconditionError(f"Cauchy-Davenport needs a prime modulus, got {m}")
    else:
        raise ContractViolation(f"unknown mode {mode!r}; use 'chowla' or 'cauchy_davenport'")
    size = G.sum_bits(A.bits, B.bits).bit_count()
    bound = min(m, len(A) + len(B) - 1)
    descent = None
    if mode == "chowla" and len(A) >= 2 and len(B) >= 2 and A.bits != G.full:
        descent = all(A.bits & ~G.shift_bits(A.bits, G.neg(b)) for b in B if b)
    ok = size >= bound and descent is not False
    return ChowlaReport(PASS if ok else FAIL, mode, size, bound, descent=descent)


@dataclass
class KneserReport:
    sumset_size: int
    sizes: tuple[int, int]
    stabilizer_order: int
    existence: str = NA
    existence_witness: str = ""
    lattice_audited: bool = False
    lattice_ok: bool | None = None
    curiosity: bool = False
    identity: str = NA
    identity_values: tuple[int, int, int] | None = None
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        parts = (self.existence, self.identity)
        if FAIL in parts:
            return FAIL
        return PASS if PASS in parts else NA

    @property
    def tight(self) -> bool:
        """Existence inequality met with equality by the stabilizer witness."""
        a, b = self.sizes
        return self.existence == PASS and self.sumset_size == a + b - self.stabilizer_order


def check_kneser(A: GroupSubset, B: GroupSubset, audit: bool = True) -> KneserReport:
    """Kneser's existence inequality and the stabilizer identity for one pair.

    Existence (when ``|A| + |B| <= |G|``): the witness is ``{0}`` if
    ``|A + B| >= |A| + |B| - 1``, else ``H(A + B)``, which must be proper.  With
    ``audit`` set and ``|G|`` within the enumeration cap, the full subgroup
    lattice is scanned as well.  Identity (when ``|A + B| < |A| + |B|``):
    ``|A + B| = |A + H| + |B + H| - |H|`` for ``H = H(A + B)``.
    """
    A._same(B)
    if not A.bits or not B.bits:
        raise PreconditionError("Kneser's theorems need nonempty A and B")
    G = A.group
    S = G.sum_bits(A.bits, B.bits)
    size, a, b = S.bit_count(), len(A), len(B)
    H = stabilizer(GroupSubset(G, S))
    h = H.order
    rep = KneserReport(size, (a, b), h)

    if a + b <= G.order:
        if size >= a + b - 1:
            primary, rep.existence_witness = True, "trivial"
        else:
            primary, rep.existence_witness = H.is_proper and size >= a + b - h, "stabilizer"
        if audit and G.order <= SUBGROUP_CAP:
            rep.lattice_audited = True
            full = G.full
            rep.lattice_ok = any(k != full and size >= a + b - k.bit_count() for k in _subgroup_bits(G))
            rep.curiosity = rep.lattice_ok and not primary
        ok = primary or bool(rep.lattice_ok)
        if rep.lattice_audited and not rep.lattice_ok:
            ok = False
        rep.existence = PASS if ok else FAIL

    if size < a + b:
        hb = H.carrier.bits
        ah = G.sum_bits(A.bits, hb).bit_count()
        bh = G.sum_bits(B.bits, hb).bit_count()
        rep.identity_values = (ah, bh, h)
        rep.identity = PASS if size == ah + bh - h else FAIL
    return rep
