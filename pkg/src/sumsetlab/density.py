"""Exact densities of eventually periodic sets of nonnegative integers.

An :class:`EventuallyPeriodicSet` lists its members explicitly on
``{0, ..., N}`` and, beyond ``N``, contains ``n`` iff ``n mod m`` lies in a
residue set ``R``.  For such sets both the Shnirel'man density and the lower
asymptotic density reduce to finite computations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable

from .errors import ContractViolation, ParseError, PreconditionError
from .intset import BoundedIntSet, iter_bits, parse_members, range_mask

__all__ = [
    "EventuallyPeriodicSet",
    "count_ep",
    "shnirelman_density",
    "lower_density",
    "ep_sumset",
    "congruence_example",
    "residue_sumset",
    "check_density_oracle",
    "check_congruence_example",
]


def _minimal_period(m: int, residues: int) -> tuple[int, int]:
    for d in range(1, m + 1):
        if m % d:
            continue
        low = residues & ((1 << d) - 1)
        if all(((residues >> r) & 1) == ((low >> (r % d)) & 1) for r in range(m)):
            return d, low
    return m, residues


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """``head`` holds membership on ``{0..threshold}``; ``residues`` the tail pattern mod ``period``.

    Construction normalizes to a canonical form: the period is reduced to
    the least period of the residue pattern and the threshold is lowered as
    far as the head agrees with the tail.  Two sets are therefore equal iff
    their canonical fields are equal.
    """

    threshold: int
    head: int
    period: int
    residues: int

    def __post_init__(self) -> None:
        N, m = self.threshold, self.period
        if N < 0:
            raise ContractViolation(f"threshold must be >= 0, got {N}")
        if m < 1:
            raise ContractViolation(f"period must be >= 1, got {m}")
        if self.head < 0 or self.head >> (N + 1):
            raise ContractViolation(f"head members must lie in [0, {N}]")
        if self.residues < 0 or self.residues >> m:
            raise ContractViolation(f"residues must lie in [0, {m - 1}]")
        m, residues = _minimal_period(m, self.residues)
        head = self.head
        while N > 0 and ((head >> N) & 1) == ((residues >> (N % m)) & 1):
            head &= ~(1 << N)
            N -= 1
        object.__setattr__(self, "threshold", N)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "period", m)
        object.__setattr__(self, "residues", residues)

    @classmethod
    def of(cls, threshold: int, head: Iterable[int], period: int, residues: Iterable[int]) -> "EventuallyPeriodicSet":
        hb = 0
        for x in head:
            if not 0 <= x <= threshold:
                raise ContractViolation(f"head member {x} outside [0, {threshold}]")
            hb |= 1 << x
        rb = 0
        for r in residues:
            if not 0 <= r < period:
                raise ContractViolation(f"residue {r} outside [0, {period - 1}]")
            rb |= 1 << r
        return cls(threshold, hb, period, rb)

    @classmethod
    def periodic(cls, period: int, residues: Iterable[int]) -> "EventuallyPeriodicSet":
        """``{n >= 0 : n mod period ∈ residues}``, including 0 when 0 is a residue."""
        res = sorted(set(residues))
        return cls.of(0, [0] if 0 in res else [], period, res)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int) or n < 0:
            return False
        if n <= self.threshold:
            return bool((self.head >> n) & 1)
        return bool((self.residues >> (n % self.period)) & 1)

    @property
    def residue_count(self) -> int:
        return self.residues.bit_count()

    def residue_list(self) -> list[int]:
        return list(iter_bits(self.residues))

    def head_list(self) -> list[int]:
        return list(iter_bits(self.head))

    def bits_upto(self, x: int) -> int:
        """Bitset of members in ``[0, x]``."""
        if x <= self.threshold:
            return self.head & ((1 << (x + 1)) - 1)
        bits = self.head
        m = self.period
        for n in range(self.threshold + 1, x + 1):
            if (self.residues >> (n % m)) & 1:
                bits |= 1 << n
        return bits

    def to_bounded(self, g: int) -> BoundedIntSet:
        """Positive members up to ``g`` as a :class:`BoundedIntSet`."""
        return BoundedIntSet(g, self.bits_upto(g) & range_mask(g))

    def encode(self) -> str:
        head = ",".join(map(str, self.head_list()))
        res = ",".join(map(str, self.residue_list()))
        return f"{self.threshold}:{{{head}}}|{self.period}:{{{res}}}"

    @classmethod
    def decode(cls, text: str) -> "EventuallyPeriodicSet":
        m = _EP_RE.fullmatch(text.strip())
        if not m:
            raise ParseError(f"expected 'N:{{head}}|m:{{residues}}', got {text!r}")
        return cls.of(int(m.group(1)), parse_members(m.group(2)), int(m.group(3)), parse_members(m.group(4)))

    def __str__(self) -> str:
        return self.encode()


_EP_RE = re.compile(r"(\d+):\{([^{}]*)\}\|(\d+):\{([^{}]*)\}")


def _periodic_upto(S: EventuallyPeriodicSet, x: int) -> int:
    """``#{0 <= k <= x : k mod m ∈ R}`` for ``x >= -1``."""
    m = S.period
    full, part = divmod(x + 1, m)
    return full * S.residue_count + (S.residues & ((1 << part) - 1)).bit_count()


def count_ep(S: EventuallyPeriodicSet, n: int) -> int:
    """Number of members of ``S`` in ``[1, n]``; 0 is never counted."""
    if n < 0:
        raise PreconditionError(f"count_ep needs n >= 0, got {n}")
    N = S.threshold
    head = (S.head & range_mask(min(n, N))).bit_count()
    if n <= N:
        return head
    return head + _periodic_upto(S, n) - _periodic_upto(S, N)


def shnirelman_density(S: EventuallyPeriodicSet) -> Fraction:
    """``inf_{n >= 1} count_ep(S, n) / n``, exactly."""
    # For n > N, f(n) = count(n) - (|R|/m) n is periodic with period m, so
    # count(n)/n = |R|/m + f(n)/n.  On a residue class where f >= 0 every
    # ratio is >= |R|/m and tends to it; where f < 0 the ratio increases
    # along the class, so its least value sits at the first n > N, i.e. in
    # [N+1, N+m].  Hence inf = min(min_{1<=n<=N+m} count(n)/n, |R|/m).
    limit = Fraction(S.residue_count, S.period)
    best = limit
    c = 0
    for n in range(1, S.threshold + S.period + 1):
        c += n in S
        if c * best.denominator < best.numerator * n:
            best = Fraction(c, n)
    return best


def lower_density(S: EventuallyPeriodicSet) -> Fraction:
    """Lower asymptotic density; for eventually periodic sets the limit ``|R|/m``."""
    return Fraction(S.residue_count, S.period)


def ep_sumset(S: EventuallyPeriodicSet, T: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
    """Plain sumset ``{s + t : s ∈ S, t ∈ T}`` of two subsets of ``N_0``.

    The result is eventually periodic with period ``L = lcm(m_S, m_T)``.  Sums
    touching a head element are periodic past ``N_S + N_T``; sums of two
    tail elements lie in translates of the semigroup ``m_S N_0 + m_T N_0``,
    which is ``gcd``-periodic beyond its Frobenius number ``< L``.  So the
    sumset is ``L``-periodic past ``N_S + N_T + m_S + m_T + L``.
    """
    L = S.period * T.period // gcd(S.period, T.period)
    cut = S.threshold + T.threshold + S.period + T.period + L
    top = cut + L
    a = S.bits_upto(top)
    b = T.bits_upto(top)
    if a.bit_count() > b.bit_count():
        a, b = b, a
    total = 0
    for x in iter_bits(a):
        total |= b << x
    total &= (1 << (top + 1)) - 1
    residues = 0
    for n in range(cut + 1, top + 1):
        if (total >> n) & 1:
            residues |= 1 << (n % L)
    return EventuallyPeriodicSet(cut, total & ((1 << (cut + 1)) - 1), L, residues)


def residue_sumset(m: int, R1: Iterable[int], R2: Iterable[int]) -> set[int]:
    """Minkowski sum of two residue sets in ``Z/m``."""
    R2 = list(R2)
    return {(r + s) % m for r in R1 for s in R2}


def congruence_example(k: int, l: int, m: int) -> tuple[EventuallyPeriodicSet, EventuallyPeriodicSet, EventuallyPeriodicSet, Fraction]:
    """Unions of residue classes ``{0..k-1}`` and ``{0..l-1}`` mod ``m`` and their sum.

    Returns ``(A, B, A+B, (k+l-1)/m)``; the lower density of ``A+B`` falls
    ``1/m`` short of ``d_L(A) + d_L(B)``.
    """
    if k < 1 or l < 1 or m < 1:
        raise PreconditionError(f"k, l, m must be positive, got k={k}, l={l}, m={m}")
    if k + l > m:
        raise PreconditionError(f"congruence example needs k + l <= m, got k={k}, l={l}, m={m}")
    A = EventuallyPeriodicSet.periodic(m, range(k))
    B = EventuallyPeriodicSet.periodic(m, range(l))
    return A, B, ep_sumset(A, B), Fraction(k + l - 1, m)


@dataclass
class DensityOracleReport:
    sigma: Fraction
    brute_min: Fraction
    lower: Fraction
    head_excess: int
    failures: list[str]

    @property
    def holds(self) -> bool:
        return not self.failures


def check_density_oracle(S: EventuallyPeriodicSet, factor: int = 10, j: int = 1000) -> DensityOracleReport:
    """Compare the closed forms against direct enumeration of members.

    The brute-force prefix scan runs to ``factor * (N + m)``; the closed-form
    Shnirel'man density must not exceed any prefix ratio and must equal the
    scanned minimum whenever that minimum is at most ``|R|/m``.  For the lower
    density, at ``n = j m (N + 1)`` the count must equal ``d_L n + D`` where
    ``D`` is the head's excess over the periodic pattern on ``[1, N]``, so the
    prefix average is within ``|D| / n <= N / n`` of ``d_L``.
    """
    failures = []
    N, m = S.threshold, S.period
    limit = Fraction(S.residue_count, m)
    sigma = shnirelman_density(S)
    top = factor * (N + m)
    c = 0
    bnum, bden = 1, 1
    for n in range(1, top + 1):
        c += n in S
        if c != count_ep(S, n):
            failures.append(f"count_ep({n}) = {count_ep(S, n)} but enumeration gives {c}")
            break
        if sigma.numerator * n > c * sigma.denominator:
            failures.append(f"sigma {sigma} exceeds prefix ratio {c}/{n}")
            break
        if c * bden < bnum * n:
            bnum, bden = c, n
    brute = Fraction(bnum, bden)
    if brute <= limit and sigma != brute:
        failures.append(f"sigma {sigma} differs from brute-force minimum {brute}")

    lower = lower_density(S)
    excess = sum((k in S) - bool((S.residues >> (k % m)) & 1) for k in range(1, N + 1))
    n = j * m * (N + 1)
    if count_ep(S, n) != lower * n + excess:
        failures.append(f"count_ep({n}) = {count_ep(S, n)} is not d_L*n + {excess}")
    if abs(excess) > N:
        failures.append(f"head excess {excess} exceeds threshold {N}")
    return DensityOracleReport(sigma, brute, lower, excess, failures)


@dataclass
class CongruenceReport:
    k: int
    l: int
    m: int
    predicted: Fraction
    sum_residues: list[int]
    failures: list[str]

    @property
    def holds(self) -> bool:
        return not self.failures


def check_congruence_example(k: int, l: int, m: int) -> CongruenceReport:
    """Rebuild the residue-class example and confirm its three densities exactly."""
    A, B, C, predicted = congruence_example(k, l, m)
    failures = []
    if lower_density(A) != Fraction(k, m):
        failures.append(f"d_L(A) = {lower_density(A)} != {k}/{m}")
    if lower_density(B) != Fraction(l, m):
        failures.append(f"d_L(B) = {lower_density(B)} != {l}/{m}")
    if lower_density(C) != predicted:
        failures.append(f"d_L(A+B) = {lower_density(C)} != {predicted}")
    if not predicted < lower_density(A) + lower_density(B):
        failures.append("d_L(A+B) is not below d_L(A) + d_L(B)")
    expected = residue_sumset(m, range(k), range(l))
    # Compare residues mod the original m; C may carry a smaller canonical period.
    got = {r for r in range(m) if r + m * (C.threshold + 1) in C}
    if got != expected or got != set(range(k + l - 1)):
        failures.append(f"A+B residues {sorted(got)} != {sorted(expected)}")
    if not all((n in C) == (n % m in expected) for n in range(0, 3 * m)):
        failures.append("A+B differs from its residue description near 0")
    return CongruenceReport(k, l, m, predicted, sorted(got), failures)
