"""The Dyson transform on a family of bounded sets.

One step picks the least shift ``a0`` admitting a Dyson triple, moves the
elements ``T`` of the last set ``A_n`` that are not absorbed by ``A_ell``
under that shift, and replaces

    A_n   -> A_n minus T
    A_ell -> A_ell ∪ (T + a0)      (truncated to [1, g])

so that ``A_n(g)`` strictly drops.  Iterating empties ``A_n``.
"""

from __future__ import annotations

import json
import random
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Iterable, Sequence

from .errors import ContractViolation, PreconditionError
from .intset import BoundedIntSet, iter_bits, range_mask, shift_or_sum
from .ranksum import SetFamily, _rank_sums, gamma_star, rank_profile

__all__ = [
    "DysonTriple",
    "TransformStep",
    "TransformTrace",
    "LemmaReport",
    "is_dyson_triple",
    "find_minimal_triple",
    "build_T",
    "apply_transform",
    "iterate_transform",
    "check_lemmas",
    "lemma1_collection",
    "TraceReport",
    "check_transform_lemmas",
]


def is_dyson_triple(family: SetFamily, a: int, ell: int, c: int) -> bool:
    n, g = family.n, family.bound
    if n < 2:
        raise PreconditionError(f"Dyson triples need n >= 2 sets, got n={n}")
    if not (1 <= c <= g and c in family[n]):
        return False
    if not 1 <= ell <= n - 1:
        return False
    A_ell = family[ell]
    if not (a == 0 or a in A_ell or a > g):
        return False
    return a + c not in A_ell or a + c > g


@dataclass(frozen=True)
class DysonTriple:
    a: int
    ell: int
    c: int

    @classmethod
    def validated(cls, family: SetFamily, a: int, ell: int, c: int) -> "DysonTriple":
        if not is_dyson_triple(family, a, ell, c):
            raise ContractViolation(f"({a}, {ell}, {c}) is not a Dyson triple for {family}")
        return cls(a, ell, c)


def _absorbed_complement(last: int, a_ell: int, a: int, mask: int) -> int:
    # c survives iff c + a is not in A_ell (members beyond g never are).
    return last & ~(a_ell >> a) & mask


def find_minimal_triple(family: SetFamily) -> tuple[int, int]:
    """Least ``a0`` admitting a Dyson triple, then the least ``ell`` for that ``a0``."""
    n, g = family.n, family.bound
    if n < 2:
        raise PreconditionError(f"the transform needs n >= 2 sets, got n={n}")
    last = family[n].bits
    if not last:
        raise PreconditionError("the transform needs A_n(g) >= 1")
    mask = range_mask(g)
    for a in range(g + 1):
        for ell in range(1, n):
            a_ell = family[ell].bits
            if a and not (a_ell >> a) & 1:
                continue
            if _absorbed_complement(last, a_ell, a, mask):
                return a, ell
    return g + 1, 1


def build_T(family: SetFamily, a0: int, ell: int) -> BoundedIntSet:
    """``{c ∈ A_n ∩ [1, g] : c + a0 ∉ A_ell or c + a0 > g}``."""
    g = family.bound
    return BoundedIntSet(g, _absorbed_complement(family[family.n].bits, family[ell].bits, a0, range_mask(g)))


@dataclass(frozen=True)
class TransformStep:
    a0: int
    ell: int
    T: BoundedIntSet
    before: SetFamily
    after: SetFamily

    def to_json(self) -> str:
        return json.dumps(
            {
                "a0": self.a0,
                "ell": self.ell,
                "T": self.T.members(),
                "before": self.before.encode(),
                "after": self.after.encode(),
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "TransformStep":
        d = json.loads(line)
        before = SetFamily.decode(d["before"])
        return cls(d["a0"], d["ell"], BoundedIntSet.of(before.bound, d["T"]), before, SetFamily.decode(d["after"]))


def _verify_step(step: TransformStep) -> None:
    before, after, T = step.before, step.after, step.T
    n, g = before.n, before.bound
    if not T.bits or not T.issubset(before[n]):
        raise AssertionError(f"T={T} must be a nonempty subset of A_n")
    if after[n].bits != before[n].bits & ~T.bits:
        raise AssertionError("A'_n must equal A_n minus T")
    shifted = (T.bits << step.a0) & range_mask(g)
    if after[step.ell].bits != before[step.ell].bits | shifted:
        raise AssertionError("A'_ell must equal A_ell ∪ (T + a0)")
    for i in range(1, n):
        if i != step.ell and after[i] != before[i]:
            raise AssertionError(f"A'_{i} must equal A_{i}")
    if len(after[n]) >= len(before[n]):
        raise AssertionError("A_n(g) must strictly drop")


def apply_transform(family: SetFamily) -> TransformStep:
    """One Dyson transform step, with its invariants verified."""
    a0, ell = find_minimal_triple(family)
    T = build_T(family, a0, ell)
    n, g = family.n, family.bound
    new_last = BoundedIntSet(g, family[n].bits & ~T.bits)
    new_ell = BoundedIntSet(g, family[ell].bits | ((T.bits << a0) & range_mask(g)))
    after = family.replace(n, new_last).replace(ell, new_ell)
    step = TransformStep(a0, ell, T, family, after)
    _verify_step(step)
    return step


@dataclass(frozen=True)
class TransformTrace:
    steps: tuple[TransformStep, ...]
    terminal: SetFamily

    def __len__(self) -> int:
        return len(self.steps)

    def to_jsonl(self) -> str:
        return "".join(s.to_json() + "\n" for s in self.steps)


def iterate_transform(family: SetFamily) -> TransformTrace:
    """Apply the transform until ``A_n`` is empty on ``[1, g]``."""
    if family.n < 2:
        raise PreconditionError(f"the transform needs n >= 2 sets, got n={family.n}")
    budget = len(family[family.n])
    steps = []
    current = family
    while current[current.n].bits:
        step = apply_transform(current)
        if steps and steps[-1].after != step.before:
            raise AssertionError("trace steps must chain")
        steps.append(step)
        current = step.after
    if len(steps) > budget:
        raise AssertionError(f"trace took {len(steps)} steps, more than A_n(g)={budget}")
    return TransformTrace(tuple(steps), current)


@dataclass
class LemmaReport:
    """Failure witnesses per lemma; empty lists mean the lemma held."""

    lemma1: list[dict] = field(default_factory=list)
    lemma2: list[tuple[int, int, int, int]] = field(default_factory=list)
    lemma3: list[tuple[int, int, Fraction]] = field(default_factory=list)
    collection_size: int = 0

    @property
    def holds(self) -> bool:
        return not (self.lemma1 or self.lemma2 or self.lemma3)


def lemma1_collection(family: SetFamily, exhaustive_upto: int = 6, samples: int = 32, seed: int = 0) -> list[int]:
    """Bitsets ``S`` over ``[1, g]`` on which the exchange lemma is tested.

    Every subset when ``g <= exhaustive_upto``; otherwise the rank sums of the
    family plus ``samples`` seeded random subsets.
    """
    g = family.bound
    mask = range_mask(g)
    if g <= exhaustive_upto:
        return [s << 1 for s in range(1 << g)]
    found = dict.fromkeys(chain([0], _rank_sums([s.bits for s in family.sets], mask)[1:]))
    rng = random.Random(seed)
    for _ in range(samples):
        found.setdefault(rng.getrandbits(g) << 1, None)
    return list(found)


def _check_lemma1(step: TransformStep, collection: Iterable[int], report: LemmaReport) -> None:
    before, after = step.before, step.after
    g, n, a0, ell = before.bound, before.n, step.a0, step.ell
    mask = range_mask(g)
    A_l, A_n = before[ell].bits, before[n].bits
    B_l, B_n = after[ell].bits, after[n].bits
    count = 0
    for S in collection:
        count += 1
        s_al = shift_or_sum(S, A_l, mask)
        s_bl = shift_or_sum(S, B_l, mask)
        s_an = shift_or_sum(S, A_n, mask)
        s_bn = shift_or_sum(S, B_n, mask)
        for h in iter_bits(s_bl & ~s_al):
            d = h - a0
            if d < 1 or not (s_an >> d) & 1 or (s_bn >> d) & 1:
                report.lemma1.append({"part": 1, "S": list(iter_bits(S)), "h": h})
        extra = shift_or_sum(s_bl, B_n, mask) & ~shift_or_sum(s_al, A_n, mask)
        for h in iter_bits(extra):
            report.lemma1.append({"part": 2, "S": list(iter_bits(S)), "h": h})
    report.collection_size = count


def check_lemmas(step: TransformStep, gamma: Fraction, collection: Sequence[int] | None = None) -> LemmaReport:
    """Extensional check of the transform lemmas for one step.

    ``collection`` holds bitsets ``S`` for the exchange lemma; by default
    :func:`lemma1_collection` of the family before the step.
    """
    before, after = step.before, step.after
    g, n = before.bound, before.n
    report = LemmaReport()
    if collection is None:
        collection = lemma1_collection(before)
    _check_lemma1(step, collection, report)

    old = rank_profile(before).table
    new = rank_profile(after).table
    for r in range(1, n + 1):
        for m in range(1, g + 1):
            if new[r][m] > old[r][m]:
                report.lemma2.append((r, m, new[r][m], old[r][m]))

    delta = min(Fraction(1), Fraction(gamma))
    for m in range(1, g + 1):
        if new[1][m] * delta.denominator < delta.numerator * m:
            report.lemma3.append((m, new[1][m], delta * m))
    return report


@dataclass
class TraceReport:
    """Lemma outcomes over every step of a transform trace."""

    steps: int = 0
    initial_last: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures


def check_transform_lemmas(
    family: SetFamily,
    exhaustive_upto: int = 6,
    samples: int = 32,
    seed: int | None = None,
) -> TraceReport:
    """Run :func:`iterate_transform` and :func:`check_lemmas` on every step.

    The exchange-lemma collection for each step comes from :func:`lemma1_collection`
    with a seed derived from the step's family encoding unless ``seed`` is given.
    """
    rep = TraceReport(initial_last=len(family[family.n]))
    try:
        trace = iterate_transform(family)
    except AssertionError as exc:
        rep.failures.append({"stage": "trace", "error": str(exc)})
        return rep
    rep.steps = len(trace)
    for i, step in enumerate(trace.steps):
        before = step.before
        s = zlib.crc32(before.encode().encode()) if seed is None else seed
        coll = lemma1_collection(before, exhaustive_upto, samples, s)
        lr = check_lemmas(step, gamma_star(before), coll)
        if not lr.holds:
            rep.failures.append(
                {
                    "stage": "lemmas",
                    "step": i,
                    "before": before.encode(),
                    "a0": step.a0,
                    "ell": step.ell,
                    "lemma1": lr.lemma1[:5],
                    "lemma2": [list(map(str, v)) for v in lr.lemma2[:5]],
                    "lemma3": [list(map(str, v)) for v in lr.lemma3[:5]],
                }
            )
    return rep
