"""Deterministic instance streams for the verification suites.

Exhaustive mode enumerates in a fixed canonical order:

* families/pairs/sets: by bound ``g`` ascending, then ``n`` ascending, then the
  tuple of member bitsets in lexicographic order (``itertools.product``);
* group pairs: by group in the order given, then ``(A, B)`` with both bitsets
  ascending over the nonempty subsets;
* eventually periodic sets: by threshold, period, head bits, residue bits,
  skipping encodings whose canonical form was already produced;
* ``(k, l, m)`` triples: by ``m``, then ``k``, then ``l``.

Random mode draws from ``random.Random(seed)``, so a seed fixes the stream.
"""

from __future__ import annotations

import os
import random
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Iterator

from ..abgroup import FiniteAbelianGroup, GroupSubset
from ..density import EventuallyPeriodicSet
from ..errors import ContractViolation, ResourceError
from ..intset import BoundedIntSet
from ..ranksum import SetFamily

DEFAULT_BUDGET = 1 << 24

KINDS = ("family", "pair", "set", "group_pair", "group_triple", "ep", "klm")


def instance_budget(override: int | None = None) -> int:
    if override is not None:
        return override
    env = os.environ.get("SUMSETLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def group_catalog(max_order: int) -> list[FiniteAbelianGroup]:
    """One presentation per abelian group of order ``<= max_order`` (invariant factors)."""
    out: list[FiniteAbelianGroup] = []

    def extend(factors: list[int], order: int) -> None:
        if factors:
            out.append(FiniteAbelianGroup(tuple(factors)))
        last = factors[-1] if factors else None
        start = 2 if last is None else last
        for m in range(start, max_order // order + 1):
            if last is None or m % last == 0:
                extend(factors + [m], order * m)

    extend([], 1)
    return sorted(out, key=lambda G: (G.order, G.moduli))


@dataclass(frozen=True)
class InstanceGenerator:
    """Shape and mode of an instance stream; ``(lo, hi)`` ranges are inclusive."""

    mode: str = "exhaustive"
    seed: int = 0
    count: int = 1000
    g: tuple[int, int] = (1, 4)
    n: tuple[int, int] = (2, 2)
    groups: tuple[str, ...] = ()
    max_order: int = 24
    density: float = 0.5
    threshold: tuple[int, int] = (0, 20)
    period: tuple[int, int] = (1, 12)
    budget: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "random"):
            raise ContractViolation(f"mode must be 'exhaustive' or 'random', got {self.mode!r}")
        for name in ("g", "n", "threshold", "period"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ContractViolation(f"empty range {name}=({lo}, {hi})")
        if self.g[0] < 1:
            raise ContractViolation("bounds g must be >= 1")
        if self.n[0] < 1:
            raise ContractViolation("family sizes n must be >= 1")
        if not 0.0 <= self.density <= 1.0:
            raise ContractViolation(f"density must lie in [0, 1], got {self.density}")

    def config(self) -> dict:
        d = asdict(self)
        d.pop("budget")
        d["groups"] = list(self.groups)
        return d

    def group_objects(self) -> list[FiniteAbelianGroup]:
        return [FiniteAbelianGroup.decode(t) for t in self.groups]


def exhaustive_size(gen: InstanceGenerator, kind: str) -> int:
    """Exact number of instances an exhaustive stream of ``kind`` would produce (before dedup)."""
    glo, ghi = gen.g
    nlo, nhi = gen.n
    if kind == "family":
        return sum(1 << (g * n) for g in range(glo, ghi + 1) for n in range(nlo, nhi + 1))
    if kind == "pair":
        return sum(1 << (2 * g) for g in range(glo, ghi + 1))
    if kind == "set":
        return sum(1 << g for g in range(glo, ghi + 1))
    if kind in ("group_pair", "group_triple"):
        if not gen.groups:
            raise ContractViolation("exhaustive group suites need explicit groups")
        return sum(((1 << G.order) - 1) ** 2 for G in gen.group_objects())
    if kind == "ep":
        return sum(
            (1 << (N + 1)) << m
            for N in range(gen.threshold[0], gen.threshold[1] + 1)
            for m in range(max(1, gen.period[0]), gen.period[1] + 1)
        )
    if kind == "klm":
        return sum(
            1 for m in range(max(2, gen.period[0]), gen.period[1] + 1) for k in range(1, m) for l in range(1, m - k + 1)
        )
    raise ContractViolation(f"unknown instance kind {kind!r}")


def _rand_bits(rng: random.Random, width: int, p: float) -> int:
    if p == 0.5:
        return rng.getrandbits(width) if width else 0
    bits = 0
    for i in range(width):
        if rng.random() < p:
            bits |= 1 << i
    return bits


def _rand_nonempty(rng: random.Random, width: int, p: float) -> int:
    while True:
        b = _rand_bits(rng, width, p)
        if b:
            return b


def gen_instances(gen: InstanceGenerator, kind: str) -> Iterator[object]:
    """Yield instances of ``kind``; refuses exhaustive streams above the budget."""
    if kind not in KINDS:
        raise ContractViolation(f"unknown instance kind {kind!r}")
    if gen.mode == "exhaustive":
        size = exhaustive_size(gen, kind)
        limit = instance_budget(gen.budget)
        if size > limit:
            raise ResourceError(f"exhaustive stream of {size} instances exceeds budget {limit}", size, limit)
        return _exhaustive(gen, kind)
    return _random(gen, kind)


def _exhaustive(gen: InstanceGenerator, kind: str) -> Iterator[object]:
    glo, ghi = gen.g
    if kind in ("family", "pair", "set"):
        ns = range(gen.n[0], gen.n[1] + 1) if kind == "family" else [2 if kind == "pair" else 1]
        for g in range(glo, ghi + 1):
            for n in ns:
                for combo in product(range(1 << g), repeat=n):
                    sets = tuple(BoundedIntSet(g, b << 1) for b in combo)
                    if kind == "family":
                        yield SetFamily(g, sets)
                    elif kind == "pair":
                        yield sets
                    else:
                        yield sets[0]
    elif kind in ("group_pair", "group_triple"):
        for G in gen.group_objects():
            top = 1 << G.order
            for a in range(1, top):
                A = GroupSubset(G, a)
                for b in range(1, top):
                    yield (A, GroupSubset(G, b)) if kind == "group_pair" else (A, GroupSubset(G, b), None)
    elif kind == "ep":
        seen = set()
        for N in range(gen.threshold[0], gen.threshold[1] + 1):
            for m in range(max(1, gen.period[0]), gen.period[1] + 1):
                for head in range(1 << (N + 1)):
                    for res in range(1 << m):
                        S = EventuallyPeriodicSet(N, head, m, res)
                        if S not in seen:
                            seen.add(S)
                            yield S
    elif kind == "klm":
        for m in range(max(2, gen.period[0]), gen.period[1] + 1):
            for k in range(1, m):
                for l in range(1, m - k + 1):
                    yield (k, l, m)


def _random(gen: InstanceGenerator, kind: str) -> Iterator[object]:
    rng = random.Random(gen.seed)
    p = gen.density
    groups = gen.group_objects() if gen.groups else group_catalog(gen.max_order)
    for _ in range(gen.count):
        if kind in ("family", "pair", "set"):
            g = rng.randint(*gen.g)
            n = rng.randint(*gen.n) if kind == "family" else (2 if kind == "pair" else 1)
            sets = tuple(BoundedIntSet(g, _rand_bits(rng, g, p) << 1) for _ in range(n))
            yield SetFamily(g, sets) if kind == "family" else (sets if kind == "pair" else sets[0])
        elif kind in ("group_pair", "group_triple"):
            G = groups[rng.randrange(len(groups))]
            A = GroupSubset(G, _rand_nonempty(rng, G.order, p))
            B = GroupSubset(G, _rand_nonempty(rng, G.order, p))
            if kind == "group_pair":
                yield (A, B)
            else:
                members = A.members()
                yield (A, B, members[rng.randrange(len(members))])
        elif kind == "ep":
            N = rng.randint(*gen.threshold)
            m = rng.randint(max(1, gen.period[0]), gen.period[1])
            yield EventuallyPeriodicSet(N, _rand_bits(rng, N + 1, p), m, _rand_bits(rng, m, p))
        elif kind == "klm":
            m = rng.randint(max(2, gen.period[0]), max(2, gen.period[1]))
            k = rng.randint(1, m - 1)
            l = rng.randint(1, m - k)
            yield (k, l, m)

