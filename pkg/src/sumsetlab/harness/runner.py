"""Suite orchestration, witness records and replay."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from typing import IO, Iterable, Iterator

from ..abgroup import FAIL, NA, PASS
from ..errors import ParseError
from .generators import InstanceGenerator, gen_instances
from .suites import SUITES, get_suite

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Witness:
    suite: str
    instance: str
    claim: str
    verdict: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "v": SCHEMA_VERSION,
            "suite": self.suite,
            "instance": self.instance,
            "claim": self.claim,
            "verdict": self.verdict,
            "detail": self.detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "Witness":
        try:
            d = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"witness line is not JSON: {line[:60]!r}") from exc
        if d.get("v") != SCHEMA_VERSION:
            raise ParseError(f"unsupported witness schema version {d.get('v')!r}")
        return cls(d["suite"], d["instance"], d["claim"], d["verdict"], d.get("detail", {}))


def log_witness(w: Witness, sink: IO[str]) -> bool:
    """Append one JSON line; I/O failures are logged and reported as ``False``."""
    try:
        sink.write(w.to_json() + "\n")
        sink.flush()
    except OSError as exc:
        log.error("witness sink write failed: %s", exc)
        return False
    return True


@dataclass
class SuiteReport:
    suite: str
    claim: str
    config: dict
    counts: dict = field(default_factory=lambda: {PASS: 0, FAIL: 0, NA: 0})
    fails: list[Witness] = field(default_factory=list)
    elapsed: float = 0.0
    sink_errors: int = 0

    @property
    def instances(self) -> int:
        return sum(self.counts.values())

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def to_dict(self, with_elapsed: bool = True) -> dict:
        d = {
            "v": SCHEMA_VERSION,
            "suite": self.suite,
            "claim": self.claim,
            "config": self.config,
            "counts": dict(self.counts),
            "instances": self.instances,
            "fails": [w.to_dict() for w in self.fails],
        }
        if self.sink_errors:
            d["sink_errors"] = self.sink_errors
        if with_elapsed:
            d["elapsed"] = round(self.elapsed, 3)
        return d

    def to_json(self, with_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(with_elapsed), sort_keys=True)


def _evaluate_chunk(suite_id: str, chunk: list) -> list[tuple[str, dict]]:
    suite = SUITES[suite_id]
    return [suite.evaluate(inst) for inst in chunk]


def _chunks(items: Iterable, size: int) -> Iterator[list]:
    it = iter(items)
    while chunk := list(islice(it, size)):
        yield chunk


def evaluate_stream(suite_id: str, instances: Iterable, workers: int = 1, chunk: int = 512) -> Iterator[tuple[object, str, dict]]:
    """Yield ``(instance, verdict, detail)`` in input order, serially or on a process pool."""
    suite = get_suite(suite_id)
    if workers <= 1:
        for inst in instances:
            verdict, detail = suite.evaluate(inst)
            yield inst, verdict, detail
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        batches = _chunks(instances, chunk)
        pending: list = []
        for batch in batches:
            pending.append((batch, pool.submit(_evaluate_chunk, suite_id, batch)))
            if len(pending) >= 2 * workers:
                b, fut = pending.pop(0)
                yield from ((i, v, d) for i, (v, d) in zip(b, fut.result()))
        for b, fut in pending:
            yield from ((i, v, d) for i, (v, d) in zip(b, fut.result()))


def run_suite(
    suite_id: str,
    gen: InstanceGenerator,
    workers: int = 1,
    sink: IO[str] | None = None,
    log_pass_every: int = 0,
    log_na: bool = False,
) -> SuiteReport:
    """Evaluate a suite's checker on every generated instance.

    Fail witnesses always go to ``sink`` (if given); every ``log_pass_every``-th
    pass and, with ``log_na``, every not-applicable verdict are logged too.
    """
    suite = get_suite(suite_id)
    report = SuiteReport(suite.id, suite.claim, gen.config())
    start = time.perf_counter()
    passes = 0
    for inst, verdict, detail in evaluate_stream(suite_id, gen_instances(gen, suite.kind), workers):
        report.counts[verdict] += 1
        w = None
        if verdict == FAIL:
            w = Witness(suite.id, suite.encode(inst), suite.claim, verdict, detail)
            report.fails.append(w)
        elif verdict == PASS:
            passes += 1
            if log_pass_every and passes % log_pass_every == 0:
                w = Witness(suite.id, suite.encode(inst), suite.claim, verdict, detail)
        elif log_na:
            w = Witness(suite.id, suite.encode(inst), suite.claim, verdict, detail)
        if w is not None and sink is not None and not log_witness(w, sink):
            report.sink_errors += 1
    report.elapsed = time.perf_counter() - start
    return report


def search_tight(suite_id: str, gen: InstanceGenerator) -> tuple[int, list[Witness]]:
    """Instances meeting the suite's inequality with equality; returns ``(scanned, hits)``."""
    suite = get_suite(suite_id)
    if suite.tight is None:
        tight_ids = ", ".join(s.id for s in SUITES.values() if s.tight)
        raise ValueError(f"suite {suite_id!r} has no equality search; choose from {tight_ids}")
    hits = []
    scanned = 0
    for inst in gen_instances(gen, suite.kind):
        scanned += 1
        detail = suite.tight(inst)
        if detail is not None:
            hits.append(Witness(suite.id, suite.encode(inst), suite.claim + " [equality]", PASS, detail))
    return scanned, hits


@dataclass(frozen=True)
class ReplayResult:
    witness: Witness
    verdict: str
    detail: dict

    @property
    def reproduced(self) -> bool:
        return self.verdict == self.witness.verdict


def replay(lines: Iterable[str]) -> list[ReplayResult]:
    """Re-evaluate each logged witness line; blank lines are skipped."""
    out = []
    for line in lines:
        if not line.strip():
            continue
        w = Witness.from_json(line)
        suite = get_suite(w.suite)
        inst = suite.decode(w.instance)
        if w.claim.endswith("[equality]"):
            detail = suite.tight(inst) if suite.tight else None
            verdict = PASS if detail is not None else FAIL
            detail = detail or {}
        else:
            verdict, detail = suite.evaluate(inst)
        out.append(ReplayResult(w, verdict, detail))
    return out
