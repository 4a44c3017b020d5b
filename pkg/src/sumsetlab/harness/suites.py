"""Suite registry: one suite id per theorem-level checker."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from ..abgroup import (
    FAIL,
    NA,
    PASS,
    FiniteAbelianGroup,
    GroupSubset,
    check_chowla_cd,
    check_etransform_identities,
    check_kneser,
    check_pigeonhole_cover,
    is_prime,
)
from ..density import EventuallyPeriodicSet, check_congruence_example, check_density_oracle
from ..dyson import check_transform_lemmas
from ..errors import ParseError, PreconditionError
from ..intset import BoundedIntSet, is_basis_up_to, parse_members
from ..ranksum import SetFamily, check_dyson_bound, check_mann_all, check_shnirelman_prefix

Result = tuple[str, dict]


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


# -- encodings -------------------------------------------------------------


def encode_instance(kind: str, inst: object) -> str:
    if kind == "family":
        return inst.encode()
    if kind == "pair":
        A, B = inst
        return SetFamily(A.bound, (A, B)).encode()
    if kind == "set":
        return inst.encode()
    if kind in ("group_pair", "group_triple"):
        A, B = inst[0], inst[1]
        text = f"{A.encode()};{{{','.join(map(str, B))}}}"
        if kind == "group_triple" and inst[2] is not None:
            text += f";e={inst[2]}"
        return text
    if kind == "ep":
        return inst.encode()
    if kind == "klm":
        k, l, m = inst
        return f"k={k},l={l},m={m}"
    raise ParseError(f"unknown instance kind {kind!r}")


def decode_instance(kind: str, text: str) -> object:
    if kind == "family":
        return SetFamily.decode(text)
    if kind == "pair":
        fam = SetFamily.decode(text)
        if fam.n != 2:
            raise ParseError(f"expected two sets, got {fam.n} in {text!r}")
        return fam.sets
    if kind == "set":
        return BoundedIntSet.decode(text)
    if kind in ("group_pair", "group_triple"):
        m = re.fullmatch(r"([^:;]+):\{([^{}]*)\};\{([^{}]*)\}(?:;e=(\d+))?", text.strip())
        if not m:
            raise ParseError(f"expected 'G:{{A}};{{B}}[;e=x]', got {text!r}")
        G = FiniteAbelianGroup.decode(m.group(1))
        A = GroupSubset.of(G, parse_members(m.group(2)))
        B = GroupSubset.of(G, parse_members(m.group(3)))
        if kind == "group_pair":
            return (A, B)
        return (A, B, int(m.group(4)) if m.group(4) is not None else None)
    if kind == "ep":
        return EventuallyPeriodicSet.decode(text)
    if kind == "klm":
        m = re.fullmatch(r"k=(\d+),l=(\d+),m=(\d+)", text.strip())
        if not m:
            raise ParseError(f"expected 'k=..,l=..,m=..', got {text!r}")
        return tuple(int(x) for x in m.groups())
    raise ParseError(f"unknown instance kind {kind!r}")


# -- evaluators ------------------------------------------------------------


def eval_dyson_bound(family: SetFamily) -> Result:
    rep = check_dyson_bound(family)
    detail = {"gamma_star": str(rep.gamma_star)}
    if rep.violations:
        detail["violations"] = [[r, m, lhs, str(rhs)] for r, m, lhs, rhs in rep.violations]
    return _verdict(rep.holds), detail


def tight_dyson_bound(family: SetFamily) -> dict | None:
    rep = check_dyson_bound(family)
    hits = [[r, m] for r, m in rep.tight if r >= 2]
    return {"gamma_star": str(rep.gamma_star), "equalities": hits} if hits else None


def eval_mann(pair: tuple[BoundedIntSet, BoundedIntSet]) -> Result:
    reps = check_mann_all(*pair)
    bad = [r.n for r in reps if not r.holds]
    return _verdict(not bad), ({"failing_n": bad} if bad else {})


def eval_shnirelman_prefix(pair: tuple[BoundedIntSet, BoundedIntSet]) -> Result:
    rep = check_shnirelman_prefix(*pair)
    detail = {"alpha": str(rep.alpha), "beta": str(rep.beta)}
    if rep.violations:
        detail["violations"] = [[m, c, str(b)] for m, c, b in rep.violations]
    return _verdict(rep.holds), detail


def eval_basis2(A: BoundedIntSet) -> Result:
    g = A.bound
    c = 0
    for n in range(1, g + 1):
        c += (A.bits >> n) & 1
        if 2 * c < n:
            return NA, {}
    return _verdict(is_basis_up_to(A, 2, g)), {}


def eval_transform_lemmas(family: SetFamily) -> Result:
    if family.n < 2:
        return NA, {}
    rep = check_transform_lemmas(family)
    detail = {"steps": rep.steps, "initial_last": rep.initial_last}
    if rep.failures:
        detail["failures"] = rep.failures
    return _verdict(rep.holds and rep.steps <= rep.initial_last), detail


def eval_etransform(inst: tuple) -> Result:
    A, B, e = inst
    es = A.members() if e is None else [e]
    bad = []
    for x in es:
        rep = check_etransform_identities(A, B, x)
        if rep.verdict == FAIL:
            bad.append({"e": x, "report": [rep.sum_contained, rep.exchange, rep.cardinality, rep.zero_clause]})
    return _verdict(not bad), ({"failures": bad} if bad else {"checked": len(es)})


def eval_pigeonhole(pair: tuple[GroupSubset, GroupSubset]) -> Result:
    rep = check_pigeonhole_cover(*pair)
    return rep.verdict, {"size_sum": rep.size_sum, "order": rep.order}


def _chowla_reports(pair: tuple[GroupSubset, GroupSubset]) -> list:
    A, B = pair
    G = A.group
    if not G.is_cyclic_presentation or G.order < 2:
        return []
    m = G.order
    reps = [check_chowla_cd(m, A, B, "chowla")]
    if is_prime(m):
        reps.append(check_chowla_cd(m, A, B, "cauchy_davenport"))
    return reps


def eval_chowla_cd(pair: tuple[GroupSubset, GroupSubset]) -> Result:
    reps = _chowla_reports(pair)
    verdicts = [r.verdict for r in reps]
    detail = {r.mode: [r.verdict, r.sumset_size, r.bound] for r in reps}
    if FAIL in verdicts:
        return FAIL, detail
    return (PASS if PASS in verdicts else NA), detail


def tight_chowla_cd(pair: tuple[GroupSubset, GroupSubset]) -> dict | None:
    hits = {r.mode: [r.sumset_size, r.bound] for r in _chowla_reports(pair) if r.tight}
    return hits or None


def eval_kneser(pair: tuple[GroupSubset, GroupSubset]) -> Result:
    rep = check_kneser(*pair)
    detail = {
        "sumset": rep.sumset_size,
        "stabilizer": rep.stabilizer_order,
        "existence": rep.existence,
        "identity": rep.identity,
    }
    if rep.existence != NA:
        detail["witness"] = rep.existence_witness
        detail["lattice_ok"] = rep.lattice_ok
    if rep.curiosity:
        detail["curiosity"] = True
    if rep.identity_values is not None:
        detail["identity_values"] = list(rep.identity_values)
    return rep.verdict, detail


def tight_kneser(pair: tuple[GroupSubset, GroupSubset]) -> dict | None:
    rep = check_kneser(*pair, audit=False)
    if not rep.tight:
        return None
    return {"sumset": rep.sumset_size, "sizes": list(rep.sizes), "stabilizer": rep.stabilizer_order}


def eval_density_oracle(S: EventuallyPeriodicSet) -> Result:
    rep = check_density_oracle(S)
    detail = {"sigma": str(rep.sigma), "lower": str(rep.lower)}
    if rep.failures:
        detail["failures"] = rep.failures
    return _verdict(rep.holds), detail


def eval_congruence_example(klm: tuple[int, int, int]) -> Result:
    k, l, m = klm
    if k + l > m:
        return NA, {}
    rep = check_congruence_example(k, l, m)
    detail = {"predicted": str(rep.predicted)}
    if rep.failures:
        detail["failures"] = rep.failures
    return _verdict(rep.holds), detail


# -- registry --------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    id: str
    kind: str
    claim: str
    evaluate: Callable[[object], Result]
    tight: Callable[[object], dict | None] | None = None
    defaults: dict = field(default_factory=dict)

    def encode(self, inst: object) -> str:
        return encode_instance(self.kind, inst)

    def decode(self, text: str) -> object:
        return decode_instance(self.kind, text)


SUITES: dict[str, Suite] = {
    s.id: s
    for s in [
        Suite(
            "dyson-bound",
            "family",
            "phi_r(m) >= C(n-1,r-1) min(1,gamma) m",
            eval_dyson_bound,
            tight_dyson_bound,
            {"g": (1, 4), "n": (2, 2)},
        ),
        Suite("mann", "pair", "Mann fundamental theorem and finite corollary", eval_mann, None, {"g": (1, 6)}),
        Suite(
            "shnirelman-prefix",
            "pair",
            "(A+B)(m) >= (alpha+beta-alpha*beta) m",
            eval_shnirelman_prefix,
            None,
            {"g": (1, 6)},
        ),
        Suite("basis2", "set", "A(n) >= n/2 for n <= g implies [1,g] in 2A", eval_basis2, None, {"g": (1, 12)}),
        Suite(
            "transform-lemmas",
            "family",
            "the transform lemmas hold on every step of the trace",
            eval_transform_lemmas,
            None,
            {"g": (1, 4), "n": (2, 2)},
        ),
        Suite(
            "etransform",
            "group_triple",
            "A(e)+B(e) in A+B; A(e)-A = e+(B-B(e)); |A|+|B| = |A(e)|+|B(e)|",
            eval_etransform,
            None,
            {"groups": ("Z4",)},
        ),
        Suite("pigeonhole", "group_pair", "|A|+|B| > |G| implies A+B = G", eval_pigeonhole, None, {"groups": ("Z5",)}),
        Suite(
            "chowla-cd",
            "group_pair",
            "|A+B| >= min(m, |A|+|B|-1)",
            eval_chowla_cd,
            tight_chowla_cd,
            {"groups": ("Z5",)},
        ),
        Suite(
            "kneser",
            "group_pair",
            "Kneser existence inequality and stabilizer identity",
            eval_kneser,
            tight_kneser,
            {"groups": ("Z6",)},
        ),
        Suite(
            "density-oracle",
            "ep",
            "closed-form densities agree with enumeration",
            eval_density_oracle,
            None,
            {"threshold": (0, 3), "period": (1, 4)},
        ),
        Suite(
            "congruence-example",
            "klm",
            "d_L(A+B) = (k+l-1)/m for residue-class sets",
            eval_congruence_example,
            None,
            {"period": (2, 12)},
        ),
    ]
}


def get_suite(suite_id: str) -> Suite:
    try:
        return SUITES[suite_id]
    except KeyError:
        raise PreconditionError(f"unknown suite id {suite_id!r}; choose from {', '.join(SUITES)}") from None
