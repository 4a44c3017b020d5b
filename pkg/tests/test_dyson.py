import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import families
from sumsetlab.dyson import (
    TransformStep,
    apply_transform,
    build_T,
    check_lemmas,
    check_transform_lemmas,
    find_minimal_triple,
    is_dyson_triple,
    iterate_transform,
    lemma1_collection,
)
from sumsetlab.errors import PreconditionError
from sumsetlab.intset import BoundedIntSet, count
from sumsetlab.ranksum import SetFamily, check_dyson_bound, gamma_star, rank_profile

S = BoundedIntSet.of
F = SetFamily.of
F13 = F(3, [1], [1, 2])


def test_is_dyson_triple_examples():
    assert is_dyson_triple(F13, 0, 1, 2)
    assert not is_dyson_triple(F13, 0, 1, 1)
    for c in F13[2]:
        assert is_dyson_triple(F13, 4, 1, c)
    with pytest.raises(PreconditionError):
        is_dyson_triple(F(3, [1]), 0, 1, 1)


def test_find_minimal_triple_examples():
    assert find_minimal_triple(F13) == (0, 1)
    assert find_minimal_triple(F(3, [1, 2, 3], [1])) == (3, 1)
    assert find_minimal_triple(F(2, [], [1])) == (0, 1)
    with pytest.raises(PreconditionError):
        find_minimal_triple(F(3, [1]))
    with pytest.raises(PreconditionError):
        find_minimal_triple(F(3, [1], []))


def test_build_T_examples():
    assert build_T(F13, 0, 1) == S(3, [2])
    assert build_T(F(3, [1, 2, 3], [1]), 3, 1) == S(3, [1])
    assert build_T(F(2, [], [1, 2]), 0, 1) == S(2, [1, 2])


def test_apply_transform_examples():
    step = apply_transform(F13)
    assert (step.a0, step.T, step.after) == (0, S(3, [2]), F(3, [1, 2], [1]))
    step = apply_transform(F(3, [1, 2, 3], [1]))
    assert (step.a0, step.T, step.after) == (3, S(3, [1]), F(3, [1, 2, 3], []))
    step = apply_transform(F(2, [], [1]))
    assert (step.a0, step.T, step.after) == (0, S(2, [1]), F(2, [1], []))


def test_iterate_examples():
    trace = iterate_transform(F13)
    assert len(trace) == 2
    assert [(s.a0, s.ell, s.T.members()) for s in trace.steps] == [(0, 1, [2]), (2, 1, [1])]
    assert trace.terminal == F(3, [1, 2, 3], [])
    assert len(iterate_transform(F(4, [1, 2], []))) == 0
    lines = trace.to_jsonl().splitlines()
    assert [json.loads(x)["a0"] for x in lines] == [0, 2]
    assert TransformStep.from_json(lines[0]) == trace.steps[0]


def test_lemmas_example():
    step = apply_transform(F13)
    for gamma in (Fraction(4, 3), gamma_star(F13)):
        rep = check_lemmas(step, gamma)
        assert rep.holds and rep.collection_size == 8
    assert rank_profile(step.before).table == rank_profile(step.after).table


def test_lemma1_collection_modes():
    small = lemma1_collection(F(4, [1], [2]))
    assert len(small) == 16
    big = F(9, [1, 5], [2], [3, 9])
    a = lemma1_collection(big, samples=10, seed=3)
    assert a == lemma1_collection(big, samples=10, seed=3)
    assert 0 in a and len(set(a)) == len(a)


def _minimality_scan(fam, a0):
    n, g = fam.n, fam.bound
    for a in range(a0):
        for ell in range(1, n):
            for c in range(1, g + 1):
                assert not is_dyson_triple(fam, a, ell, c)


@given(families(max_g=8, max_n=4, min_n=2))
def test_step_invariants(fam):
    if not fam[fam.n].bits:
        return
    step = apply_transform(fam)
    g, n, a0, ell = fam.bound, fam.n, step.a0, step.ell
    _minimality_scan(fam, a0)
    assert any(is_dyson_triple(fam, a0, ell, c) for c in step.T)
    landed = sum(1 for t in step.T if t + a0 <= g)
    gain = count(step.after[ell], g) - count(fam[ell], g)
    loss = count(fam[n], g) - count(step.after[n], g)
    assert gain == landed and loss == count(step.T, g)
    assert 0 <= gain <= loss and loss > 0


@given(families(max_g=8, max_n=4, min_n=2))
def test_trace_soundness(fam):
    trace = iterate_transform(fam)
    assert len(trace) <= len(fam[fam.n])
    prev = len(fam[fam.n])
    for step in trace.steps:
        assert check_dyson_bound(step.before).holds and check_dyson_bound(step.after).holds
        assert len(step.after[fam.n]) < prev
        prev = len(step.after[fam.n])
    assert not trace.terminal[fam.n].bits


@settings(max_examples=60)
@given(families(max_g=10, max_n=4, min_n=2))
def test_transform_lemmas_random(fam):
    rep = check_transform_lemmas(fam)
    assert rep.holds, rep.failures
