from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bounded_sets
from sumsetlab.errors import ContractViolation, ParseError, RangeError
from sumsetlab.intset import (
    BoundedIntSet,
    count,
    hfold_sumset,
    is_basis_up_to,
    shnirelman_sumset,
    translate,
    truncated_density,
)

S = BoundedIntSet.of
ODDS10 = S(10, range(1, 11, 2))
EVENS10 = S(10, range(2, 11, 2))


def test_count_examples():
    assert count(ODDS10, 10) == 5
    assert count(ODDS10, 0) == 0
    assert count(S(6, [2, 4, 6]), 5) == 2


def test_count_range_error():
    with pytest.raises(RangeError):
        count(ODDS10, 11)
    with pytest.raises(RangeError):
        count(ODDS10, -1)


def test_sumset_examples():
    assert shnirelman_sumset([S(5, [1]), S(5, [2])]) == S(5, [1, 2, 3])
    assert shnirelman_sumset([S(4, [2]), S(4, [2])]) == S(4, [2, 4])
    A = S(7, [2, 5])
    assert shnirelman_sumset([A]) == A


def test_sumset_with_empty_summand_is_identity():
    A = S(6, [1, 4])
    assert shnirelman_sumset([A, S(6)]) == A


def test_sumset_mismatched_bounds():
    with pytest.raises(ContractViolation):
        shnirelman_sumset([S(4, [1]), S(5, [1])])
    with pytest.raises(ContractViolation):
        shnirelman_sumset([])


def test_hfold_examples():
    assert hfold_sumset(S(5, [1]), 3) == S(5, [1, 2, 3])
    assert hfold_sumset(S(4, [1, 2]), 2) == S(4, [1, 2, 3, 4])
    assert hfold_sumset(S(3, [3]), 2) == S(3, [3])
    with pytest.raises(ContractViolation):
        hfold_sumset(S(3, [1]), 0)


def test_translate_examples():
    assert translate(S(5, [1, 2]), 2) == S(5, [3, 4])
    assert translate(S(3, [3]), 1) == S(3)
    assert translate(S(5, [2]), -1) == S(5, [1])


def test_truncated_density_examples():
    assert truncated_density(ODDS10) == Fraction(1, 2)
    assert truncated_density(EVENS10) == 0
    assert truncated_density(BoundedIntSet.full(9)) == 1


def test_basis_examples():
    assert is_basis_up_to(S(4, [1, 2]), 2, 4)
    for h in range(1, 6):
        for g in range(4, 9):
            assert not is_basis_up_to(S(g, [2, 4]), h, g)
    for g in range(1, 10):
        assert is_basis_up_to(S(g, [1]), g, g)


def test_encode_decode():
    A = S(10, [1, 3, 5])
    assert A.encode() == "10:{1,3,5}"
    assert BoundedIntSet.decode("10:{1,3,5}") == A
    assert BoundedIntSet.decode("4:{}") == S(4)
    for bad in ["10:{1,,3}", "x:{1}", "3:{4}", "3:1,2"]:
        with pytest.raises((ParseError, ContractViolation)):
            BoundedIntSet.decode(bad)


def test_constructor_rejects_out_of_range():
    with pytest.raises(ContractViolation):
        S(3, [0])
    with pytest.raises(ContractViolation):
        S(3, [4])
    with pytest.raises(ContractViolation):
        BoundedIntSet(0)


def _naive_sum(A, B):
    g = A.bound
    return {a + b for a in [0, *A] for b in [0, *B] if 1 <= a + b <= g}


@given(bounded_sets(), st.data())
def test_sumset_matches_naive(A, data):
    B = data.draw(bounded_sets(g=A.bound))
    assert shnirelman_sumset([A, B]).members() == sorted(_naive_sum(A, B))


@given(bounded_sets(), st.data())
def test_sumset_contains_summands(A, data):
    B = data.draw(bounded_sets(g=A.bound))
    C = shnirelman_sumset([A, B])
    assert A.issubset(C) and B.issubset(C)
    assert count(C, A.bound) >= max(len(A), len(B))


@given(bounded_sets(max_g=10), st.data())
def test_sumset_commutative_associative(A, data):
    B = data.draw(bounded_sets(g=A.bound))
    C = data.draw(bounded_sets(g=A.bound))
    assert shnirelman_sumset([A, B]) == shnirelman_sumset([B, A])
    left = shnirelman_sumset([shnirelman_sumset([A, B]), C])
    right = shnirelman_sumset([A, shnirelman_sumset([B, C])])
    assert left == right == shnirelman_sumset([C, A, B])


@given(bounded_sets(max_g=10), st.integers(1, 5))
def test_hfold_is_repeated_sumset(A, h):
    assert hfold_sumset(A, h) == shnirelman_sumset([A] * h)


@given(bounded_sets(max_g=12))
def test_half_density_prefix_is_basis(A):
    g = A.bound
    if all(2 * count(A, n) >= n for n in range(1, g + 1)):
        assert is_basis_up_to(A, 2, g)
