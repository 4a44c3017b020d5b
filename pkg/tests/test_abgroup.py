import pytest
from hypothesis import given
from hypothesis import strategies as st

from sumsetlab.abgroup import (
    FAIL,
    NA,
    PASS,
    FiniteAbelianGroup,
    GroupSubset,
    Subgroup,
    check_chowla_cd,
    check_etransform_identities,
    check_kneser,
    check_pigeonhole_cover,
    e_transform,
    enumerate_subgroups,
    is_prime,
    minkowski_sum,
    stabilizer,
    translate_set,
)
from sumsetlab.errors import ContractViolation, ParseError, PreconditionError, ResourceError

Z = FiniteAbelianGroup.decode


def sub(G, *xs):
    return GroupSubset.of(Z(G) if isinstance(G, str) else G, xs)


GROUPS = ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"]


@st.composite
def group_pairs(draw, nonempty=True):
    G = Z(draw(st.sampled_from(GROUPS)))
    lo = 1 if nonempty else 0
    a = draw(st.integers(lo, G.full))
    b = draw(st.integers(lo, G.full))
    return GroupSubset(G, a), GroupSubset(G, b)


def test_group_encoding():
    G = Z("Z2xZ4")
    assert G.order == 8 and G.encode() == "Z2xZ4"
    assert G.coords(5) == (1, 1) and G.index((1, 1)) == 5
    assert Z("Z1").order == 1 and Z("Z1").encode() == "Z1"
    assert GroupSubset.decode("Z6:{0,3}") == sub("Z6", 0, 3)
    assert sub("Z6", 3, 0).encode() == "Z6:{0,3}"
    for bad in ["Z", "Z6xY2", "6"]:
        with pytest.raises(ParseError):
            Z(bad)
    with pytest.raises(ContractViolation):
        sub("Z4", 4)


def test_minkowski_examples():
    assert minkowski_sum(sub("Z5", 0, 1), sub("Z5", 0, 1)) == sub("Z5", 0, 1, 2)
    assert minkowski_sum(sub("Z6", 0, 3), sub("Z6", 0, 3)) == sub("Z6", 0, 3)
    V = Z("Z2xZ2")
    for b in range(1, 16):
        B = GroupSubset(V, b)
        assert minkowski_sum(sub(V, 0), B) == B
    with pytest.raises(ContractViolation):
        minkowski_sum(sub("Z5", 0), sub("Z6", 0))


def test_translate_examples():
    assert translate_set(sub("Z5", 0, 2), 1) == sub("Z5", 1, 3)
    X = sub("Z2xZ4", 1, 6)
    assert translate_set(X, 0) == X
    assert translate_set(sub("Z4", 3), 2) == sub("Z4", 1)


def test_e_transform_examples():
    assert e_transform(sub("Z5", 0, 1), sub("Z5", 0, 2), 1) == (sub("Z5", 0, 1, 3), sub("Z5", 0))
    assert e_transform(sub("Z6", 0, 3), sub("Z6", 0, 3), 0) == (sub("Z6", 0, 3), sub("Z6", 0, 3))
    # B + e inside A is a fixed point
    A, B = sub("Z7", 1, 2, 3, 4), sub("Z7", 0, 1)
    assert e_transform(A, B, 2) == (A, B)
    assert check_etransform_identities(A, B, 2).verdict == PASS
    with pytest.raises(PreconditionError):
        e_transform(sub("Z5", 0, 1), sub("Z5", 0), 3)


def test_stabilizer_examples():
    assert stabilizer(sub("Z6", 0, 2, 4)).carrier == sub("Z6", 0, 2, 4)
    G = Z("Z2xZ4")
    assert stabilizer(GroupSubset(G, G.full)).order == 8
    assert stabilizer(sub("Z5", 0, 1)).carrier == sub("Z5", 0)
    with pytest.raises(PreconditionError):
        stabilizer(GroupSubset(Z("Z5"), 0))


def test_subgroup_examples():
    subs = enumerate_subgroups(Z("Z6"))
    assert sorted(H.order for H in subs) == [1, 2, 3, 6]
    for p in (2, 3, 5, 7, 11):
        assert [H.order for H in enumerate_subgroups(Z(f"Z{p}"))] == [1, p]
    assert sorted(H.order for H in enumerate_subgroups(Z("Z2xZ2"))) == [1, 2, 2, 2, 4]
    with pytest.raises(ResourceError) as exc:
        enumerate_subgroups(Z("Z65"))
    assert exc.value.requested == 65
    with pytest.raises(ContractViolation):
        Subgroup(sub("Z6", 0, 1))


@pytest.mark.parametrize("G", GROUPS + ["Z12", "Z2xZ6", "Z4xZ4"])
def test_subgroup_lattice_is_complete(G):
    grp = Z(G)
    subs = {H.carrier.bits for H in enumerate_subgroups(grp)}
    for H in enumerate_subgroups(grp):
        assert grp.order % H.order == 0
    # brute force over all subsets closed under addition (small groups only)
    if grp.order <= 9:
        brute = {
            b for b in range(1, grp.full + 1) if b & 1 and grp.sum_bits(b, b) == b
        }
        assert subs == brute


def test_pigeonhole_examples():
    rep = check_pigeonhole_cover(sub("Z5", 0, 1, 2), sub("Z5", 0, 1, 2))
    assert rep.verdict == PASS and rep.size_sum == 6
    assert check_pigeonhole_cover(sub("Z5", 0, 1), sub("Z5", 0, 1)).verdict == NA


def test_chowla_examples():
    rep = check_chowla_cd(8, sub("Z8", 0, 1, 2), sub("Z8", 0, 1, 3), "chowla")
    assert (rep.verdict, rep.sumset_size, rep.bound) == (PASS, 6, 5)
    rep = check_chowla_cd(5, sub("Z5", 0, 1, 2), sub("Z5", 0, 1, 2), "cauchy_davenport")
    assert (rep.verdict, rep.sumset_size, rep.bound) == (PASS, 5, 5) and rep.tight
    assert check_chowla_cd(6, sub("Z6", 1), sub("Z6", 0, 2), "chowla").verdict == NA
    with pytest.raises(PreconditionError):
        check_chowla_cd(6, sub("Z6", 1), sub("Z6", 0, 1), "cauchy_davenport")
    with pytest.raises(ContractViolation):
        check_chowla_cd(6, sub("Z6", 1), sub("Z6", 0, 1), "other")


def test_kneser_examples():
    rep = check_kneser(sub("Z6", 0, 3), sub("Z6", 0, 3))
    assert rep.sumset_size == 2 and rep.stabilizer_order == 2
    assert rep.identity == PASS and rep.identity_values == (2, 2, 2)
    assert rep.existence == PASS and rep.existence_witness == "stabilizer" and rep.lattice_ok
    rep = check_kneser(sub("Z7", 0, 1), sub("Z7", 0, 2, 4))
    assert rep.existence == PASS and rep.existence_witness == "trivial" and rep.stabilizer_order == 1
    rep = check_kneser(sub("Z7", 0, 1, 2), sub("Z7", 0, 3))
    assert rep.sumset_size >= 5 and rep.identity == NA


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_kneser_implies_cauchy_davenport(p):
    G = Z(f"Z{p}")
    for a in range(1, G.full + 1):
        for b in range(1, G.full + 1):
            A, B = GroupSubset(G, a), GroupSubset(G, b)
            if len(A) + len(B) > p:
                continue
            rep = check_kneser(A, B)
            assert rep.existence == PASS
            assert rep.sumset_size >= len(A) + len(B) - 1


@given(group_pairs(), st.data())
def test_etransform_properties(pair, data):
    A, B = pair
    e = data.draw(st.sampled_from(A.members()))
    Ae, Be = e_transform(A, B, e)
    assert len(Ae) >= len(A) and len(Be) <= len(B)
    assert len(Ae) - len(A) == len(B) - len(Be)
    assert minkowski_sum(Ae, Be).issubset(minkowski_sum(A, B))
    assert check_etransform_identities(A, B, e).verdict == PASS


@given(group_pairs(), st.data())
def test_stabilizer_properties(pair, data):
    A, B = pair
    G = A.group
    X = minkowski_sum(A, B)
    H = stabilizer(X)
    assert minkowski_sum(X, H.carrier) == X
    g = data.draw(st.integers(0, G.order - 1))
    assert stabilizer(translate_set(X, g)) == H
    assert G.order % H.order == 0


@given(group_pairs())
def test_cd_translation_normalization(pair):
    A, B = pair
    G = A.group
    if not G.is_cyclic_presentation or not is_prime(G.order):
        return
    base = check_chowla_cd(G.order, A, B, "cd")
    for x in range(G.order):
        rep = check_chowla_cd(G.order, translate_set(A, x), B, "cd")
        assert (rep.verdict, rep.sumset_size, rep.bound) == (base.verdict, base.sumset_size, base.bound)


@given(group_pairs())
def test_kneser_random(pair):
    assert check_kneser(*pair).verdict != FAIL
