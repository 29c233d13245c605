import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmtkit.adversary import (
    AdversaryError,
    join,
    joint_structure,
    local_structure,
    member,
    normalize,
    order_geq,
    restrict,
    threshold,
)
from rmtkit.topology import UnknownNodeError, full_view

from conftest import UNIVERSE, structures
from oracles import closure, join_family, maximal_of, restrict_family

F = frozenset


def fam(*sets):
    return F(F(s) for s in sets)


ABC = normalize("abc", [{"a", "b"}, {"c"}])


@pytest.mark.parametrize(
    "candidate, expected", [({"a"}, True), ({"a", "c"}, False), (set(), True), ({"z"}, False)]
)
def test_member(candidate, expected):
    assert member(ABC, candidate) is expected


def test_normalize_absorbs_subsets():
    assert normalize("ab", [{"a"}, {"a", "b"}]).maximal_sets == fam({"a", "b"})


def test_normalize_empty_family_is_empty_set_only():
    assert normalize("ab", []).maximal_sets == fam(set())
    assert normalize("ab", [set()]).maximal_sets == fam(set())


def test_normalize_dedups():
    assert normalize("ab", [{"a"}, {"b"}, {"a"}]).maximal_sets == fam({"a"}, {"b"})


def test_normalize_names_offending_node():
    with pytest.raises(UnknownNodeError, match="'q'"):
        normalize("ab", [{"a", "q"}])


def test_restrict_example_matches_oracle():
    members = closure("abc", ABC.maximal_sets)
    expected = maximal_of(restrict_family(members, "ac"))
    assert expected == fam({"a"}, {"c"})
    assert restrict(ABC, "ac").maximal_sets == expected


def test_restrict_to_ground_is_identity():
    assert restrict(ABC, ABC.ground) == ABC


def test_restrict_to_nothing():
    r = restrict(ABC, set())
    assert r.maximal_sets == fam(set()) and r.ground == F()


def _oracle_join(e, f):
    out = join_family(closure(e.ground, e.maximal_sets), e.ground,
                      closure(f.ground, f.maximal_sets), f.ground)
    return maximal_of(out)


def test_join_example_no_shared_members():
    e = normalize("ab", [{"a"}])
    f = normalize("bc", [{"c"}])
    assert _oracle_join(e, f) == fam({"a", "c"})
    j = join(e, f)
    assert j.ground == set("abc") and j.maximal_sets == fam({"a", "c"})


def test_join_example_disagreement_drops_member():
    e = normalize("ab", [{"b"}])
    f = normalize("bc", [{"c"}])
    assert _oracle_join(e, f) == fam({"c"})
    assert join(e, f).maximal_sets == fam({"c"})


def test_join_idempotent_example():
    assert join(ABC, ABC) == ABC


def test_join_agreement_only_on_non_maximal_members():
    # maximal sets {a,b} and {b,c} disagree on b... but {a} and {c} agree on nothing
    e = normalize("ab", [{"a", "b"}])
    f = normalize("bc", [{"c"}])
    assert join(e, f).maximal_sets == _oracle_join(e, f) == fam({"a", "c"})


def test_order_geq_examples():
    assert order_geq(ABC, ABC)
    x, y = normalize("ab", [{"a"}]), normalize("bc", [{"c"}])
    assert order_geq(join(x, y), x)
    assert not order_geq(normalize("a", [{"a"}]), normalize("b", [{"b"}]))


def test_threshold_expands_to_t_subsets():
    z = threshold("abcde", 1)
    assert z.maximal_sets == fam(*({v} for v in "abcde"))
    assert threshold("abcd", 2, exclude="d").maximal_sets == fam("ab", "ac", "bc")


def test_local_structure_three_path_receiver(three_path):
    z = local_structure(three_path.adversary, three_path.gamma, "R")
    assert z.ground == {"R", "v1", "v2", "v3"}
    assert z.maximal_sets == fam({"v1"}, {"v2"}, {"v3"})


def test_local_structure_full_view_is_identity(three_path):
    gamma = full_view(three_path.graph)
    assert local_structure(three_path.adversary, gamma, "v2") == three_path.adversary


def test_local_structure_empty_structure(three_path):
    z = normalize(three_path.graph.nodes, [])
    for v in three_path.graph.nodes:
        assert local_structure(z, three_path.gamma, v).maximal_sets == fam(set())


def test_joint_structure_singleton(two_path):
    z, gamma = two_path.adversary, two_path.gamma
    assert joint_structure(z, gamma, {"R"}) == local_structure(z, gamma, "R")


def test_joint_structure_two_path_matches_oracle(two_path):
    z, gamma = two_path.adversary, two_path.gamma
    members = closure(z.ground, z.maximal_sets)
    v1 = frozenset(gamma["v1"].nodes)
    r = frozenset(gamma["R"].nodes)
    expected = maximal_of(join_family(restrict_family(members, v1), v1, restrict_family(members, r), r))
    got = joint_structure(z, gamma, {"v1", "R"})
    assert got.maximal_sets == expected
    assert got == restrict(z, {"S", "v1", "v2", "R"})


def test_joint_structure_empty_is_error(two_path):
    with pytest.raises(AdversaryError):
        joint_structure(two_path.adversary, two_path.gamma, set())


def test_equality_is_ground_sensitive():
    assert normalize("ab", [{"a"}]) != normalize("abc", [{"a"}])


def test_canonical_serialization():
    assert ABC.canonical() == [["a", "b"], ["c"]]
    assert normalize("ab", []).canonical() == [[]]


# -- properties --------------------------------------------------------------


@given(structures())
def test_antichain_after_normalize(z):
    assert z.is_antichain()
    assert all(m <= z.ground for m in z.maximal_sets)


@given(structures(), st.sets(st.sampled_from(UNIVERSE)), st.sets(st.sampled_from(UNIVERSE)))
def test_membership_monotone(z, x, y):
    if member(z, x):
        assert member(z, x & y)


@given(structures(), st.sets(st.sampled_from(UNIVERSE)))
def test_restrict_matches_oracle(z, a):
    members = closure(z.ground, z.maximal_sets)
    got = restrict(z, a)
    assert got.ground == z.ground & a
    assert closure(got.ground, got.maximal_sets) == restrict_family(members, a)


@given(structures(), st.sets(st.sampled_from(UNIVERSE)), st.sets(st.sampled_from(UNIVERSE)))
def test_restrict_composes(z, a, b):
    assert restrict(restrict(z, a), b) == restrict(z, F(a) & F(b))


@given(structures(), structures())
def test_join_matches_pair_enumeration(e, f):
    got = join(e, f)
    assert got.ground == e.ground | f.ground
    assert got.is_antichain()
    assert got.maximal_sets == _oracle_join(e, f)


@settings(max_examples=150)
@given(structures(), structures(), structures())
def test_semilattice_laws(x, y, z):
    assert join(x, y) == join(y, x)
    assert join(join(x, y), z) == join(x, join(y, z))
    assert join(x, x) == x


@given(structures(min_ground=1), st.sets(st.sampled_from(UNIVERSE)), st.sets(st.sampled_from(UNIVERSE)))
def test_restriction_to_union_below_join(z, a, b):
    lhs = restrict_family(closure(z.ground, z.maximal_sets), F(a) | F(b))
    j = join(restrict(z, a), restrict(z, b))
    assert all(member(j, s) for s in lhs)


@given(structures(), structures())
def test_join_is_upper_bound(x, y):
    j = join(x, y)
    assert order_geq(j, x) and order_geq(j, y)
