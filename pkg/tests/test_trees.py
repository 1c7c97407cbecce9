import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exhaustive_shuffle_monomials, free_dimension
from properties import enumeration_counts, occurrence_round_trips, permutation_action, straighten_idempotence

from operad_forge import trees
from operad_forge.trees import Generator, ShuffleSignature

O = Generator("o", 2, "symmetric")
B = Generator("b", 2, "antisymmetric")
DOT = Generator("dot", 2, "none")
FM_SIG = ShuffleSignature.from_generators([O, B])
PL_SIG = ShuffleSignature.from_generators([DOT])


def test_generator_validation():
    with pytest.raises(ValueError):
        Generator("u", 0)
    with pytest.raises(ValueError):
        Generator("t", 3, "none")
    with pytest.raises(ValueError):
        Generator("x", 2, "cyclic")
    with pytest.raises(ValueError):
        Generator("x", 2, "symmetric", tag="Z")


def test_partner_expansion():
    assert PL_SIG.names == ("dot", "dot'")
    assert PL_SIG["dot"].partner == "dot'" and PL_SIG["dot'"].origin == "dot"
    assert FM_SIG.names == ("o", "b")
    with pytest.raises(KeyError):
        PL_SIG["nope"]


def test_straighten_examples():
    assert trees.straighten(("o", 2, 1), FM_SIG) == (1, ("o", 1, 2))
    assert trees.straighten(("b", 2, 1), FM_SIG) == (-1, ("b", 1, 2))
    assert trees.straighten(("dot", 2, 1), PL_SIG) == (1, ("dot'", 1, 2))
    assert trees.straighten(("b", ("b", 3, 1), 2), FM_SIG) == (-1, ("b", ("b", 1, 3), 2))
    assert trees.straighten(("dot", 3, ("dot", 2, 1)), PL_SIG) == (1, ("dot'", ("dot'", 1, 2), 3))


def test_straighten_errors():
    with pytest.raises(ValueError):
        trees.straighten(("o", 1, 1), FM_SIG)
    with pytest.raises((ValueError, KeyError)):
        trees.straighten(("zz", 1, 2), FM_SIG)


def test_shuffle_condition():
    assert trees.is_shuffle(("o", ("o", 1, 3), 2))
    assert not trees.is_shuffle(("o", 2, ("o", 1, 3)))


def test_compose_counts():
    mu = ("o", 1, 2)
    # grafting into leaf 1: both o(o(1,2),3) and o(o(1,3),2)
    assert sorted(trees.enumerate_compositions(mu, 1, mu)) == [("o", ("o", 1, 2), 3), ("o", ("o", 1, 3), 2)]
    assert trees.enumerate_compositions(mu, 2, mu) == [("o", 1, ("o", 2, 3))]
    for i in (1, 2):
        assert all(trees.is_shuffle(t) for t in trees.enumerate_compositions(mu, i, mu))


def test_compose_rejects_non_shuffle_block():
    with pytest.raises(ValueError):
        trees.compose(("o", 1, 2), 2, ("o", 1, 2), (1, 3))
    with pytest.raises(ValueError):
        trees.compose(("o", 1, 2), 3, ("o", 1, 2), (2, 3))


def test_compose_results_are_shuffle_exhaustive():
    for n1, n2 in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        for a in trees.enumerate_monomials(FM_SIG, n1):
            for b in trees.enumerate_monomials(FM_SIG, n2):
                for i in range(1, n1 + 1):
                    for r in trees.enumerate_compositions(a, i, b):
                        assert trees.is_shuffle(r)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 3), (4, 15), (5, 105), (6, 945)])
def test_double_factorial_counts(n, count):
    # one symmetric generator: (2n-3)!! monomials
    sig = ShuffleSignature.from_generators([O])
    assert len(trees.enumerate_monomials(sig, n)) == count


@pytest.mark.parametrize("n", range(1, 6))
def test_enumeration_matches_brute_force(n):
    assert set(trees.enumerate_monomials(PL_SIG, n)) == exhaustive_shuffle_monomials(PL_SIG, n)
    assert len(trees.enumerate_monomials(PL_SIG, n)) == free_dimension([("dot", "none")], n)


def test_enumeration_property_suite():
    cases, bad = enumeration_counts()
    assert cases == 25 and not bad


def test_unary_generators_rejected_in_enumeration():
    sig = ShuffleSignature.from_generators([Generator("u", 1, "symmetric")])
    with pytest.raises(ValueError):
        trees.enumerate_monomials(sig, 2)


def test_occurrences_example():
    host = ("o", ("o", 1, 2), ("o", 3, 4))
    pat = ("o", ("o", 1, 2), 3)
    occs = trees.find_occurrences(host, pat)
    assert len(occs) == 1
    assert occs[0].root == () and occs[0].leaf_map == ((0, 0), (0, 1), (1,))
    assert trees.restrict(occs[0]) == pat
    # o(1, o(2,3)) sits at the root too: leaf 1 on the left, the right child below
    assert len(trees.find_occurrences(host, ("o", 1, ("o", 2, 3)))) == 1
    with pytest.raises(ValueError):
        trees.find_occurrences(host, 1)


def test_shuffle_condition_on_occurrences():
    # the leaves 1 | 3 | 2 order violates the pattern's shuffle condition
    host = ("o", ("o", 1, 3), 2)
    assert trees.find_occurrences(host, ("o", ("o", 1, 2), 3)) == []
    assert len(trees.find_occurrences(host, ("o", ("o", 1, 3), 2))) == 1


def test_substitute():
    host = ("b", ("o", 1, 2), 3)
    occ = trees.find_occurrences(host, ("o", 1, 2))[0]
    assert trees.substitute(host, occ, ("b", 1, 2)) == ("b", ("b", 1, 2), 3)


def test_property_suites():
    for run in (straighten_idempotence, permutation_action, occurrence_round_trips):
        cases, bad = run()
        assert cases >= 1000 and not bad, bad[:3]


def test_text_and_json_round_trip():
    for n in range(1, 5):
        for t in trees.enumerate_monomials(PL_SIG, n):
            assert trees.from_text(trees.to_text(t)) == t
            assert trees.from_json(trees.to_json(t)) == t
    assert trees.from_text("dot'(o(1,3), 2)") == ("dot'", ("o", 1, 3), 2)
    with pytest.raises(ValueError):
        trees.from_json({"a": 1})


def test_check_monomial():
    trees.check_monomial(("o", ("o", 1, 3), 2), FM_SIG)
    with pytest.raises(ValueError):
        trees.check_monomial(("o", 2, 1), FM_SIG)


labels = st.integers(2, 6).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


@settings(max_examples=300, deadline=None)
@given(labels, st.data())
def test_apply_permutation_identity_and_inverse(perm, data):
    n = len(perm)
    t = data.draw(st.sampled_from(trees.enumerate_monomials(FM_SIG, n)))
    assert trees.apply_permutation(t, list(range(1, n + 1)), FM_SIG) == (1, t)
    s1, t1 = trees.apply_permutation(t, perm, FM_SIG)
    inv = [0] * n
    for i, p in enumerate(perm, start=1):
        inv[p - 1] = i
    s2, t2 = trees.apply_permutation(t1, inv, FM_SIG)
    assert (s1 * s2, t2) == (1, t)


def test_ordered_set_partitions_count():
    # blocks come sorted by their minima, so this is the Stirling number S(4, 2)
    parts = list(trees.ordered_set_partitions((1, 2, 3, 4), 2))
    assert len(parts) == 7
    assert len(set(parts)) == 7
    assert all(p[0][0] < p[1][0] for p in parts)
    assert all(sorted(itertools.chain(*p)) == [1, 2, 3, 4] for p in parts)
