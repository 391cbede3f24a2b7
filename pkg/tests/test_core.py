from fractions import Fraction
from math import factorial

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setpairs.core import (
    CROSS,
    EMPTY_INTERSECTION,
    MULTI_INTERSECTION,
    DISJOINTNESS,
    ONE_CROSS,
    MalformedQuery,
    SetPair,
    SetPairSystem,
    SystemFormatError,
    binom,
    cross_elements,
    dumps_system,
    ground_set,
    indices_avoiding,
    loads_system,
    reduce,
    sigma,
    subsystem,
    verify,
)

elements = st.integers(min_value=0, max_value=9)
pairs = st.tuples(st.frozensets(elements, max_size=4), st.frozensets(elements, max_size=4))
systems = st.lists(pairs, max_size=6).map(SetPairSystem.from_lists)


def sigma_oracle(s):
    total = gmpy2.mpq(0)
    for p in s.pairs:
        na, nb = len(p.a), len(p.b)
        total += gmpy2.mpq(factorial(na) * factorial(nb), factorial(na + nb))
    return Fraction(int(total.numerator), int(total.denominator))


def verify_oracle(s, mode):
    """Plain double loop, collecting (condition, i, j) only."""
    out = []
    m = len(s)
    for i in range(m):
        for j in range(m):
            size = len([e for e in s[i].a if e in s[j].b])
            if i == j and size:
                out.append(("disjointness", i, j))
            if i != j and size == 0:
                out.append(("empty-intersection", i, j))
            if i != j and size > 1 and mode == "one-cross":
                out.append(("multi-intersection", i, j))
    return out


# ground_set ---------------------------------------------------------------


def test_ground_set_examples(five_cycle):
    assert ground_set(SetPairSystem()) == frozenset()
    assert ground_set(five_cycle) == {0, 1, 2, 3, 4}
    assert ground_set(SetPairSystem.from_lists([({1, 2}, {3})])) == {1, 2, 3}


# verify --------------------------------------------------------------------


def test_verify_five_cycle_clean(five_cycle):
    assert verify(five_cycle, ONE_CROSS).clean
    assert verify(five_cycle, CROSS).clean


def test_verify_single_pair_vacuous():
    s = SetPairSystem.from_lists([({1, 2}, {3, 4})])
    assert verify(s, ONE_CROSS).violations == ()


def test_verify_standard_example_multi_intersections(std22):
    rep = verify(std22, ONE_CROSS)
    assert not rep.clean
    assert {v.condition for v in rep.violations} == {MULTI_INTERSECTION}
    assert all(len(v.witness_elements) == 2 for v in rep.violations)
    # complementary pairs: exactly one j per i with A_i == B_j
    assert len(rep.violations) == 6


def test_verify_reports_disjointness_and_empty():
    s = SetPairSystem.from_lists([({1}, {1}), ({2}, {3})])
    rep = verify(s, CROSS)
    conds = {(v.condition, v.i, v.j) for v in rep.violations}
    assert (DISJOINTNESS, 0, 0) in conds
    assert (EMPTY_INTERSECTION, 0, 1) in conds
    assert (EMPTY_INTERSECTION, 1, 0) in conds
    assert next(v for v in rep.violations if v.condition == DISJOINTNESS).witness_elements == {1}


def test_verify_rejects_unknown_mode(five_cycle):
    with pytest.raises(ValueError):
        verify(five_cycle, "two-cross")


@given(systems, st.sampled_from([CROSS, ONE_CROSS]))
def test_verify_matches_double_loop(s, mode):
    got = [(v.condition, v.i, v.j) for v in verify(s, mode).violations]
    assert sorted(got) == sorted(verify_oracle(s, mode))


@given(systems)
def test_one_cross_implies_cross(s):
    if verify(s, ONE_CROSS).clean:
        assert verify(s, CROSS).clean


# binom / sigma -------------------------------------------------------------


@pytest.mark.parametrize("n,k,expected", [(4, 2, 6), (5, 2, 10), (0, 0, 1), (3, 5, 0)])
def test_binom_examples(n, k, expected):
    assert binom(n, k) == expected


def test_binom_pascal_exhaustive():
    for n in range(1, 65):
        for k in range(1, n + 1):
            assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)


def test_binom_against_factorials():
    for n in range(0, 40):
        for k in range(0, n + 1):
            assert binom(n, k) == factorial(n) // (factorial(k) * factorial(n - k))


def test_sigma_examples(five_cycle):
    from setpairs.constructions import standard_example

    assert sigma(five_cycle) == Fraction(5, 6)
    assert sigma(SetPairSystem()) == 0
    assert sigma(standard_example(2, 3)) == 1
    assert isinstance(sigma(five_cycle), Fraction)


@given(systems)
def test_sigma_matches_mpq_oracle(s):
    assert sigma(s) == sigma_oracle(s)


@given(systems, st.data())
def test_sigma_additive_over_index_partition(s, data):
    j = data.draw(st.sets(st.integers(0, max(len(s) - 1, 0))).map(lambda x: {i for i in x if i < len(s)}))
    rest = set(range(len(s))) - j
    assert sigma(subsystem(s, j)) + sigma(subsystem(s, rest)) == sigma(s)


# reduce / subsystem / indices_avoiding --------------------------------------


def test_reduce_examples(five_cycle):
    assert reduce(five_cycle, set()) == five_cycle
    r = reduce(five_cycle, {0})
    assert r[0] == SetPair({1}, {4, 2})
    assert r[4] == SetPair({4}, {3, 1})
    assert r[1] == SetPair({1, 2}, {3})
    assert r[3] == SetPair({3, 4}, {2})
    assert r[2] == five_cycle[2]
    single = SetPairSystem.from_lists([({1, 2}, {3})])
    assert reduce(single, {1, 2, 3}) == SetPairSystem.from_lists([((), ())])


def test_reduce_ignores_outside_elements(five_cycle):
    assert reduce(five_cycle, {"zz", 99}) == five_cycle


@given(systems, st.frozensets(elements))
def test_reduce_ground_set(s, r):
    assert ground_set(reduce(s, r)) == ground_set(s) - r


def test_subsystem_examples(five_cycle):
    assert subsystem(five_cycle, range(5)) == five_cycle
    sub = subsystem(five_cycle, {0, 1})
    assert sub == SetPairSystem.from_lists([({0, 1}, {4, 2}), ({1, 2}, {0, 3})])
    assert sub.origin == (0, 1)
    assert subsystem(five_cycle, set()) == SetPairSystem()


def test_subsystem_records_original_indices(five_cycle):
    sub = subsystem(five_cycle, {1, 3, 4})
    assert sub.origin == (1, 3, 4)
    assert subsystem(sub, {2}).origin == (4,)


def test_subsystem_out_of_range(five_cycle):
    with pytest.raises(MalformedQuery):
        subsystem(five_cycle, {5})
    with pytest.raises(MalformedQuery):
        subsystem(five_cycle, {-1})


def test_indices_avoiding(five_cycle):
    assert indices_avoiding(five_cycle, 7, "A") == set(range(5))
    assert indices_avoiding(five_cycle, 0, "A") == {1, 2, 3}
    assert indices_avoiding(five_cycle, 0, "B") == {0, 2, 4}
    with pytest.raises(ValueError):
        indices_avoiding(five_cycle, 0, "C")


def test_cross_elements(five_cycle):
    assert cross_elements(five_cycle) == {0, 1, 2, 3, 4}
    assert cross_elements(SetPairSystem.from_lists([({1}, {2})])) == frozenset()


# file format ----------------------------------------------------------------


def test_file_roundtrip(five_cycle):
    assert loads_system(dumps_system(five_cycle)) == five_cycle


def test_file_string_labels():
    s = loads_system('{"pairs": [{"A": ["x", "y"], "B": ["z"]}, {"A": ["z", "7"], "B": ["x"]}]}')
    assert s[0] == SetPair({"x", "y"}, {"z"})
    assert s[1].a == {"z", 7}
    assert loads_system(dumps_system(s)) == s


@pytest.mark.parametrize(
    "text,fragment",
    [
        ('{"pairs": [{"A": ["1"], "B": []}, {"A": ["a", "a"], "B": []}]}', "pair 1"),
        ('{"pairs": [{"A": [""], "B": []}]}', "pair 0"),
        ('{"pairs": [{"A": [1], "B": []}]}', "pair 0"),
        ('{"pears": []}', "pairs"),
        ("not json", "invalid JSON"),
    ],
)
def test_file_rejects_malformed(text, fragment):
    with pytest.raises(SystemFormatError, match=fragment):
        loads_system(text)


@settings(max_examples=50)
@given(systems)
def test_file_roundtrip_property(s):
    assert loads_system(dumps_system(s)) == s
