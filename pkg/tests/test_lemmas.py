import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from setpairs.core import SetPairSystem, ground_set, reduce, verify
from setpairs.constructions import free_elements, pad_to_sizes
from setpairs.lemmas import (
    PreconditionError,
    identity_sweep,
    induction_identity,
    random_system,
    ratio,
    ratio_bound_scan,
    ratio_closed_form,
    ratio_quotient,
    reduction_is_safe,
    unsafe_witnesses,
)


# reduction ----------------------------------------------------------------


def test_empty_removal_is_safe(five_cycle):
    assert reduction_is_safe(five_cycle, set()).safe


def test_five_cycle_vertex_is_unsafe(five_cycle):
    rep = reduction_is_safe(five_cycle, {0})
    assert not rep.safe
    v, i, j = rep.witness
    assert v in five_cycle[i].a and v in five_cycle[j].b and i != j
    # A_4 = {4, 0}, B_1 = {0, 3}
    assert (0, 4, 1) in unsafe_witnesses(five_cycle, {0})


def test_element_outside_cross_intersections_is_safe():
    s = SetPairSystem.from_lists([({1, 2}, {3, 4}), ({3, 5}, {2, 6})])
    assert reduction_is_safe(s, {1}).safe
    assert not reduction_is_safe(s, {2}).safe


@given(st.integers(0, 10**6), st.data())
def test_safe_reduction_preserves_one_cross(seed, data):
    from setpairs.search import SearchConfig, exists_system

    rng = random.Random(seed)
    base = exists_system(SearchConfig(2, 2, rng.randint(2, 5))).witnesses[0]
    padded = pad_to_sizes(base, [(len(p.a) + rng.randint(0, 2), len(p.b) + rng.randint(0, 2)) for p in base])
    free = sorted(free_elements(padded), key=str)
    r = data.draw(st.sets(st.sampled_from(free))) if free else set()
    assert reduction_is_safe(padded, r).safe
    assert verify(reduce(padded, r), "one-cross").clean


# averaging identity -------------------------------------------------------


def identity_oracle(s, side):
    """Contribution accounting: pair i adds |B_i| / C(|A_i|+|B_i|-1, |A_i|) for
    v in B_i and 1 / C(|A_i|+|B_i|, |A_i|) for every v outside A_i ∪ B_i
    (side A; swap roles for side B). Returns the vertex average as mpq."""
    n = len(ground_set(s))
    total = gmpy2.mpq(0)
    for p in s.pairs:
        ka, kb = (len(p.a), len(p.b)) if side == "A" else (len(p.b), len(p.a))
        from math import comb

        total += gmpy2.mpq(kb, comb(ka + kb - 1, ka))
        total += gmpy2.mpq(n - ka - kb, comb(ka + kb, ka))
    return Fraction(int(total.numerator), int(total.denominator)) / n


def test_identity_five_cycle(five_cycle):
    rep = induction_identity(five_cycle, "A")
    assert rep.holds
    assert rep.lhs == Fraction(5, 6)
    assert rep.rhs == Fraction(5, 6)
    assert len(rep.per_vertex) == 5


def test_identity_single_pair():
    s = SetPairSystem.from_lists([({1}, {2})])
    rep = induction_identity(s, "A")
    assert rep.lhs == Fraction(1, 2)
    assert dict(rep.per_vertex) == {1: 0, 2: 1}
    assert rep.holds
    assert rep.max_vertex_value == 1


@pytest.mark.parametrize(
    "pairs,index",
    [
        ([({1}, {2}), ({1, 3}, {3})], 1),
        ([((), {2})], 0),
        ([({1}, ())], 0),
    ],
)
def test_identity_precondition(pairs, index):
    with pytest.raises(PreconditionError) as exc:
        induction_identity(SetPairSystem.from_lists(pairs), "A")
    assert exc.value.index == index


def test_identity_matches_contribution_oracle():
    rng = random.Random(5)
    for _ in range(200):
        s = random_system(rng)
        for side in "AB":
            rep = induction_identity(s, side)
            assert rep.rhs == identity_oracle(s, side)
            assert rep.max_vertex_value >= rep.lhs


def test_random_systems_meet_hypotheses():
    rng = random.Random(0)
    for _ in range(300):
        s = random_system(rng)
        assert len(ground_set(s)) <= 12
        for p in s:
            assert 1 <= len(p.a) <= 4 and 1 <= len(p.b) <= 4 and not p.a & p.b


def test_identity_sweep_seeded():
    a = identity_sweep(50, seed=3)
    b = identity_sweep(50, seed=3)
    assert a.ok and b.ok and a.seed == 3


# ratio --------------------------------------------------------------------


@pytest.mark.parametrize(
    "a,b,expected",
    [(2, 2, Fraction(1, 3)), (2, 3, Fraction(3, 10)), (3, 3, Fraction(3, 10))],
)
def test_ratio_examples(a, b, expected):
    assert ratio(a, b) == expected


@pytest.mark.parametrize("a,b", [(1, 2), (2, 1), (0, 5)])
def test_ratio_domain(a, b):
    with pytest.raises(ValueError):
        ratio(a, b)


def test_ratio_paths_agree_to_100():
    for a in range(2, 101):
        for b in range(2, 101):
            assert ratio_closed_form(a, b) == ratio_quotient(a, b)
            assert ratio(a, b) == ratio(b, a)


def test_ratio_scan_small():
    s2 = ratio_bound_scan(2)
    assert s2.max_ratio == Fraction(1, 3) and s2.argmax == (2, 2) and s2.ok
    s3 = ratio_bound_scan(3)
    assert s3.ratios == {
        (2, 2): Fraction(1, 3),
        (2, 3): Fraction(3, 10),
        (3, 2): Fraction(3, 10),
        (3, 3): Fraction(3, 10),
    }


def test_ratio_scan_50():
    scan = ratio_bound_scan(50)
    assert scan.cells == 49 * 49
    assert scan.ok
    assert scan.max_other == Fraction(3, 10)
    assert scan.equal_third == [(2, 2)]


def test_ratio_scan_rejects_small_range():
    with pytest.raises(ValueError):
        ratio_bound_scan(1)
