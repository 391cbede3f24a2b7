"""Canonical systems and the padding/stripping normalizations."""

from __future__ import annotations

from typing import Iterator, Sequence

from .core import (
    SetPair,
    SetPairSystem,
    binom,
    cross_elements,
    ground_set,
    reduce,
)

STANDARD_CAP = 28


class ResourceError(RuntimeError):
    """A request exceeds a configured size or work limit."""


def colex_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """k-subsets of ``range(n)`` in colex order (compare largest elements first)."""
    if k == 0:
        yield ()
        return
    if k > n:
        return
    yield from colex_subsets(n - 1, k)
    for rest in colex_subsets(n - 1, k - 1):
        yield rest + (n - 1,)


def iter_standard_pairs(a: int, b: int) -> Iterator[SetPair]:
    n = a + b
    full = frozenset(range(n))
    for sub in colex_subsets(n, a):
        s = frozenset(sub)
        yield SetPair(s, full - s)


def standard_example(a: int, b: int, cap: int = STANDARD_CAP) -> SetPairSystem:
    """All ``C(a+b, a)`` complementary pairs over ``{0, ..., a+b-1}``."""
    if a < 1 or b < 1:
        raise ValueError(f"standard example needs a, b >= 1, got ({a}, {b})")
    if a + b > cap:
        raise ResourceError(
            f"a + b = {a + b} exceeds cap {cap} ({binom(a + b, a)} pairs requested)"
        )
    return SetPairSystem(tuple(iter_standard_pairs(a, b)))


def complementary_five_cycles() -> SetPairSystem:
    """``A_i = {i, i+1}``, ``B_i = {i-1, i+2}`` modulo 5."""
    return SetPairSystem(
        tuple(
            SetPair(frozenset({i, (i + 1) % 5}), frozenset({(i - 1) % 5, (i + 2) % 5}))
            for i in range(5)
        )
    )


def pad_to_sizes(s: SetPairSystem, targets: Sequence[tuple[int, int]]) -> SetPairSystem:
    """Grow every set to its exact target size with fresh single-use elements.

    Fresh labels look like ``_pad_<i>_<side>_<k>`` and skip anything already in
    the ground set.
    """
    if len(targets) != len(s):
        raise ValueError(f"expected {len(s)} targets, got {len(targets)}")
    taken = set(ground_set(s))
    pairs = []
    for i, (p, (ta, tb)) in enumerate(zip(s.pairs, targets)):
        sides = []
        for side, cur, target in (("A", p.a, ta), ("B", p.b, tb)):
            if target < len(cur):
                raise ValueError(
                    f"pair {i}: target {target} for side {side} is below current size {len(cur)}"
                )
            new = set(cur)
            k = 0
            while len(new) < target:
                label = f"_pad_{i}_{side}_{k}"
                k += 1
                if label in taken:
                    continue
                taken.add(label)
                new.add(label)
            sides.append(frozenset(new))
        pairs.append(SetPair(*sides))
    return SetPairSystem(tuple(pairs), s.origin)


def free_elements(s: SetPairSystem) -> frozenset:
    """Ground elements that lie in no ``A_i ∩ B_j`` with ``i != j``."""
    return ground_set(s) - cross_elements(s)


def strip_free_elements(s: SetPairSystem) -> SetPairSystem:
    return reduce(s, free_elements(s))
