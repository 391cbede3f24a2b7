"""Exact checks for reduction safety, the vertex-averaging identity and the
binomial ratio bound."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    SetPair,
    SetPairSystem,
    binom,
    fraction_json,
    ground_set,
    indices_avoiding,
    reduce,
    sigma,
    sorted_elements,
    subsystem,
)

DEFAULT_SEED = 1729

ONE_THIRD = Fraction(1, 3)
THREE_TENTHS = Fraction(3, 10)


class PreconditionError(ValueError):
    """An input system does not meet the hypotheses of a lemma."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SafetyReport:
    safe: bool
    witness: tuple | None = None  # (v, i, j) with v in A_i ∩ B_j, i != j

    def __bool__(self):
        return self.safe


def unsafe_witnesses(s: SetPairSystem, r) -> list[tuple]:
    """All ``(v, i, j)`` with ``v`` in ``r`` and ``v ∈ A_i ∩ B_j``, ``i != j``."""
    r = set(r)
    out = []
    for v in sorted_elements(r & ground_set(s)):
        in_a = [i for i, p in enumerate(s.pairs) if v in p.a]
        in_b = [j for j, p in enumerate(s.pairs) if v in p.b]
        out.extend((v, i, j) for i in in_a for j in in_b if i != j)
    return out


def reduction_is_safe(s: SetPairSystem, r) -> SafetyReport:
    """Removing ``r`` keeps a 1-cross intersecting system 1-cross intersecting
    when no element of ``r`` sits in a cross intersection. The first offending
    triple in (element, i, j) order is returned as witness."""
    bad = unsafe_witnesses(s, r)
    if bad:
        return SafetyReport(False, bad[0])
    return SafetyReport(True)


# ---------------------------------------------------------------------------
# Averaging identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    side: str
    lhs: Fraction
    per_vertex: tuple[tuple[object, Fraction], ...]
    rhs: Fraction
    holds: bool
    max_vertex_value: Fraction

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "lhs": fraction_json(self.lhs),
            "rhs": fraction_json(self.rhs),
            "holds": self.holds,
            "max_vertex_value": fraction_json(self.max_vertex_value),
            "per_vertex": [[str(v), fraction_json(x)] for v, x in self.per_vertex],
        }


def check_identity_hypotheses(s: SetPairSystem) -> None:
    for i, p in enumerate(s.pairs):
        if not p.a:
            raise PreconditionError(f"pair {i}: A-side is empty", i)
        if not p.b:
            raise PreconditionError(f"pair {i}: B-side is empty", i)
        if p.a & p.b:
            raise PreconditionError(f"pair {i}: A and B intersect", i)


def vertex_value(s: SetPairSystem, v, side: str) -> Fraction:
    """Weight of the subsystem avoiding ``v`` on ``side``, with ``v`` removed."""
    return sigma(reduce(subsystem(s, indices_avoiding(s, v, side)), {v}))


def induction_identity(s: SetPairSystem, side: str = "A") -> IdentityReport:
    """Compare ``sigma(s)`` with the average over ground elements ``v`` of
    ``vertex_value(s, v, side)``. The two are equal for every system whose
    pairs are nonempty and disjoint."""
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    check_identity_hypotheses(s)
    lhs = sigma(s)
    vs = sorted_elements(ground_set(s))
    per_vertex = tuple((v, vertex_value(s, v, side)) for v in vs)
    if per_vertex:
        rhs = sum((x for _, x in per_vertex), Fraction(0)) / len(per_vertex)
        top = max(x for _, x in per_vertex)
    else:
        rhs = top = Fraction(0)
    return IdentityReport(side, lhs, per_vertex, rhs, lhs == rhs, top)


def random_system(
    rng: random.Random,
    max_pairs: int = 6,
    max_size: int = 4,
    max_ground: int = 12,
) -> SetPairSystem:
    """A random system with nonempty, disjoint ``A_i`` and ``B_i``.

    Set sizes are drawn from 1..max_size and the ground set has at most
    ``max_ground`` elements.
    """
    n = rng.randint(2, max_ground)
    universe = list(range(n))
    pairs = []
    for _ in range(rng.randint(1, max_pairs)):
        ka = rng.randint(1, min(max_size, n - 1))
        kb = rng.randint(1, min(max_size, n - ka))
        chosen = rng.sample(universe, ka + kb)
        pairs.append(SetPair(frozenset(chosen[:ka]), frozenset(chosen[ka:])))
    return SetPairSystem(tuple(pairs))


@dataclass
class IdentitySweep:
    seed: int
    count: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def identity_sweep(count: int = 1000, seed: int = DEFAULT_SEED) -> IdentitySweep:
    rng = random.Random(seed)
    sweep = IdentitySweep(seed, count)
    for k in range(count):
        s = random_system(rng)
        for side in ("A", "B"):
            if not induction_identity(s, side).holds:
                sweep.failures.append((k, side, s))
    return sweep


# ---------------------------------------------------------------------------
# Ratio bound
# ---------------------------------------------------------------------------


def ratio_closed_form(a: int, b: int) -> Fraction:
    return Fraction(a * b, (a + b) * (a + b - 1))


def ratio_quotient(a: int, b: int) -> Fraction:
    return Fraction(binom(a + b - 2, a - 1), binom(a + b, a))


def ratio(a: int, b: int) -> Fraction:
    """``C(a+b-2, a-1) / C(a+b, a)`` for ``a, b >= 2``."""
    if a < 2 or b < 2:
        raise ValueError(f"ratio needs a, b >= 2, got ({a}, {b})")
    value = ratio_closed_form(a, b)
    if value != ratio_quotient(a, b):
        raise ArithmeticError(f"closed form and binomial quotient disagree at ({a}, {b})")
    return value


@dataclass
class RatioScan:
    n_max: int
    cells: int = 0
    ratios: dict = field(default_factory=dict)
    over_third: list = field(default_factory=list)
    over_three_tenths: list = field(default_factory=list)
    equal_third: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    max_ratio: Fraction = Fraction(0)
    argmax: tuple | None = None
    max_other: Fraction | None = None
    argmax_other: tuple | None = None

    @property
    def ok(self) -> bool:
        return (
            not self.over_third
            and not self.over_three_tenths
            and not self.mismatches
            and self.equal_third in ([], [(2, 2)])
        )

    def to_json(self, include_ratios: bool = False) -> dict:
        out = {
            "n_max": self.n_max,
            "cells": self.cells,
            "ok": self.ok,
            "max_ratio": fraction_json(self.max_ratio),
            "argmax": list(self.argmax) if self.argmax else None,
            "max_ratio_excluding_2_2": (
                fraction_json(self.max_other) if self.max_other is not None else None
            ),
            "argmax_excluding_2_2": list(self.argmax_other) if self.argmax_other else None,
            "cells_equal_one_third": [list(c) for c in self.equal_third],
            "cells_over_one_third": [list(c) for c in self.over_third],
            "cells_over_three_tenths": [list(c) for c in self.over_three_tenths],
            "form_mismatches": [list(c) for c in self.mismatches],
        }
        if include_ratios:
            out["ratios"] = {f"{a},{b}": fraction_json(x) for (a, b), x in self.ratios.items()}
        return out


def ratio_bound_scan(n_max: int) -> RatioScan:
    """Evaluate the ratio on every cell ``2 <= a, b <= n_max``.

    Checks ``<= 1/3`` everywhere with equality only at ``(2, 2)``, and
    ``<= 3/10`` away from ``(2, 2)``.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    scan = RatioScan(n_max)
    for a in range(2, n_max + 1):
        for b in range(2, n_max + 1):
            closed = ratio_closed_form(a, b)
            if closed != ratio_quotient(a, b):
                scan.mismatches.append((a, b))
            scan.cells += 1
            scan.ratios[(a, b)] = closed
            if closed > ONE_THIRD:
                scan.over_third.append((a, b))
            elif closed == ONE_THIRD:
                scan.equal_third.append((a, b))
            if (a, b) != (2, 2):
                if closed > THREE_TENTHS:
                    scan.over_three_tenths.append((a, b))
                if scan.max_other is None or closed > scan.max_other:
                    scan.max_other, scan.argmax_other = closed, (a, b)
            if scan.argmax is None or closed > scan.max_ratio:
                scan.max_ratio, scan.argmax = closed, (a, b)
    return scan
