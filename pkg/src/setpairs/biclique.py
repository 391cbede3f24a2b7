"""Crown graphs, biclique partitions and their translation to set pair systems.

Vertices are 0-based: ``x_0 .. x_{m-1}`` and ``y_0 .. y_{m-1}``. The crown graph
on ``2m`` vertices has the edges ``x_i y_j`` for ``i != j``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .core import (
    SetPair,
    SetPairSystem,
    SystemFormatError,
    ground_set,
    sorted_elements,
    verify,
)
from .constructions import free_elements


class PartitionError(ValueError):
    """A partition or system does not satisfy a translation precondition."""


@dataclass(frozen=True)
class CrownGraph:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("crown graph needs m >= 1")

    @property
    def edge_count(self) -> int:
        return self.m * (self.m - 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(i, j)`` standing for ``x_i y_j``, row-major."""
        for i in range(self.m):
            for j in range(self.m):
                if i != j:
                    yield i, j


def crown_graph(m: int) -> CrownGraph:
    return CrownGraph(m)


@dataclass(frozen=True)
class Biclique:
    x: frozenset
    y: frozenset

    def __post_init__(self):
        object.__setattr__(self, "x", frozenset(self.x))
        object.__setattr__(self, "y", frozenset(self.y))

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in sorted(self.x):
            for j in sorted(self.y):
                yield i, j

    def sort_key(self):
        return (tuple(sorted(self.x)), tuple(sorted(self.y)))


@dataclass(frozen=True)
class BicliquePartition:
    m: int
    bicliques: tuple[Biclique, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "bicliques",
            tuple(b if isinstance(b, Biclique) else Biclique(*b) for b in self.bicliques),
        )

    def normalized(self) -> "BicliquePartition":
        return BicliquePartition(self.m, tuple(sorted(self.bicliques, key=Biclique.sort_key)))


@dataclass(frozen=True)
class PartitionViolation:
    kind: str  # empty-side | diagonal | out-of-range | overlap | uncovered
    edge: tuple[int, int] | None
    bicliques: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "edge": list(self.edge) if self.edge is not None else None,
            "bicliques": list(self.bicliques),
        }


@dataclass(frozen=True)
class PartitionReport:
    m: int
    violations: tuple[PartitionViolation, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.clean

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "clean": self.clean,
            "violations": [v.to_json() for v in self.violations],
        }


def verify_partition(p: BicliquePartition) -> PartitionReport:
    """Check biclique shape, pairwise edge-disjointness and exact coverage."""
    shape = []
    owners: dict[tuple[int, int], list[int]] = {}
    for k, bc in enumerate(p.bicliques):
        if not bc.x or not bc.y:
            shape.append(PartitionViolation("empty-side", None, (k,)))
        for v in sorted(bc.x | bc.y):
            if not 0 <= v < p.m:
                shape.append(PartitionViolation("out-of-range", None, (k,)))
                break
        for v in sorted(bc.x & bc.y):
            shape.append(PartitionViolation("diagonal", (v, v), (k,)))
        for e in bc.edges():
            if e[0] != e[1]:
                owners.setdefault(e, []).append(k)
    edge_issues = []
    for e, ks in owners.items():
        if len(ks) > 1:
            edge_issues.append(PartitionViolation("overlap", e, tuple(ks)))
    if p.m >= 1:
        for e in CrownGraph(p.m).edges():
            if e not in owners:
                edge_issues.append(PartitionViolation("uncovered", e, ()))
    edge_issues.sort(key=lambda v: (v.edge, v.kind))
    return PartitionReport(p.m, tuple(shape + edge_issues))


def thickness(p: BicliquePartition) -> tuple[list[int], list[int]]:
    tx = [0] * p.m
    ty = [0] * p.m
    for bc in p.bicliques:
        for i in bc.x:
            tx[i] += 1
        for j in bc.y:
            ty[j] += 1
    return tx, ty


def partition_to_system(p: BicliquePartition, check: bool = True) -> SetPairSystem:
    """Element ``k`` stands for biclique ``k``; ``A_i`` collects the bicliques
    through ``x_i`` and ``B_i`` those through ``y_i``."""
    if check:
        report = verify_partition(p)
        if not report.clean:
            first = report.violations[0]
            raise PartitionError(f"partition is not valid: {first.kind} at {first.edge}")
    a = [set() for _ in range(p.m)]
    b = [set() for _ in range(p.m)]
    for k, bc in enumerate(p.bicliques):
        for i in bc.x:
            a[i].add(k)
        for j in bc.y:
            b[j].add(k)
    return SetPairSystem(tuple(SetPair(frozenset(x), frozenset(y)) for x, y in zip(a, b)))


def system_to_partition(s: SetPairSystem) -> BicliquePartition:
    """One biclique per element ``v``: ``X = {i : v in A_i}``, ``Y = {j : v in B_j}``.

    The system must be 1-cross intersecting with every element in some cross
    intersection. Bicliques follow the sorted element order.
    """
    report = verify(s, "one-cross")
    if not report.clean:
        bad = report.violations[0]
        raise PartitionError(
            f"system is not 1-cross intersecting: {bad.condition} at pairs ({bad.i}, {bad.j})"
        )
    free = free_elements(s)
    if free:
        raise PartitionError(
            f"element {sorted_elements(free)[0]!r} lies in no cross intersection"
        )
    bicliques = []
    for v in sorted_elements(ground_set(s)):
        xs = frozenset(i for i, p in enumerate(s.pairs) if v in p.a)
        ys = frozenset(j for j, p in enumerate(s.pairs) if v in p.b)
        bicliques.append(Biclique(xs, ys))
    return BicliquePartition(len(s), tuple(bicliques))


def element_signatures(s: SetPairSystem) -> Counter:
    """Multiset of (A-indices, B-indices) memberships over the ground set."""
    sig: Counter = Counter()
    for v in ground_set(s):
        sig[
            (
                tuple(i for i, p in enumerate(s.pairs) if v in p.a),
                tuple(j for j, p in enumerate(s.pairs) if v in p.b),
            )
        ] += 1
    return sig


def isomorphic_indexed(s: SetPairSystem, t: SetPairSystem) -> bool:
    """True iff some element bijection maps ``s`` onto ``t`` pair by pair.

    Such a bijection must preserve each element's membership signature, and
    elements with equal signatures are interchangeable, so comparing the
    signature multisets decides it.
    """
    return len(s) == len(t) and element_signatures(s) == element_signatures(t)


def same_partition(p: BicliquePartition, q: BicliquePartition) -> bool:
    return p.m == q.m and Counter(p.bicliques) == Counter(q.bicliques)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def partition_from_json(data) -> BicliquePartition:
    if not isinstance(data, dict) or not isinstance(data.get("m"), int):
        raise SystemFormatError('expected an object with integer "m"')
    raw = data.get("bicliques")
    if not isinstance(raw, list):
        raise SystemFormatError('expected a "bicliques" list')
    bicliques = []
    for k, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise SystemFormatError(f"biclique {k}: expected an object")
        sides = []
        for side in ("X", "Y"):
            vals = entry.get(side)
            if not isinstance(vals, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in vals
            ):
                raise SystemFormatError(f"biclique {k}: side {side} must be a list of ints")
            if len(set(vals)) != len(vals):
                raise SystemFormatError(f"biclique {k}: duplicate vertex in side {side}")
            sides.append(frozenset(vals))
        bicliques.append(Biclique(*sides))
    return BicliquePartition(data["m"], tuple(bicliques))


def partition_to_json(p: BicliquePartition) -> dict:
    return {
        "m": p.m,
        "bicliques": [{"X": sorted(bc.x), "Y": sorted(bc.y)} for bc in p.bicliques],
    }


def loads_partition(text: str) -> BicliquePartition:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"invalid JSON: {exc}") from None
    return partition_from_json(data)


def dumps_partition(p: BicliquePartition) -> str:
    return json.dumps(partition_to_json(p), indent=2) + "\n"
