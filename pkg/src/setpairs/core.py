"""Set pair systems, intersection predicates, the weight functional and reductions.

Elements are opaque hashable tokens. In practice they are small ints (built-in
constructions, search witnesses) or strings (labels read from files, padding
elements). Mixed systems are ordered with :func:`element_key`, which puts ints
before strings.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Iterator, Sequence

ElementId = Hashable

#: Exact rational carrier for weights and bounds.
Rat = Fraction

CROSS = "cross"
ONE_CROSS = "one-cross"
MODES = (CROSS, ONE_CROSS)

DISJOINTNESS = "disjointness"
EMPTY_INTERSECTION = "empty-intersection"
MULTI_INTERSECTION = "multi-intersection"


class SystemFormatError(ValueError):
    """Raised when a system file cannot be parsed."""


class MalformedQuery(ValueError):
    """Raised for requests that refer to indices outside a system."""


def element_key(e):
    if isinstance(e, bool):
        return (0, int(e), "")
    if isinstance(e, int):
        return (0, e, "")
    return (1, 0, str(e))


def sorted_elements(elems: Iterable) -> list:
    return sorted(elems, key=element_key)


@dataclass(frozen=True)
class SetPair:
    a: frozenset
    b: frozenset

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.a), len(self.b)

    def __repr__(self):
        a = ", ".join(map(repr, sorted_elements(self.a)))
        b = ", ".join(map(repr, sorted_elements(self.b)))
        return f"({{{a}}}, {{{b}}})"


@dataclass(frozen=True)
class SetPairSystem:
    """An indexed list of pairs ``(A_i, B_i)``.

    ``origin`` records, for systems produced by :func:`subsystem`, the index
    each pair had in the parent system. It does not take part in equality.
    """

    pairs: tuple[SetPair, ...] = ()
    origin: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        pairs = tuple(p if isinstance(p, SetPair) else SetPair(*p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.origin is not None:
            origin = tuple(self.origin)
            if len(origin) != len(pairs):
                raise ValueError("origin must have one entry per pair")
            object.__setattr__(self, "origin", origin)

    @classmethod
    def from_lists(cls, pairs: Iterable[tuple[Iterable, Iterable]]) -> "SetPairSystem":
        return cls(tuple(SetPair(frozenset(a), frozenset(b)) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[SetPair]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> SetPair:
        return self.pairs[i]

    @property
    def m(self) -> int:
        return len(self.pairs)

    def a_sets(self) -> list[frozenset]:
        return [p.a for p in self.pairs]

    def b_sets(self) -> list[frozenset]:
        return [p.b for p in self.pairs]

    def relabel(self, mapping) -> "SetPairSystem":
        """Apply an element mapping (dict or callable) to every set."""
        f = mapping.__getitem__ if isinstance(mapping, dict) else mapping
        return SetPairSystem(
            tuple(SetPair(frozenset(map(f, p.a)), frozenset(map(f, p.b))) for p in self.pairs),
            self.origin,
        )

    def to_lists(self) -> list[tuple[list, list]]:
        return [(sorted_elements(p.a), sorted_elements(p.b)) for p in self.pairs]


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    condition: str
    i: int
    j: int
    witness_elements: frozenset

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "i": self.i,
            "j": self.j,
            "witness_elements": [str(e) for e in sorted_elements(self.witness_elements)],
        }


@dataclass(frozen=True)
class VerificationReport:
    mode: str
    violations: tuple[Violation, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.clean

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "clean": self.clean,
            "violations": [v.to_json() for v in self.violations],
        }


def ground_set(s: SetPairSystem) -> frozenset:
    out: set = set()
    for p in s.pairs:
        out |= p.a
        out |= p.b
    return frozenset(out)


def verify(s: SetPairSystem, mode: str = ONE_CROSS) -> VerificationReport:
    """Check the disjointness and cross-intersection conditions.

    ``mode="cross"`` requires ``A_i ∩ B_j`` nonempty for ``i != j``;
    ``mode="one-cross"`` requires it to have exactly one element. Every
    violating ordered pair is reported, ``i`` ranging over A-sides.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    violations = []
    for i, p in enumerate(s.pairs):
        for j, q in enumerate(s.pairs):
            common = p.a & q.b
            if i == j:
                if common:
                    violations.append(Violation(DISJOINTNESS, i, j, common))
            elif not common:
                violations.append(Violation(EMPTY_INTERSECTION, i, j, common))
            elif mode == ONE_CROSS and len(common) > 1:
                violations.append(Violation(MULTI_INTERSECTION, i, j, common))
    return VerificationReport(mode, tuple(violations))


def is_cross_intersecting(s: SetPairSystem) -> bool:
    return verify(s, CROSS).clean


def is_one_cross_intersecting(s: SetPairSystem) -> bool:
    return verify(s, ONE_CROSS).clean


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero when ``k > n``."""
    return math.comb(n, k)


def pair_weight(p: SetPair) -> Fraction:
    na, nb = p.sizes
    return Fraction(1, binom(na + nb, na))


def sigma(s: SetPairSystem) -> Fraction:
    """Sum of ``1 / C(|A_i| + |B_i|, |A_i|)`` over all pairs."""
    return sum((pair_weight(p) for p in s.pairs), Fraction(0))


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------


def reduce(s: SetPairSystem, r: Iterable) -> SetPairSystem:
    r = frozenset(r)
    if not r:
        return s
    return SetPairSystem(tuple(SetPair(p.a - r, p.b - r) for p in s.pairs), s.origin)


def subsystem(s: SetPairSystem, j: Iterable[int]) -> SetPairSystem:
    """Keep the pairs whose index is in ``j`` (ascending order)."""
    idx = sorted(set(j))
    for i in idx:
        if not isinstance(i, int) or not 0 <= i < len(s):
            raise MalformedQuery(f"index {i!r} out of range for system of size {len(s)}")
    parent = s.origin if s.origin is not None else tuple(range(len(s)))
    return SetPairSystem(tuple(s.pairs[i] for i in idx), tuple(parent[i] for i in idx))


def indices_avoiding(s: SetPairSystem, v, side: str) -> frozenset:
    if side == "A":
        return frozenset(i for i, p in enumerate(s.pairs) if v not in p.a)
    if side == "B":
        return frozenset(i for i, p in enumerate(s.pairs) if v not in p.b)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def cross_elements(s: SetPairSystem) -> frozenset:
    """Elements lying in some ``A_i ∩ B_j`` with ``i != j``."""
    out: set = set()
    for i, p in enumerate(s.pairs):
        for j, q in enumerate(s.pairs):
            if i != j:
                out |= p.a & q.b
    return frozenset(out)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

_INT_LABEL = re.compile(r"0|-?[1-9][0-9]*")


def parse_label(label: str):
    """Map a file label to an element id; canonical decimal labels become ints."""
    if not isinstance(label, str) or not label:
        raise SystemFormatError(f"labels must be non-empty strings, got {label!r}")
    if _INT_LABEL.fullmatch(label):
        return int(label)
    return label


def system_from_json(data) -> SetPairSystem:
    if not isinstance(data, dict) or not isinstance(data.get("pairs"), list):
        raise SystemFormatError('expected an object with a "pairs" list')
    pairs = []
    for idx, entry in enumerate(data["pairs"]):
        if not isinstance(entry, dict) or set(entry) - {"A", "B"}:
            raise SystemFormatError(f'pair {idx}: expected an object with keys "A" and "B"')
        sides = []
        for side in ("A", "B"):
            labels = entry.get(side, [])
            if not isinstance(labels, list):
                raise SystemFormatError(f"pair {idx}: side {side} must be a list")
            try:
                elems = [parse_label(x) for x in labels]
            except SystemFormatError as exc:
                raise SystemFormatError(f"pair {idx}, side {side}: {exc}") from None
            if len(set(elems)) != len(elems):
                dup = sorted({str(e) for e in elems if elems.count(e) > 1})
                raise SystemFormatError(
                    f"pair {idx}, side {side}: duplicate labels {', '.join(dup)}"
                )
            sides.append(frozenset(elems))
        pairs.append(SetPair(*sides))
    return SetPairSystem(tuple(pairs))


def system_to_json(s: SetPairSystem) -> dict:
    return {
        "pairs": [
            {"A": [str(e) for e in a], "B": [str(e) for e in b]} for a, b in s.to_lists()
        ]
    }


def loads_system(text: str) -> SetPairSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"invalid JSON: {exc}") from None
    return system_from_json(data)


def dumps_system(s: SetPairSystem) -> str:
    return json.dumps(system_to_json(s), indent=2) + "\n"


def load_system(path) -> SetPairSystem:
    with open(path, encoding="utf-8") as fh:
        return loads_system(fh.read())


def dump_system(s: SetPairSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_system(s))


def format_fraction(x: Fraction, digits: int = 6) -> str:
    return f"{x.numerator}/{x.denominator} (~{float(x):.{digits}f})"


def fraction_json(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


__all__: Sequence[str] = [
    "CROSS",
    "ONE_CROSS",
    "ElementId",
    "MalformedQuery",
    "Rat",
    "SetPair",
    "SetPairSystem",
    "SystemFormatError",
    "VerificationReport",
    "Violation",
    "binom",
    "cross_elements",
    "dump_system",
    "dumps_system",
    "element_key",
    "ground_set",
    "indices_avoiding",
    "is_cross_intersecting",
    "is_one_cross_intersecting",
    "load_system",
    "loads_system",
    "reduce",
    "sigma",
    "subsystem",
    "system_from_json",
    "system_to_json",
    "verify",
]
