"""Exhaustive search for 1-cross intersecting systems with bounded set sizes.

A 1-cross intersecting system of ``m`` pairs with ``|A_i| <= a`` and
``|B_i| <= b`` exists exactly when the crown graph on ``2m`` vertices has a
biclique partition with thickness at most ``a`` at every ``x_i`` and at most
``b`` at every ``y_j``. :func:`exists_system` searches for such partitions as an
exact cover of the crown graph's edges. :func:`brute_force_oracle` reaches the
same answer by enumerating set partitions of the ordered index pairs, sharing
no code with the main search.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .biclique import Biclique, BicliquePartition, partition_to_system
from .constructions import ResourceError
from .core import (
    CROSS,
    ONE_CROSS,
    SetPair,
    SetPairSystem,
    fraction_json,
    ground_set,
    sigma,
    system_to_json,
    verify,
)

WITNESS_FOUND = "witness-found"
EXHAUSTED = "exhausted-no-solution"
INCONCLUSIVE = "inconclusive"

BOLLOBAS_BOUND = Fraction(1)
ONE_CROSS_BOUND = Fraction(29, 30)
FIVE_SIXTHS = Fraction(5, 6)


class SearchIncomplete(RuntimeError):
    """A search that had to be conclusive hit its node limit."""


@dataclass(frozen=True)
class SearchConfig:
    a: int
    b: int
    m: int
    node_limit: int | None = None
    enumerate_all: bool = False
    symmetry_breaking: bool = True
    most_constrained: bool = False

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.m < 1:
            raise ValueError("a, b and m must all be at least 1")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "m": self.m,
            "node_limit": self.node_limit,
            "enumerate_all": self.enumerate_all,
            "symmetry_breaking": self.symmetry_breaking,
            "most_constrained": self.most_constrained,
        }


@dataclass
class SearchStats:
    nodes: int = 0
    prunes_thickness: int = 0
    prunes_coverage: int = 0
    elapsed: float = 0.0

    def add(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.prunes_thickness += other.prunes_thickness
        self.prunes_coverage += other.prunes_coverage

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "nodes": self.nodes,
            "prunes_thickness": self.prunes_thickness,
            "prunes_coverage": self.prunes_coverage,
        }
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out


@dataclass
class SearchOutcome:
    status: str
    config: SearchConfig | None = None
    witnesses: list[SetPairSystem] = field(default_factory=list)
    partitions: list[BicliquePartition] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE

    def to_json(self, timing: bool = False) -> dict:
        return {
            "config": self.config.to_json() if self.config else None,
            "status": self.status,
            "witnesses": [system_to_json(w) for w in self.witnesses],
            "stats": self.stats.to_json(timing),
        }


# ---------------------------------------------------------------------------
# Exact cover over the crown graph
# ---------------------------------------------------------------------------


class _NodeLimit(Exception):
    pass


@lru_cache(maxsize=None)
def _submasks(mask: int) -> tuple[int, ...]:
    """Submasks of ``mask`` ordered by size, then colex (numeric order)."""
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    subs.sort(key=lambda s: (bin(s).count("1"), s))
    return tuple(subs)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _root_candidates(cfg: SearchConfig) -> list[tuple[int, int]]:
    """Bicliques allowed to cover the first edge ``x_0 y_1``.

    With symmetry breaking, the biclique through ``x_0 y_1`` can be moved by an
    index permutation fixing 0 and 1 to ``X = {0, 2..p}``, ``Y = {1, p+1..p+q-1}``,
    so only those shapes are tried.
    """
    m = cfg.m
    if cfg.symmetry_breaking:
        out = []
        for p in range(1, m):
            for q in range(1, m - p + 1):
                x = 1 | sum(1 << v for v in range(2, p + 1))
                y = (1 << 1) | sum(1 << v for v in range(p + 1, p + q))
                out.append((x, y))
        return out
    full = (1 << m) - 1
    rest_x = full & ~0b11
    out = []
    for xs in _submasks(rest_x):
        x = 1 | xs
        allowed_y = full & ~x
        for ys in _submasks(allowed_y & ~0b10):
            out.append((x, 0b10 | ys))
    return out


class _Search:
    def __init__(self, cfg: SearchConfig, limit: int | None):
        m = cfg.m
        self.cfg = cfg
        self.m = m
        self.limit = limit
        full = (1 << m) - 1
        self.rows = [full & ~(1 << i) for i in range(m)]  # uncovered y's per x
        self.cols = [full & ~(1 << j) for j in range(m)]  # uncovered x's per y
        self.bx = [cfg.a] * m
        self.by = [cfg.b] * m
        self.chosen: list[tuple[int, int]] = []
        self.solutions: list[tuple[tuple[int, int], ...]] = []
        self.stats = SearchStats()

    def apply(self, x: int, y: int) -> None:
        xs, ys = _bits(x), _bits(y)
        for i in xs:
            self.rows[i] &= ~y
            self.bx[i] -= 1
        for j in ys:
            self.cols[j] &= ~x
            self.by[j] -= 1
        self.chosen.append((x, y))

    def undo(self, x: int, y: int) -> None:
        xs, ys = _bits(x), _bits(y)
        for i in xs:
            self.rows[i] |= y
            self.bx[i] += 1
        for j in ys:
            self.cols[j] |= x
            self.by[j] += 1
        self.chosen.pop()

    def feasible(self) -> bool:
        span = self.m - 1
        for v in range(self.m):
            for left, budget in ((self.rows[v], self.bx[v]), (self.cols[v], self.by[v])):
                if not left:
                    continue
                if budget <= 0:
                    self.stats.prunes_thickness += 1
                    return False
                if bin(left).count("1") > budget * span:
                    self.stats.prunes_coverage += 1
                    return False
        return True

    def pick_edge(self) -> tuple[int, int] | None:
        rows = self.rows
        if self.cfg.most_constrained:
            best = None
            for i in range(self.m):
                if rows[i]:
                    for j in _bits(rows[i]):
                        key = (self.bx[i] + self.by[j], i, j)
                        if best is None or key < best:
                            best = key
            return None if best is None else best[1:]
        for i in range(self.m):
            if rows[i]:
                r = rows[i]
                return i, (r & -r).bit_length() - 1
        return None

    def candidates(self, i: int, j: int):
        jbit = 1 << j
        open_y = 0
        for y in range(self.m):
            if self.by[y] > 0:
                open_y |= 1 << y
        cx = 0
        for x in range(self.m):
            if x != i and self.bx[x] > 0 and self.rows[x] & jbit:
                cx |= 1 << x
        tight_y = 0
        for y in range(self.m):
            if self.by[y] == 1:
                tight_y |= 1 << y
        rows, cols, bx = self.rows, self.cols, self.bx
        for xs in _submasks(cx):
            x = xs | (1 << i)
            allowed = open_y
            # a vertex spending its last unit must be finished by this biclique
            need = jbit
            for v in _bits(x):
                allowed &= rows[v]
                if bx[v] == 1:
                    need |= rows[v]
            if need & ~allowed:
                self.stats.prunes_thickness += 1
                continue
            for ys in _submasks(allowed & ~need):
                y = ys | need
                if any(cols[v] & ~x for v in _bits(y & tight_y)):
                    self.stats.prunes_thickness += 1
                    continue
                yield x, y

    def run(self, first_only: bool) -> bool:
        self.stats.nodes += 1
        if self.limit is not None and self.stats.nodes > self.limit:
            raise _NodeLimit
        edge = self.pick_edge()
        if edge is None:
            self.solutions.append(tuple(self.chosen))
            return first_only
        for x, y in self.candidates(*edge):
            self.apply(x, y)
            if self.feasible() and self.run(first_only):
                return True
            self.undo(x, y)
        return False


@dataclass
class _BranchResult:
    solutions: list
    stats: SearchStats
    hit_limit: bool


def _run_branch(cfg: SearchConfig, root: tuple[int, int] | None, limit: int | None) -> _BranchResult:
    search = _Search(cfg, limit)
    hit = False
    try:
        if root is None:
            search.run(not cfg.enumerate_all)
        else:
            search.stats.nodes += 1
            if limit is not None and search.stats.nodes > limit:
                raise _NodeLimit
            search.apply(*root)
            if search.feasible():
                search.run(not cfg.enumerate_all)
    except _NodeLimit:
        hit = True
    return _BranchResult(search.solutions, search.stats, hit)


def _root_branches(cfg: SearchConfig) -> list[tuple[int, int] | None]:
    if cfg.m == 1:
        return [None]
    return _root_candidates(cfg)


def _to_partition(m: int, sol) -> BicliquePartition:
    return BicliquePartition(
        m, tuple(Biclique(frozenset(_bits(x)), frozenset(_bits(y))) for x, y in sol)
    )


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SETPAIR_THREADS", "1")))
    except ValueError:
        return 1


def exists_system(cfg: SearchConfig, threads: int = 1) -> SearchOutcome:
    """Decide whether an ``(a, b, m)`` system exists.

    The first uncovered edge in row-major order is covered by each admissible
    biclique in turn. Root branches may be farmed out to ``threads`` worker
    processes; results are combined in branch order, so status, witnesses and
    node counts do not depend on ``threads``. A node limit, when hit, gives
    ``inconclusive`` and never a negative answer.
    """
    start = time.perf_counter()
    branches = _root_branches(cfg)
    limit = cfg.node_limit
    speculative = None
    if threads > 1 and len(branches) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_branch, cfg, root, limit) for root in branches]
            speculative = [f.result() for f in futures]

    stats = SearchStats()
    solutions = []
    status = None
    for k, root in enumerate(branches):
        remaining = None if limit is None else limit - stats.nodes
        res = speculative[k] if speculative is not None else None
        if res is None or (
            remaining is not None and (res.hit_limit or res.stats.nodes > remaining)
        ):
            # the sequential run with the exact remaining budget is authoritative
            res = _run_branch(cfg, root, remaining)
        stats.add(res.stats)
        solutions.extend(res.solutions)
        if res.hit_limit:
            status = INCONCLUSIVE
            break
        if solutions and not cfg.enumerate_all:
            break
    if status is None:
        status = WITNESS_FOUND if solutions else EXHAUSTED

    outcome = SearchOutcome(status, cfg, stats=stats)
    if cfg.enumerate_all:
        forms: dict[bytes, tuple[SetPairSystem, BicliquePartition]] = {}
        for sol in solutions:
            part = _to_partition(cfg.m, sol)
            sys_ = partition_to_system(part, check=False)
            key = canonical_form(sys_).encoding
            forms.setdefault(key, (sys_, part))
        for key in sorted(forms):
            outcome.witnesses.append(forms[key][0])
            outcome.partitions.append(forms[key][1])
    elif solutions:
        part = _to_partition(cfg.m, solutions[0])
        outcome.partitions.append(part)
        outcome.witnesses.append(partition_to_system(part, check=False))
    stats.elapsed = time.perf_counter() - start
    return outcome


@dataclass
class MaxMResult:
    value: int
    outcomes: list[SearchOutcome]
    exact: bool
    reached_cap: bool

    def to_json(self, timing: bool = False) -> dict:
        return {
            "max_m": self.value,
            "exact": self.exact,
            "lower_bound_only": not self.exact,
            "reached_cap": self.reached_cap,
            "outcomes": [o.to_json(timing) for o in self.outcomes],
        }


def max_m(
    a: int,
    b: int,
    m_cap: int,
    node_limit: int | None = None,
    threads: int = 1,
    symmetry_breaking: bool = True,
) -> MaxMResult:
    """Largest ``m <= m_cap`` admitting an ``(a, b, m)`` system.

    Ascends from ``m = 1`` and stops at the first exhausted level; deleting a
    pair keeps every condition, so no larger ``m`` can succeed. If any level
    is inconclusive the value is only a lower bound and ``exact`` is False.
    """
    if m_cap < 1:
        raise ValueError("m_cap must be at least 1")
    outcomes = []
    best = 0
    exact = True
    reached_cap = True
    for m in range(1, m_cap + 1):
        cfg = SearchConfig(a, b, m, node_limit=node_limit, symmetry_breaking=symmetry_breaking)
        out = exists_system(cfg, threads=threads)
        outcomes.append(out)
        if out.status == WITNESS_FOUND:
            best = m
        elif out.status == INCONCLUSIVE:
            exact = False
        else:
            reached_cap = False
            break
    return MaxMResult(best, outcomes, exact, reached_cap)


# ---------------------------------------------------------------------------
# Canonical forms up to element relabeling and index permutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """``m`` plus the sorted element signatures under a canonical index order."""

    m: int
    signature: tuple

    @property
    def encoding(self) -> bytes:
        return json.dumps([self.m, self.signature], separators=(",", ":")).encode()

    def to_system(self) -> SetPairSystem:
        a = [set() for _ in range(self.m)]
        b = [set() for _ in range(self.m)]
        for e, (xs, ys) in enumerate(self.signature):
            for i in xs:
                a[i].add(e)
            for j in ys:
                b[j].add(e)
        return SetPairSystem(tuple(SetPair(frozenset(x), frozenset(y)) for x, y in zip(a, b)))


def _refine(colors: list[int], a_of, b_of, a_sets, b_sets) -> list[int]:
    while True:
        esig = [
            (tuple(sorted(colors[i] for i in ai)), tuple(sorted(colors[j] for j in bj)))
            for ai, bj in zip(a_of, b_of)
        ]
        isig = [
            (colors[i], tuple(sorted(esig[e] for e in a_sets[i])), tuple(sorted(esig[e] for e in b_sets[i])))
            for i in range(len(colors))
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(isig)))}
        new = [ranks[s] for s in isig]
        if len(ranks) == len(set(colors)):
            return new
        colors = new


def canonical_form(s: SetPairSystem) -> CanonicalForm:
    """Canonical encoding by colour refinement on pair indices with
    individualization of tied indices; the minimum leaf encoding wins."""
    m = len(s)
    elems = sorted(ground_set(s), key=repr)
    pos = {e: k for k, e in enumerate(elems)}
    a_sets = [[pos[e] for e in p.a] for p in s.pairs]
    b_sets = [[pos[e] for e in p.b] for p in s.pairs]
    a_of = [[i for i, p in enumerate(s.pairs) if e in p.a] for e in elems]
    b_of = [[j for j, p in enumerate(s.pairs) if e in p.b] for e in elems]

    best: list = [None]

    def leaf(colors):
        sig = tuple(
            sorted(
                (tuple(sorted(colors[i] for i in ai)), tuple(sorted(colors[j] for j in bj)))
                for ai, bj in zip(a_of, b_of)
            )
        )
        if best[0] is None or sig < best[0]:
            best[0] = sig

    def descend(colors):
        colors = _refine(colors, a_of, b_of, a_sets, b_sets)
        counts: dict[int, list[int]] = {}
        for i, c in enumerate(colors):
            counts.setdefault(c, []).append(i)
        ties = [c for c in sorted(counts) if len(counts[c]) > 1]
        if not ties:
            leaf(colors)
            return
        cell = ties[0]
        for i in counts[cell]:
            descend([2 * c + (1 if c == cell and k != i else 0) for k, c in enumerate(colors)])

    init = [0] * m
    if m:
        sizes = sorted({p.sizes for p in s.pairs})
        init = [sizes.index(p.sizes) for p in s.pairs]
        descend(init)
    return CanonicalForm(m, best[0] if best[0] is not None else ())


def are_isomorphic(s: SetPairSystem, t: SetPairSystem) -> bool:
    return canonical_form(s) == canonical_form(t)


def enumerate_extremal(
    a: int, b: int, m: int, node_limit: int | None = None, threads: int = 1
) -> list[CanonicalForm]:
    """Canonical forms of all ``(a, b, m)`` systems found by the search."""
    cfg = SearchConfig(a, b, m, node_limit=node_limit, enumerate_all=True)
    out = exists_system(cfg, threads=threads)
    if not out.conclusive:
        raise SearchIncomplete(f"enumeration for (a={a}, b={b}, m={m}) hit the node limit")
    return sorted({canonical_form(w) for w in out.witnesses})


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

ORACLE_MAX_CELLS = 42


def brute_force_oracle(
    a: int,
    b: int,
    m: int,
    ground_cap: int | None = None,
    max_cells: int = ORACLE_MAX_CELLS,
) -> SearchOutcome:
    """Decide existence by assigning each ordered pair ``(i, j)``, ``i != j``,
    to the element realizing ``A_i ∩ B_j``.

    Element classes are grown as restricted growth strings over the ordered
    pairs in row-major order. A class holding ``(i, j)`` and ``(i', j')`` must
    also hold ``(i', j)`` and ``(i, j')`` whenever those are off-diagonal, and
    it may not put an element into both ``A_k`` and ``B_k``.
    """
    cells = [(i, j) for i in range(m) for j in range(m) if i != j]
    if ground_cap is None:
        ground_cap = a * m
    if len(cells) > max_cells:
        raise ResourceError(
            f"oracle work estimate exceeded: {len(cells)} ordered pairs > {max_cells}"
        )
    start = time.perf_counter()
    order = {c: k for k, c in enumerate(cells)}
    owner: dict[tuple[int, int], int] = {}
    xs: list[set] = []
    ys: list[set] = []
    ta = [0] * m
    tb = [0] * m
    stats = SearchStats()
    found: list = []

    def claimants(i, j):
        return [c for c in range(len(xs)) if i in xs[c] and j in ys[c]]

    def can_join(c, i, j):
        nx = xs[c] | {i}
        ny = ys[c] | {j}
        if nx & ny:
            return False
        if i not in xs[c] and ta[i] >= a:
            return False
        if j not in ys[c] and tb[j] >= b:
            return False
        k = order[(i, j)]
        for x in nx:
            for y in ny:
                if x != y and order[(x, y)] < k and owner.get((x, y)) != c:
                    return False
        return True

    def place(c, i, j):
        added = (i not in xs[c], j not in ys[c])
        if added[0]:
            xs[c].add(i)
            ta[i] += 1
        if added[1]:
            ys[c].add(j)
            tb[j] += 1
        owner[(i, j)] = c
        return added

    def unplace(c, i, j, added):
        if added[0]:
            xs[c].discard(i)
            ta[i] -= 1
        if added[1]:
            ys[c].discard(j)
            tb[j] -= 1
        del owner[(i, j)]

    def step(k):
        stats.nodes += 1
        if k == len(cells):
            found.append([(set(x), set(y)) for x, y in zip(xs, ys)])
            return True
        i, j = cells[k]
        claim = claimants(i, j)
        if len(claim) > 1:
            return False
        if claim:
            c = claim[0]
            added = place(c, i, j)
            if step(k + 1):
                return True
            unplace(c, i, j, added)
            return False
        for c in range(len(xs)):
            if can_join(c, i, j):
                added = place(c, i, j)
                if step(k + 1):
                    return True
                unplace(c, i, j, added)
        if len(xs) < ground_cap and ta[i] < a and tb[j] < b:
            xs.append(set())
            ys.append(set())
            added = place(len(xs) - 1, i, j)
            if step(k + 1):
                return True
            unplace(len(xs) - 1, i, j, added)
            xs.pop()
            ys.pop()
        return False

    step(0)
    stats.elapsed = time.perf_counter() - start
    if not found:
        return SearchOutcome(EXHAUSTED, SearchConfig(a, b, m), stats=stats)
    classes = found[0]
    system = SetPairSystem(
        tuple(
            SetPair(
                frozenset(c for c, (x, _) in enumerate(classes) if i in x),
                frozenset(c for c, (_, y) in enumerate(classes) if i in y),
            )
            for i in range(m)
        )
    )
    return SearchOutcome(WITNESS_FOUND, SearchConfig(a, b, m), witnesses=[system], stats=stats)


# ---------------------------------------------------------------------------
# Bound audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    sigma: Fraction
    cross_clean: bool
    one_cross_clean: bool
    sizes_at_least_two: bool
    bollobas_slack: Fraction | None
    one_cross_slack: Fraction | None
    five_sixths_slack: Fraction | None

    @property
    def bollobas_applicable(self) -> bool:
        return self.cross_clean

    @property
    def one_cross_applicable(self) -> bool:
        return self.one_cross_clean and self.sizes_at_least_two

    @property
    def bollobas_ok(self) -> bool:
        return self.bollobas_slack is None or self.bollobas_slack >= 0

    @property
    def one_cross_ok(self) -> bool:
        return self.one_cross_slack is None or self.one_cross_slack >= 0

    @property
    def passed(self) -> bool:
        return self.bollobas_ok and self.one_cross_ok

    def to_json(self) -> dict:
        def opt(x):
            return None if x is None else fraction_json(x)

        return {
            "sigma": fraction_json(self.sigma),
            "cross_clean": self.cross_clean,
            "one_cross_clean": self.one_cross_clean,
            "sizes_at_least_two": self.sizes_at_least_two,
            "bollobas": {
                "applicable": self.bollobas_applicable,
                "bound": "1/1",
                "slack": opt(self.bollobas_slack),
                "ok": self.bollobas_ok,
            },
            "one_cross": {
                "applicable": self.one_cross_applicable,
                "bound": fraction_json(ONE_CROSS_BOUND),
                "slack": opt(self.one_cross_slack),
                "ok": self.one_cross_ok,
            },
            "five_sixths_slack_informational": opt(self.five_sixths_slack),
            "passed": self.passed,
        }


def bound_audit(s: SetPairSystem) -> AuditReport:
    """Check ``sigma(s) <= 1`` for cross intersecting systems and
    ``sigma(s) <= 29/30`` for 1-cross intersecting systems with all sets of
    size at least 2. A failed check on a clean system means a bug."""
    total = sigma(s)
    cross = verify(s, CROSS).clean
    one = verify(s, ONE_CROSS).clean
    big = all(len(p.a) >= 2 and len(p.b) >= 2 for p in s.pairs)
    thm3 = one and big
    return AuditReport(
        sigma=total,
        cross_clean=cross,
        one_cross_clean=one,
        sizes_at_least_two=big,
        bollobas_slack=BOLLOBAS_BOUND - total if cross else None,
        one_cross_slack=ONE_CROSS_BOUND - total if thm3 else None,
        five_sixths_slack=FIVE_SIXTHS - total if thm3 else None,
    )


def write_certificates(outcome: SearchOutcome, directory, tag: str | None = None) -> list[str]:
    """Write witness systems and a summary record for ``outcome``."""
    os.makedirs(directory, exist_ok=True)
    cfg = outcome.config
    tag = tag or f"a{cfg.a}_b{cfg.b}_m{cfg.m}"
    written = []
    for k, w in enumerate(outcome.witnesses):
        path = os.path.join(directory, f"witness_{tag}_{k}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(system_to_json(w), fh, indent=2)
            fh.write("\n")
        written.append(path)
    record = {
        "kind": "exhaustion" if outcome.status == EXHAUSTED else "search-summary",
        "config": cfg.to_json(),
        "status": outcome.status,
        "witness_count": len(outcome.witnesses),
        "stats": outcome.stats.to_json(timing=True),
    }
    path = os.path.join(directory, f"certificate_{tag}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")
    written.append(path)
    return written
