"""Exponential-time ground-truth procedures for desk-scale validation.

Everything here enumerates.  Budgets are node-count limits, not timeouts,
so failures are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping

from .core import Coloring, Digraph, subset_acyclic
from .errors import BudgetExceeded, NotAFeedbackSet, OutOfRange

DEFAULT_BUDGET = 50_000_000

# Soft size guidance; larger inputs are allowed but will likely hit the budget.
SOFT_VERTEX_LIMIT = 20


@dataclass(frozen=True)
class FeedbackSet:
    """A vertex set or arc set whose removal leaves the digraph acyclic."""

    kind: str  # "vertex" | "arc"
    members: tuple

    def __post_init__(self):
        if self.kind not in ("vertex", "arc"):
            raise ValueError(f"unknown feedback set kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.members)


def verify_feedback_set(d: Digraph, fs: FeedbackSet) -> bool:
    """True iff deleting the set's vertices (or arcs) leaves `d` acyclic."""
    if fs.kind == "vertex":
        removed = set(fs.members)
        for v in removed:
            if not 0 <= v < d.n:
                raise OutOfRange(f"vertex {v} outside 0..{d.n - 1}")
        return subset_acyclic(d, set(range(d.n)) - removed)
    gone = set(fs.members)
    for a in gone:
        if a not in d.arcs:
            raise OutOfRange(f"arc {a} not present")
    return _acyclic_without_arcs(d, gone)


def _acyclic_without_arcs(d: Digraph, gone: set[tuple[int, int]]) -> bool:
    indeg = [0] * d.n
    for (u, v) in d.arcs:
        if (u, v) not in gone:
            indeg[v] += 1
    queue = [v for v in range(d.n) if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for w in d.out_neighbors(v):
            if (v, w) not in gone:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return done == d.n


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, amount: int = 1):
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded("enumeration budget exhausted")


def _on_mono_cycle(d: Digraph, colors: list[int], v: int) -> bool:
    """Does v lie on a directed cycle within its color class (colored vertices only)?

    Only cycles through v can be new when v was just colored, so this check
    keeps partial colorings proper incrementally.
    """
    col = colors[v]
    stack = [w for w in d.out_neighbors(v) if colors[w] == col]
    seen: set[int] = set()
    while stack:
        w = stack.pop()
        if w == v:
            return True
        if w in seen:
            continue
        seen.add(w)
        for x in d.out_neighbors(w):
            if colors[x] == col and x not in seen:
                stack.append(x)
    return False


def _coloring_search(
    d: Digraph,
    k: int,
    fixed: Mapping[int, int],
    symmetry_break: bool,
    box: _Budget,
) -> Iterator[Coloring]:
    n = d.n
    colors = [0] * n

    def rec(v: int, max_used: int) -> Iterator[Coloring]:
        if v == n:
            yield Coloring(tuple(colors), k)
            return
        if v in fixed:
            candidates = (fixed[v],)
        elif symmetry_break:
            candidates = range(1, min(k, max_used + 1) + 1)
        else:
            candidates = range(1, k + 1)
        for c in candidates:
            box.spend()
            colors[v] = c
            if not _on_mono_cycle(d, colors, v):
                yield from rec(v + 1, max(max_used, c))
        colors[v] = 0

    yield from rec(0, 0)


def proper_colorings(
    d: Digraph,
    k: int,
    fixed: Mapping[int, int] | None = None,
    budget: int = DEFAULT_BUDGET,
    symmetry_break: bool = False,
) -> Iterator[Coloring]:
    """All proper k-colorings of `d`, in lexicographic order of color vectors.

    `fixed` pins colors of selected vertices.  With `symmetry_break`, vertex i
    may only use colors up to 1 + the maximum color used on 0..i-1, so exactly
    one representative per color-permutation orbit is produced (fixed vertices
    still get their pinned color).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    fixed = dict(fixed or {})
    for v, c in fixed.items():
        if not 1 <= c <= k:
            raise ValueError(f"fixed color {c} outside 1..{k}")
    yield from _coloring_search(d, k, fixed, symmetry_break, _Budget(budget))


def k_colorable_bruteforce(
    d: Digraph,
    k: int,
    budget: int = DEFAULT_BUDGET,
    stats: dict | None = None,
) -> Coloring | None:
    """First (lexicographically least, symmetry-broken) proper k-coloring, or None."""
    if k < 1:
        raise ValueError("k must be >= 1")
    box = _Budget(budget)
    result = None
    for coloring in _coloring_search(d, k, {}, True, box):
        result = coloring
        break
    if stats is not None:
        stats["oracle_nodes"] = stats.get("oracle_nodes", 0) + (budget - box.left)
    return result


def dichromatic_number(d: Digraph, budget: int = DEFAULT_BUDGET) -> int:
    """Least k for which `d` is k-colorable; 0 for the empty digraph."""
    if d.n == 0:
        return 0
    for k in range(1, d.n + 1):
        if k_colorable_bruteforce(d, k, budget=budget) is not None:
            return k
    raise AssertionError("unreachable: every digraph is n-colorable")


def min_dfvs_bruteforce(d: Digraph, budget: int = DEFAULT_BUDGET) -> FeedbackSet:
    """Minimum feedback vertex set by enumeration; lexicographically least among ties."""
    box = _Budget(budget)
    all_vertices = set(range(d.n))
    for size in range(d.n + 1):
        for subset in combinations(range(d.n), size):
            box.spend()
            if subset_acyclic(d, all_vertices - set(subset)):
                return FeedbackSet("vertex", subset)
    raise AssertionError("unreachable: deleting all vertices is always acyclic")


def min_fas_bruteforce(d: Digraph, budget: int = DEFAULT_BUDGET) -> FeedbackSet:
    """Minimum feedback arc set by enumeration over increasing sizes; lexicographic ties."""
    box = _Budget(budget)
    arcs = d.sorted_arcs()
    for size in range(len(arcs) + 1):
        for subset in combinations(arcs, size):
            box.spend()
            if _acyclic_without_arcs(d, set(subset)):
                return FeedbackSet("arc", subset)
    raise AssertionError("unreachable: removing all arcs is always acyclic")


def require_feedback_set(d: Digraph, fs: FeedbackSet):
    """Raise NotAFeedbackSet unless `fs` verifies against `d`."""
    if not verify_feedback_set(d, fs):
        raise NotAFeedbackSet(f"declared {fs.kind} set does not make the digraph acyclic")
