"""Digraph primitives: loopless simple digraphs (digons allowed), colorings, orderings.

Vertices are dense integers 0..n-1.  All file formats are 1-indexed; the
conversion happens at the I/O boundary, never here.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ArityMismatch, CyclicInput, DuplicateArc, OutOfRange, SelfLoop


class Digraph:
    """Immutable digraph on vertices 0..n-1.

    Adjacency is stored in both directions so neighborhoods split by arc
    direction are O(deg).  Instances are safe to share across threads.
    """

    __slots__ = ("n", "arcs", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        seen: set[tuple[int, int]] = set()
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise OutOfRange(f"arc ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise DuplicateArc(f"duplicate arc ({u}, {v})")
            seen.add((u, v))
            out[u].append(v)
            inn[v].append(u)
        self.arcs = frozenset(seen)
        self._out = tuple(tuple(sorted(a)) for a in out)
        self._in = tuple(tuple(sorted(a)) for a in inn)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def has_digon(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs and (v, u) in self.arcs

    def degree(self, v: int) -> int:
        return len(self._out[v]) + len(self._in[v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Coloring:
    """Total map vertex -> color class in 1..k."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")
        for c in self.colors:
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} outside 1..{self.k}")

    def color_of(self, v: int) -> int:
        return self.colors[v]

    def class_vertices(self, c: int) -> list[int]:
        return [v for v, cv in enumerate(self.colors) if cv == c]


@dataclass(frozen=True)
class Ordering:
    """Bijection from a vertex subset onto positions 1..|S|."""

    position: dict[int, int]

    def __post_init__(self):
        ranks = sorted(self.position.values())
        if ranks != list(range(1, len(self.position) + 1)):
            raise ValueError("positions must be a bijection onto 1..|S|")

    def sequence(self) -> list[int]:
        return sorted(self.position, key=self.position.__getitem__)


def _check_vertices(d: Digraph, s: Iterable[int]) -> set[int]:
    s = set(s)
    for v in s:
        if not 0 <= v < d.n:
            raise OutOfRange(f"vertex {v} outside 0..{d.n - 1}")
    return s


def subset_acyclic(d: Digraph, verts: Iterable[int]) -> bool:
    """True iff the subdigraph induced by `verts` is acyclic (Kahn's algorithm)."""
    verts = set(verts)
    indeg = {}
    for v in verts:
        indeg[v] = sum(1 for u in d.in_neighbors(v) if u in verts)
    queue = [v for v in verts if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for w in d.out_neighbors(v):
            if w in verts:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
    return done == len(verts)


def is_acyclic(d: Digraph) -> bool:
    """True iff the digraph has a topological ordering."""
    return subset_acyclic(d, range(d.n))


def topological_order(d: Digraph) -> Ordering:
    """Topological ordering of all vertices; smallest ids come first among ties.

    Raises CyclicInput if a directed cycle exists.
    """
    indeg = [len(d.in_neighbors(v)) for v in range(d.n)]
    heap = [v for v in range(d.n) if indeg[v] == 0]
    heapq.heapify(heap)
    position: dict[int, int] = {}
    while heap:
        v = heapq.heappop(heap)
        position[v] = len(position) + 1
        for w in d.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(position) != d.n:
        raise CyclicInput("digraph has a directed cycle")
    return Ordering(position)


def is_proper_coloring(d: Digraph, c: Coloring) -> bool:
    """True iff every color class induces an acyclic subdigraph."""
    if len(c.colors) != d.n:
        raise ArityMismatch(f"coloring covers {len(c.colors)} of {d.n} vertices")
    classes: dict[int, list[int]] = {}
    for v, col in enumerate(c.colors):
        classes.setdefault(col, []).append(v)
    return all(subset_acyclic(d, vs) for vs in classes.values())


def induced_subgraph(d: Digraph, s: Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Subdigraph induced by `s`, densely relabeled; returns (graph, old->new map).

    New ids follow the sorted order of `s`.
    """
    s = _check_vertices(d, s)
    old2new = {v: i for i, v in enumerate(sorted(s))}
    arcs = [(old2new[u], old2new[v]) for (u, v) in d.arcs if u in s and v in s]
    return Digraph(len(s), arcs), old2new


def remove_arcs(d: Digraph, arcs: Iterable[tuple[int, int]]) -> Digraph:
    """Copy of `d` without the given arcs (vertex ids unchanged)."""
    gone = set(arcs)
    for a in gone:
        if a not in d.arcs:
            raise OutOfRange(f"arc {a} not present")
    return Digraph(d.n, d.arcs - gone)


def closed_neighborhood(d: Digraph, s: Iterable[int]) -> set[int]:
    """`s` plus every vertex with an arc to or from `s`, in either direction."""
    s = _check_vertices(d, s)
    result = set(s)
    for v in s:
        result.update(d.out_neighbors(v))
        result.update(d.in_neighbors(v))
    return result


def max_degree(d: Digraph) -> int:
    """Maximum over vertices of in-degree + out-degree (0 for the empty digraph)."""
    return max((d.degree(v) for v in range(d.n)), default=0)


def is_bidirected_clique(d: Digraph, s: Iterable[int]) -> bool:
    """True iff every unordered pair in `s` is joined by a digon."""
    s = sorted(_check_vertices(d, s))
    return all(d.has_digon(u, v) for i, u in enumerate(s) for v in s[i + 1:])


def underlying_edges(d: Digraph) -> set[frozenset[int]]:
    """Edges of the underlying undirected graph (a digon gives one edge)."""
    return {frozenset((u, v)) for (u, v) in d.arcs}


def partial_is_proper(d: Digraph, colors: Mapping[int, int]) -> bool:
    """True iff no color class of the partial coloring induces a directed cycle."""
    classes: dict[int, list[int]] = {}
    for v, col in colors.items():
        classes.setdefault(col, []).append(v)
    return all(subset_acyclic(d, vs) for vs in classes.values())
