"""k-coloring digraphs with a feedback arc set F of at most k^2 - 1 arcs.

The digraph is k-colorable iff D[V(F)] is (brute-forced on <= 2(k^2 - 1)
vertices).  A coloring of V(F) is lifted to all of D by induction on k:
either some color class absorbs at least 2k-1 arcs of F and is peeled off,
shrinking F below (k-1)^2, or every class is light and V(F) can be
"rainbow" recolored so every arc of F is bichromatic, making color 1 safe
for the entire rest of the digraph.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .core import Coloring, Digraph, induced_subgraph, is_proper_coloring
from .errors import (
    InternalInvariantError,
    NotAFeedbackSet,
    PreconditionViolated,
    TooManyArcs,
)
from .oracle import DEFAULT_BUDGET, FeedbackSet, k_colorable_bruteforce, verify_feedback_set


def _arc_endpoints(f_arcs: Iterable[tuple[int, int]]) -> list[int]:
    verts = set()
    for (u, v) in f_arcs:
        verts.add(u)
        verts.add(v)
    return sorted(verts)


def rainbow_color_fas(
    d: Digraph,
    f_arcs: Iterable[tuple[int, int]],
    k: int,
    c0: Mapping[int, int],
) -> dict[int, int]:
    """Color V(F) so both endpoints of every arc of F get distinct colors.

    Precondition: under `c0` (a proper coloring of D[V(F)]) every color class
    is incident on at most 2k-2 arcs of F.  Then at most one vertex per class
    is incident on k or more arcs of F; those "heavy" vertices get distinct
    colors and everyone else (incidence <= k-1) is colored greedily.
    """
    f_arcs = sorted(set(f_arcs))
    verts = _arc_endpoints(f_arcs)
    if set(c0) != set(verts):
        raise PreconditionViolated("c0 must color exactly V(F)")
    class_incidence: dict[int, int] = {}
    vertex_incidence = {v: 0 for v in verts}
    for (u, v) in f_arcs:
        vertex_incidence[u] += 1
        vertex_incidence[v] += 1
        touched = {c0[u], c0[v]}
        for cls in touched:
            class_incidence[cls] = class_incidence.get(cls, 0) + 1
    if any(cnt > 2 * k - 2 for cnt in class_incidence.values()):
        raise PreconditionViolated("some color class is incident on more than 2k-2 arcs")

    heavy = [v for v in verts if vertex_incidence[v] >= k]
    if len(heavy) > k:
        raise InternalInvariantError("more than k heavy vertices despite light classes")
    colors: dict[int, int] = {}
    for idx, v in enumerate(heavy):
        colors[v] = idx + 1
    neighbors_on_f: dict[int, list[int]] = {v: [] for v in verts}
    for (u, v) in f_arcs:
        neighbors_on_f[u].append(v)
        neighbors_on_f[v].append(u)
    for v in verts:
        if v in colors:
            continue
        banned = {colors[u] for u in neighbors_on_f[v] if u in colors}
        choice = next(c for c in range(1, k + 1) if c not in banned)
        colors[v] = choice
    for (u, v) in f_arcs:
        if colors[u] == colors[v]:
            raise InternalInvariantError(f"arc {(u, v)} stayed monochromatic")
    return colors


def solve_fas(
    d: Digraph,
    f_arcs: Iterable[tuple[int, int]],
    k: int,
    budget: int = DEFAULT_BUDGET,
    stats: dict | None = None,
) -> Coloring | None:
    """Decide k-colorability given a feedback arc set of at most k^2 - 1 arcs.

    Returns None exactly when D[V(F)] is not k-colorable; otherwise a proper
    k-coloring of all of d.
    """
    f_arcs = sorted(set(f_arcs))
    if not verify_feedback_set(d, FeedbackSet("arc", tuple(f_arcs))):
        raise NotAFeedbackSet("given arcs are not a feedback arc set")
    if len(f_arcs) > k * k - 1:
        raise TooManyArcs(f"{len(f_arcs)} arcs exceed k^2 - 1 = {k * k - 1}")
    colors = _solve(d, f_arcs, k, budget, stats, toplevel=True)
    if colors is None:
        return None
    coloring = Coloring(tuple(colors[v] for v in range(d.n)), k)
    if not is_proper_coloring(d, coloring):
        raise InternalInvariantError("feedback-arc-set coloring came out improper")
    return coloring


def _solve(
    d: Digraph,
    f_arcs: list[tuple[int, int]],
    k: int,
    budget: int,
    stats: dict | None,
    toplevel: bool,
) -> dict[int, int] | None:
    if not f_arcs:
        # No arcs to break: the digraph is already acyclic.
        return {v: 1 for v in range(d.n)}
    verts = _arc_endpoints(f_arcs)
    sub, old2new = induced_subgraph(d, verts)
    oracle_coloring = k_colorable_bruteforce(sub, k, budget=budget, stats=stats)
    if oracle_coloring is None:
        if not toplevel:
            raise InternalInvariantError("inner recursion lost colorability")
        return None
    c0 = {v: oracle_coloring.colors[old2new[v]] for v in verts}

    class_incidence = {c: 0 for c in range(1, k + 1)}
    for (u, v) in f_arcs:
        for cls in {c0[u], c0[v]}:
            class_incidence[cls] += 1
    heavy_classes = [c for c in range(1, k + 1) if class_incidence[c] >= 2 * k - 1]

    if heavy_classes:
        cls = heavy_classes[0]
        peeled = {v for v in verts if c0[v] == cls}
        rest = sorted(set(range(d.n)) - peeled)
        rest_graph, r_old2new = induced_subgraph(d, rest)
        survivors = [
            (r_old2new[u], r_old2new[v])
            for (u, v) in f_arcs
            if u not in peeled and v not in peeled
        ]
        if len(survivors) > (k - 1) ** 2 - 1:
            raise InternalInvariantError("peeling left too many arcs for the recursion")
        sub_colors = _solve(rest_graph, sorted(survivors), k - 1, budget, stats, toplevel=False)
        if sub_colors is None:
            raise InternalInvariantError("recursion failed despite restricted coloring existing")
        result = {}
        for v in rest:
            result[v] = sub_colors[r_old2new[v]]
        for v in peeled:
            result[v] = k
        return result

    rainbow = rainbow_color_fas(d, f_arcs, k, c0)
    result = {v: 1 for v in range(d.n)}
    result.update(rainbow)
    return result
