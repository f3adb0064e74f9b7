"""k-coloring digraphs that come with a feedback vertex set F.

Three regimes:

* |F| <= k-1: always colorable (distinct colors on F, one color elsewhere).
* |F| = k but F is not a bidirected clique: always colorable (a digon-free
  pair shares a color).
* |F| = k, F a bidirected clique, max degree <= 4k-3: colorable iff the
  closed neighborhood D[N[F]] is, decided by brute force on <= k(4k-2)
  vertices.  A found coloring of D[N[F]] is massaged, by the cross-arc
  recoloring below, until some color i has only in- or only out-neighbors
  of its palette vertex, at which point everything outside N[F] can take
  color i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import (
    Coloring,
    Digraph,
    closed_neighborhood,
    induced_subgraph,
    is_bidirected_clique,
    is_proper_coloring,
    max_degree,
    partial_is_proper,
)
from .errors import (
    DegreeTooHigh,
    InternalInvariantError,
    NotAFeedbackSet,
    PreconditionViolated,
    TooLarge,
    WrongFvsSize,
)
from .oracle import DEFAULT_BUDGET, FeedbackSet, k_colorable_bruteforce, verify_feedback_set


@dataclass(frozen=True)
class FvsNeighborhoodProfile:
    """How N[F] \\ F attaches to the palette F = (v_1, ..., v_k) under a coloring.

    v_in[i-1] holds the color-i vertices with an arc into v_i, v_out[i-1]
    those with an arc out of v_i.  cross_arcs[(i, j)] lists the arcs between
    {v_i, v_j} and the four sets whose endpoints have distinct colors.
    """

    fvs: tuple[int, ...]
    v_in: tuple[frozenset[int], ...]
    v_out: tuple[frozenset[int], ...]
    cross_arcs: dict[tuple[int, int], tuple[tuple[int, int], ...]]

    @property
    def k(self) -> int:
        return len(self.fvs)


def _require_feedback_vertices(d: Digraph, f: Iterable[int]) -> tuple[int, ...]:
    f = tuple(sorted(set(f)))
    if not verify_feedback_set(d, FeedbackSet("vertex", f)):
        raise NotAFeedbackSet("given vertices are not a feedback vertex set")
    return f


def color_small_fvs(d: Digraph, f: Iterable[int], k: int) -> Coloring:
    """k-coloring when |F| <= k-1: distinct colors on F, one spare color elsewhere."""
    f = _require_feedback_vertices(d, f)
    if len(f) >= k:
        raise TooLarge(f"feedback set of size {len(f)} needs k >= {len(f) + 1}")
    colors = [len(f) + 1] * d.n
    for i, v in enumerate(f):
        colors[v] = i + 1
    return Coloring(tuple(colors), k)


def color_nonclique_fvs(d: Digraph, f: Iterable[int], k: int) -> Coloring | None:
    """k-coloring when |F| = k and F misses a digon; None if F is a bidirected clique.

    The first digon-free pair (lexicographically) shares color 1, the rest of
    F takes colors 2..k-1, and everything else color k.
    """
    f = _require_feedback_vertices(d, f)
    if len(f) != k:
        raise WrongFvsSize(f"need |F| = k, got {len(f)} != {k}")
    pair = None
    for a in range(len(f)):
        for b in range(a + 1, len(f)):
            if not d.has_digon(f[a], f[b]):
                pair = (f[a], f[b])
                break
        if pair:
            break
    if pair is None:
        return None
    colors = [k] * d.n
    colors[pair[0]] = colors[pair[1]] = 1
    next_color = 2
    for v in f:
        if v not in pair:
            colors[v] = next_color
            next_color += 1
    coloring = Coloring(tuple(colors), k)
    if not is_proper_coloring(d, coloring):
        raise InternalInvariantError("non-clique FVS coloring came out improper")
    return coloring


def build_profile(
    d: Digraph, colors: Mapping[int, int], fvs: tuple[int, ...]
) -> FvsNeighborhoodProfile:
    """Profile of a proper coloring of D[N[F]] normalized so colors[fvs[i-1]] = i."""
    k = len(fvs)
    v_in = [set() for _ in range(k)]
    v_out = [set() for _ in range(k)]
    fset = set(fvs)
    for i, vi in enumerate(fvs, start=1):
        for u in d.in_neighbors(vi):
            if u not in fset and colors.get(u) == i:
                v_in[i - 1].add(u)
        for u in d.out_neighbors(vi):
            if u not in fset and colors.get(u) == i:
                v_out[i - 1].add(u)
    for i in range(k):
        if v_in[i] & v_out[i]:
            raise InternalInvariantError("V_in and V_out overlap: coloring has a mono digon")
    cross: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            sets_j = v_in[j - 1] | v_out[j - 1]
            sets_i = v_in[i - 1] | v_out[i - 1]
            arcs = []
            for p, others in ((fvs[i - 1], sets_j), (fvs[j - 1], sets_i)):
                for u in others:
                    if d.has_arc(u, p):
                        arcs.append((u, p))
                    if d.has_arc(p, u):
                        arcs.append((p, u))
            cross[(i, j)] = tuple(sorted(arcs))
    return FvsNeighborhoodProfile(
        fvs=fvs,
        v_in=tuple(frozenset(s) for s in v_in),
        v_out=tuple(frozenset(s) for s in v_out),
        cross_arcs=cross,
    )


def fill_with_color(
    d: Digraph, c: Mapping[int, int], f: Iterable[int], i: int, k: int
) -> Coloring:
    """Extend a proper coloring of D[N[F]] by giving color i to all of V \\ N[F].

    Requires that under `c` the palette vertex of color i has no same-colored
    in-neighbors or no same-colored out-neighbors; then no monochromatic cycle
    can pass through it after the fill.
    """
    f = tuple(sorted(set(f)))
    nf = closed_neighborhood(d, f)
    if set(c) != nf:
        raise PreconditionViolated("coloring domain must be exactly N[F]")
    profile = build_profile(d, c, f)
    if profile.v_in[i - 1] and profile.v_out[i - 1]:
        raise PreconditionViolated(
            f"color {i}: both in- and out-neighbor sets of its palette vertex are non-empty"
        )
    colors = [c.get(v, i) for v in range(d.n)]
    coloring = Coloring(tuple(colors), k)
    if not is_proper_coloring(d, coloring):
        raise InternalInvariantError(
            "fill created a monochromatic cycle; recoloring outside D[N[F]] misbehaved"
        )
    return coloring


def _pad_cross_arcs(
    profile: FvsNeighborhoodProfile,
    i: int,
    j: int,
) -> list[tuple[int, int, str]]:
    """Cross arcs as (palette vertex, other endpoint, direction) records, padded to 3.

    Padding invents absent cross arcs; an invented arc only makes the case
    analysis more conservative, never wrong, because validity of the final
    coloring is judged against real arcs only.
    """
    vi, vj = profile.fvs[i - 1], profile.fvs[j - 1]
    records = []
    for (a, b) in profile.cross_arcs[(min(i, j), max(i, j))]:
        if a in (vi, vj):
            records.append((a, b, "from_palette"))
        else:
            records.append((b, a, "to_palette"))
    if len(records) > 3:
        raise PreconditionViolated(f"|cross arcs| = {len(records)} > 3 for pair ({i}, {j})")
    if len(records) < 3:
        existing = {(p, u, dr) for (p, u, dr) in records}
        candidates = []
        for p, others in (
            (vi, sorted(profile.v_in[j - 1] | profile.v_out[j - 1])),
            (vj, sorted(profile.v_in[i - 1] | profile.v_out[i - 1])),
        ):
            for u in others:
                for dr in ("to_palette", "from_palette"):
                    if (p, u, dr) not in existing:
                        candidates.append((p, u, dr))
        for cand in candidates:
            records.append(cand)
            if len(records) == 3:
                break
    if len(records) != 3:
        raise InternalInvariantError("could not pad cross arcs to 3: some set is empty")
    return records


def recolor_cross_pair(
    profile: FvsNeighborhoodProfile,
    c: Mapping[int, int],
    i: int,
    j: int,
    d: Digraph,
) -> dict[int, int]:
    """Recolor the four sets of colors i, j so one of them empties out.

    Requires |cross arcs| <= 3 for the pair.  Follows a four-way case split on
    where the (padded) cross arcs sit; afterwards the palette vertex of i or j
    has same-colored neighbors in only one direction, so `fill_with_color`
    applies.  The result is verified proper against the real arcs of `d`.
    """
    records = _pad_cross_arcs(profile, i, j)

    vi = profile.fvs[i - 1]
    in_i, out_i = profile.v_in[i - 1], profile.v_out[i - 1]
    in_j, out_j = profile.v_in[j - 1], profile.v_out[j - 1]

    # Work with the palette vertex carrying more cross arcs as "v_i".
    count_i = sum(1 for (p, _, _) in records if p == vi)
    if count_i < 3 - count_i:
        i, j = j, i
        vi = profile.fvs[i - 1]
        in_i, out_i = profile.v_in[i - 1], profile.v_out[i - 1]
        in_j, out_j = profile.v_in[j - 1], profile.v_out[j - 1]
    vj = profile.fvs[j - 1]

    on_vi = [(p, u, dr) for (p, u, dr) in records if p == vi]
    on_vj = [(p, u, dr) for (p, u, dr) in records if p == vj]

    def arcs_touching(pal: int, target: frozenset[int]) -> int:
        return sum(1 for (p, u, _) in records if p == pal and u in target)

    new = dict(c)

    def paint(vertices: Iterable[int], color: int):
        for v in vertices:
            new[v] = color

    if len(on_vi) == 3:
        # All cross arcs sit on v_i: flip the V_j set it barely touches to i,
        # and push both V_i sets to j.
        chosen = in_j if arcs_touching(vi, in_j) <= 1 else out_j
        paint(chosen, i)
        paint(in_i | out_i, j)
    else:
        # Exactly two arcs on v_i, one on v_j.
        untouched_j = [s for s in (in_j, out_j) if arcs_touching(vi, s) == 0]
        if untouched_j:
            # Some V_j set has no arc to v_i: swap it to i, and swap the V_i
            # set v_j does not touch to j.
            paint(untouched_j[0], i)
            free_i = in_i if arcs_touching(vj, in_i) == 0 else out_i
            paint(free_i, j)
        else:
            dirs = {dr for (_, _, dr) in on_vi}
            if len(dirs) == 1:
                # Both v_i arcs point the same way: swap the i and j sets wholesale.
                paint(in_i | out_i, j)
                paint(in_j | out_j, i)
            else:
                # Mixed directions, one arc into each V_j set.  Recolor the V_i
                # set v_j misses, then the V_j set that keeps v_i one-directional.
                if arcs_touching(vj, in_i) == 0:
                    paint(in_i, j)
                    target = next(u for (p, u, dr) in on_vi if dr == "from_palette")
                    chosen = in_j if target in in_j else out_j
                else:
                    paint(out_i, j)
                    target = next(u for (p, u, dr) in on_vi if dr == "to_palette")
                    chosen = in_j if target in in_j else out_j
                paint(chosen, i)

    if not partial_is_proper(d, new):
        raise InternalInvariantError("cross-pair recoloring produced a monochromatic cycle")
    return new


def solve_fvs_degree(
    d: Digraph,
    f: Iterable[int],
    k: int,
    budget: int = DEFAULT_BUDGET,
    stats: dict | None = None,
) -> Coloring | None:
    """Decide k-colorability given a feedback vertex set of size k and degree <= 4k-3.

    Returns None exactly when D[N[F]] is not k-colorable; otherwise a proper
    k-coloring of all of d.
    """
    f = _require_feedback_vertices(d, f)
    if len(f) != k:
        raise WrongFvsSize(f"need |F| = k, got {len(f)} != {k}")
    if max_degree(d) > 4 * k - 3:
        raise DegreeTooHigh(f"max degree {max_degree(d)} exceeds {4 * k - 3}")

    if not is_bidirected_clique(d, f):
        coloring = color_nonclique_fvs(d, f, k)
        if stats is not None:
            stats["strategy_detail"] = "nonclique_shortcut"
        return coloring

    nf = closed_neighborhood(d, f)
    sub, old2new = induced_subgraph(d, nf)
    oracle_coloring = k_colorable_bruteforce(sub, k, budget=budget, stats=stats)
    if oracle_coloring is None:
        return None

    colors = {v: oracle_coloring.colors[old2new[v]] for v in nf}
    # Permute colors so the i-th palette vertex has color i; the clique makes
    # palette colors pairwise distinct, so this is a bijection.
    perm = {colors[v]: idx + 1 for idx, v in enumerate(f)}
    unused_sources = sorted(set(range(1, k + 1)) - set(perm))
    unused_targets = [t for t in range(1, k + 1) if t not in perm.values()]
    perm.update(zip(unused_sources, unused_targets))
    colors = {v: perm[cv] for v, cv in colors.items()}

    profile = build_profile(d, colors, f)
    empty = _first_empty_color(profile)
    if empty is None:
        candidates = [
            (i, j)
            for (i, j), arcs in sorted(profile.cross_arcs.items())
            if len(arcs) <= 3
        ]
        if not candidates:
            # The degree-sum count guarantees a light pair whenever all 2k sets
            # are non-empty and F is a bidirected clique.
            raise InternalInvariantError("no cross-arc pair with <= 3 arcs exists")
        i, j = candidates[0]
        colors = recolor_cross_pair(profile, colors, i, j, d)
        profile = build_profile(d, colors, f)
        empty = _first_empty_color(profile, restrict=(i, j))
        if empty is None:
            raise InternalInvariantError("recoloring did not empty a neighbor set")
    return fill_with_color(d, colors, f, empty, k)


def _first_empty_color(
    profile: FvsNeighborhoodProfile, restrict: tuple[int, int] | None = None
) -> int | None:
    colors = restrict if restrict is not None else range(1, profile.k + 1)
    for t in sorted(colors):
        if not profile.v_in[t - 1] or not profile.v_out[t - 1]:
            return t
    return None
