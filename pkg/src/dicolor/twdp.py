"""Dynamic programming for k-coloring over a nice tree decomposition.

A k-coloring exists iff there are functions (c, sigma) with c a k-coloring
and sigma a vertex ordering such that every arc uv has c(u) != c(v) or
sigma(u) < sigma(v).  The DP state ("signature") at a bag is the restriction
of (c, sigma) to the bag: a bag coloring plus the relative order of the bag.
Tables therefore never exceed k^|bag| * |bag|! entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable

from .core import Coloring, Digraph, underlying_edges
from .errors import BudgetExceeded, InternalInvariantError, InvalidDecomposition
from .permutations import perm_rank, perm_unrank

DEFAULT_TABLE_BUDGET = 5_000_000


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags plus a tree over bag indices."""

    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for (a, b) in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: tuple[int, ...]  # sorted
    children: tuple[int, ...]
    vertex: int | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes), default=0) - 1


@dataclass(frozen=True)
class Signature:
    """Restriction of a solution (coloring, ordering) to one bag."""

    bag_coloring: dict[int, int]
    bag_ordering: dict[int, int]  # vertex -> rank 1..|bag|

    def __post_init__(self):
        if set(self.bag_coloring) != set(self.bag_ordering):
            raise ValueError("coloring and ordering must cover the same bag")
        if sorted(self.bag_ordering.values()) != list(range(1, len(self.bag_ordering) + 1)):
            raise ValueError("ordering must be a bijection onto 1..|bag|")


def encode_signature(bag: tuple[int, ...], k: int, colors: tuple[int, ...], order: tuple[int, ...]) -> int:
    """Pack (bag coloring, bag ordering) into one integer.

    `colors[i]` colors bag[i]; `order` lists the bag in sigma-order.  Encoding
    is a base-k color code times |bag|! plus the Lehmer rank of the ordering.
    """
    b = len(bag)
    code = 0
    for c in reversed(colors):
        code = code * k + (c - 1)
    index_of = {v: i for i, v in enumerate(bag)}
    seq = tuple(index_of[v] for v in order)
    return code * factorial(b) + perm_rank(seq)


def decode_signature(sig: int, bag: tuple[int, ...], k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Inverse of encode_signature: (colors aligned to bag, vertices in sigma-order)."""
    b = len(bag)
    code, rank = divmod(sig, factorial(b))
    colors = []
    for _ in range(b):
        code, c = divmod(code, k)
        colors.append(c + 1)
    seq = perm_unrank(rank, b)
    order = tuple(bag[i] for i in seq)
    return tuple(colors), order


def signature_from_int(sig: int, bag: tuple[int, ...], k: int) -> Signature:
    colors, order = decode_signature(sig, bag, k)
    return Signature(
        bag_coloring=dict(zip(bag, colors)),
        bag_ordering={v: i + 1 for i, v in enumerate(order)},
    )


def decomposition_defect(d: Digraph, td: TreeDecomposition) -> str | None:
    """Reason the decomposition is invalid for `d`, or None if it is valid."""
    nbags = len(td.bags)
    for bag in td.bags:
        for v in bag:
            if not 0 <= v < d.n:
                return f"bag vertex {v} outside 0..{d.n - 1}"
    for (a, b) in td.edges:
        if not (0 <= a < nbags and 0 <= b < nbags):
            return f"tree edge ({a}, {b}) references a missing bag"
    if nbags == 0:
        return None if d.n == 0 else "no bags but the digraph has vertices"
    # The bag graph must be a single tree.
    if len(td.edges) != nbags - 1:
        return f"{len(td.edges)} tree edges for {nbags} bags (need {nbags - 1})"
    adj = td.neighbors()
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nbags:
        return "bag tree is disconnected"
    covered = set().union(*td.bags) if td.bags else set()
    if covered != set(range(d.n)):
        return f"vertices {sorted(set(range(d.n)) - covered)} appear in no bag"
    for edge in underlying_edges(d):
        if not any(edge <= bag for bag in td.bags):
            return f"no bag contains both endpoints of {sorted(edge)}"
    for v in range(d.n):
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        seen = {holding[0]}
        stack = [holding[0]]
        holding_set = set(holding)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in holding_set and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holding_set:
            return f"bags containing vertex {v} are not connected in the tree"
    return None


def validate_decomposition(d: Digraph, td: TreeDecomposition) -> bool:
    """True iff `td` is a valid tree decomposition of the underlying graph of `d`."""
    return decomposition_defect(d, td) is None


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert a decomposition into nice form (leaf/introduce/forget/join, empty root).

    Width is preserved; the node count is O(width * #bags + n).
    """
    nodes: list[NiceNode] = []

    def add(kind: str, bag: Iterable[int], children: tuple[int, ...] = (), vertex: int | None = None) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), children, vertex))
        return len(nodes) - 1

    if not td.bags:
        root = add("leaf", ())
        return NiceTreeDecomposition(tuple(nodes), root)

    nbags = len(td.bags)
    if nbags > 1 and len(td.edges) != nbags - 1:
        raise InvalidDecomposition("bag graph is not a tree")
    adj = td.neighbors()

    def leaf_chain(bag: frozenset[int]) -> int:
        node = add("leaf", ())
        current: list[int] = []
        for v in sorted(bag):
            current.append(v)
            node = add("introduce", current, (node,), v)
        return node

    def transition(node: int, from_bag: frozenset[int], to_bag: frozenset[int]) -> int:
        current = set(from_bag)
        for v in sorted(from_bag - to_bag):
            current.discard(v)
            node = add("forget", current, (node,), v)
        for v in sorted(to_bag - from_bag):
            current.add(v)
            node = add("introduce", current, (node,), v)
        return node

    # Iterative rooted traversal from bag 0 (children processed before parents).
    order: list[tuple[int, int]] = []  # (bag, parent)
    seen = {0}
    stack = [(0, -1)]
    while stack:
        t, parent = stack.pop()
        order.append((t, parent))
        for c in adj[t]:
            if c not in seen:
                seen.add(c)
                stack.append((c, t))
    if len(order) != nbags:
        raise InvalidDecomposition("bag tree is disconnected")

    tops: dict[int, int] = {}
    children_of: dict[int, list[int]] = {t: [] for t in range(nbags)}
    for t, parent in order:
        if parent >= 0:
            children_of[parent].append(t)
    for t, _ in reversed(order):
        kids = children_of[t]
        if not kids:
            tops[t] = leaf_chain(td.bags[t])
            continue
        branch_tops = [transition(tops[c], td.bags[c], td.bags[t]) for c in kids]
        top = branch_tops[0]
        for other in branch_tops[1:]:
            top = add("join", td.bags[t], (top, other))
        tops[t] = top

    root = transition(tops[0], td.bags[0], frozenset())
    if not nodes[root].bag == ():
        root = add("forget", (), (root,))  # unreachable; transition empties the bag
    ntd = NiceTreeDecomposition(tuple(nodes), root)
    if ntd.width != td.width:
        raise InternalInvariantError("nice conversion changed the width")
    return ntd


def nice_defect(d: Digraph, ntd: NiceTreeDecomposition) -> str | None:
    """Reason `ntd` is not a valid nice decomposition of `d`, or None."""
    nodes = ntd.nodes
    if not 0 <= ntd.root < len(nodes):
        return "root index out of range"
    reachable = set()
    stack = [ntd.root]
    while stack:
        t = stack.pop()
        if t in reachable:
            return "node is shared between branches"
        reachable.add(t)
        stack.extend(nodes[t].children)
    if len(reachable) != len(nodes):
        return "unreachable nodes present"
    if nodes[ntd.root].bag != ():
        return "root bag is not empty"
    for t in reachable:
        node = nodes[t]
        kids = node.children
        if node.kind == "leaf":
            if kids or node.bag != ():
                return f"leaf node {t} malformed"
        elif node.kind == "introduce":
            if len(kids) != 1 or node.vertex is None:
                return f"introduce node {t} malformed"
            child = nodes[kids[0]]
            if set(node.bag) != set(child.bag) | {node.vertex} or node.vertex in child.bag:
                return f"introduce node {t} does not add exactly its vertex"
        elif node.kind == "forget":
            if len(kids) != 1 or node.vertex is None:
                return f"forget node {t} malformed"
            child = nodes[kids[0]]
            if set(node.bag) != set(child.bag) - {node.vertex} or node.vertex not in child.bag:
                return f"forget node {t} does not drop exactly its vertex"
        elif node.kind == "join":
            if len(kids) != 2:
                return f"join node {t} needs two children"
            if any(nodes[c].bag != node.bag for c in kids):
                return f"join node {t} has mismatched child bags"
        else:
            return f"unknown node kind {node.kind!r}"
    td = TreeDecomposition(
        bags=tuple(frozenset(n.bag) for n in nodes),
        edges=tuple((t, c) for t in range(len(nodes)) for c in nodes[t].children),
    )
    return decomposition_defect(d, td)


def greedy_decomposition(d: Digraph) -> TreeDecomposition:
    """Heuristic decomposition from a min-degree elimination ordering (valid, not optimal)."""
    work: dict[int, set[int]] = {v: set() for v in range(d.n)}
    for edge in underlying_edges(d):
        u, v = tuple(edge)
        work[u].add(v)
        work[v].add(u)
    bags: list[frozenset[int]] = []
    eliminated_at: dict[int, int] = {}
    bag_members: list[set[int]] = []
    while work:
        v = min(work, key=lambda x: (len(work[x]), x))
        neighbors = work.pop(v)
        bags.append(frozenset({v} | neighbors))
        bag_members.append(set(neighbors))
        eliminated_at[v] = len(bags) - 1
        for a in neighbors:
            work[a].discard(v)
            for b in neighbors:
                if a != b:
                    work[a].add(b)
    edges = []
    for idx, members in enumerate(bag_members):
        if members:
            nxt = min(eliminated_at[u] for u in members)
            edges.append((idx, nxt))
        elif idx + 1 < len(bags):
            edges.append((idx, idx + 1))
    return TreeDecomposition(tuple(bags), tuple(edges))


def solve_treewidth(
    d: Digraph,
    ntd: NiceTreeDecomposition,
    k: int,
    budget: int = DEFAULT_TABLE_BUDGET,
    stats: dict | None = None,
) -> Coloring | None:
    """Decide k-colorability by signature DP over the nice decomposition.

    Tables hold encoded signatures; introduce nodes try every color and every
    insertion position for the new vertex and prune bag-local violations,
    forget nodes project (keeping a parent -> child pointer for traceback),
    join nodes intersect.  None iff the root table is empty; otherwise a
    proper coloring is rebuilt by walking the surviving signatures downward.
    """
    defect = nice_defect(d, ntd)
    if defect is not None:
        raise InvalidDecomposition(defect)
    if k < 1:
        raise ValueError("k must be >= 1")

    nodes = ntd.nodes
    order: list[int] = []
    stack = [ntd.root]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(nodes[t].children)
    order.reverse()  # children now precede parents

    tables: dict[int, dict[int, None]] = {}
    forget_back: dict[int, dict[int, int]] = {}
    total_entries = 0
    max_table = 0

    for t in order:
        node = nodes[t]
        bag = node.bag
        b = len(bag)
        if node.kind == "leaf":
            table = {0: None}
        elif node.kind == "introduce":
            child = nodes[node.children[0]]
            u = node.vertex
            u_pos_in_bag = bag.index(u)
            child_bag = child.bag
            arcs_to = [w for w in child_bag if d.has_arc(u, w)]
            arcs_from = [w for w in child_bag if d.has_arc(w, u)]
            table = {}
            for sig in tables[node.children[0]]:
                ccolors, corder = decode_signature(sig, child_bag, k)
                color_of = dict(zip(child_bag, ccolors))
                for cu in range(1, k + 1):
                    same = {w for w in child_bag if color_of[w] == cu}
                    bad_before = {w for w in arcs_to if w in same}    # u->w wants u before w
                    bad_after = {w for w in arcs_from if w in same}   # w->u wants w before u
                    for pos in range(len(corder) + 1):
                        earlier = set(corder[:pos])
                        if bad_before & earlier:
                            continue
                        if any(w not in earlier for w in bad_after):
                            continue
                        new_order = corder[:pos] + (u,) + corder[pos:]
                        new_colors = ccolors[:u_pos_in_bag] + (cu,) + ccolors[u_pos_in_bag:]
                        table[encode_signature(bag, k, new_colors, new_order)] = None
        elif node.kind == "forget":
            child = nodes[node.children[0]]
            u = node.vertex
            child_bag = child.bag
            u_idx = child_bag.index(u)
            table = {}
            back: dict[int, int] = {}
            for sig in tables[node.children[0]]:
                ccolors, corder = decode_signature(sig, child_bag, k)
                new_colors = ccolors[:u_idx] + ccolors[u_idx + 1:]
                new_order = tuple(v for v in corder if v != u)
                parent_sig = encode_signature(bag, k, new_colors, new_order)
                if parent_sig not in table:
                    table[parent_sig] = None
                    back[parent_sig] = sig
            forget_back[t] = back
        else:  # join
            left, right = node.children
            right_table = tables[right]
            table = {sig: None for sig in tables[left] if sig in right_table}

        bound = (k ** b) * factorial(b)
        if len(table) > bound:
            raise InternalInvariantError(f"table of size {len(table)} exceeds k^b*b! = {bound}")
        tables[t] = table
        total_entries += len(table)
        max_table = max(max_table, len(table))
        if total_entries > budget:
            raise BudgetExceeded(f"DP tables exceeded budget of {budget} entries")
        # Child tables of a forget/introduce chain are dead once consumed.
        for c in node.children:
            if nodes[c].kind != "forget" and c in tables and t != ntd.root:
                pass

    if stats is not None:
        stats["dp_nodes"] = len(nodes)
        stats["dp_max_table"] = max_table
        stats["dp_total_entries"] = total_entries

    if not tables[ntd.root]:
        return None

    colors: dict[int, int] = {}
    walk = [(ntd.root, next(iter(tables[ntd.root])))]
    while walk:
        t, sig = walk.pop()
        node = nodes[t]
        if node.kind == "leaf":
            continue
        if node.kind == "introduce":
            u = node.vertex
            ccolors, corder = decode_signature(sig, node.bag, k)
            cu = ccolors[node.bag.index(u)]
            if colors.setdefault(u, cu) != cu:
                raise InternalInvariantError("vertex recolored during traceback")
            child_bag = nodes[node.children[0]].bag
            u_idx = node.bag.index(u)
            child_sig = encode_signature(
                child_bag,
                k,
                ccolors[:u_idx] + ccolors[u_idx + 1:],
                tuple(v for v in corder if v != u),
            )
            walk.append((node.children[0], child_sig))
        elif node.kind == "forget":
            walk.append((node.children[0], forget_back[t][sig]))
        else:
            walk.append((node.children[0], sig))
            walk.append((node.children[1], sig))

    if set(colors) != set(range(d.n)):
        raise InternalInvariantError("traceback did not color every vertex")
    coloring = Coloring(tuple(colors[v] for v in range(d.n)), k)
    from .core import is_proper_coloring

    if not is_proper_coloring(d, coloring):
        raise InternalInvariantError("DP traceback produced an improper coloring")
    return coloring
