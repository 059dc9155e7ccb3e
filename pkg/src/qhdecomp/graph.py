"""Bounded-degree simple graphs and elementary operations on them.

Graphs are immutable after construction: vertices are 0-based contiguous
ids, adjacency is stored as sorted tuples, and every operation returns a
new object.  All ratios are exact ``fractions.Fraction`` values.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DegreeExceededError,
    DuplicateEdgeError,
    FormatError,
    SelfLoopError,
    VertexSetMismatchError,
)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a certified degree bound.

    ``adjacency[v]`` is the sorted tuple of neighbors of ``v``; the degree
    bound is an upper certificate, not necessarily attained.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    degree_bound: int

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (u, v) with u < v, in ascending lexicographic order."""
        for u in range(self.n):
            for v in self.adjacency[u]:
                if v > u:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        lo, hi = 0, len(nbrs)
        while lo < hi:
            mid = (lo + hi) // 2
            if nbrs[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(nbrs) and nbrs[lo] == v


def validate(edges: Iterable[tuple[int, int]], n: int, d: int) -> Graph:
    """Build a Graph from a raw edge list, checking simplicity and degrees.

    Raises SelfLoopError, DuplicateEdgeError, or DegreeExceededError; also
    rejects vertex ids outside [0, n).
    """
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"edge ({u},{v}) outside vertex range [0,{n})")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if v in adj[u]:
            raise DuplicateEdgeError(f"duplicate edge ({u},{v})")
        adj[u].add(v)
        adj[v].add(u)
    for v in range(n):
        if len(adj[v]) > d:
            raise DegreeExceededError(v, len(adj[v]), d)
    return Graph(n, tuple(tuple(sorted(s)) for s in adj), d)


def from_adjacency(adjacency: Sequence[Sequence[int]], d: int) -> Graph:
    """Trusted constructor for internally-built adjacency lists."""
    return Graph(len(adjacency), tuple(tuple(sorted(a)) for a in adjacency), d)


def spanned_subgraph(g: Graph, subset: Sequence[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``subset``, re-indexed contiguously.

    Returns the subgraph and the old->new index map.  The empty subset
    yields the empty graph.
    """
    members = sorted(set(subset))
    if members and (members[0] < 0 or members[-1] >= g.n):
        raise VertexSetMismatchError("subset vertex out of range")
    index = {old: new for new, old in enumerate(members)}
    adj: list[list[int]] = [[] for _ in members]
    for old in members:
        new = index[old]
        for w in g.adjacency[old]:
            if w in index:
                adj[new].append(index[w])
    return from_adjacency(adj, g.degree_bound), index


def boundary_edge_count(g: Graph, subset: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``subset``."""
    inside = set(subset)
    count = 0
    for v in inside:
        for w in g.adjacency[v]:
            if w not in inside:
                count += 1
    return count


def connected_components(g: Graph) -> list[list[int]]:
    """Maximal connected vertex sets, ordered by smallest contained id."""
    seen = [False] * g.n
    components = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        components.append(sorted(comp))
    return components


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def square_graph(g: Graph) -> Graph:
    """Graph joining distinct vertices at distance 1 or 2 in ``g``.

    The returned degree bound is d^2: each vertex has at most d neighbors
    and at most d(d-1) vertices at distance exactly 2.
    """
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for v in range(g.n):
        for w in g.adjacency[v]:
            adj[v].add(w)
            for x in g.adjacency[w]:
                if x != v:
                    adj[v].add(x)
    return from_adjacency([sorted(s) for s in adj], g.degree_bound ** 2)


def edit_distance(g: Graph, h: Graph) -> Fraction:
    """|E(g) symmetric-difference E(h)| / n for graphs on the same vertex set."""
    if g.n != h.n:
        raise VertexSetMismatchError(f"vertex counts differ: {g.n} vs {h.n}")
    if g.n == 0:
        return Fraction(0)
    diff = 0
    for v in range(g.n):
        a, b = set(g.adjacency[v]), set(h.adjacency[v])
        diff += len(a ^ b)
    return Fraction(diff // 2, g.n)


def bfs_distances(g: Graph, source: int, cutoff: int | None = None) -> dict[int, int]:
    """Distances from ``source`` up to ``cutoff`` (inclusive); whole component if None."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if cutoff is not None and dv >= cutoff:
            continue
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = dv + 1
                queue.append(w)
    return dist


def delete_edges(g: Graph, edges: Iterable[tuple[int, int]]) -> Graph:
    """Copy of ``g`` with the given edges removed (absent edges ignored)."""
    doomed = {(min(u, v), max(u, v)) for u, v in edges}
    adj = [
        [w for w in g.adjacency[v] if (min(v, w), max(v, w)) not in doomed]
        for v in range(g.n)
    ]
    return from_adjacency(adj, g.degree_bound)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Image of ``g`` under the permutation old-id -> perm[old-id]."""
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for v in range(g.n):
        adj[perm[v]] = sorted(perm[w] for w in g.adjacency[v])
    return from_adjacency(adj, g.degree_bound)


# Edge-list text format: first line "n d", then one "u v" pair per line in
# ascending lexicographic order, 0-based ids, newline-terminated ASCII.

def to_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.degree_bound}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty edge-list document")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"bad header line: {lines[0]!r}")
    n, d = int(head[0]), int(head[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise FormatError(f"bad edge line: {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return validate(edges, n, d)
