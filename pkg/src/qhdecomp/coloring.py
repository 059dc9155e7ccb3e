"""Proper edge colorings via the square graph, and Bernoulli vertex labels.

A proper vertex coloring of the square graph (vertices adjacent when at
distance 1 or 2) induces a proper edge coloring of the original graph:
incident edges share a vertex, so their far endpoints are square-adjacent
and carry different colors, making the color pairs distinct.  Greedy
coloring in vertex-id order needs at most d^2 + 1 colors, hence at most
C(d^2+1, 2) edge colors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from random import Random

from .errors import ImproperColoringError
from .graph import Graph, square_graph


@dataclass(frozen=True)
class VertexColoring:
    """Colors in 1..palette, proper on the declared host graph."""

    n: int
    colors: tuple[int, ...]
    palette: int


@dataclass(frozen=True)
class EdgeColoring:
    """Edge -> unordered endpoint-color pair {i, j}, i < j, encoded as a
    1-based index into the lexicographic pair enumeration."""

    colors: dict[tuple[int, int], int]
    palette: int
    pair_of: dict[int, tuple[int, int]]


@dataclass(frozen=True)
class BLabels:
    """Per-vertex bit strings of uniform width, reproducible from seed."""

    width: int
    values: tuple[int, ...]
    seed: int


def greedy_square_coloring(g: Graph) -> VertexColoring:
    """Proper coloring of square_graph(g): ascending ids, least free color."""
    sq = square_graph(g)
    colors = [0] * g.n
    for v in range(g.n):
        taken = {colors[w] for w in sq.adjacency[v] if w < v}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    return VertexColoring(g.n, tuple(colors), g.degree_bound ** 2 + 1)


def is_proper_vertex_coloring(g: Graph, vc: VertexColoring) -> bool:
    return all(vc.colors[u] != vc.colors[v] for u, v in g.edges())


def pair_index(i: int, j: int, palette: int) -> int:
    """1-based index of the pair {i, j} (i < j) among all palette pairs,
    lexicographic by (i, j)."""
    if not 1 <= i < j <= palette:
        raise ValueError(f"bad color pair ({i},{j}) for palette {palette}")
    return comb(palette, 2) - comb(palette - i + 1, 2) + (j - i)


def edge_coloring_from_vertex(g: Graph, vc: VertexColoring) -> EdgeColoring:
    """Color each edge by the unordered pair of endpoint colors."""
    if vc.n != g.n:
        raise ImproperColoringError("coloring host size mismatch")
    if not is_proper_vertex_coloring(square_graph(g), vc):
        raise ImproperColoringError("input coloring not proper on the square graph")
    colors: dict[tuple[int, int], int] = {}
    pair_of: dict[int, tuple[int, int]] = {}
    for u, v in g.edges():
        a, b = sorted((vc.colors[u], vc.colors[v]))
        idx = pair_index(a, b, vc.palette)
        colors[(u, v)] = idx
        pair_of[idx] = (a, b)
    return EdgeColoring(colors, comb(vc.palette, 2), pair_of)


def is_proper_edge_coloring(g: Graph, ec: EdgeColoring) -> bool:
    for v in range(g.n):
        seen = set()
        for w in g.adjacency[v]:
            c = ec.colors[(min(v, w), max(v, w))]
            if c in seen:
                return False
            seen.add(c)
    return True


def color_edges(g: Graph) -> tuple[VertexColoring, EdgeColoring]:
    """The full square-graph construction in one call."""
    vc = greedy_square_coloring(g)
    return vc, edge_coloring_from_vertex(g, vc)


def random_b_labels(g: Graph, width: int, seed: int) -> BLabels:
    """Independent uniform ``width``-bit labels per vertex.

    Bit source: Python's Mersenne Twister (``random.Random``) seeded with
    ``seed``, drawing ``getrandbits(width)`` per vertex in ascending id
    order; stable across platforms and versions.
    """
    if width < 1:
        raise ValueError("label width must be >= 1")
    rng = Random(seed)
    return BLabels(width, tuple(rng.getrandbits(width) for _ in range(g.n)), seed)


def truncate_labels(labels: BLabels, k: int) -> BLabels:
    """Keep only the first k digits of every label (most significant bits)."""
    if not 1 <= k <= labels.width:
        raise ValueError("truncation width out of range")
    shift = labels.width - k
    return BLabels(k, tuple(v >> shift for v in labels.values), labels.seed)
