"""Weighted undirected graphs, vertex colorings, and bipartite decompositions.

Vertices are integers ``0..n_vertices-1``.  Edges carry strictly positive
weights and are stored canonically as ``(u, v, w)`` with ``u < v``.  All types
are immutable after construction and safe to share across workers.
"""
from __future__ import annotations

import collections
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

Edge = tuple[int, int, float]
EdgePair = tuple[int, int]


def _edge_pair(u: int, v: int) -> EdgePair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite weighted undirected simple graph."""

    n_vertices: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Sequence]) -> "Graph":
        """Build a graph, validating ids, weights, and simplicity.

        Accepts ``(u, v)`` pairs (unit weight) or ``(u, v, w)`` triples.
        Duplicate edges are rejected rather than merged: a repeated pair in
        the input almost always indicates a data bug upstream.
        """
        if n_vertices < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n_vertices}")
        seen: dict[EdgePair, float] = {}
        for item in edges:
            if len(item) == 2:
                u, v = item
                w = 1.0
            else:
                u, v, w = item
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) has a vertex id outside [0, {n_vertices})")
            if u == v:
                raise ValueError(f"self-loop at vertex {u} is not allowed")
            if w <= 0.0 or not np.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            pair = _edge_pair(u, v)
            if pair in seen:
                raise ValueError(f"duplicate edge ({pair[0]}, {pair[1]})")
            seen[pair] = w
        canon = tuple((u, v, seen[(u, v)]) for u, v in sorted(seen))
        return cls(n_vertices, canon)

    @cached_property
    def weight_map(self) -> dict[EdgePair, float]:
        return {(u, v): w for u, v, w in self.edges}

    @cached_property
    def neighbor_lists(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for u, v, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(a)) for a in nbrs)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degree of every vertex (sum of incident edge weights)."""
        d = np.zeros(self.n_vertices)
        for u, v, w in self.edges:
            d[u] += w
            d[v] += w
        d.flags.writeable = False
        return d

    @cached_property
    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n_vertices, self.n_vertices))
        for u, v, w in self.edges:
            a[u, v] = w
            a[v, u] = w
        a.flags.writeable = False
        return a

    def weight(self, u: int, v: int) -> float:
        """Edge weight A(u, v), or 0.0 when the edge is absent."""
        return self.weight_map.get(_edge_pair(u, v), 0.0)

    def degree(self, v: int) -> float:
        return float(self.degrees[v])

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_pairs(self) -> Iterator[EdgePair]:
        for u, v, _ in self.edges:
            yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge_pair(u, v) in self.weight_map


@dataclass(frozen=True)
class Coloring:
    """Proper-coloring candidate: color of vertex ``v`` is ``colors[v]`` in 1..k."""

    colors: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        used = set(self.colors)
        if self.colors and used != set(range(1, self.k + 1)):
            raise ValueError(
                f"colors must cover the contiguous range 1..{self.k}, got {sorted(used)}"
            )

    def color(self, v: int) -> int:
        return self.colors[v]


@dataclass(frozen=True)
class Bipartition:
    """Split of the vertex set into a lowpass side and a highpass side."""

    low: frozenset[int]
    high: frozenset[int]

    def covers(self, n_vertices: int) -> bool:
        return (
            not (self.low & self.high)
            and self.low | self.high == frozenset(range(n_vertices))
        )

    def side(self, v: int) -> str:
        return "L" if v in self.low else "H"


@dataclass(frozen=True)
class DecompositionStage:
    partition: Bipartition
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class BipartiteDecomposition:
    """Ordered edge-disjoint bipartite subgraphs covering a host graph."""

    n_vertices: int
    stages: tuple[DecompositionStage, ...]

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def channel_label(self, v: int) -> str:
        return "".join(stage.partition.side(v) for stage in self.stages)


def is_proper(graph: Graph, coloring: Coloring) -> bool:
    if len(coloring.colors) != graph.n_vertices:
        return False
    return all(coloring.colors[u] != coloring.colors[v] for u, v, _ in graph.edges)


def greedy_coloring(graph: Graph) -> Coloring:
    """Greedy proper coloring in descending weighted-degree order.

    Ties are broken by vertex id, so the result is deterministic.  The color
    count is a heuristic upper bound, not the chromatic number.
    """
    n = graph.n_vertices
    degrees = graph.degrees
    order = sorted(range(n), key=lambda v: (-degrees[v], v))
    colors = [0] * n
    for v in order:
        used = {colors[u] for u in graph.neighbor_lists[v] if colors[u]}
        c = 1
        while c in used:
            c += 1
        colors[v] = c
    k = max(colors, default=0)
    if n and k == 0:
        k = 1
    return Coloring(tuple(colors), k)


def connected_components(graph: Graph) -> tuple[tuple[int, ...], ...]:
    """Connected components as sorted vertex tuples, ordered by smallest member."""
    n = graph.n_vertices
    seen = [False] * n
    comps = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = collections.deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.neighbor_lists[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def bfs_distances(graph: Graph, source: int, max_hops: Optional[int] = None) -> np.ndarray:
    """Hop distances from ``source``; unreachable vertices get -1."""
    n = graph.n_vertices
    dist = np.full(n, -1, dtype=int)
    dist[source] = 0
    queue = collections.deque([source])
    while queue:
        u = queue.popleft()
        if max_hops is not None and dist[u] >= max_hops:
            continue
        for v in graph.neighbor_lists[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_bipartite(graph: Graph) -> Optional[Bipartition]:
    """Two-color the graph by BFS, or return None when an odd cycle exists.

    BFS roots (and hence isolated vertices) land on the low side.
    """
    n = graph.n_vertices
    side = [-1] * n
    for root in range(n):
        if side[root] >= 0:
            continue
        side[root] = 0
        queue = collections.deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.neighbor_lists[u]:
                if side[v] < 0:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    return None
    low = frozenset(v for v in range(n) if side[v] == 0)
    high = frozenset(v for v in range(n) if side[v] == 1)
    return Bipartition(low, high)


def _rank_compress(part: dict[int, int]) -> dict[int, int]:
    ranks = {c: i + 1 for i, c in enumerate(sorted(set(part.values())))}
    return {v: ranks[c] for v, c in part.items()}


def harary_decompose(graph: Graph, coloring: Coloring) -> BipartiteDecomposition:
    """Split a k-colored graph into ceil(log2 k) edge-disjoint bipartite subgraphs.

    Each stage halves the surviving color classes: colors up to
    ``floor(k_part / 2)`` go to the low side, the rest to the high side, and
    the stage grabs every not-yet-assigned edge crossing the split.  Parts
    reduced to a single color class (edgeless) stay on the low side, so
    smooth content keeps flowing through lowpass channels.  Inherited colors
    are rank-compressed within each part, which guarantees the stage bound.
    """
    if not is_proper(graph, coloring):
        raise ValueError("coloring is not proper on the given graph")
    n = graph.n_vertices
    k = coloring.k
    n_stages = (k - 1).bit_length() if k >= 1 else 0
    remaining = dict(graph.weight_map)
    parts: list[dict[int, int]] = []
    if n:
        parts.append({v: coloring.colors[v] for v in range(n)})
    stages = []
    for _ in range(n_stages):
        low: set[int] = set()
        high: set[int] = set()
        next_parts: list[dict[int, int]] = []
        for part in parts:
            kp = max(part.values())
            split = kp // 2 if kp >= 2 else 1
            sub_low = {v: c for v, c in part.items() if c <= split}
            sub_high = {v: c for v, c in part.items() if c > split}
            low.update(sub_low)
            high.update(sub_high)
            for sub in (sub_low, sub_high):
                if sub:
                    next_parts.append(_rank_compress(sub))
        stage_edges = tuple(
            (u, v, remaining[(u, v)])
            for u, v in sorted(remaining)
            if (u in low) != (v in low)
        )
        for u, v, _ in stage_edges:
            del remaining[(u, v)]
        stages.append(
            DecompositionStage(Bipartition(frozenset(low), frozenset(high)), stage_edges)
        )
        parts = next_parts
    if remaining:
        raise AssertionError("bipartite decomposition left unassigned edges")
    return BipartiteDecomposition(n, tuple(stages))


def validate_decomposition(graph: Graph, decomp: BipartiteDecomposition) -> None:
    """Check the structural invariants of a decomposition against its host.

    Raises ValueError on: vertex-count mismatch, a stage edge missing from the
    host, an edge assigned to two stages, uncovered host edges, a stage
    partition that does not cover the vertex set, or a stage edge that fails
    to cross its stage partition.
    """
    if decomp.n_vertices != graph.n_vertices:
        raise ValueError("decomposition vertex count does not match host graph")
    assigned: set[EdgePair] = set()
    for i, stage in enumerate(decomp.stages, start=1):
        if not stage.partition.covers(graph.n_vertices):
            raise ValueError(f"stage {i} partition does not cover the vertex set")
        for u, v, w in stage.edges:
            pair = _edge_pair(u, v)
            if pair not in graph.weight_map:
                raise ValueError(f"stage {i} edge ({u}, {v}) is not a host edge")
            if abs(graph.weight_map[pair] - w) > 1e-12 * max(1.0, abs(w)):
                raise ValueError(f"stage {i} edge ({u}, {v}) weight mismatch")
            if pair in assigned:
                raise ValueError(f"edge ({u}, {v}) assigned to more than one stage")
            if stage.partition.side(u) == stage.partition.side(v):
                raise ValueError(f"stage {i} edge ({u}, {v}) does not cross the partition")
            assigned.add(pair)
    missing = set(graph.weight_map) - assigned
    if missing:
        raise ValueError(f"{len(missing)} host edges are not covered by any stage")


def subgraph_restricted(graph: Graph, edges: Iterable[EdgePair]) -> Graph:
    """Same vertex set, keeping only the given host edges (weights inherited)."""
    picked = []
    for u, v in edges:
        pair = _edge_pair(int(u), int(v))
        if pair not in graph.weight_map:
            raise ValueError(f"edge ({u}, {v}) is not an edge of the host graph")
        picked.append((pair[0], pair[1], graph.weight_map[pair]))
    return Graph.from_edges(graph.n_vertices, picked)


def stage_graph(graph_or_n, stage: DecompositionStage) -> Graph:
    """Graph for one decomposition stage: full vertex set, stage edges only."""
    n = graph_or_n.n_vertices if isinstance(graph_or_n, Graph) else int(graph_or_n)
    return Graph.from_edges(n, stage.edges)


IMAGE_CONNECTIVITIES = ("eight", "rect", "horizontal", "vertical", "diagonal")


def image_graph(width: int, height: int, connectivity: str = "rect") -> Graph:
    """Unit-weight pixel lattice; vertex id of pixel (row, col) is row*width + col.

    ``rect`` links 4-neighbors, ``eight`` adds the diagonals, ``horizontal`` /
    ``vertical`` / ``diagonal`` keep only the named links.
    """
    if connectivity not in IMAGE_CONNECTIVITIES:
        raise ValueError(f"unknown connectivity {connectivity!r}")
    if width < 2 or height < 2:
        raise ValueError(f"lattice must be at least 2x2, got {width}x{height}")
    horizontal = connectivity in ("eight", "rect", "horizontal")
    vertical = connectivity in ("eight", "rect", "vertical")
    diagonal = connectivity in ("eight", "diagonal")
    edges = []
    for r in range(height):
        for c in range(width):
            i = r * width + c
            if horizontal and c + 1 < width:
                edges.append((i, i + 1))
            if vertical and r + 1 < height:
                edges.append((i, i + width))
            if diagonal and r + 1 < height:
                if c + 1 < width:
                    edges.append((i, i + width + 1))
                if c - 1 >= 0:
                    edges.append((i, i + width - 1))
    return Graph.from_edges(width * height, edges)


def lattice_parity_coloring(width: int, height: int) -> Coloring:
    """Canonical 4-coloring of the 8-connected lattice by (row, col) parity.

    The classes are arranged so that halving the colors separates the
    rectangular links (first stage) from the diagonal links (second stage).
    """
    code = {(0, 0): 1, (1, 1): 2, (0, 1): 3, (1, 0): 4}
    colors = tuple(
        code[(r % 2, c % 2)] for r in range(height) for c in range(width)
    )
    return Coloring(colors, 4)
