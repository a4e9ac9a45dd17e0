"""Deterministic graph and signal fixtures for experiments and tests."""
from __future__ import annotations

import collections

import numpy as np
from scipy.spatial import Delaunay

from .graph import Bipartition, Coloring, Graph, image_graph
from .spectral import GraphSignal


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(n_leaves: int) -> Graph:
    return Graph.from_edges(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    return Graph.from_edges(n, edges)


def random_graph(n: int, edge_prob: float, rng: np.random.Generator) -> Graph:
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_prob
    ]
    return Graph.from_edges(n, edges)


def _unit_open_weight(rng: np.random.Generator) -> float:
    # uniform weight in the half-open interval (0, 2]
    return 2.0 * (1.0 - float(rng.random()))


def random_connected_bipartite_graph(
    n: int, rng: np.random.Generator, extra_edge_prob: float = 0.2
) -> tuple[Graph, Bipartition]:
    """Random spanning tree across a random two-sided split, plus extra cross edges.

    Weights are uniform in (0, 2].
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    sides = rng.integers(0, 2, size=n)
    sides[0], sides[1] = 0, 1  # both sides populated
    edges: dict[tuple[int, int], float] = {}
    placed = [0]
    order = list(range(1, n))
    rng.shuffle(order)
    for v in order:
        opposite = [u for u in placed if sides[u] != sides[v]]
        if not opposite:
            # first vertex of the other side attaches to vertex 0's side
            opposite = [u for u in placed]
            sides[v] = 1 - sides[opposite[0]]
        u = int(opposite[rng.integers(0, len(opposite))])
        edges[(min(u, v), max(u, v))] = _unit_open_weight(rng)
        placed.append(v)
    low = [v for v in range(n) if sides[v] == 0]
    high = [v for v in range(n) if sides[v] == 1]
    for u in low:
        for v in high:
            pair = (min(u, v), max(u, v))
            if pair not in edges and rng.random() < extra_edge_prob:
                edges[pair] = _unit_open_weight(rng)
    graph = Graph.from_edges(n, [(u, v, w) for (u, v), w in edges.items()])
    return graph, Bipartition(frozenset(low), frozenset(high))


def _delaunay_edges(points: np.ndarray) -> set[tuple[int, int]]:
    tri = Delaunay(points)
    edges: set[tuple[int, int]] = set()
    for simplex in tri.simplices:
        for a in range(3):
            u, v = int(simplex[a]), int(simplex[(a + 1) % 3])
            edges.add((min(u, v), max(u, v)))
    return edges


def planar_three_colorable(
    n: int, seed: int, max_repairs: int = 600, max_attempts: int = 40
) -> tuple[Graph, Coloring, np.ndarray]:
    """Connected planar graph that the greedy heuristic colors with exactly 3 colors.

    Construction: scatter points, take the bichromatic edges of their Delaunay
    triangulation under a random proper 3-coloring (a BFS tree is recolored
    first so connectivity survives), then prune non-tree edges until greedy
    coloring settles at 3 colors.  Deterministic for a given (n, seed); the
    sub-seed loop retries with fresh points if a pruning pass stalls.
    """
    if n < 4:
        raise ValueError("need at least 4 vertices for a planar fixture")
    for attempt in range(max_attempts):
        rng = np.random.default_rng((int(seed), attempt))
        points = rng.random((n, 2))
        delaunay = _delaunay_edges(points)
        adjacency = [set() for _ in range(n)]
        for u, v in delaunay:
            adjacency[u].add(v)
            adjacency[v].add(u)
        colors = rng.integers(1, 4, size=n)
        seen = [False] * n
        seen[0] = True
        queue = collections.deque([0])
        tree: set[tuple[int, int]] = set()
        while queue:
            u = queue.popleft()
            for v in sorted(adjacency[u]):
                if not seen[v]:
                    seen[v] = True
                    if colors[v] == colors[u]:
                        colors[v] = colors[u] % 3 + 1
                    tree.add((min(u, v), max(u, v)))
                    queue.append(v)
        if not all(seen):
            continue
        edges = {e for e in delaunay if colors[e[0]] != colors[e[1]]}
        kept = [set() for _ in range(n)]
        for u, v in edges:
            kept[u].add(v)
            kept[v].add(u)
        result = _prune_to_greedy_three(n, edges, kept, tree, max_repairs)
        if result is not None:
            graph = Graph.from_edges(n, [(u, v, 1.0) for u, v in sorted(result)])
            return graph, Coloring(tuple(int(c) for c in colors), 3), points
    raise RuntimeError(f"could not build a greedy-3-colorable planar graph for seed {seed}")


def _prune_to_greedy_three(n, edges, adjacency, tree, max_repairs):
    removals = 0
    while removals <= max_repairs:
        degrees = [len(adjacency[v]) for v in range(n)]
        order = sorted(range(n), key=lambda v: (-degrees[v], v))
        position = {v: i for i, v in enumerate(order)}
        greedy = [0] * n
        offender = None
        for v in order:
            used = {greedy[u] for u in adjacency[v] if greedy[u]}
            c = 1
            while c in used:
                c += 1
            greedy[v] = c
            if c > 3 and offender is None:
                offender = v
        if offender is None:
            return edges
        earlier = [u for u in adjacency[offender] if position[u] < position[offender]]
        by_color: dict[int, list[int]] = {}
        for u in earlier:
            by_color.setdefault(greedy[u], []).append(u)
        removed = False
        # drop a whole color class from the offender's earlier neighbors when
        # none of its edges is a tree edge (connectivity must survive)
        for c in sorted(by_color, key=lambda c: (len(by_color[c]), c)):
            members = by_color[c]
            pairs = [(min(offender, u), max(offender, u)) for u in members]
            if all(p not in tree for p in pairs):
                for u, p in zip(members, pairs):
                    edges.discard(p)
                    adjacency[offender].discard(u)
                    adjacency[u].discard(offender)
                    removals += 1
                removed = True
                break
        if not removed:
            for u in earlier:
                p = (min(offender, u), max(offender, u))
                if p not in tree:
                    edges.discard(p)
                    adjacency[offender].discard(u)
                    adjacency[u].discard(offender)
                    removals += 1
                    removed = True
                    break
        if not removed:
            return None
    return None


def step_signal(graph: Graph, rng: np.random.Generator, segments: int = 3) -> GraphSignal:
    """Piecewise-constant signal over contiguous vertex-id segments."""
    n = graph.n_vertices
    levels = rng.uniform(-2.0, 2.0, size=segments)
    bounds = np.linspace(0, n, segments + 1).astype(int)
    values = np.empty(n)
    for s in range(segments):
        values[bounds[s] : bounds[s + 1]] = levels[s]
    return GraphSignal(graph, values)


def block_signal(width: int, height: int, graph: Graph, rng: np.random.Generator) -> GraphSignal:
    """Piecewise-constant quadrant signal on an image lattice."""
    levels = rng.uniform(-2.0, 2.0, size=4)
    values = np.empty(width * height)
    for r in range(height):
        for c in range(width):
            values[r * width + c] = levels[2 * (r >= height // 2) + (c >= width // 2)]
    return GraphSignal(graph, values)


def quadrant_signal(
    graph: Graph, points: np.ndarray, rng: np.random.Generator
) -> GraphSignal:
    """Piecewise-constant signal over the four coordinate quadrants of the embedding."""
    levels = rng.uniform(-2.0, 2.0, size=4)
    cell = 2 * (points[:, 0] >= 0.5).astype(int) + (points[:, 1] >= 0.5).astype(int)
    return GraphSignal(graph, levels[cell])


def fixture_zoo() -> list[tuple[str, Graph, bool]]:
    """Named small graphs with their bipartiteness, for spectral property sweeps."""
    rng = np.random.default_rng(20240917)
    zoo: list[tuple[str, Graph, bool]] = []

    def weighted(graph: Graph, lo: float = 0.2, hi: float = 2.0) -> Graph:
        edges = [
            (u, v, float(rng.uniform(lo, hi))) for u, v, _ in graph.edges
        ]
        return Graph.from_edges(graph.n_vertices, edges)

    zoo.append(("path2", path_graph(2), True))
    zoo.append(("path3", path_graph(3), True))
    zoo.append(("path5", path_graph(5), True))
    zoo.append(("path8", path_graph(8), True))
    zoo.append(("cycle4", cycle_graph(4), True))
    zoo.append(("cycle6", cycle_graph(6), True))
    zoo.append(("cycle8", cycle_graph(8), True))
    zoo.append(("cycle10", cycle_graph(10), True))
    zoo.append(("star5", star_graph(5), True))
    zoo.append(("tree10", random_tree(10, rng), True))
    zoo.append(("tree16", random_tree(16, rng), True))
    zoo.append(("kbip23", complete_bipartite_graph(2, 3), True))
    zoo.append(("kbip33", complete_bipartite_graph(3, 3), True))
    zoo.append(("lattice-rect33", image_graph(3, 3, "rect"), True))
    zoo.append(("lattice-rect44", image_graph(4, 4, "rect"), True))
    zoo.append(("lattice-diag44", image_graph(4, 4, "diagonal"), True))
    zoo.append(("weighted-cycle6", weighted(cycle_graph(6)), True))
    zoo.append(("weighted-kbip24", weighted(complete_bipartite_graph(2, 4)), True))

    zoo.append(("cycle3", cycle_graph(3), False))
    zoo.append(("cycle5", cycle_graph(5), False))
    zoo.append(("cycle7", cycle_graph(7), False))
    zoo.append(("cycle9", cycle_graph(9), False))
    zoo.append(("cycle11", cycle_graph(11), False))
    zoo.append(("complete3", complete_graph(3), False))
    zoo.append(("complete4", complete_graph(4), False))
    zoo.append(("complete5", complete_graph(5), False))
    zoo.append(("complete6", complete_graph(6), False))
    zoo.append(("lattice-eight33", image_graph(3, 3, "eight"), False))
    zoo.append(("lattice-eight44", image_graph(4, 4, "eight"), False))
    zoo.append(("lattice-eight34", image_graph(3, 4, "eight"), False))
    zoo.append(("weighted-complete4", weighted(complete_graph(4)), False))
    zoo.append(("weighted-cycle5", weighted(cycle_graph(5)), False))
    wheel = cycle_graph(5).edges + tuple((i, 5, 1.0) for i in range(5))
    zoo.append(("wheel5", Graph.from_edges(6, wheel), False))
    odd_chord = cycle_graph(6).edges + ((0, 2, 1.0),)
    zoo.append(("cycle6-chord", Graph.from_edges(6, odd_chord), False))
    bowtie = ((0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0), (3, 4, 1.0))
    zoo.append(("bowtie", Graph.from_edges(5, bowtie), False))
    kite = complete_graph(4).edges + ((3, 4, 1.0),)
    zoo.append(("kite", Graph.from_edges(5, kite), False))
    return zoo
