"""Text file formats for graphs, signals, colorings, subbands, and tables.

All numeric output uses 17 significant digits so that a write/read round trip
reproduces the original doubles exactly.  Lines starting with '#' are
comments; blank lines are ignored.
"""
from __future__ import annotations

import os
from typing import Iterable, Sequence

import numpy as np

from .filterbank import Channel, SubbandTree, channel_labels
from .graph import (
    Bipartition,
    BipartiteDecomposition,
    Coloring,
    DecompositionStage,
    Graph,
)
from .kernels import PolynomialKernel
from .spectral import GraphSignal, Spectrum


class FormatError(ValueError):
    """A text file does not conform to its declared format."""


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def _data_lines(path: str) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    lines = []
    for line in raw:
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            lines.append(stripped)
    return lines


def _write(path: str, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def load_graph(path: str) -> Graph:
    """Read an edge list: header "N M", then M lines "u v w"."""
    lines = _data_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"{path}: header must be 'N M', got {lines[0]!r}")
    try:
        n_vertices, n_edges = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"{path}: bad header {lines[0]!r}") from exc
    if len(lines) - 1 != n_edges:
        raise FormatError(
            f"{path}: header declares {n_edges} edges but file has {len(lines) - 1}"
        )
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}: edge line must be 'u v w', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise FormatError(f"{path}: bad edge line {line!r}") from exc
    try:
        return Graph.from_edges(n_vertices, edges)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_graph(graph: Graph, path: str) -> None:
    lines = [f"{graph.n_vertices} {graph.n_edges}"]
    lines += [f"{u} {v} {format_float(w)}" for u, v, w in graph.edges]
    _write(path, lines)


def load_signal(path: str, graph: Graph) -> GraphSignal:
    """Read "v value" lines; every vertex must appear exactly once."""
    lines = _data_lines(path)
    values = np.full(graph.n_vertices, np.nan)
    seen: set[int] = set()
    for line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"{path}: signal line must be 'v value', got {line!r}")
        try:
            v, x = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise FormatError(f"{path}: bad signal line {line!r}") from exc
        if not 0 <= v < graph.n_vertices:
            raise FormatError(f"{path}: vertex {v} out of range")
        if v in seen:
            raise FormatError(f"{path}: vertex {v} listed twice")
        seen.add(v)
        values[v] = x
    if len(seen) != graph.n_vertices:
        missing = sorted(set(range(graph.n_vertices)) - seen)
        raise FormatError(f"{path}: missing values for vertices {missing[:5]}")
    return GraphSignal(graph, values)


def save_signal(sig: GraphSignal, path: str) -> None:
    _write(path, (f"{v} {format_float(x)}" for v, x in enumerate(sig.values)))


def load_coloring(path: str, n_vertices: int) -> Coloring:
    """Read "v color" lines covering every vertex exactly once."""
    lines = _data_lines(path)
    colors = [0] * n_vertices
    seen: set[int] = set()
    for line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"{path}: coloring line must be 'v color', got {line!r}")
        try:
            v, c = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise FormatError(f"{path}: bad coloring line {line!r}") from exc
        if not 0 <= v < n_vertices:
            raise FormatError(f"{path}: vertex {v} out of range")
        if v in seen:
            raise FormatError(f"{path}: vertex {v} listed twice")
        if c < 1:
            raise FormatError(f"{path}: colors are 1-based, got {c}")
        seen.add(v)
        colors[v] = c
    if len(seen) != n_vertices:
        raise FormatError(f"{path}: coloring does not cover every vertex")
    try:
        return Coloring(tuple(colors), max(colors, default=0))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_coloring(coloring: Coloring, path: str) -> None:
    _write(path, (f"{v} {c}" for v, c in enumerate(coloring.colors)))


# A 0-stage tree has the single empty label; it is spelled '-' on disk.
_EMPTY_LABEL = "-"


def save_subband_tree(tree: SubbandTree, path: str) -> None:
    """Header "K N", then per channel "channel <label> <count>" + coefficient lines."""
    lines = [f"{tree.n_stages} {tree.n_vertices}"]
    for c in tree.channels:
        label = c.label if c.label else _EMPTY_LABEL
        lines.append(f"channel {label} {len(c.vertices)}")
        lines += [
            f"{v} {format_float(x)}" for v, x in zip(c.vertices, c.coefficients)
        ]
    _write(path, lines)


def load_subband_tree(path: str) -> SubbandTree:
    lines = _data_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty subband file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"{path}: header must be 'K N', got {lines[0]!r}")
    try:
        n_stages, n_vertices = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FormatError(f"{path}: bad header {lines[0]!r}") from exc
    channels: dict[str, Channel] = {}
    pos = 1
    while pos < len(lines):
        parts = lines[pos].split()
        if len(parts) != 3 or parts[0] != "channel":
            raise FormatError(f"{path}: expected 'channel <label> <count>', got {lines[pos]!r}")
        label = "" if parts[1] == _EMPTY_LABEL else parts[1]
        try:
            count = int(parts[2])
        except ValueError as exc:
            raise FormatError(f"{path}: bad channel count in {lines[pos]!r}") from exc
        pos += 1
        vertices, coeffs = [], []
        for _ in range(count):
            if pos >= len(lines):
                raise FormatError(f"{path}: channel {label!r} is truncated")
            vparts = lines[pos].split()
            if len(vparts) != 2:
                raise FormatError(f"{path}: bad coefficient line {lines[pos]!r}")
            vertices.append(int(vparts[0]))
            coeffs.append(float(vparts[1]))
            pos += 1
        if label in channels:
            raise FormatError(f"{path}: channel {label!r} listed twice")
        channels[label] = Channel(label, tuple(vertices), np.asarray(coeffs))
    expected = channel_labels(n_stages)
    if set(channels) != set(expected):
        raise FormatError(
            f"{path}: channels {sorted(channels)} do not match the expected labels"
        )
    try:
        return SubbandTree(n_vertices, n_stages, tuple(channels[l] for l in expected))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def stage_filename(index: int) -> str:
    return f"stage{index}.graph"


PARTITION_FILENAME = "partitions.txt"


def save_decomposition(decomp: BipartiteDecomposition, out_dir: str) -> list[str]:
    """Write per-stage edge lists plus a partition file; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for i, stage in enumerate(decomp.stages, start=1):
        path = os.path.join(out_dir, stage_filename(i))
        save_graph(Graph.from_edges(decomp.n_vertices, stage.edges), path)
        written.append(path)
    lines = [f"{decomp.n_stages} {decomp.n_vertices}"]
    for stage in decomp.stages:
        lines.append("".join(stage.partition.side(v) for v in range(decomp.n_vertices)))
    partition_path = os.path.join(out_dir, PARTITION_FILENAME)
    _write(partition_path, lines)
    written.append(partition_path)
    return written


def load_decomposition(out_dir: str) -> BipartiteDecomposition:
    lines = _data_lines(os.path.join(out_dir, PARTITION_FILENAME))
    if not lines:
        raise FormatError(f"{out_dir}: empty partition file")
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError(f"{out_dir}: partition header must be 'K N'")
    n_stages, n_vertices = int(head[0]), int(head[1])
    if len(lines) - 1 != n_stages:
        raise FormatError(f"{out_dir}: expected {n_stages} partition rows")
    stages = []
    for i in range(1, n_stages + 1):
        sides = lines[i]
        if len(sides) != n_vertices or set(sides) - {"L", "H"}:
            raise FormatError(f"{out_dir}: bad partition row for stage {i}")
        low = frozenset(v for v, s in enumerate(sides) if s == "L")
        high = frozenset(v for v, s in enumerate(sides) if s == "H")
        stage_path = os.path.join(out_dir, stage_filename(i))
        sub = load_graph(stage_path)
        if sub.n_vertices != n_vertices:
            raise FormatError(f"{stage_path}: vertex count does not match the partition file")
        stages.append(DecompositionStage(Bipartition(low, high), sub.edges))
    return BipartiteDecomposition(n_vertices, tuple(stages))


def save_polynomial(poly: PolynomialKernel, path: str) -> None:
    """Kernel export: "degree m" then the m + 1 Chebyshev coefficients."""
    lines = [f"degree {poly.degree}"]
    lines += [format_float(c) for c in poly.coefficients]
    _write(path, lines)


def load_polynomial(path: str) -> PolynomialKernel:
    lines = _data_lines(path)
    if not lines or len(lines[0].split()) != 2 or lines[0].split()[0] != "degree":
        raise FormatError(f"{path}: expected a 'degree m' header")
    degree = int(lines[0].split()[1])
    if len(lines) - 1 != degree + 1:
        raise FormatError(f"{path}: expected {degree + 1} coefficient lines")
    return PolynomialKernel(tuple(float(line) for line in lines[1:]))


def save_spectrum(spectrum: Spectrum, path: str) -> None:
    """Eigenvalue table: "index eigenvalue" per line."""
    _write(
        path,
        (f"{i} {format_float(v)}" for i, v in enumerate(spectrum.eigenvalues)),
    )


def save_table(path: str, columns: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    """Whitespace-separated numeric table with a commented column header."""
    lines = ["# " + " ".join(columns)]
    lines += [" ".join(format_float(x) for x in row) for row in rows]
    _write(path, lines)
