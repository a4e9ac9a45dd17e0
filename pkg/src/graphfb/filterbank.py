"""Critically sampled two-channel filterbanks and separable cascades.

A two-channel bank on a bipartite graph filters with a lowpass/highpass
kernel pair and stores the lowpass output on the low side of the bipartition
and the highpass output on the high side, so the total coefficient count
equals the vertex count.  Arbitrary graphs are handled by cascading one bank
per stage of an edge-disjoint bipartite decomposition; each vertex ends up in
exactly one of as many as 2^K channels, keyed by its per-stage side pattern.

Synthesis applies the synthesis kernels to the upsampled channel signals and
rescales by ``2 / gain^2`` per stage, which turns the inherent ``gain^2 / 2``
round-trip factor of a power-complementary kernel pair into unity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .graph import (
    Bipartition,
    BipartiteDecomposition,
    Graph,
    bfs_distances,
    is_bipartite,
    stage_graph,
    validate_decomposition,
)
from .kernels import (
    KernelSet,
    PolynomialKernel,
    chebyshev_apply,
    chebyshev_fit,
    exact_filter_matrix,
    exact_filter_values,
    meyer_kernel,
    qmf_companions,
)
from .spectral import (
    DEFAULT_DENSE_LIMIT,
    DownsamplingMap,
    GraphSignal,
    NormalizedLaplacian,
    Spectrum,
    eigendecompose,
    normalized_laplacian,
)

MODES = ("exact", "polynomial")


@dataclass(frozen=True, eq=False)
class TwoChannelBank:
    """Analysis/synthesis machinery for one bipartite graph."""

    graph: Graph
    partition: Bipartition
    kernels: KernelSet
    mode: str = "exact"
    order: Optional[int] = None
    dense_limit: int = DEFAULT_DENSE_LIMIT
    synthesis_gain: Optional[float] = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "polynomial" and (self.order is None or self.order < 1):
            raise ValueError("polynomial mode needs an order of at least 1")
        if not self.partition.covers(self.graph.n_vertices):
            raise ValueError("bipartition does not cover the vertex set")
        for u, v, _ in self.graph.edges:
            if self.partition.side(u) == self.partition.side(v):
                raise ValueError(
                    f"edge ({u}, {v}) joins two vertices on the same side; "
                    "the host is not bipartite under this partition"
                )
        if self.synthesis_gain is None:
            object.__setattr__(self, "synthesis_gain", 2.0 / self.kernels.gain**2)

    @cached_property
    def laplacian(self) -> NormalizedLaplacian:
        return normalized_laplacian(self.graph)

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigendecompose(self.laplacian, self.dense_limit)

    @cached_property
    def signs(self) -> np.ndarray:
        """+1 on the highpass side, -1 on the lowpass side."""
        return DownsamplingMap.keeping(self.graph.n_vertices, self.partition.high).signs

    @cached_property
    def low_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.partition.low))

    @cached_property
    def high_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.partition.high))

    @cached_property
    def _polynomials(self) -> dict[str, PolynomialKernel]:
        k = self.kernels
        fitted: dict[int, PolynomialKernel] = {}

        def fit(kernel) -> PolynomialKernel:
            key = id(kernel)
            if key not in fitted:
                if kernel.kind == "mirrored" and id(kernel.base) in fitted:
                    fitted[key] = fitted[id(kernel.base)].mirrored()
                elif kernel.kind == "polynomial" and kernel.polynomial.degree <= self.order:
                    fitted[key] = kernel.polynomial
                else:
                    fitted[key] = chebyshev_fit(kernel, self.order)
            return fitted[key]

        return {"h0": fit(k.h0), "h1": fit(k.h1), "g0": fit(k.g0), "g1": fit(k.g1)}

    def _kernel(self, which: str):
        return getattr(self.kernels, which)

    def filter_values(self, which: str, values: np.ndarray) -> np.ndarray:
        """Apply one of the four filters to a vector or an (n, k) batch."""
        if self.mode == "exact":
            return exact_filter_values(self.spectrum, self._kernel(which), values)
        coeffs = self._polynomials[which].coefficients
        return chebyshev_apply(self.laplacian, coeffs, values)

    def filter_matrix(self, which: str) -> np.ndarray:
        if self.mode == "exact":
            return exact_filter_matrix(self.spectrum, self._kernel(which))
        return self.filter_values(which, np.eye(self.graph.n_vertices))

    def analyze_values(self, values: np.ndarray) -> np.ndarray:
        """One analysis pass: lowpass output on the low side, highpass on the high."""
        low_out = self.filter_values("h0", values)
        high_out = self.filter_values("h1", values)
        return np.where(self.signs > 0, high_out, low_out)

    def synthesize_values(self, values: np.ndarray) -> np.ndarray:
        """One synthesis pass from a critically sampled coefficient vector."""
        on_low = np.where(self.signs > 0, 0.0, values)
        on_high = np.where(self.signs > 0, values, 0.0)
        out = self.filter_values("g0", on_low) + self.filter_values("g1", on_high)
        return self.synthesis_gain * out


def make_two_channel_bank(
    graph: Graph,
    kernels: Optional[KernelSet] = None,
    partition: Optional[Bipartition] = None,
    mode: str = "exact",
    order: Optional[int] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> TwoChannelBank:
    """Bank on a bipartite graph; the partition is derived by BFS when omitted."""
    if partition is None:
        partition = is_bipartite(graph)
        if partition is None:
            raise ValueError("graph is not bipartite; decompose it first")
    if kernels is None:
        kernels = qmf_companions(meyer_kernel())
    return TwoChannelBank(graph, partition, kernels, mode, order, dense_limit)


def analyze_two_channel(bank: TwoChannelBank, sig: GraphSignal) -> tuple[np.ndarray, np.ndarray]:
    """Subband coefficients: (lowpass on the low side, highpass on the high side)."""
    if sig.host != bank.graph:
        raise ValueError("signal host does not match the bank's graph")
    full = bank.analyze_values(sig.values)
    return full[list(bank.low_vertices)], full[list(bank.high_vertices)]


def synthesize_two_channel(
    bank: TwoChannelBank, y_low: Sequence[float], y_high: Sequence[float]
) -> GraphSignal:
    y_low = np.asarray(y_low, dtype=float).reshape(-1)
    y_high = np.asarray(y_high, dtype=float).reshape(-1)
    if y_low.shape[0] != len(bank.low_vertices):
        raise ValueError(
            f"lowpass subband has {y_low.shape[0]} samples, expected {len(bank.low_vertices)}"
        )
    if y_high.shape[0] != len(bank.high_vertices):
        raise ValueError(
            f"highpass subband has {y_high.shape[0]} samples, expected {len(bank.high_vertices)}"
        )
    values = np.zeros(bank.graph.n_vertices)
    values[list(bank.low_vertices)] = y_low
    values[list(bank.high_vertices)] = y_high
    return GraphSignal(bank.graph, bank.synthesize_values(values))


def analysis_operator(bank: TwoChannelBank) -> np.ndarray:
    """Explicit critically sampled analysis matrix (exact mode only).

    Row v holds the lowpass filter row when v is on the low side and the
    highpass row otherwise; scaled by sqrt(2)/gain it is orthogonal whenever
    the kernel pair is power complementary.
    """
    if bank.mode != "exact":
        raise ValueError("the explicit analysis operator requires exact mode")
    h0 = bank.filter_matrix("h0")
    h1 = bank.filter_matrix("h1")
    return np.where(bank.signs[:, None] > 0, h1, h0)


@dataclass(frozen=True, eq=False)
class Channel:
    label: str
    vertices: tuple[int, ...]
    coefficients: np.ndarray = field(compare=False)

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=float).reshape(-1).copy()
        if coeffs.shape[0] != len(self.vertices):
            raise ValueError(
                f"channel {self.label!r} has {coeffs.shape[0]} coefficients "
                f"for {len(self.vertices)} vertices"
            )
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def energy(self) -> float:
        return float(np.sum(self.coefficients**2))


def channel_labels(n_stages: int) -> tuple[str, ...]:
    """All side patterns in lexicographic order; a 0-stage tree has one '' label."""
    return tuple("".join(p) for p in itertools.product("LH", repeat=n_stages))


@dataclass(frozen=True, eq=False)
class SubbandTree:
    """Critically sampled coefficients grouped by per-stage side pattern.

    Every possible label is present; unpopulated patterns carry an explicit
    zero-length channel so synthesis can be driven from the tree alone.
    """

    n_vertices: int
    n_stages: int
    channels: tuple[Channel, ...]

    def __post_init__(self) -> None:
        expected = channel_labels(self.n_stages)
        got = tuple(c.label for c in self.channels)
        if got != expected:
            raise ValueError(f"channel labels {got} do not match {expected}")
        seen: set[int] = set()
        for c in self.channels:
            for v in c.vertices:
                if not 0 <= v < self.n_vertices:
                    raise ValueError(f"channel {c.label!r} holds out-of-range vertex {v}")
                if v in seen:
                    raise ValueError(f"vertex {v} appears in more than one channel")
                seen.add(v)
        if len(seen) != self.n_vertices:
            raise ValueError("channels do not cover the vertex set")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.channels)

    def channel(self, label: str) -> Channel:
        for c in self.channels:
            if c.label == label:
                return c
        raise KeyError(label)

    def nonempty_labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.channels if c.vertices)

    def total_coefficients(self) -> int:
        return sum(len(c.vertices) for c in self.channels)

    def scatter(self, zero_channels: Iterable[str] = ()) -> np.ndarray:
        """Length-n vector with each channel's coefficients at its vertices."""
        zeros = set(zero_channels)
        unknown = zeros - set(self.labels)
        if unknown:
            raise ValueError(f"unknown channel labels {sorted(unknown)}")
        values = np.zeros(self.n_vertices)
        for c in self.channels:
            if c.label in zeros or not c.vertices:
                continue
            values[list(c.vertices)] = c.coefficients
        return values

    def with_only(self, label: str) -> "SubbandTree":
        """Copy of the tree with every channel except ``label`` zeroed."""
        if label not in self.labels:
            raise ValueError(f"unknown channel label {label!r}")
        return self.with_zeroed(l for l in self.labels if l != label)

    def with_zeroed(self, labels: Iterable[str]) -> "SubbandTree":
        """Copy of the tree with the given channels' coefficients zeroed."""
        zeros = set(labels)
        unknown = zeros - set(self.labels)
        if unknown:
            raise ValueError(f"unknown channel labels {sorted(unknown)}")
        channels = tuple(
            Channel(c.label, c.vertices, np.zeros(len(c.vertices)))
            if c.label in zeros
            else c
            for c in self.channels
        )
        return SubbandTree(self.n_vertices, self.n_stages, channels)


def _tree_from_values(
    n_vertices: int, labels_per_vertex: Sequence[str], n_stages: int, values: np.ndarray
) -> SubbandTree:
    by_label: dict[str, list[int]] = {label: [] for label in channel_labels(n_stages)}
    for v, label in enumerate(labels_per_vertex):
        by_label[label].append(v)
    channels = tuple(
        Channel(label, tuple(verts), values[verts])
        for label, verts in by_label.items()
    )
    return SubbandTree(n_vertices, n_stages, channels)


@dataclass(frozen=True, eq=False)
class SeparableBank:
    """Cascade of two-channel banks over a bipartite decomposition."""

    graph: Graph
    decomposition: BipartiteDecomposition
    kernels: KernelSet
    mode: str = "exact"
    order: Optional[int] = None
    dense_limit: int = DEFAULT_DENSE_LIMIT

    def __post_init__(self) -> None:
        validate_decomposition(self.graph, self.decomposition)

    @property
    def n_stages(self) -> int:
        return self.decomposition.n_stages

    @cached_property
    def stage_banks(self) -> tuple[TwoChannelBank, ...]:
        return tuple(
            TwoChannelBank(
                stage_graph(self.graph, stage),
                stage.partition,
                self.kernels,
                self.mode,
                self.order,
                self.dense_limit,
            )
            for stage in self.decomposition.stages
        )

    @cached_property
    def vertex_labels(self) -> tuple[str, ...]:
        return tuple(
            self.decomposition.channel_label(v) for v in range(self.graph.n_vertices)
        )

    @cached_property
    def channel_vertices(self) -> dict[str, tuple[int, ...]]:
        out: dict[str, list[int]] = {label: [] for label in channel_labels(self.n_stages)}
        for v, label in enumerate(self.vertex_labels):
            out[label].append(v)
        return {label: tuple(verts) for label, verts in out.items()}

    def analyze(self, sig: GraphSignal) -> SubbandTree:
        if sig.host != self.graph:
            raise ValueError("signal host does not match the bank's graph")
        values = np.array(sig.values)
        for bank in self.stage_banks:
            values = bank.analyze_values(values)
        return _tree_from_values(
            self.graph.n_vertices, self.vertex_labels, self.n_stages, values
        )

    def _check_tree(self, tree: SubbandTree) -> None:
        if tree.n_vertices != self.graph.n_vertices or tree.n_stages != self.n_stages:
            raise ValueError("subband tree shape does not match this bank")
        for c in tree.channels:
            if c.vertices != self.channel_vertices[c.label]:
                raise ValueError(
                    f"channel {c.label!r} vertex set does not match the decomposition"
                )

    def synthesize(
        self, tree: SubbandTree, zero_channels: Iterable[str] = ()
    ) -> GraphSignal:
        self._check_tree(tree)
        values = tree.scatter(zero_channels)
        for bank in reversed(self.stage_banks):
            values = bank.synthesize_values(values)
        return GraphSignal(self.graph, values)


def analyze_separable(
    graph: Graph,
    decomp: BipartiteDecomposition,
    kernels: KernelSet,
    mode: str,
    sig: GraphSignal,
    order: Optional[int] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> SubbandTree:
    bank = SeparableBank(graph, decomp, kernels, mode, order, dense_limit)
    return bank.analyze(sig)


def synthesize_separable(
    graph: Graph,
    decomp: BipartiteDecomposition,
    kernels: KernelSet,
    mode: str,
    tree: SubbandTree,
    order: Optional[int] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    zero_channels: Iterable[str] = (),
) -> GraphSignal:
    bank = SeparableBank(graph, decomp, kernels, mode, order, dense_limit)
    return bank.synthesize(tree, zero_channels)


@dataclass(frozen=True)
class PRConditionReport:
    """Pointwise residuals of the reconstruction and orthogonality conditions."""

    aliasing_residual: float
    distortion_residual: float
    orthogonality_residual: float

    def max_residual(self) -> float:
        return max(
            self.aliasing_residual, self.distortion_residual, self.orthogonality_residual
        )


def verify_pr_conditions(
    kernels: KernelSet, points: Union[Spectrum, np.ndarray, Sequence[float]]
) -> PRConditionReport:
    """Evaluate the alias-cancellation, flat-response, and orthogonality residuals.

    ``points`` may be a Spectrum (its group eigenvalues are used) or any grid
    over [0, 2].  All three residuals vanish exactly for a power-complementary
    quadrature-mirror set.
    """
    if isinstance(points, Spectrum):
        lam = np.asarray(points.effective_eigenvalues, dtype=float)
    else:
        lam = np.asarray(points, dtype=float).reshape(-1)
    c2 = kernels.gain**2
    h0, h1 = kernels.h0, kernels.h1
    g0, g1 = kernels.g0, kernels.g1
    h0m, h1m = h0(2.0 - lam), h1(2.0 - lam)
    aliasing = np.abs(g0(lam) * h0m - g1(lam) * h1m)
    distortion = np.abs(g0(lam) * h0(lam) + g1(lam) * h1(lam) - c2)
    orth_mirror = np.abs(h0(lam) * h0m - h1(lam) * h1m)
    orth_power = np.abs(h0(lam) ** 2 + h1(lam) ** 2 - c2)
    return PRConditionReport(
        float(aliasing.max(initial=0.0)),
        float(distortion.max(initial=0.0)),
        float(max(orth_mirror.max(initial=0.0), orth_power.max(initial=0.0))),
    )


def stage_orthogonality_residuals(bank: SeparableBank) -> tuple[float, ...]:
    """Frobenius residual of (sqrt(2)/gain * T_a)^t (sqrt(2)/gain * T_a) - I per stage."""
    scale = 2.0 / bank.kernels.gain**2
    out = []
    for stage_bank in bank.stage_banks:
        op = analysis_operator(stage_bank)
        gram = scale * op.T @ op
        out.append(float(np.linalg.norm(gram - np.eye(op.shape[0]))))
    return tuple(out)


def verify_commutation(
    graph: Graph,
    decomp: BipartiteDecomposition,
    kernels: KernelSet,
    mode: str = "exact",
    order: Optional[int] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> float:
    """Largest Frobenius norm of [later-stage filter, earlier-stage sign flip].

    With the all-unassigned-cross-edges stage rule, every later stage splits
    into components that sit inside one side of each earlier bipartition, so
    the commutators are structurally zero.  A stage edge that crosses an
    earlier partition makes the residual strictly positive.
    """
    if decomp.n_stages < 2:
        raise ValueError("commutation needs at least two decomposition stages")
    bank = SeparableBank(graph, decomp, kernels, mode, order, dense_limit)
    worst = 0.0
    for i in range(decomp.n_stages - 1):
        signs = bank.stage_banks[i].signs
        for j in range(i + 1, decomp.n_stages):
            for which in ("h0", "h1"):
                filt = bank.stage_banks[j].filter_matrix(which)
                commutator = filt * signs[None, :] - signs[:, None] * filt
                worst = max(worst, float(np.linalg.norm(commutator)))
    return worst


@dataclass(frozen=True, eq=False)
class MultiresLevel:
    """Coarse graph on a kept vertex set, with the id mapping back to the host."""

    graph: Graph
    original_ids: tuple[int, ...]


def downsampled_graph(graph: Graph, keep: Iterable[int], hop: int = 2) -> MultiresLevel:
    """Reconnect kept vertices that are within ``hop`` hops in the host graph.

    Reconnection edges get unit weight; the host's weights carry no farther
    than the hop metric here.
    """
    keep_sorted = sorted(set(int(v) for v in keep))
    if not keep_sorted:
        raise ValueError("keep set must not be empty")
    if any(v < 0 or v >= graph.n_vertices for v in keep_sorted):
        raise ValueError("keep set contains out-of-range vertices")
    if hop < 2:
        raise ValueError(f"hop must be at least 2, got {hop}")
    rank = {v: i for i, v in enumerate(keep_sorted)}
    edges = []
    for v in keep_sorted:
        dist = bfs_distances(graph, v, max_hops=hop)
        for u in keep_sorted:
            if u > v and 1 <= dist[u] <= hop:
                edges.append((rank[v], rank[u], 1.0))
    return MultiresLevel(
        Graph.from_edges(len(keep_sorted), edges), tuple(keep_sorted)
    )


@dataclass(frozen=True, eq=False)
class ChannelEnergyReport:
    """Per-channel synthesis contributions and their energies."""

    labels: tuple[str, ...]
    energies: dict[str, float]
    contributions: dict[str, np.ndarray]
    reconstruction: np.ndarray
    input_energy: float
    # max |sum of contributions - full reconstruction|, a linearity check
    additivity_residual: float

    def total_energy(self) -> float:
        return float(sum(self.energies.values()))


def channel_energy_report(
    bank: SeparableBank, tree: SubbandTree, original: GraphSignal
) -> ChannelEnergyReport:
    """Synthesize each channel alone and account for where the energy lives.

    In exact mode with a power-complementary kernel set the contribution
    energies add up to the input signal's energy.
    """
    if original.host != bank.graph:
        raise ValueError("signal host does not match the bank's graph")
    reconstruction = bank.synthesize(tree).values
    contributions: dict[str, np.ndarray] = {}
    energies: dict[str, float] = {}
    total = np.zeros(bank.graph.n_vertices)
    for label in tree.labels:
        contrib = bank.synthesize(tree.with_only(label)).values
        contributions[label] = contrib
        energies[label] = float(np.sum(contrib**2))
        total += contrib
    residual = float(np.abs(total - reconstruction).max(initial=0.0))
    return ChannelEnergyReport(
        tree.labels,
        energies,
        contributions,
        reconstruction,
        float(np.sum(original.values**2)),
        residual,
    )
