"""Normalized Laplacian, dense eigendecomposition, GFT, and sampling operators."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .graph import Bipartition, Graph, connected_components, is_bipartite

DEFAULT_DENSE_LIMIT = 4096

# Eigenvalues closer than this (relative to the spectral radius) are treated
# as one eigenspace, so exact multiplicities survive floating-point jitter.
GROUP_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class GraphSignal:
    """Real scalar sample per vertex of a host graph."""

    host: Graph
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).reshape(-1).copy()
        if values.shape[0] != self.host.n_vertices:
            raise ValueError(
                f"signal length {values.shape[0]} does not match "
                f"{self.host.n_vertices} vertices"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.host.n_vertices


@dataclass(frozen=True)
class NormalizedLaplacian:
    """Symmetric degree-normalized Laplacian of a graph.

    Zero-degree vertices keep a diagonal entry of 1, which places them at the
    spectrum's center of symmetry; their indicator vectors are eigenvectors
    with eigenvalue exactly 1.
    """

    host: Graph

    @cached_property
    def scaled_adjacency(self) -> sp.csr_matrix:
        """D^{-1/2} A D^{-1/2} as sparse CSR (zero rows at isolated vertices)."""
        n = self.host.n_vertices
        d = self.host.degrees
        dinv = np.zeros(n)
        positive = d > 0
        dinv[positive] = 1.0 / np.sqrt(d[positive])
        rows, cols, vals = [], [], []
        for u, v, w in self.host.edges:
            s = w * dinv[u] * dinv[v]
            rows += [u, v]
            cols += [v, u]
            vals += [s, s]
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    @cached_property
    def matrix(self) -> np.ndarray:
        n = self.host.n_vertices
        m = np.eye(n) - self.scaled_adjacency.toarray()
        m.flags.writeable = False
        return m

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Matrix-vector product without materializing the dense matrix."""
        return values - self.scaled_adjacency @ values

    @property
    def n_vertices(self) -> int:
        return self.host.n_vertices


def normalized_laplacian(graph: Graph) -> NormalizedLaplacian:
    return NormalizedLaplacian(graph)


@dataclass(frozen=True)
class EigenGroup:
    value: float
    indices: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (ascending), orthonormal eigenvectors, and multiplicity groups."""

    host: Graph
    eigenvalues: np.ndarray
    vectors: np.ndarray
    groups: tuple[EigenGroup, ...]

    @cached_property
    def effective_eigenvalues(self) -> np.ndarray:
        """Per-index eigenvalue snapped to its multiplicity-group representative."""
        eff = np.empty_like(self.eigenvalues)
        for group in self.groups:
            eff[list(group.indices)] = group.value
        eff.flags.writeable = False
        return eff

    def projector(self, group: Union[int, EigenGroup]) -> np.ndarray:
        """Orthogonal projector onto one eigenspace."""
        if isinstance(group, int):
            group = self.groups[group]
        cols = self.vectors[:, list(group.indices)]
        return cols @ cols.T

    @property
    def n_vertices(self) -> int:
        return self.host.n_vertices


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    # Deterministic orientation: first entry of significant magnitude positive.
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        peak = np.abs(col).max()
        if peak == 0.0:
            continue
        nz = np.nonzero(np.abs(col) > 1e-12 * peak)[0]
        if nz.size and col[nz[0]] < 0:
            vecs[:, j] = -col
    return vecs


def _group_eigenvalues(vals: np.ndarray) -> tuple[EigenGroup, ...]:
    if vals.size == 0:
        return ()
    tol = GROUP_TOLERANCE * max(1.0, float(np.abs(vals).max()))
    groups = []
    start = 0
    for i in range(1, vals.size + 1):
        if i == vals.size or vals[i] - vals[i - 1] > tol:
            members = tuple(range(start, i))
            groups.append(EigenGroup(float(np.mean(vals[start:i])), members))
            start = i
    return tuple(groups)


def eigendecompose(
    lap: NormalizedLaplacian, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> Spectrum:
    """Dense symmetric eigendecomposition, one connected component at a time.

    Per-component solves keep eigenvectors exactly zero off their component,
    which preserves the block structure that downstream operators rely on.
    """
    n = lap.n_vertices
    if n > dense_limit:
        raise ValueError(f"graph has {n} vertices, above the dense limit {dense_limit}")
    scaled = lap.scaled_adjacency
    vals = np.empty(n)
    vecs = np.zeros((n, n))
    col = 0
    for comp in connected_components(lap.host):
        idx = np.asarray(comp)
        block = -scaled[np.ix_(idx, idx)].toarray()
        np.fill_diagonal(block, block.diagonal() + 1.0)
        w, u = np.linalg.eigh(block)
        vals[col : col + idx.size] = w
        vecs[np.ix_(idx, range(col, col + idx.size))] = u
        col += idx.size
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    vals.flags.writeable = False
    vecs.flags.writeable = False
    return Spectrum(lap.host, vals, vecs, _group_eigenvalues(vals))


@dataclass(frozen=True, eq=False)
class DownsamplingMap:
    """Keep/discard pattern over the vertices as a +1/-1 sign vector."""

    n_vertices: int
    keep: frozenset[int]

    def __post_init__(self) -> None:
        bad = [v for v in self.keep if not 0 <= v < self.n_vertices]
        if bad:
            raise ValueError(f"keep set contains out-of-range vertices {bad}")

    @cached_property
    def signs(self) -> np.ndarray:
        beta = -np.ones(self.n_vertices)
        beta[sorted(self.keep)] = 1.0
        beta.flags.writeable = False
        return beta

    def complement(self) -> "DownsamplingMap":
        other = frozenset(range(self.n_vertices)) - self.keep
        return DownsamplingMap(self.n_vertices, other)

    @classmethod
    def keeping(cls, n_vertices: int, vertices: Iterable[int]) -> "DownsamplingMap":
        return cls(n_vertices, frozenset(int(v) for v in vertices))


def _check_host(sig: GraphSignal, host: Graph, what: str) -> None:
    if sig.host != host:
        raise ValueError(f"signal host does not match the {what}")


def gft(sig: GraphSignal, spectrum: Spectrum) -> np.ndarray:
    """Spectral coefficients: projections onto the Laplacian eigenvectors."""
    _check_host(sig, spectrum.host, "spectrum host")
    return spectrum.vectors.T @ sig.values


def igft(coeffs: Sequence[float], spectrum: Spectrum) -> GraphSignal:
    coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
    if coeffs.shape[0] != spectrum.n_vertices:
        raise ValueError(
            f"coefficient length {coeffs.shape[0]} does not match "
            f"{spectrum.n_vertices} vertices"
        )
    return GraphSignal(spectrum.host, spectrum.vectors @ coeffs)


def du_operator(sig: GraphSignal, dmap: DownsamplingMap) -> GraphSignal:
    """Downsample-then-upsample: zero the discarded samples, keep the rest."""
    if dmap.n_vertices != sig.host.n_vertices:
        raise ValueError("downsampling map size does not match the signal host")
    return GraphSignal(sig.host, 0.5 * (1.0 + dmap.signs) * sig.values)


def du_spectral_decomposition(
    sig: GraphSignal, dmap: DownsamplingMap, spectrum: Spectrum
) -> tuple[np.ndarray, np.ndarray]:
    """Original and deformed spectral coefficients of a DU operation.

    The deformed coefficient at index l is the projection of the signal onto
    the sign-flipped eigenvector, and the DU output spectrum is the average
    of the two returned vectors.
    """
    _check_host(sig, spectrum.host, "spectrum host")
    if dmap.n_vertices != sig.host.n_vertices:
        raise ValueError("downsampling map size does not match the signal host")
    original = spectrum.vectors.T @ sig.values
    deformed = spectrum.vectors.T @ (dmap.signs * sig.values)
    return original, deformed


@dataclass(frozen=True, eq=False)
class FoldingReport:
    max_residual: float
    residuals: np.ndarray


def verify_spectral_folding(
    graph: Graph, partition: Bipartition, spectrum: Optional[Spectrum] = None
) -> FoldingReport:
    """Check that sign-flipping eigenvectors mirrors their eigenvalues about 1.

    For every eigenvector u with eigenvalue lam, reports the residual
    ``|| L (J u) - (2 - lam) (J u) ||_2`` where J flips signs on the high side.
    Requires a bipartite host with a consistent partition.
    """
    if is_bipartite(graph) is None:
        raise ValueError("spectral folding requires a bipartite graph")
    if not partition.covers(graph.n_vertices):
        raise ValueError("partition does not cover the vertex set")
    for u, v, _ in graph.edges:
        if partition.side(u) == partition.side(v):
            raise ValueError(f"edge ({u}, {v}) does not cross the given partition")
    if spectrum is None:
        spectrum = eigendecompose(normalized_laplacian(graph))
    lap = normalized_laplacian(graph)
    signs = DownsamplingMap.keeping(graph.n_vertices, partition.high).signs
    flipped = signs[:, None] * spectrum.vectors
    residual_mat = lap.apply(flipped) - (2.0 - spectrum.eigenvalues)[None, :] * flipped
    residuals = np.linalg.norm(residual_mat, axis=0)
    residuals.flags.writeable = False
    return FoldingReport(float(residuals.max(initial=0.0)), residuals)


def spectrum_symmetric_about_one(
    spectrum_or_values: Union[Spectrum, np.ndarray], tol: float = 1e-8
) -> bool:
    """True when the sorted eigenvalues match their mirror about 1 elementwise."""
    if isinstance(spectrum_or_values, Spectrum):
        vals = spectrum_or_values.eigenvalues
    else:
        vals = np.sort(np.asarray(spectrum_or_values, dtype=float))
    mirrored = np.sort(2.0 - vals)
    return bool(vals.size == 0 or np.abs(vals - mirrored).max() < tol)
