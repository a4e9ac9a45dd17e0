"""Spectral kernels and Chebyshev polynomial filtering.

Kernels are scalar responses on the spectral interval [0, 2].  A lowpass
kernel h0 together with its mirror h0(2 - lam) forms a quadrature-mirror pair;
when the pair is power complementary (h0(lam)^2 + h0(2 - lam)^2 = c^2) the
two-channel bank built from it reconstructs perfectly and is orthogonal.

Polynomial kernels use the Chebyshev-series convention

    p(lam) = c_0 / 2 + sum_{j >= 1} c_j T_j(lam - 1),

with coefficients obtained by cosine-node quadrature on [0, 2].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .graph import Graph
from .spectral import GraphSignal, NormalizedLaplacian, Spectrum, normalized_laplacian

ArrayLike = Union[float, np.ndarray]

# Half-width of the snap window around lam = 1 for the brick-wall kernel; the
# transition value c/sqrt(2) keeps the kernel power complementary at the fold.
IDEAL_EDGE_TOL = 1e-9


@dataclass(frozen=True)
class PolynomialKernel:
    """Truncated Chebyshev series over [0, 2]."""

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) < 1:
            raise ValueError("a polynomial kernel needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @cached_property
    def _series(self) -> np.ndarray:
        c = np.asarray(self.coefficients, dtype=float)
        c = c.copy()
        c[0] *= 0.5
        return c

    def __call__(self, lam: ArrayLike) -> np.ndarray:
        return _cheb.chebval(np.asarray(lam, dtype=float) - 1.0, self._series)

    def mirrored(self) -> "PolynomialKernel":
        """Coefficients of p(2 - lam): odd-order terms flip sign."""
        flipped = tuple(
            c if j % 2 == 0 else -c for j, c in enumerate(self.coefficients)
        )
        return PolynomialKernel(flipped)


KERNEL_KINDS = ("ideal-lowpass", "meyer-lowpass", "mirrored", "polynomial", "custom")


@dataclass(frozen=True)
class SpectralKernel:
    """Scalar spectral response, total on [0, 2]."""

    kind: str
    gain: float = 1.0
    base: Optional["SpectralKernel"] = None
    polynomial: Optional[PolynomialKernel] = None
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    def __call__(self, lam: ArrayLike) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        if self.kind == "ideal-lowpass":
            out = np.where(lam < 1.0, self.gain, 0.0)
            edge = np.abs(lam - 1.0) <= IDEAL_EDGE_TOL
            return np.where(edge, self.gain / np.sqrt(2.0), out)
        if self.kind == "meyer-lowpass":
            return self.gain * np.sqrt(meyer_nu(2.0 - 1.5 * lam))
        if self.kind == "mirrored":
            return self.base(2.0 - lam)
        if self.kind == "polynomial":
            return self.polynomial(lam)
        return np.asarray(self.fn(lam), dtype=float)


@dataclass(frozen=True)
class KernelSet:
    """The four spectral kernels of a two-channel bank."""

    h0: SpectralKernel
    h1: SpectralKernel
    g0: SpectralKernel
    g1: SpectralKernel

    @property
    def gain(self) -> float:
        return self.h0.gain


def meyer_nu(x: ArrayLike) -> np.ndarray:
    """Rising cubic transition: 0 below 0, 3x^2 - 2x^3 inside (0, 1), 1 above 1.

    Satisfies meyer_nu(x) + meyer_nu(1 - x) = 1 everywhere.
    """
    x = np.asarray(x, dtype=float)
    inner = 3.0 * x**2 - 2.0 * x**3
    return np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, inner))


def ideal_kernel(gain: float = 1.0) -> SpectralKernel:
    """Brick-wall lowpass: gain below 1, gain/sqrt(2) at 1, zero above 1."""
    if gain == 0.0:
        raise ValueError("kernel gain must be nonzero")
    return SpectralKernel("ideal-lowpass", float(gain))


def meyer_kernel(gain: float = 1.0) -> SpectralKernel:
    """Smooth power-complementary lowpass: gain * sqrt(nu(2 - 1.5 lam)).

    Flat at gain on [0, 2/3], a smooth rolloff through gain/sqrt(2) at lam = 1,
    and zero on [4/3, 2].
    """
    if gain == 0.0:
        raise ValueError("kernel gain must be nonzero")
    return SpectralKernel("meyer-lowpass", float(gain))


def polynomial_spectral_kernel(poly: PolynomialKernel, gain: float = 1.0) -> SpectralKernel:
    return SpectralKernel("polynomial", float(gain), polynomial=poly)


def custom_kernel(fn: Callable[[np.ndarray], np.ndarray], gain: float = 1.0) -> SpectralKernel:
    return SpectralKernel("custom", float(gain), fn=fn)


def mirror_kernel(kernel: SpectralKernel) -> SpectralKernel:
    """The companion response at the mirrored frequency 2 - lam."""
    if kernel.kind == "polynomial":
        return SpectralKernel(
            "polynomial", kernel.gain, polynomial=kernel.polynomial.mirrored()
        )
    return SpectralKernel("mirrored", kernel.gain, base=kernel)


def qmf_companions(h0: SpectralKernel) -> KernelSet:
    """Quadrature-mirror set generated by a single lowpass kernel."""
    h1 = mirror_kernel(h0)
    return KernelSet(h0=h0, h1=h1, g0=h0, g1=h1)


def chebyshev_fit(
    kernel: Callable[[np.ndarray], np.ndarray],
    degree: int,
    quadrature_points: int = 1000,
) -> PolynomialKernel:
    """Truncated Chebyshev expansion of a kernel over [0, 2].

    Coefficients come from quadrature at the cosine nodes
    theta_q = pi (q + 1/2) / Q, which integrates the series terms exactly.
    """
    if degree < 1:
        raise ValueError(f"polynomial degree must be at least 1, got {degree}")
    if quadrature_points < degree + 1:
        raise ValueError(
            f"need at least degree + 1 = {degree + 1} quadrature points, "
            f"got {quadrature_points}"
        )
    q = np.arange(quadrature_points)
    theta = np.pi * (q + 0.5) / quadrature_points
    samples = np.asarray(kernel(1.0 + np.cos(theta)), dtype=float)
    coeffs = [
        2.0 / quadrature_points * float(np.sum(samples * np.cos(j * theta)))
        for j in range(degree + 1)
    ]
    return PolynomialKernel(tuple(coeffs))


def chebyshev_apply(
    lap: NormalizedLaplacian, coefficients, values: np.ndarray
) -> np.ndarray:
    """Three-term recurrence for p(L) x on the shifted operator L - I.

    Works on 1-D signals or (n, k) batches.  Only sparse products with the
    scaled adjacency are formed, so entries farther than the polynomial degree
    from the signal's support stay exactly zero.
    """
    coeffs = np.asarray(coefficients, dtype=float)
    scaled = lap.scaled_adjacency
    t_prev = np.asarray(values, dtype=float)
    out = 0.5 * coeffs[0] * t_prev
    if coeffs.size > 1:
        # (L - I) x = -(D^{-1/2} A D^{-1/2}) x
        t_cur = -(scaled @ t_prev)
        out = out + coeffs[1] * t_cur
        for j in range(2, coeffs.size):
            t_next = -2.0 * (scaled @ t_cur) - t_prev
            out = out + coeffs[j] * t_next
            t_prev, t_cur = t_cur, t_next
    return out


def apply_polynomial_filter(
    graph: Graph, poly: PolynomialKernel, sig: GraphSignal
) -> GraphSignal:
    """Filter a signal with a polynomial of the graph's normalized Laplacian."""
    if sig.host != graph:
        raise ValueError("signal host does not match the graph")
    lap = normalized_laplacian(graph)
    return GraphSignal(graph, chebyshev_apply(lap, poly.coefficients, sig.values))


def exact_filter_values(
    spectrum: Spectrum, kernel: Callable[[np.ndarray], np.ndarray], values: np.ndarray
) -> np.ndarray:
    """Apply sum_lam kernel(lam) P_lam, evaluating on group eigenvalues.

    Evaluating on the multiplicity-group representative keeps discontinuous
    kernels consistent across a degenerate eigenspace.
    """
    response = np.asarray(kernel(spectrum.effective_eigenvalues), dtype=float)
    return spectrum.vectors @ (response * (spectrum.vectors.T @ values))


def apply_exact_filter(
    spectrum: Spectrum, kernel: Callable[[np.ndarray], np.ndarray], sig: GraphSignal
) -> GraphSignal:
    if sig.host != spectrum.host:
        raise ValueError("signal host does not match the spectrum host")
    return GraphSignal(sig.host, exact_filter_values(spectrum, kernel, sig.values))


def exact_filter_matrix(
    spectrum: Spectrum, kernel: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    response = np.asarray(kernel(spectrum.effective_eigenvalues), dtype=float)
    return (spectrum.vectors * response[None, :]) @ spectrum.vectors.T


def response_table(
    kernel: Callable[[np.ndarray], np.ndarray], n_points: int = 1000
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform sampling of a kernel over [0, 2] for export or plotting."""
    grid = np.linspace(0.0, 2.0, n_points)
    return grid, np.asarray(kernel(grid), dtype=float)


def power_complementarity_residual(
    kernel: Callable[[np.ndarray], np.ndarray],
    lam: np.ndarray,
    gain: float = 1.0,
) -> float:
    """Max deviation of k(lam)^2 + k(2 - lam)^2 from gain^2 over the points."""
    lam = np.asarray(lam, dtype=float)
    k0 = np.asarray(kernel(lam), dtype=float)
    k1 = np.asarray(kernel(2.0 - lam), dtype=float)
    return float(np.abs(k0**2 + k1**2 - gain**2).max(initial=0.0))
