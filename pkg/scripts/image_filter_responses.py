#!/usr/bin/env python3
"""2D-DFT magnitude responses of the ideal lowpass filter on image graphs.

Builds the four bipartite lattice formulations (rectangular, horizontal-only,
vertical-only, diagonal-only), applies the exact brick-wall lowpass at the
center pixel, and writes the DFT magnitude over the frequency plane.  The
rectangular lattice yields the quincunx diamond passband; the single-axis
lattices yield half-band responses; the diagonal lattice passes a rotated
diamond.
"""
import argparse
import os

import numpy as np

from graphfb import (
    eigendecompose,
    ideal_kernel,
    image_graph,
    normalized_laplacian,
    save_table,
)
from graphfb.kernels import exact_filter_values


def response_magnitude(kind, width, height):
    graph = image_graph(width, height, kind)
    spectrum = eigendecompose(normalized_laplacian(graph))
    impulse = np.zeros(graph.n_vertices)
    impulse[(height // 2) * width + width // 2] = 1.0
    response = exact_filter_values(spectrum, ideal_kernel(), impulse)
    magnitude = np.abs(np.fft.fftshift(np.fft.fft2(response.reshape(height, width))))
    omega1 = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(width))
    omega2 = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(height))
    return omega1, omega2, magnitude


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=32, help="lattice side length")
    parser.add_argument("--out", default="out/image_responses")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    for kind in ("rect", "horizontal", "vertical", "diagonal"):
        omega1, omega2, magnitude = response_magnitude(kind, args.size, args.size)
        rows = [
            (w1, w2, magnitude[j, i])
            for j, w2 in enumerate(omega2)
            for i, w1 in enumerate(omega1)
        ]
        path = os.path.join(args.out, f"dft_{kind}.txt")
        save_table(path, ("omega1", "omega2", "magnitude"), rows)
        abs1 = np.abs(omega1)[None, :] + np.zeros((args.size, 1))
        abs2 = np.abs(omega2)[:, None] + np.zeros((1, args.size))
        if kind == "rect":
            # quincunx diamond: pass |w1| + |w2| below pi
            passband = (abs1 + abs2) <= 0.8 * np.pi
            stopband = (abs1 + abs2) >= 1.2 * np.pi
        elif kind == "horizontal":
            passband = abs1 <= 0.8 * (np.pi / 2)
            stopband = abs1 >= 1.2 * (np.pi / 2)
        elif kind == "vertical":
            passband = abs2 <= 0.8 * (np.pi / 2)
            stopband = abs2 >= 1.2 * (np.pi / 2)
        else:
            # diagonal links pass both the origin and the (pi, pi) corner
            near = np.minimum(abs1 + abs2, (np.pi - abs1) + (np.pi - abs2))
            far = np.minimum(abs1 + (np.pi - abs2), (np.pi - abs1) + abs2)
            passband = near <= 0.4 * np.pi
            stopband = far <= 0.4 * np.pi
        print(
            f"{kind:>10}: passband min {magnitude[passband].min():.4f}, "
            f"stopband max {magnitude[stopband].max():.4f}  ({path})"
        )


if __name__ == "__main__":
    main()
