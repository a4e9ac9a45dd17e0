#!/usr/bin/env python3
"""Polynomial approximation error of the smooth vs brick-wall lowpass kernels.

Sweeps the Chebyshev order, measures the max absolute deviation from the
target response on a uniform spectral grid, and writes one error table plus
per-order response tables ready for plotting.
"""
import argparse
import os

import numpy as np

from graphfb import chebyshev_fit, ideal_kernel, meyer_kernel, save_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--orders", type=int, nargs="+", default=[2, 4, 6, 8, 10])
    parser.add_argument("--points", type=int, default=1000)
    parser.add_argument("--out", default="out/kernel_approximation")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    grid = np.linspace(0.0, 2.0, args.points)
    smooth = meyer_kernel()
    brick = ideal_kernel()
    smooth_target = smooth(grid)
    brick_target = np.where(grid < 1, 1.0, np.where(grid == 1, 1 / np.sqrt(2), 0.0))

    save_table(
        os.path.join(args.out, "targets.txt"),
        ("lambda", "meyer", "ideal"),
        zip(grid, smooth_target, brick_target),
    )

    rows = []
    print(f"{'order':>5} {'meyer-err':>12} {'ideal-err':>12}")
    for m in args.orders:
        smooth_fit = chebyshev_fit(smooth, m)(grid)
        brick_fit = chebyshev_fit(brick, m)(grid)
        smooth_err = np.abs(smooth_fit - smooth_target)
        brick_err = np.abs(brick_fit - brick_target)
        rows.append((m, smooth_err.max(), brick_err.max()))
        print(f"{m:>5} {smooth_err.max():>12.6f} {brick_err.max():>12.6f}")
        save_table(
            os.path.join(args.out, f"error_order{m}.txt"),
            ("lambda", "meyer_error", "ideal_error"),
            zip(grid, smooth_err, brick_err),
        )
    save_table(
        os.path.join(args.out, "max_errors.txt"),
        ("order", "meyer_error", "ideal_error"),
        rows,
    )
    print(f"tables written to {args.out}")


if __name__ == "__main__":
    main()
