#!/usr/bin/env python3
"""Sweep resolvent norms for a canonical generator and print the Kreiss constant.

    python scripts/sweep_resolvent.py --kind jordan --size 2 --alpha 1.0
"""

import argparse
import sys

import numpy as np

from kreisslab import (build_diagonal, build_jordan, build_wave, default_grid, kreiss_fit,
                       shifted, sweep, WaveTruncationParams)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kind", choices=("diagonal", "jordan", "wave"), default="jordan")
    parser.add_argument("--size", type=int, default=2, help="block size / mode count")
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--shift", type=float, default=0.0)
    parser.add_argument("--r-count", type=int, default=30)
    parser.add_argument("--beta-count", type=int, default=61)
    args = parser.parse_args()

    if args.kind == "diagonal":
        sysm = build_diagonal([1j * k for k in range(-args.size, args.size + 1)])
    elif args.kind == "jordan":
        sysm = build_jordan(0.0, args.size)
    else:
        sysm = build_wave(WaveTruncationParams(args.size, args.size))
    if args.shift:
        sysm = shifted(sysm, args.shift)

    grid = default_grid(sysm, r_count=args.r_count, beta_count=args.beta_count)
    samples = sweep(sysm, grid.r_values(), grid.beta_values())
    fit = kreiss_fit(samples, args.alpha, grid=grid)
    norms = np.array([s.norm for s in samples])
    print(f"system: {sysm.label} (dim {sysm.dim})")
    print(f"grid: {grid.r_count} x {grid.beta_count} points, "
          f"max ||R|| = {norms.max():.6g}")
    print(f"alpha = {args.alpha:g}: C_est = {fit.c_est:.6g} "
          f"at lambda = {fit.argmax_lambda:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
