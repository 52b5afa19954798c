#!/usr/bin/env python3
"""Run the two-direction wave demonstration at a chosen truncation size.

Equivalent to `kreisslab run` with a generated config; handy for quick
experiments at sizes other than the checked-in fixture.

    python scripts/run_wave_demo.py --nx 4 --ny 4 --t-max 16 --out out/wave4
"""

import argparse
import json
import sys
import tempfile
from pathlib import Path

from kreisslab import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nx", type=int, default=8, help="Fourier modes in x (default 8)")
    parser.add_argument("--ny", type=int, default=8, help="Fourier modes in y (default 8)")
    parser.add_argument("--t-max", type=float, default=30.0, help="trajectory horizon")
    parser.add_argument("--out", default="out/wave-demo", help="artifact directory")
    parser.add_argument("--workers", type=int, default=2)
    args = parser.parse_args()

    config = {
        "label": f"wave-demo-nx{args.nx}-ny{args.ny}",
        "operator": {"kind": "wave", "nx": args.nx, "ny": args.ny},
        "alpha": 1.0,
        "stages": ["wave-demo"],
        "wave": {"t_max": args.t_max},
        "workers": args.workers,
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as handle:
        json.dump(config, handle)
        path = handle.name
    try:
        return cli.run(path, args.out)
    finally:
        Path(path).unlink(missing_ok=True)


if __name__ == "__main__":
    sys.exit(main())
