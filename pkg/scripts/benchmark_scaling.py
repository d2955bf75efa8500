#!/usr/bin/env python3
"""Time the pipeline on the 10k and 100k synthetic presets.

The co-citing construction uses a reference inverted index, so the
runtime should grow roughly linearly with corpus size; this script
reports the measured ratio.

Usage: python scripts/benchmark_scaling.py [--seed 11] [--workers 1]
"""

import argparse
import tempfile
import time
from pathlib import Path

from collabtopics.pipeline import RunConfig, run_pipeline


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    times = {}
    with tempfile.TemporaryDirectory() as tmp:
        for preset in ("bench10k", "bench100k"):
            cfg = RunConfig(
                seed=args.seed,
                out_dir=str(Path(tmp) / preset),
                synth_preset=preset,
                surrogate=True,
                workers=args.workers,
            )
            start = time.time()
            results = run_pipeline(cfg)
            times[preset] = time.time() - start
            n = len(next(iter(results.values())))
            print(f"{preset}: {times[preset]:.1f}s ({n} focal scientists)")
    print(f"scaling ratio (100k / 10k): {times['bench100k'] / times['bench10k']:.1f}x")


if __name__ == "__main__":
    main()
