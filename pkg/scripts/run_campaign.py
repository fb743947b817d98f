#!/usr/bin/env python3
"""Drive the full flexibility campaign with default parameters.

Usage: python3 scripts/run_campaign.py [OUT_DIR]

Resumable: completed cells are loaded from OUT_DIR/cells/, so re-running
after an interruption continues where it stopped.
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cutflex.experiment import ExperimentConfig, run_experiment


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "results/full"
    config = ExperimentConfig()
    start = time.time()

    def progress(msg: str) -> None:
        print(f"{time.time() - start:8.0f}s {msg}", flush=True)

    bundle = run_experiment(config, out, progress=progress)
    agg = bundle["aggregates"]
    print("\nAggregate average computational effort:", flush=True)
    for key in ("scratch", "adapt-baseline", "varying-goals",
                "varying-goals+active-inactive"):
        row = agg[key]
        print(f"  {key:36s} "
              f"{row['average'] if row else 'failed'}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
