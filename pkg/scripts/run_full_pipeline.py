#!/usr/bin/env python3
"""End-to-end desk-scale experiment: expand, analyze, extract paths, report.

Runs the synthetic generator (no endpoint needed), so the whole pipeline is
reproducible from the seed. Useful as a smoke test and as a template for
driving a real endpoint (swap --synthetic for --endpoint).

    python scripts/run_full_pipeline.py --iterations 200 --seed 7 --out runs/demo
"""

import argparse
import sys
from pathlib import Path

from kgexpand.cli import main as kgexpand_main


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=200)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", default="runs/demo")
    parser.add_argument("--samples", default="1000",
                        help="node pairs sampled per iteration, or 'all'")
    parser.add_argument("--stride", type=int, default=1,
                        help="analyze every Nth snapshot")
    parser.add_argument("--mode", choices=["agentic", "compositional"],
                        default="compositional")
    return parser.parse_args()


def run(args) -> int:
    out = Path(args.out)
    snaps = out / "snapshots"
    steps = [
        ["run", "--synthetic", "--iterations", str(args.iterations),
         "--seed", str(args.seed), "--out", str(snaps)],
        ["analyze", str(snaps), "--out", str(out / "analysis"),
         "--seed", str(args.seed), "--samples", args.samples,
         "--stride", str(args.stride)],
        ["paths", str(snaps), "--mode", args.mode, "--out", str(out / "paths"),
         "--seed", str(args.seed)],
        ["report", str(snaps), "--out", str(out / "report"),
         "--seed", str(args.seed), "--analysis", str(out / "analysis"),
         "--paths", str(out / "paths")],
    ]
    for step in steps:
        print(f"\n== kgexpand {' '.join(step)}")
        code = kgexpand_main(step)
        if code != 0:
            return code
    print(f"\nAll outputs under {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(run(parse_args()))
