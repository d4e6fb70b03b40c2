#!/usr/bin/env python3
"""Bound vs simulation sweeps for max degree, expected clique number and completeness.

Writes one CSV per event under --outdir, in the same schema as the ``sweep`` command.
Add ``oracle`` to --methods for cells small enough to enumerate.
"""
import argparse
import os
import time

from randintervals.cli import SweepSpec, parse_range, run_sweep, write_csv

EVENTS = {"maxdeg": "max_degree", "mean:clique": "clique_number", "complete": "complete"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", default="2:8")
    ap.add_argument("--n", default="2:60:2")
    ap.add_argument("--methods", default="bound,mc")
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    for event, stem in EVENTS.items():
        spec = SweepSpec(
            m_values=tuple(parse_range(args.m)),
            n_values=tuple(parse_range(args.n)),
            event=event,
            methods=tuple(args.methods.split(",")),
            trials=args.trials,
            seed=args.seed,
        )
        start = time.perf_counter()
        path = os.path.join(args.outdir, f"{stem}.csv")
        write_csv(run_sweep(spec, args.workers), path)
        print(f"{path}: {len(spec.cells())} cells in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
