#!/usr/bin/env python3
"""P(max degree = m-1): Scheinerman's endpoint model against colorings of n points.

The Scheinerman column should sit near 2/3 for every m; the coloring model depends on n and m.
"""
import argparse
import csv
import os

from randintervals import montecarlo as mc
from randintervals.model import LabelDistribution
from randintervals.oracle import MaxDegreeEquals


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=50)
    ap.add_argument("--n", default="50,100,200")
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="results/scheinerman.csv")
    args = ap.parse_args()

    ns = [int(v) for v in args.n.split(",")]
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "model", "n", "value", "ci_low", "ci_high", "trials", "seed"])
        for m in range(2, args.max_m + 1):
            est = mc.scheinerman_max_degree_estimate(m, args.trials, args.seed)
            w.writerow([m, "scheinerman", "", est.point_estimate, est.ci_low, est.ci_high, args.trials, args.seed])
            for n in ns:
                if n < m:
                    continue
                est = mc.estimate_event(n, LabelDistribution.uniform(m), MaxDegreeEquals(), args.trials, args.seed)
                w.writerow([m, "coloring", n, est.point_estimate, est.ci_low, est.ci_high, args.trials, args.seed])
            print(f"m={m} done")


if __name__ == "__main__":
    main()
