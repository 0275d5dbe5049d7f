"""Heuristic bisection cut fractions of ER_q (and optional random regular baselines)."""

import argparse
import csv
import sys

from polarfly.analysis import bisection, random_regular_baseline
from polarfly.ergraph import build_er


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[7, 11, 13, 17, 19, 23, 31])
    ap.add_argument("--restarts", type=int, default=32)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--baseline", action="store_true")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["graph", "q", "n", "total_edges", "best_cut", "cut_fraction"])
    for q in args.q:
        graphs = [("er", build_er(q))]
        if args.baseline:
            graphs.append(("rrg", random_regular_baseline(q * q + q + 1, q + 1, seed=q)))
        for name, g in graphs:
            best = min((bisection(g, args.restarts, seed=s) for s in range(args.seeds)),
                       key=lambda r: r.cut_edges)
            w.writerow([name, q, g.n, best.total_edges, best.cut_edges, f"{best.fraction:.4f}"])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
