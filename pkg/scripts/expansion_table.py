"""Vertex count, diameter, ASPL and degree growth of both expansion methods."""

import argparse
import csv
import sys

from polarfly.ergraph import avg_shortest_path, build_er, diameter
from polarfly.expand import degree_summary, expand_nonquadric, expand_quadric


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[5, 7, 11, 13])
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["method", "q", "n", "vertices", "added", "diameter", "aspl", "max_degree", "base_degree"])
    for q in args.q:
        g = build_er(q)
        for method, fn in (("quadric", expand_quadric), ("nonquadric", expand_nonquadric)):
            for n in range(1, min(args.max_n, q) + 1):
                eg = fn(g, n_replications=n)
                d = degree_summary(eg)
                w.writerow([method, q, n, eg.n, eg.n - g.n, diameter(eg.graph),
                            f"{float(avg_shortest_path(eg.graph)):.4f}", d["max"], d["base_max"]])


if __name__ == "__main__":
    main()
