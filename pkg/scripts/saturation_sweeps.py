"""Latency/throughput curves and saturation points for each traffic x routing pair.

Writes one sweep CSV per pair plus saturation.csv into --out. Pairs run in
separate processes; each run is still deterministic for its seed.
"""

import argparse
import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from polarfly.netsim import SimConfig, find_saturation, stats_csv, sweep, zero_load_latency


def run_pair(base: SimConfig, traffic: str, routing: str, rates, out: Path):
    cfg = replace(base, traffic=traffic, routing=routing)
    stats = sweep(cfg, rates)
    (out / f"sweep_{traffic}_{routing}.csv").write_text(stats_csv(stats))
    return traffic, routing, zero_load_latency(cfg), find_saturation(cfg, tol=0.01)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=13)
    ap.add_argument("--p-endpoints", type=int, default=7)
    ap.add_argument("--traffic", nargs="+", default=["uniform", "random_permutation", "perm1hop", "tornado"])
    ap.add_argument("--routing", nargs="+", default=["min", "valiant", "ugal", "ugal_pf"])
    ap.add_argument("--rates", type=float, nargs="+", default=list(np.round(np.arange(0.05, 1.0001, 0.05), 2)))
    ap.add_argument("--warmup", type=int, default=2000)
    ap.add_argument("--measure", type=int, default=8000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--out", default="results/sweeps")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = SimConfig(graph=args.q, endpoints_per_router=args.p_endpoints, warmup_cycles=args.warmup,
                     measure_cycles=args.measure, seed=args.seed)
    pairs = list(itertools.product(args.traffic, args.routing))
    with ProcessPoolExecutor(args.jobs) as pool:
        futs = [pool.submit(run_pair, base, t, r, sorted(args.rates), out) for t, r in pairs]
        rows = [f.result() for f in futs]

    with open(out / "saturation.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["traffic", "routing", "zero_load_latency", "saturation"])
        for t, r, z, s in rows:
            w.writerow([t, r, f"{z:.3f}", f"{s:.4f}"])
            print(f"{t:>20} {r:>16}  zero-load {z:6.2f}  saturation {s:.3f}")


if __name__ == "__main__":
    main()
