"""Moore-bound efficiency of ER_q for every feasible radix in a range."""

import argparse
import sys

from polarfly.analysis import feasible_radixes, moore_table_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-min", type=int, default=4)
    ap.add_argument("--k-max", type=int, default=128)
    args = ap.parse_args()
    sys.stdout.write(moore_table_csv(feasible_radixes(args.k_min, args.k_max)))


if __name__ == "__main__":
    main()
