"""Scan the standard family over (u, v) and tabulate the renormalization classes.

    python3 scripts/scan_combinatorics.py --grid 50 --out outputs/scan.csv
"""
import argparse
import csv
import os
from collections import Counter

import numpy as np

from lorenz_renorm import LorenzPermutation, find_renormalization, is_lorenz_permutation, standard_family
from lorenz_renorm.errors import ClassificationError


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--grid", type=int, default=50)
    ap.add_argument("--c", type=float, default=0.5)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--max-time", type=int, default=8)
    ap.add_argument("--out", default="outputs/scan.csv")
    args = ap.parse_args()

    rows = []
    for u in np.linspace(0.51, 0.999, args.grid):
        for v in np.linspace(0.001, 0.49, args.grid):
            f = standard_family(u, v, args.c, args.alpha)
            try:
                step = find_renormalization(f, args.max_time)
            except ClassificationError:
                continue
            if step is not None:
                rows.append((u, v, str(step.theta), step.m_minus, step.m_plus, step.q - step.p))

    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v", "theta", "m_minus", "m_plus", "C_length"])
        w.writerows(rows)

    counts = Counter(r[2] for r in rows)
    print(f"{len(rows)} renormalizable maps in {len(counts)} classes")
    for theta, k in counts.most_common():
        ok = is_lorenz_permutation(LorenzPermutation.parse(theta))
        print(f"  {theta:>24}  {k:4d}  realizable={ok}")


if __name__ == "__main__":
    main()
