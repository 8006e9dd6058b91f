"""Main inequality and power-like extensions across levels.

    python3 scripts/complex_bounds.py --input tests/data/fixed_point_0110.json --levels 3 4 5
"""
import argparse
import time

from lorenz_renorm import LorenzMap, prerenormalize
from lorenz_renorm.verifier import scan_offsets, verify_main_inequality


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--input", default="tests/data/fixed_point_0110.json")
    ap.add_argument("--levels", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--samples", type=int, default=1024)
    ap.add_argument("--vertices", type=int, default=4096)
    args = ap.parse_args()

    f = LorenzMap.from_json(open(args.input).read())
    pr = prerenormalize(f, max(args.levels) + 1, 8)
    for n in args.levels:
        t0 = time.perf_counter()
        line = [f"n={n}"]
        for m in range(1, min(n, 3) + 1):
            rep = verify_main_inequality(f, n, m, args.samples, pr=pr)
            line.append(f"B1(m={m}) {rep.empirical_B1:.3f} ok {rep.success_rate:.3f}")
        scan = scan_offsets(f, n, pr=pr, vertices=args.vertices)
        line.append(f"nu {scan.best_nu:.4f} (m={scan.best_m})")
        print("  ".join(line) + f"  [{time.perf_counter() - t0:.0f} s]")


if __name__ == "__main__":
    main()
