"""Check the interval containments level by level on a stored map.

    python3 scripts/level_intervals.py --input tests/data/fixed_point_0110.json --levels 4
"""
import argparse

from lorenz_renorm import LorenzMap, prerenormalize
from lorenz_renorm.intervals import (bounded_geometry_ratios, compute_level, compute_orbits,
                                     orbit_checks, write_level_csv)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--input", default="tests/data/fixed_point_0110.json")
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--csv", help="optional interval table")
    args = ap.parse_args()

    f = LorenzMap.from_json(open(args.input).read())
    pr = prerenormalize(f, args.levels + 2, 8)
    if pr is None:
        raise SystemExit("map is not renormalizable to the requested depth")
    levels = []
    for n in range(1, args.levels + 1):
        lv = compute_level(f, pr, n)
        levels.append(lv)
        bad = [k for k, v in lv.checks.items() if v is False]
        margin = min(lv.checks["Q_minus_margin"], lv.checks["Q_plus_margin"])
        _, Op, _, Qp = compute_orbits(f, pr, n, lv)
        ov = orbit_checks(Op, Qp)["max_overlap"]
        r = bounded_geometry_ratios(pr, n - 1)
        print(f"level {n}: |C| {lv.C[1] - lv.C[0]:.3e}  failed {bad or 'none'}  "
              f"Q margin {margin:.3e}  overlap {ov}  ratios [{r.min():.3f}, {r.max():.3f}]")
    if args.csv:
        write_level_csv(args.csv, levels)


if __name__ == "__main__":
    main()
