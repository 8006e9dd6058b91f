"""Search for a fixed point of renormalization and report its stability.

    python3 scripts/fixed_point.py --theta "(01|10)" --out outputs/fixed_point.json
"""
import argparse
import os
import time

from lorenz_renorm import LorenzPermutation, prerenormalize
from lorenz_renorm.flow import FixedPointConfig, fixed_point_search, stability_witness
from lorenz_renorm.intervals import length_statistics


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--theta", default="(01|10)")
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--out", default="outputs/fixed_point.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    res = fixed_point_search(LorenzPermutation.parse(args.theta), args.alpha,
                             cfg=FixedPointConfig(tol=args.tol))
    if res is None:
        raise SystemExit("search ran out of budget")
    print(f"residual {res.residual:.3e} after {res.iterations} outer steps "
          f"({time.perf_counter() - t0:.1f} s)")
    f = res.f
    print(f"c = {f.c:.15f}  u = {f.crit_value_minus:.15f}  v = {f.crit_value_plus:.15f}")

    w = stability_witness(f, 5)
    print("witness:", " ".join(f"{x:.2e}" for x in w))
    pr = prerenormalize(f, 6, 8)
    rep = length_statistics(f, pr, range(1, 6))
    print(f"length decay: O {rep.rate_O:.3f}, Q {rep.rate_Q:.3f}")

    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write(f.to_json() + "\n")


if __name__ == "__main__":
    main()
