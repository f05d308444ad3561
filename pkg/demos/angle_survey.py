#!/usr/bin/env python3
"""Survey projections of a planar set over many directions."""
import argparse
import math

from deltagrid import (AngleMeasure, Scale, cartesian_product, gen_cantor,
                       marstrand_average, sweep)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--base", type=int, default=3)
    ap.add_argument("--angles", type=int, default=120)
    ap.add_argument("--fraction", type=float, default=0.9,
                    help="mass fraction the adversary must keep")
    args = ap.parse_args()

    levels = max(1, int(math.log(1 << args.n, args.base)))
    side = gen_cantor(Scale(args.n), args.base, (0, args.base - 1), levels)
    E = cartesian_product(side, side)
    print("set: squared base-%d digit set, %d cells, depth %d" %
          (args.base, E.count, args.n))

    st = marstrand_average(E, args.angles)
    print("projection measure over %d angles: mean %.4f  median %.4f  min %.4f"
          % (args.angles, st.mean, st.median, st.min))
    print("energy I_1 of the uniform measure: %.4f" % st.energy_i1)

    # adversarial counts: worst sub-collection of fibers holding the mass
    thetas = AngleMeasure.uniform(Scale(8)).quantile_angles(args.angles)
    rep = sweep(E, [float(t) for t in thetas], args.fraction)
    s = rep.summary
    print("\nper-angle counts, %d directions, keep fraction %.2f" %
          (args.angles, args.fraction))
    for key in ("projection", "adversarial"):
        row = s[key]
        print("  %-12s min %6d  q25 %6d  median %6d  q75 %6d  max %6d" %
              (key, row["min"], row["q25"], row["median"], row["q75"], row["max"]))
    floor = math.sqrt(E.count)
    beat = sum(1 for r in rep.records if r.adversarial_count > floor)
    print("\n%d/%d directions beat the sqrt(|E|) = %.0f floor" %
          (beat, args.angles, floor))


if __name__ == "__main__":
    main()
