#!/usr/bin/env python3
"""Energy of generated measures, and pruning the cubes that inflate it."""
import argparse

from deltagrid import (Scale, energy_bound_constant, gen_cantor,
                       gen_random_frostman, nonconcentration_constant,
                       prune_heavy_cubes, riesz_energy, uniform_on)


def show(tag, A, kappa):
    t = kappa - 0.1
    mu = uniform_on(A)
    C = nonconcentration_constant(A, kappa)
    bound = energy_bound_constant(t, kappa) * C.constant
    val = riesz_energy(mu, t)
    print("%-28s %5d cells  C=%7.3f  I_%.1f=%9.3f  bound %9.3f  %s"
          % (tag, A.count, C.constant, t, val, bound,
             "ok" if val <= bound else "VIOLATION"))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--kappa", type=float, default=0.5)
    ap.add_argument("--seeds", type=int, default=4)
    args = ap.parse_args()

    print("sub-critical energy against the non-concentration bound\n")
    show("cantor base 4 {0,3}", gen_cantor(Scale(args.n), 4, (0, 3), args.n // 2),
         args.kappa)
    show("cantor base 4 {0,1}", gen_cantor(Scale(args.n), 4, (0, 1), args.n // 2),
         args.kappa)
    for seed in range(args.seeds):
        show("random tree seed %d" % seed,
             gen_random_frostman(Scale(args.n), args.kappa, seed=seed), args.kappa)

    # pruning: dyadic cubes above the local mass threshold get removed
    mu = uniform_on(gen_random_frostman(Scale(args.n), args.kappa, seed=0))
    print()
    for K in (4.0, 2.0, 1.0):
        kept, removed = prune_heavy_cubes(mu, args.kappa, K, 1.0, strict=False)
        print("prune at K=%.1f: removed mass %.4f, kept %d cells"
              % (K, removed, kept.count))


if __name__ == "__main__":
    main()
