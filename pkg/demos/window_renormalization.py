#!/usr/bin/env python3
"""Zoom a measure into its heaviest dyadic window and halve the exponent.

A kappa-regular measure can hide structure below its global Frostman
constant.  Conditioning on the window where the constant is attained and
rescaling that window to the unit interval produces a measure that is
(kappa/2)-regular with constant at most 2, which is what the dilation
search needs as input.
"""
import argparse

from deltagrid import (Scale, frostman_constant, gen_random_frostman,
                       maximal_interval, renormalized_find_expander,
                       rescale_to_unit, riesz_energy, uniform_on,
                       make_interval, find_expander)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--kappa", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    A = gen_random_frostman(Scale(args.n), args.kappa, seed=args.seed)
    mu = uniform_on(A)
    print("random %.1f-regular set, %d cells at depth %d" %
          (args.kappa, A.count, args.n))
    before = frostman_constant(mu, args.kappa)
    print("frostman constant at kappa=%.1f: %.3f (witness radius %s)" %
          (args.kappa, before.constant, before.witness_radius))
    print("energy at t=%.2f: %.4f" %
          (args.kappa - 0.1, riesz_energy(mu, args.kappa - 0.1)))

    mi = maximal_interval(mu, args.kappa)
    print("\nheaviest window: level %d, index %d, mass %.4f, m-value %.3f"
          % (mi.level, mi.index, mi.mass, mi.m_value))
    nu = rescale_to_unit(mu, mi.level, mi.index)
    after = frostman_constant(nu, args.kappa / 2)
    print("rescaled to [0,1): frostman constant at kappa/2: %.3f" % after.constant)

    # the zoomed search should match a direct search on the zoomed support
    rep = renormalized_find_expander(A, mu, args.kappa)
    if rep.degenerate:
        print("\nwindow is a single cell, expansion search skipped")
    else:
        print("\nzoomed dilation search: best x=%s ratio=%.2f exponent=%.4f"
              % (rep.best.x, rep.best.ratio, rep.best.exponent))
        direct = find_expander(A, make_interval(Scale(8), 1, 2))
        print("direct search on the raw set:  best x=%s ratio=%.2f exponent=%.4f"
              % (direct.best.x, direct.best.ratio, direct.best.exponent))


if __name__ == "__main__":
    main()
