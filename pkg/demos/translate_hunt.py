#!/usr/bin/env python3
"""Find lattice translates inside regions, then turn one into a collision.

Part one: for a random union of cells, some translate of the s-spaced
lattice meets it in at least measure/s^dim points, and an independent
recount confirms the find.  Part two: apply the same averaging to a thin
slab around a direction v to force two product-set points to project
together, eliminating one coordinate of a far-apart pair.
"""
import argparse
import math

import numpy as np

from deltagrid import (CellCloud, GridSet1, Scale, blichfeldt_translate,
                       count_lattice_points, slab_collision)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=2, choices=(1, 2, 3))
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--radius", type=float, default=16.0,
                    help="slab half-length for the collision search")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = 5
    span = 1 << n
    rows = rng.integers(0, span, size=(80, args.dim))
    V = CellCloud.from_indices(Scale(n), rows)
    s = 4 * Scale(n).delta
    res = blichfeldt_translate(V, s)
    print("region of %d cells, lattice spacing %s" % (V.count, s))
    print("translate %s hits %d points (bound %.2f, %d shifts examined)" %
          (tuple(float(t) for t in res.translation), res.count, res.bound,
           res.examined_shifts))
    assert count_lattice_points(V, s, res.translation) == res.count

    # collision hunt on a two-cell-plus-noise set
    A = GridSet1.from_indices(Scale(4), [0, 15, 6])
    v = (0.8, 0.7)
    w = slab_collision(A, v, 2, args.radius)
    delta = Scale(4).delta
    print("\nset {0, 6, 15}/16, direction v=%s, slab radius %g" % (v, args.radius))
    print("translate pair %s, lattice step ell=%s" %
          (w.pair_indices, tuple(int(e) for e in w.ell)))
    print("x=%s" % (tuple(round(float(t), 4) for t in w.x),))
    print("z=%s" % (tuple(round(float(t), 4) for t in w.z),))
    gap = abs(sum(float(a) * b for a, b in zip(w.x, v)) -
              sum(float(a) * b for a, b in zip(w.z, v)))
    print("projection gap %.3e (tolerance %.3e)" % (gap, w.tolerance))
    moved = abs(float(w.z[w.eliminated]) - float(w.x[w.eliminated]))
    print("eliminated coordinate %d moved %.3f >= diam - 2*delta = %.3f"
          % (w.eliminated, moved, A.diameter - 2 * delta))


if __name__ == "__main__":
    main()
