"""Sumset calculus on grid sets, exact in integer cell indices.

Two semantics coexist and are never mixed implicitly:

INDEX treats a grid set as the finite set of its cell indices and does
plain integer-set arithmetic ({i + j}, {i - j}, ...).  This is the
right semantics for the additive-combinatorics inequalities, which are
exact theorems about finite subsets of Z and are asserted here with
zero tolerance.

COVER treats a grid set as the union of its half-open cells and returns
the exact delta-cell cover of the pointwise image.  A sum of two cells
spans two cells ({i+j, i+j+1}), a difference spans {i-j-1, i-j}; the
cover of a cover of a sum is again the true cover, so n-fold COVER sums
stay exact under pairwise folding.

Sums run bit-parallel: a set becomes a big-integer occupancy mask and
the sum is an OR of shifted masks, one shift per cell of the smaller
operand.  A naive double-loop implementation is kept behind
method="naive" as a test oracle.

Products and rational dilations leave the lattice, so covers are
computed from interval endpoints held in scaled integer units
(delta**2 for products, delta/q for dilation by p/q).  Half-open cells
mean an image's supremum may or may not be attained; attainedness is
tracked through the corner arithmetic because it decides whether the
final boundary cell belongs to the cover.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .grid import (GridSet1, GridSet2, MAX_INDEX, MAX_SPAN, Scale, as_fraction,
                   _require)


class SumSemantics(enum.Enum):
    INDEX = "index"
    COVER = "cover"


def _mask_to_set(scale: Scale, mask: int, offset: int) -> GridSet1:
    return GridSet1.from_mask(scale, offset, mask)


def _check_bounds(*sets: GridSet1) -> None:
    total = 0
    for s in sets:
        total += max(abs(s.min_index), abs(s.max_index))
    _require(total < MAX_INDEX, "sum indices would leave the guarded integer range")


def sumset(A: GridSet1, B: GridSet1, semantics: SumSemantics = SumSemantics.INDEX,
           method: str = "bitmask") -> GridSet1:
    """A + B under the chosen semantics.

    INDEX: {i + j}.  COVER: exact cell cover of the Minkowski sum of
    the cell unions, i.e. {i + j, i + j + 1}.
    """
    _require(A.scale == B.scale, "operands must share one scale")
    _require(method in ("bitmask", "naive"), f"unknown method {method!r}")
    if A.is_empty or B.is_empty:
        return GridSet1.empty(A.scale)
    _check_bounds(A, B)
    if method == "naive":
        out = {int(i) + int(j) for i in A.indices for j in B.indices}
        if semantics is SumSemantics.COVER:
            out |= {v + 1 for v in out}
        return GridSet1.from_indices(A.scale, sorted(out))
    small, big = (A, B) if A.count <= B.count else (B, A)
    bigmask = big.to_mask()
    acc = 0
    # per maximal run [start, start+length) of the small set, the OR of
    # consecutive shifts is built by doubling: log(length) big-int ops
    idx = np.flatnonzero(small.bits)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [idx.size - 1]))
    for s0, e0 in zip(starts, ends):
        start = int(idx[s0])
        length = int(idx[e0]) - start + 1
        seg = bigmask
        d = 1
        while d < length:
            step = min(d, length - d)
            seg |= seg << step
            d += step
        acc |= seg << start
    offset = small.offset + big.offset
    if semantics is SumSemantics.COVER:
        acc |= acc << 1
    return _mask_to_set(A.scale, acc, offset)


def reflect(A: GridSet1) -> GridSet1:
    """{-x : x in A} in INDEX sense: cell i maps to cell -i."""
    if A.is_empty:
        return A
    return GridSet1(A.scale, -(A.offset + A.bits.size - 1), A.bits[::-1].copy())


def diffset(A: GridSet1, B: GridSet1, semantics: SumSemantics = SumSemantics.INDEX,
            method: str = "bitmask") -> GridSet1:
    """A - B under the chosen semantics.

    INDEX: {i - j}.  COVER: the cell [i,i+1) - [j,j+1) spans
    (i-j-1, i-j+1), i.e. cells {i-j-1, i-j}.
    """
    _require(A.scale == B.scale, "operands must share one scale")
    if A.is_empty or B.is_empty:
        return GridSet1.empty(A.scale)
    if method == "naive":
        out = {int(i) - int(j) for i in A.indices for j in B.indices}
        if semantics is SumSemantics.COVER:
            out |= {v - 1 for v in out}
        return GridSet1.from_indices(A.scale, sorted(out))
    base = sumset(A, reflect(B), SumSemantics.INDEX, method=method)
    if semantics is SumSemantics.INDEX:
        return base
    mask = base.to_mask()
    return _mask_to_set(A.scale, mask | (mask << 1), base.offset - 1)


def _paint_ranges(scale: Scale, k_first: np.ndarray, k_last: np.ndarray) -> GridSet1:
    """Union of inclusive index ranges as a GridSet1 (diff-array paint)."""
    lo = int(k_first.min())
    hi = int(k_last.max())
    span = hi - lo + 2
    _require(span <= MAX_SPAN + 1, f"cell span {span - 1} exceeds dense-representation cap {MAX_SPAN}")
    diff = np.zeros(span, dtype=np.int64)
    np.add.at(diff, k_first - lo, 1)
    np.add.at(diff, k_last - lo + 1, -1)
    cov = np.cumsum(diff)[:-1] > 0
    return GridSet1.from_bits(scale, lo, cov)


def dilate(A: GridSet1, x) -> GridSet1:
    """Exact cell cover of x*A for rational x != 0.

    Endpoints of x*[i*delta, (i+1)*delta) are held in delta/q units
    (x = p/q reduced), so the boundary-cell decision is integer-exact.
    The left endpoint's cell always enters the cover; the right
    endpoint's cell enters only when the supremum is attained, which
    for half-open cells happens exactly when x < 0 (the closed end
    i*delta maps to the image's max).
    """
    fx = as_fraction(x)
    _require(fx != 0, "dilation factor must be nonzero")
    p, q = fx.numerator, fx.denominator
    _require(max(abs(p), q) <= (1 << 30), "dilation factor exceeds guarded magnitude 2**30")
    if A.is_empty:
        return A
    idx = A.indices
    _require(int(np.abs(idx).max() + 1) * abs(p) < MAX_INDEX, "dilated indices out of guarded range")
    if p > 0:
        lo = p * idx          # attained (cell's closed left end)
        hi = p * (idx + 1)    # not attained
        hi_incl = False
    else:
        lo = p * (idx + 1)    # not attained
        hi = p * idx          # attained
        hi_incl = True
    k_first = lo // q
    k_last = hi // q if hi_incl else (hi - 1) // q
    return _paint_ranges(A.scale, k_first, k_last)


def nfold_sum(A: GridSet1, N: int, semantics: SumSemantics = SumSemantics.INDEX) -> GridSet1:
    """N-fold sum A + ... + A by pairwise folding.

    Both semantics fold exactly: INDEX sums are associative, and the
    COVER of a COVER-sum is the true cover of the underlying Minkowski
    sum (cell widths add, one slack cell total per fold direction).
    """
    N = int(N)
    _require(N >= 1, "fold count must be at least 1")
    acc = A
    for _ in range(N - 1):
        acc = sumset(acc, A, semantics)
    return acc


def _product_cover_pairs(scale: Scale, idx_p: np.ndarray, idx_a: np.ndarray) -> GridSet1:
    """Cover of the pointwise product of two cell unions.

    Works in delta**2 units: the product of cells i and j has corner
    values {i*j, i*(j+1), (i+1)*j, (i+1)*(j+1)} there, and a corner is
    attained only when both factors sit at their closed left ends.
    Output cell k covers [k*2**n, (k+1)*2**n) in those units.
    """
    u = 1 << scale.n
    ii = np.repeat(idx_p, idx_a.size)
    jj = np.tile(idx_a, idx_p.size)
    _require(max(float(np.abs(ii).max()) + 1, 1.0) * max(float(np.abs(jj).max()) + 1, 1.0) < MAX_INDEX,
             "product indices would leave the guarded integer range")
    c = np.empty((4, ii.size), dtype=np.int64)
    c[0] = ii * jj
    c[1] = ii * (jj + 1)
    c[2] = (ii + 1) * jj
    c[3] = (ii + 1) * (jj + 1)
    lo = c.min(axis=0)
    hi = c.max(axis=0)
    # Corner 0 is the only corner both of whose factors sit at their
    # closed ends, so it is the only attainable extremum.  Single-point
    # images cannot occur: the corners of a positive-area box under
    # (x, y) -> x*y never all coincide.
    hi_att = hi == c[0]
    k_first = np.floor_divide(lo, u)
    k_last = np.where(hi_att, np.floor_divide(hi, u), np.floor_divide(hi - 1, u))
    return _paint_ranges(scale, k_first, k_last.astype(np.int64))


def nfold_product(A: GridSet1, N: int) -> GridSet1:
    """Exact cover of the N-fold pointwise product, folded left to right.

    Each fold covers the product of the previous cover with A; covers
    only grow, so the result contains the true N-fold product set and
    each fold's boundary arithmetic is exact at its own stage.
    """
    N = int(N)
    _require(N >= 1, "fold count must be at least 1")
    _require(not A.is_empty, "product of an empty set")
    acc = A
    for _ in range(N - 1):
        acc = _product_cover_pairs(A.scale, acc.indices, A.indices)
    return acc


def graph_sum(G: GridSet2, x, semantics: SumSemantics = SumSemantics.COVER) -> GridSet1:
    """{a + x*b : (a, b) in G} as indices or as an exact cell cover.

    INDEX requires integer x and returns {i + x*j}.  COVER accepts
    rational x and covers [i, i+1)*delta + x*[j, j+1)*delta exactly in
    delta/q units; the supremum is never attained (both cell ends are
    open on the relevant side), so the right boundary cell is excluded
    unless properly overlapped.
    """
    fx = as_fraction(x)
    _require(not G.is_empty, "graph sum of an empty graph")
    pairs = G.indices
    ii = pairs[:, 0].astype(np.int64)
    jj = pairs[:, 1].astype(np.int64)
    if semantics is SumSemantics.INDEX:
        _require(fx.denominator == 1, "INDEX graph sum needs integer x")
        xv = int(fx)
        vals = ii + xv * jj
        _require(float(np.abs(vals).max()) < MAX_INDEX, "graph-sum indices out of guarded range")
        return GridSet1.from_indices(G.scale, np.unique(vals))
    p, q = fx.numerator, fx.denominator
    _require(max(abs(p), q) <= (1 << 30), "graph-sum factor exceeds guarded magnitude 2**30")
    if p > 0:
        lo = ii * q + p * jj
        hi = (ii + 1) * q + p * (jj + 1)
    else:
        lo = ii * q + p * (jj + 1)
        hi = (ii + 1) * q + p * jj
    k_first = lo // q
    k_last = (hi - 1) // q
    return _paint_ranges(G.scale, k_first, k_last)
