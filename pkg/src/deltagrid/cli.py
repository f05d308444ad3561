"""Command-line front door: generators, set operations, measure tools,
projections, lattice searches, verification suites, and experiments.

Exit codes: 0 success, 1 precondition or usage rejection, 2 internal
invariant failure (a constant-1 inequality violated is a bug by
definition, never a data error).

All configuration arrives via flags; there are no environment variables.
--threads defaults to 1 so runs are deterministic unless asked otherwise,
and every CSV report embeds the full RunConfig in its header line.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import gridio
from .addcomb import (check_cor_simple, check_graph_projection, check_plunnecke,
                      check_ruzsa_triangle, check_sum_to_difference)
from .errors import InternalCheckError, PreconditionError
from .expand import (find_expander, nfold_expansion_curve,
                     projection_theorem_experiment, renormalized_find_expander)
from .grid import (GridSet1, GridSet2, Scale, _require, cartesian_product,
                   gen_cantor, gen_random_frostman, make_interval,
                   nonconcentration_constant)
from .lattice import blichfeldt_translate, slab_collision
from .measure import (DyadicMeasure1, frostman_constant, maximal_interval,
                      prune_heavy_cubes, rescale_to_unit, riesz_energy, uniform_on)
from .project import (AngleMeasure, kaufman_average, marstrand_average,
                      project_set, sweep)
from .setcalc import (SumSemantics, diffset, dilate, graph_sum, nfold_product,
                      nfold_sum, reflect, sumset)

_SUITES = ("ruzsa", "plunnecke", "simple-sum", "simple-diff", "sumdiff", "graphproj")


@dataclass(frozen=True)
class RunConfig:
    """Deterministic run parameters, serialized into every report header.

    Unset parameters stay None and appear as JSON null, so two reports
    are byte-identical exactly when their effective configurations are.
    """

    seed: int = 0
    n: int = 12
    kappa: float | None = None
    sigma: float | None = None
    alpha: float | None = None
    beta: float | None = None
    epsilon: float | None = None
    eta: float | None = None
    lam: float | None = None
    threads: int = 1
    out: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _config(args, **overrides) -> RunConfig:
    fields = {}
    for name in ("seed", "n", "kappa", "sigma", "epsilon", "eta", "threads", "out"):
        if hasattr(args, name) and getattr(args, name) is not None:
            fields[name] = getattr(args, name)
    fields.update(overrides)
    return RunConfig(**fields)


def _echo(cfg: RunConfig, **extra) -> dict:
    d = cfg.as_dict()
    d.update(extra)
    return d


# ---------------------------------------------------------------------------
# Flag value parsers


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _frac_range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi', got {text!r}")
    return _frac(parts[0]), _frac(parts[1])


def _int_list(text: str):
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}") from None


def _float_list(text: str):
    try:
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; here 2 means internal invariant
    # failure, so usage problems are rerouted to the precondition path.
    def error(self, message):
        raise PreconditionError(f"{self.prog}: {message}")


def _read_gs1(path) -> GridSet1:
    _require(path is not None, "an input set file is required (--set)")
    S = gridio.read_gridset(path)
    if not isinstance(S, GridSet1):
        raise PreconditionError(f"{path}: expected a 1D set (GS1)")
    return S


def _read_gs2(path) -> GridSet2:
    _require(path is not None, "an input set file is required (--set)")
    S = gridio.read_gridset(path)
    if not isinstance(S, GridSet2):
        raise PreconditionError(f"{path}: expected a 2D set (GS2)")
    return S


def _semantics(name: str) -> SumSemantics:
    return SumSemantics.COVER if name == "cover" else SumSemantics.INDEX


def _angle_scale(angles: int) -> Scale:
    # power of two so a uniform AngleMeasure has exactly `angles` cells
    k = angles.bit_length() - 1
    if angles <= 0 or (1 << k) != angles:
        raise PreconditionError(f"--angles must be a power of two here, got {angles}")
    return Scale(k)


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args) -> int:
    scale = Scale(args.n)
    if args.what == "cantor":
        _require(args.base >= 2, "digit base must be at least 2")
        levels = args.levels
        if levels is None:
            # deepest level whose aligned blocks still resolve: base**L <= 2**n
            levels = 0
            while args.base ** (levels + 1) <= (1 << args.n):
                levels += 1
        S = gen_cantor(scale, args.base, args.digits, levels)
    elif args.what == "interval":
        S = make_interval(scale, args.a, args.b)
    elif args.what == "frostman":
        if args.kappa is None:
            raise PreconditionError("gen frostman requires --kappa")
        S = gen_random_frostman(scale, args.kappa, args.seed)
    else:  # square: product of two 1D sets, default the interval [a, b)
        A = _read_gs1(args.set) if args.set else make_interval(scale, args.a, args.b)
        B = _read_gs1(args.set2) if args.set2 else A
        S = cartesian_product(A, B)
    gridio.write_gridset(S, args.out)
    print(f"wrote {args.out}: {S!r}")
    return 0


# ---------------------------------------------------------------------------
# op


def _cmd_op(args) -> int:
    sem = _semantics(args.semantics)
    if args.which == "graphsum":
        G = _read_gs2(args.set)
        if args.factor is None:
            raise PreconditionError("op graphsum requires --factor")
        R = graph_sum(G, args.factor, sem)
    else:
        A = _read_gs1(args.set)
        if args.which == "sum":
            B = _read_gs1(args.set2) if args.set2 else A
            R = sumset(A, B, sem)
        elif args.which == "diff":
            B = _read_gs1(args.set2) if args.set2 else A
            R = diffset(A, B, sem)
        elif args.which == "dilate":
            if args.factor is None:
                raise PreconditionError("op dilate requires --factor")
            R = dilate(A, args.factor)
        elif args.which == "nfold":
            R = nfold_sum(A, args.count, sem)
        elif args.which == "product":
            R = nfold_product(A, args.count)
        else:  # reflect
            R = reflect(A)
    gridio.write_gridset(R, args.out)
    print(f"wrote {args.out}: {R!r}")
    return 0


# ---------------------------------------------------------------------------
# measure


def _load_measure(args) -> DyadicMeasure1:
    if getattr(args, "measure", None):
        return gridio.read_measure(args.measure)
    if getattr(args, "set", None):
        S = gridio.read_gridset(args.set)
        mu = uniform_on(S)
        if not isinstance(mu, DyadicMeasure1):
            raise PreconditionError("this operation needs a 1D measure")
        return mu
    raise PreconditionError("provide --measure or --set")


def _cmd_measure(args) -> int:
    cfg = _config(args)
    if args.what == "uniform":
        mu = _load_measure(args)
        gridio.write_measure(mu, args.out)
        print(f"wrote {args.out}: {mu!r}")
        return 0
    if args.what == "frostman":
        if args.kappa is None:
            raise PreconditionError("measure frostman requires --kappa")
        if getattr(args, "set", None) and not getattr(args, "measure", None):
            rep = nonconcentration_constant(gridio.read_gridset(args.set), args.kappa)
        else:
            rep = frostman_constant(_load_measure(args), args.kappa)
        print(f"constant={rep.constant!r} kappa={rep.kappa!r} convention={rep.convention}")
        print(f"witness center={rep.witness_center!r} radius={rep.witness_radius!r}")
        if args.out:
            gridio.write_csv(args.out, ["kappa", "constant", "witness_center", "witness_radius", "convention"],
                             [[rep.kappa, rep.constant, rep.witness_center, rep.witness_radius, rep.convention]],
                             _echo(cfg, command="measure frostman"))
        return 0
    if args.what == "energy":
        if args.sigma is None:
            raise PreconditionError("measure energy requires --sigma (the exponent)")
        S = gridio.read_gridset(args.set) if getattr(args, "set", None) and not getattr(args, "measure", None) else None
        mu = uniform_on(S) if S is not None else _load_measure(args)
        val = riesz_energy(mu, args.sigma, method=args.method)
        print(f"energy s={args.sigma!r}: {val!r}")
        if args.out:
            gridio.write_csv(args.out, ["s", "energy", "method"],
                             [[args.sigma, val, args.method]],
                             _echo(cfg, command="measure energy"))
        return 0
    if args.what == "maximal":
        if args.kappa is None:
            raise PreconditionError("measure maximal requires --kappa")
        mu = _load_measure(args)
        mi = maximal_interval(mu, args.kappa)
        print(f"level={mi.level} index={mi.index} r0={mi.r0} x0={mi.x0} "
              f"m={mi.m_value!r} mass={mi.mass!r}")
        return 0
    if args.what == "rescale":
        if args.kappa is None:
            raise PreconditionError("measure rescale requires --kappa")
        mu = _load_measure(args)
        mi = maximal_interval(mu, args.kappa)
        nu = rescale_to_unit(mu, mi.level, mi.index)
        gridio.write_measure(nu, args.out)
        print(f"zoomed to level={mi.level} index={mi.index}; wrote {args.out}: {nu!r}")
        return 0
    # prune
    if args.sigma is None:
        raise PreconditionError("measure prune requires --sigma")
    mu = _load_measure(args)
    kept, removed = prune_heavy_cubes(mu, args.sigma, args.K, args.L, strict=not args.loose)
    print(f"kept {kept.count} cells, removed mass {removed!r}")
    if args.out:
        gridio.write_gridset(kept, args.out)
        print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------------------
# project


def _cmd_project(args) -> int:
    cfg = _config(args)
    E = _read_gs2(args.set)
    if args.what == "shadow":
        R = project_set(E, args.theta)
        gridio.write_gridset(R, args.out)
        print(f"wrote {args.out}: {R!r}")
        return 0
    if args.what == "sweep":
        thetas = np.arange(args.angles) * math.pi / args.angles
        mu = uniform_on(E) if args.kappa is not None else None
        rep = sweep(E, thetas, args.fraction, mu=mu, kappa=args.kappa, threads=args.threads)
        for name in ("projection", "adversarial"):
            q = rep.summary[name]
            print(f"{name}: min={q['min']!r} median={q['median']!r} max={q['max']!r}")
        if args.out:
            header = ["theta", "projection_count", "adversarial_count", "energy"]
            rows = [[r.theta, r.projection_count, r.adversarial_count,
                     "" if r.energy is None else r.energy] for r in rep.records]
            gridio.write_csv(args.out, header, rows,
                             _echo(cfg, command="project sweep", fraction=args.fraction,
                                   angles=args.angles))
        return 0
    if args.what == "marstrand":
        st = marstrand_average(E, args.angles)
        print(f"angles={st.angles} mean={st.mean!r} median={st.median!r} "
              f"min={st.min!r} energy_i1={st.energy_i1!r}")
        if args.out:
            gridio.write_csv(args.out, ["theta", "measure"],
                             list(zip(st.thetas, st.measures)),
                             _echo(cfg, command="project marstrand", angles=args.angles))
        return 0
    # kaufman
    if args.kappa is None:
        raise PreconditionError("project kaufman requires --kappa")
    nu = AngleMeasure.uniform(_angle_scale(args.angles))
    val = kaufman_average(uniform_on(E), nu, args.kappa)
    print(f"kaufman average kappa={args.kappa!r}: {val!r}")
    return 0


# ---------------------------------------------------------------------------
# lattice


def _cmd_lattice(args) -> int:
    cfg = _config(args)
    if args.what == "blichfeldt":
        V = gridio.read_gridset(args.set)
        res = blichfeldt_translate(V, args.modulus)
        shift = ",".join(str(t) for t in res.translation)
        print(f"translation={shift} count={res.count} bound={res.bound!r} "
              f"examined={res.examined_shifts}")
        if args.out:
            gridio.write_csv(args.out,
                             ["translation", "count", "bound", "examined"],
                             [[shift, res.count, res.bound, res.examined_shifts]],
                             _echo(cfg, command="lattice blichfeldt",
                                   modulus=args.modulus))
        return 0
    # collision
    A = _read_gs1(args.set)
    w = slab_collision(A, args.vector, len(args.vector), args.radius)
    print(f"pair={w.pair_indices} ell={w.ell} eliminated={w.eliminated}")
    print(f"x={w.x}")
    print(f"z={w.z}")
    print(f"projection_gap={w.projection_gap!r} tolerance={w.tolerance!r}")
    if args.out:
        gridio.write_csv(
            args.out,
            ["pair_i", "pair_j", "ell", "eliminated", "x", "z",
             "projection_gap", "tolerance"],
            [[w.pair_indices[0], w.pair_indices[1],
              ";".join(str(e) for e in w.ell), w.eliminated,
              ";".join(repr(t) for t in w.x), ";".join(repr(t) for t in w.z),
              w.projection_gap, w.tolerance]],
            _echo(cfg, command="lattice collision", vector=list(args.vector),
                  radius=args.radius))
    return 0


# ---------------------------------------------------------------------------
# verify


def _random_set(rng, scale: Scale, max_cells: int, span: int) -> GridSet1:
    m = int(rng.integers(1, max_cells + 1))
    idx = rng.choice(span, size=min(m, span), replace=False)
    return GridSet1.from_indices(scale, idx)


def _verify_case(suite: str, rng, scale: Scale, max_cells: int, span: int):
    if suite == "ruzsa":
        X = _random_set(rng, scale, max_cells, span)
        Y = _random_set(rng, scale, max_cells, span)
        Z = _random_set(rng, scale, max_cells, span)
        return check_ruzsa_triangle(X, Y, Z)
    if suite == "plunnecke":
        X = _random_set(rng, scale, max_cells, span)
        k = int(rng.integers(2, 4))
        Ys = [_random_set(rng, scale, max_cells, span) for _ in range(k)]
        return check_plunnecke(X, Ys)
    if suite == "simple-sum":
        return check_cor_simple(_random_set(rng, scale, max_cells, span),
                                _random_set(rng, scale, max_cells, span), "+")
    if suite == "simple-diff":
        return check_cor_simple(_random_set(rng, scale, max_cells, span),
                                _random_set(rng, scale, max_cells, span), "-")
    if suite == "sumdiff":
        return check_sum_to_difference(_random_set(rng, scale, max_cells, span),
                                       _random_set(rng, scale, max_cells, span))
    # graphproj
    A = _random_set(rng, scale, max_cells, span)
    B = _random_set(rng, scale, max_cells, span)
    dense = rng.random((A.count, B.count)) < 0.5
    if not dense.any():
        dense[0, 0] = True
    Ai, Bi = A.indices, B.indices
    pairs = [(int(Ai[i]), int(Bi[j])) for i, j in zip(*np.nonzero(dense))]
    G = GridSet2.from_indices(scale, pairs)
    x = int(rng.integers(1, 4))
    return check_graph_projection(A, B, G, x)


def _cmd_verify(args) -> int:
    cfg = _config(args)
    scale = Scale(args.n)
    suites = list(_SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for suite in suites:
        for case in range(args.cases):
            rng = np.random.default_rng([args.seed, _SUITES.index(suite), case])
            rec = _verify_case(suite, rng, scale, args.max_cells, args.span)
            rows.append([suite, case, rec.name, rec.lhs, rec.rhs,
                         int(rec.ok), rec.inputs_digest])
        print(f"suite={suite} cases={args.cases} violations=0")
    if args.out:
        gridio.write_csv(args.out, ["suite", "case", "name", "lhs", "rhs", "ok", "digest"],
                         rows, _echo(cfg, command="verify addcomb", suite=args.suite,
                                     cases=args.cases))
    return 0


# ---------------------------------------------------------------------------
# experiment


def _cmd_experiment(args) -> int:
    cfg = _config(args)
    if args.what == "expander":
        A = _read_gs1(args.set)
        xres = args.xres if args.xres is not None else max(1, A.scale.n // 2)
        lo, hi = args.candidates
        cand = make_interval(Scale(xres), lo, hi)
        rep = find_expander(A, cand, threads=args.threads, kappa=args.kappa,
                            sigma=args.sigma)
        b = rep.best
        print(f"best x={b.x} ratio={b.ratio!r} exponent={b.exponent!r}")
        if rep.frostman is not None:
            print(f"nonconcentration C={rep.frostman.constant!r} at kappa={args.kappa!r}")
        if args.out:
            gridio.write_csv(args.out, ["x", "ratio", "exponent"],
                             [[r.x, r.ratio, r.exponent] for r in rep.records],
                             _echo(cfg, command="experiment expander", xres=xres,
                                   candidates=f"{lo}:{hi}"))
        return 0
    if args.what == "renorm":
        A = _read_gs1(args.set)
        if args.kappa is None:
            raise PreconditionError("experiment renorm requires --kappa")
        mu = gridio.read_measure(args.measure) if args.measure else uniform_on(A)
        rep = renormalized_find_expander(A, mu, args.kappa, threads=args.threads)
        b = rep.best
        print(f"best x={b.x} ratio={b.ratio!r} exponent={b.exponent!r}")
        print(f"zoom frostman constant={rep.frostman.constant!r} degenerate={rep.degenerate}")
        if args.out:
            rows = [["mapped", r.x, r.ratio, r.exponent] for r in rep.records]
            rows += [["zoomed", r.x, r.ratio, r.exponent] for r in rep.renorm_records]
            gridio.write_csv(args.out, ["frame", "x", "ratio", "exponent"], rows,
                             _echo(cfg, command="experiment renorm"))
        return 0
    if args.what == "nfold":
        K = _read_gs1(args.set)
        curve = nfold_expansion_curve(K, args.count)
        for N, m in curve.records:
            print(f"N={N} measure={m!r}")
        print(f"first_crossing={curve.first_crossing}")
        if args.out:
            gridio.write_csv(args.out, ["N", "measure"], list(curve.records),
                             _echo(cfg, command="experiment nfold"))
        return 0
    # projection
    E = _read_gs2(args.set)
    if args.epsilon is None or args.eta is None:
        raise PreconditionError("experiment projection requires --epsilon and --eta")
    nu = AngleMeasure.uniform(_angle_scale(args.nu_cells))
    exp = projection_theorem_experiment(E, nu, args.epsilon, args.eta, args.angles,
                                        threads=args.threads, energy_kappa=args.kappa)
    print(f"good_mass={exp.good_mass!r} threshold={exp.threshold!r} "
          f"lambda={min(1.0, E.scale.delta ** args.epsilon)!r}")
    print(f"nonconcentration C={exp.nonconcentration.constant!r} at kappa=1")
    if args.out:
        lam = min(1.0, E.scale.delta ** args.epsilon)
        good = set(float(t) for t in exp.good_angles)
        rows = [[r.theta, r.projection_count, r.adversarial_count,
                 int(float(r.theta) in good)] for r in exp.report.records]
        gridio.write_csv(args.out, ["theta", "projection_count", "adversarial_count", "good"],
                         rows, _echo(cfg, command="experiment projection", lam=lam,
                                     angles=args.angles))
    return 0


# ---------------------------------------------------------------------------
# report


def _cmd_report(args) -> int:
    import csv as _csv

    with open(args.path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        reader = _csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PreconditionError(f"{args.path}: no header row") from None
        data = list(reader)
    if not first.startswith("#"):
        raise PreconditionError(f"{args.path}: missing config echo line")
    print(first)
    cols = {h: [] for h in header}
    for row in data:
        for h, v in zip(header, row):
            cols[h].append(v)
    rows = []
    for h in header:
        vals = []
        for v in cols[h]:
            try:
                vals.append(float(v))
            except ValueError:
                break
        else:
            if vals:
                arr = np.asarray(vals)
                rows.append([h, len(vals), float(arr.min()),
                             float(np.median(arr)), float(arr.max())])
                continue
        rows.append([h, len(cols[h]), "", "", ""])
    for r in rows:
        print(f"{r[0]}: count={r[1]} min={r[2]!r} median={r[3]!r} max={r[4]!r}"
              if r[2] != "" else f"{r[0]}: count={r[1]} (non-numeric)")
    if args.out:
        gridio.write_csv(args.out, ["column", "count", "min", "median", "max"], rows,
                         _echo(_config(args), command="report summary", source=args.path))
    return 0


# ---------------------------------------------------------------------------
# Parser wiring


def _build_parser() -> _Parser:
    p = _Parser(prog="deltagrid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default=12):
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", type=str, default=None)

    g = sub.add_parser("gen", help="generate sets")
    g.add_argument("what", choices=["cantor", "interval", "frostman", "square"])
    common(g)
    g.add_argument("--base", type=int, default=4)
    g.add_argument("--digits", type=_int_list, default=(0, 3))
    g.add_argument("--levels", type=int, default=None)
    g.add_argument("--a", type=_frac, default=Fraction(0))
    g.add_argument("--b", type=_frac, default=Fraction(1))
    g.add_argument("--kappa", type=float, default=None)
    g.add_argument("--set", type=str, default=None)
    g.add_argument("--set2", type=str, default=None)
    g.set_defaults(fn=_cmd_gen, out_required=True)

    o = sub.add_parser("op", help="set arithmetic on files")
    o.add_argument("which", choices=["sum", "diff", "dilate", "nfold", "product",
                                     "reflect", "graphsum"])
    common(o)
    o.add_argument("--set", type=str, required=True)
    o.add_argument("--set2", type=str, default=None)
    o.add_argument("--semantics", choices=["index", "cover"], default="index")
    o.add_argument("--factor", type=_frac, default=None)
    o.add_argument("--count", type=int, default=2)
    o.set_defaults(fn=_cmd_op, out_required=True)

    m = sub.add_parser("measure", help="measure tools")
    m.add_argument("what", choices=["uniform", "frostman", "energy", "maximal",
                                    "rescale", "prune"])
    common(m)
    m.add_argument("--set", type=str, default=None)
    m.add_argument("--measure", type=str, default=None)
    m.add_argument("--kappa", type=float, default=None)
    m.add_argument("--sigma", type=float, default=None)
    m.add_argument("--method", choices=["auto", "direct", "binned"], default="auto")
    m.add_argument("--K", type=float, default=1.0)
    m.add_argument("--L", type=float, default=1.0)
    m.add_argument("--loose", action="store_true",
                   help="prune at >= threshold instead of strictly above")
    m.set_defaults(fn=_cmd_measure)

    pr = sub.add_parser("project", help="projections and angle sweeps")
    pr.add_argument("what", choices=["shadow", "sweep", "marstrand", "kaufman"])
    common(pr)
    pr.add_argument("--set", type=str, required=True)
    pr.add_argument("--theta", type=float, default=0.0)
    pr.add_argument("--angles", type=int, default=64)
    pr.add_argument("--fraction", type=float, default=1.0)
    pr.add_argument("--kappa", type=float, default=None)
    pr.set_defaults(fn=_cmd_project)

    la = sub.add_parser("lattice", help="lattice translates and collisions")
    la.add_argument("what", choices=["blichfeldt", "collision"])
    common(la)
    la.add_argument("--set", type=str, required=True)
    la.add_argument("--modulus", type=_frac, default=Fraction(1, 4))
    la.add_argument("--vector", type=_float_list, default=(0.75, 0.75))
    la.add_argument("--radius", type=float, default=8.0)
    la.set_defaults(fn=_cmd_lattice)

    v = sub.add_parser("verify", help="exact inequality suites")
    v.add_argument("target", choices=["addcomb"])
    common(v)
    v.add_argument("--suite", choices=list(_SUITES) + ["all"], default="all")
    v.add_argument("--cases", type=int, default=100)
    v.add_argument("--max-cells", type=int, default=64)
    v.add_argument("--span", type=int, default=512)
    v.set_defaults(fn=_cmd_verify)

    e = sub.add_parser("experiment", help="expansion and projection experiments")
    e.add_argument("what", choices=["expander", "renorm", "nfold", "projection"])
    common(e)
    e.add_argument("--set", type=str, required=True)
    e.add_argument("--measure", type=str, default=None)
    e.add_argument("--candidates", type=_frac_range, default=(Fraction(1), Fraction(2)))
    e.add_argument("--xres", type=int, default=None)
    e.add_argument("--kappa", type=float, default=None)
    e.add_argument("--sigma", type=float, default=None)
    e.add_argument("--epsilon", type=float, default=None)
    e.add_argument("--eta", type=float, default=None)
    e.add_argument("--count", type=int, default=3)
    e.add_argument("--angles", type=int, default=64)
    e.add_argument("--nu-cells", type=int, default=4096,
                   help="cells in the uniform angle measure (power of two)")
    e.set_defaults(fn=_cmd_experiment)

    r = sub.add_parser("report", help="summarize a CSV report")
    r.add_argument("path")
    common(r)
    r.set_defaults(fn=_cmd_report)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "out_required", False) and not args.out:
            raise PreconditionError(f"{args.command}: --out is required")
        return args.fn(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
