"""Command-line front end: ``srr <subcommand> ...``.

Exit codes: 0 success, 1 validation error, 2 negative answer to a yes/no
query, 64 unknown subcommand or bad usage, 65 malformed JSON input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .codebook import LrcProfile, SchemeError, StorageScheme, make_lrc, make_mds, make_replication, make_rm1, make_simplex
from .combin import (
    FULL,
    PAIRS,
    build_graph,
    first_batch_failure,
    integral_achievable,
    is_pir_code,
    matching_stats,
    uniform_split,
)
from .fixtures import FIG1, FIG3, FIXTURES, fixture
from .galois import FieldError, FieldSpec
from .geometry import outer_polytope, slice_polytope
from .metrics import DistributionError, coverage, distribution_from_json, expected_min_cost, oracle_for
from .rational import SCHEMA_VERSION, dec, fmt, fmtvec, q, qvec
from .recovery import enumerate_recovery_sets
from .region import (
    Allocation,
    RegionError,
    is_achievable,
    min_cost_allocation,
    polytope,
    support_point,
    transfer_cost,
)
from .simq import SimConfig, SimError, simulate
from .waterfill import WaterfillError, lrc_waterfill, mds_bound_holds, mds_waterfill

EXIT_OK, EXIT_INVALID, EXIT_NO, EXIT_USAGE, EXIT_BADJSON = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class BadJSON(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- I/O helpers ---------------------------------------------------------------

def _load_json(text_or_path: str):
    """Parse an inline JSON literal, or the contents of a file path."""
    src = text_or_path
    p = Path(text_or_path)
    if not text_or_path.lstrip().startswith(("[", "{")) and p.exists():
        src = p.read_text()
    elif not text_or_path.lstrip().startswith(("[", "{", '"')) and not p.exists():
        raise FileNotFoundError(f"no such file: {text_or_path}")
    try:
        return json.loads(src)
    except json.JSONDecodeError as e:
        raise BadJSON(f"malformed JSON in {text_or_path[:60]!r}: {e}") from e


def load_scheme(arg: str) -> StorageScheme:
    if arg.startswith("fixture:"):
        return fixture(arg.split(":", 1)[1])
    obj = _load_json(arg)
    if isinstance(obj, dict) and "scheme" in obj:
        obj = obj["scheme"]
    if not isinstance(obj, dict):
        raise SchemeError("scheme JSON must be an object")
    return StorageScheme.from_json(obj)


def load_demand(arg: str):
    obj = _load_json(arg)
    if isinstance(obj, dict):
        obj = obj.get("demand")
    if not isinstance(obj, list):
        raise RegionError("demand must be a JSON list of rationals")
    return qvec(obj)


def _envelope(kind: str, body: dict) -> dict:
    return {"schema": SCHEMA_VERSION, "kind": kind, **body}


class Output:
    def __init__(self, args):
        self.path = getattr(args, "out", None)
        self.places = getattr(args, "decimal", None)

    def num(self, x) -> str:
        return fmt(x) if self.places is None else dec(x, self.places)

    def write(self, text: str):
        if self.path:
            Path(self.path).write_text(text)
        else:
            sys.stdout.write(text)

    def json(self, kind: str, body: dict):
        self.write(json.dumps(_envelope(kind, body), indent=2) + "\n")

    def csv(self, header, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["# schema=" + SCHEMA_VERSION])
        w.writerow(header)
        w.writerows(rows)
        self.write(buf.getvalue())


def _seed(args) -> int:
    env = os.environ.get("SRR_SEED")
    if env is not None:
        return int(env)
    return args.seed


# -- subcommands -------------------------------------------------------------

def cmd_construct(args, out: Output) -> int:
    spec = FieldSpec(args.p, args.m) if args.p else None
    kind = args.kind
    if kind == "fixture":
        s = fixture(args.name)
    elif kind == "replication":
        reps = [int(x) for x in args.replicas.split(",")]
        s = make_replication(len(reps), reps, args.mu)
    elif kind == "mds":
        if spec is None:
            raise SchemeError("mds needs --p (and optionally --m)")
        s = make_mds(args.n, args.k, spec, not args.nonsystematic, args.mu)
    elif kind == "simplex":
        s = make_simplex(args.k, args.mu)
    elif kind == "rm1":
        s = make_rm1(args.k, args.systematic, args.mu)
    elif kind == "lrc":
        if spec is None or not args.profile:
            raise SchemeError("lrc needs --profile and --p")
        s = make_lrc(LrcProfile.from_json(_load_json(args.profile)), spec, args.mu)
    else:  # pragma: no cover - argparse restricts choices
        raise SchemeError(kind)
    out.json("scheme", s.to_json())
    return EXIT_OK


def cmd_recovery(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    cat = enumerate_recovery_sets(s, args.max_size)
    out.json("catalog", cat.to_json())
    return EXIT_OK


def _catalog(args):
    s = load_scheme(args.scheme)
    cat = enumerate_recovery_sets(s, getattr(args, "max_size", None))
    if getattr(args, "objects", None):
        cat = cat.restrict([int(x) for x in args.objects.split(",")])
    return s, cat


def _emit_polytope(out: Output, args, p, kind: str):
    if args.format == "csv":
        verts = p.ordered_vertices()
        out.csv([f"lambda{i}" for i in range(p.dim)], [[out.num(x) for x in v] for v in verts])
    else:
        out.json(kind, p.to_json())


def cmd_region(args, out: Output) -> int:
    _, cat = _catalog(args)
    if args.direction:
        c = qvec(_load_json(args.direction))
        val, witness = support_point(cat, c)
        out.json("support", {"direction": fmtvec(c), "value": fmt(val), "witness": fmtvec(witness)})
        return EXIT_OK
    if cat.k > 3:
        raise RegionError("exact polytopes need k <= 3; use --objects to slice or --direction for support")
    _emit_polytope(out, args, polytope(cat), "region")
    return EXIT_OK


def cmd_check(args, out: Output) -> int:
    _, cat = _catalog(args)
    lam = load_demand(args.demand)
    ok, alloc = is_achievable(cat, lam)
    body = {"demand": fmtvec(lam), "achievable": ok}
    if ok:
        body["allocation"] = alloc.to_json(cat)
    out.json("check", body)
    return EXIT_OK if ok else EXIT_NO


def cmd_sweep(args, out: Output) -> int:
    import itertools

    s, cat = _catalog(args)
    hi = q(args.hi)
    axis = [hi * Fraction(i, args.steps - 1) for i in range(args.steps)]
    mds = args.mds
    rows = []
    for lam in itertools.product(axis, repeat=cat.k):
        row = [*lam, is_achievable(cat, lam)[0]]
        if mds:
            row += [mds_waterfill(s.n, s.k, s.mu, lam).feasible, mds_bound_holds(s.n, s.k, s.mu, lam)]
        rows.append(row)
    header = [f"lambda{i}" for i in range(cat.k)] + ["lp"] + (["waterfill", "bound"] if mds else [])
    if args.format == "csv":
        out.csv(header, [[out.num(x) if isinstance(x, Fraction) else str(x).lower() for x in r] for r in rows])
    else:
        pts = [dict(zip(header, [fmt(x) if isinstance(x, Fraction) else x for x in r])) for r in rows]
        disagree = sum(1 for r in rows if len(set(r[cat.k:])) > 1)
        out.json("sweep", {"points": pts, "disagreements": disagree})
    return EXIT_OK


def cmd_bounds(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    p = outer_polytope(s, include_counting=args.counting, prune=args.prune)
    if args.objects:
        p = slice_polytope(p, [int(x) for x in args.objects.split(",")])
    _emit_polytope(out, args, p, "bounds")
    return EXIT_OK


def _is_systematic_mds(s: StorageScheme) -> bool:
    from .codebook import is_mds

    ident = all(s.columns[i] == tuple(1 if j == i else 0 for j in range(s.k)) for i in range(s.k))
    return ident and is_mds(s)


def cmd_waterfill(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    lam = load_demand(args.demand)
    cat = enumerate_recovery_sets(s)
    if args.lrc:
        res = lrc_waterfill(s, LrcProfile.from_json(_load_json(args.lrc)), lam, cat)
    else:
        if not _is_systematic_mds(s):
            raise WaterfillError("waterfill without --lrc needs a systematic MDS scheme")
        res = mds_waterfill(s.n, s.k, s.mu, lam, cat)
    out.json("waterfill", res.to_json(cat))
    return EXIT_OK


def cmd_graph(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    cat = enumerate_recovery_sets(s)
    g = build_graph(s, cat, args.mode)
    body = g.to_json()
    if args.stats:
        body["stats"] = matching_stats(g)
    out.json("graph", body)
    return EXIT_OK


def cmd_batch(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    cat = enumerate_recovery_sets(s)
    if args.pir:
        ok = is_pir_code(cat, s.mu, args.t)
        body = {"t": args.t, "pir": ok}
    else:
        bad = first_batch_failure(cat, s.mu, args.t)
        ok = bad is None
        body = {"t": args.t, "batch": ok, "counterexample": list(bad) if bad else None}
    out.json("batch", body)
    return EXIT_OK if ok else EXIT_NO


def cmd_coverage(args, out: Output) -> int:
    s, cat = _catalog(args)
    d = distribution_from_json(_load_json(args.dist))
    est, half = coverage(oracle_for(cat), d, args.samples, _seed(args))
    body = {
        "estimate": fmt(est) if isinstance(est, Fraction) else est,
        "ci95": fmt(half) if isinstance(half, Fraction) else half,
        "samples": args.samples,
        "seed": _seed(args),
    }
    out.json("coverage", body)
    return EXIT_OK


def cmd_cost(args, out: Output) -> int:
    _, cat = _catalog(args)
    if args.dist:
        d = distribution_from_json(_load_json(args.dist))
        out.json("expected_cost", expected_min_cost(cat, d, args.samples, _seed(args)).to_json())
        return EXIT_OK
    lam = load_demand(args.demand)
    alloc_min, c_min = min_cost_allocation(cat, lam)
    body = {"demand": fmtvec(lam), "min_cost": fmt(c_min), "min_allocation": alloc_min.to_json(cat)}
    if args.alloc:
        alloc = Allocation.from_json(cat, _load_json(args.alloc))
        errs = alloc.violations(cat, lam)
        if errs:
            raise RegionError("invalid allocation: " + "; ".join(errs))
        body["given_cost"] = fmt(transfer_cost(cat, alloc))
    out.json("cost", body)
    return EXIT_OK


def cmd_simulate(args, out: Output) -> int:
    s = load_scheme(args.scheme)
    cat = enumerate_recovery_sets(s)
    lam = load_demand(args.demand)
    if args.alloc:
        alloc = Allocation.from_json(cat, _load_json(args.alloc))
    elif args.split == "uniform":
        alloc = uniform_split(cat, lam)
    else:
        ok, alloc = is_achievable(cat, lam)
        if not ok:
            # outside the region there is no valid allocation; route along the scaled-down witness
            raise RegionError("demand is not achievable; pass --alloc or --split uniform")
    rep = simulate(SimConfig(cat, alloc, lam, horizon=args.horizon, seed=_seed(args), warmup=args.warmup))
    if args.queue_csv:
        rep.write_queue_csv(args.queue_csv)
    out.json("simulation", rep.to_json())
    return EXIT_OK


# -- figure reproductions ----------------------------------------------------------

def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def reproduce(fig: str, outdir: Path) -> list[str]:
    outdir.mkdir(parents=True, exist_ok=True)
    calls: list[str] = []
    files: list[str] = []

    def region_csv(name: str, cat, tag: str):
        p = polytope(cat)
        path = outdir / f"{tag}_{name}.csv"
        _write_csv(path, ["lambda_a", "lambda_b"], [fmtvec(v) for v in p.ordered_vertices()])
        files.append(path.name)
        return p

    if fig in ("fig1", "fig3"):
        names = FIG1 if fig == "fig1" else FIG3
        areas = []
        for name in names:
            cat = enumerate_recovery_sets(fixture(name))
            p = region_csv(name, cat, fig)
            areas.append([name, fmt(p.area())])
            calls.append(f"polytope(enumerate_recovery_sets(fixture({name!r})))")
        _write_csv(outdir / f"{fig}_areas.csv", ["scheme", "area"], areas)
        files.append(f"{fig}_areas.csv")
    elif fig == "fig10-slice":
        s = fixture("rm4")
        cat = enumerate_recovery_sets(s).restrict([0, 3])
        region_csv("rm4_exact", cat, "fig10")
        outer = slice_polytope(outer_polytope(s, include_counting=True), [0, 3])
        path = outdir / "fig10_rm4_outer.csv"
        _write_csv(path, ["lambda_a", "lambda_d"], [fmtvec(v) for v in outer.ordered_vertices()])
        files.append(path.name)
        calls += [
            "polytope(enumerate_recovery_sets(fixture('rm4')).restrict([0, 3]))",
            "slice_polytope(outer_polytope(fixture('rm4'), include_counting=True), [0, 3])",
        ]
    elif fig == "fig12":
        s = fixture("simplex3")
        cat = enumerate_recovery_sets(s)
        lam = (1, 3, 0)
        frac = uniform_split(cat, lam)
        rows = [[i, " ".join(s.describe()[x] for x in cat.sets[i][j].servers), fmt(v)] for (i, j), v in sorted(frac.rates.items())]
        _write_csv(outdir / "fig12_fractional.csv", ["object", "servers", "weight"], rows)
        ok, integ = integral_achievable(cat, 1, lam)
        rows = [[i, " ".join(s.describe()[x] for x in cat.sets[i][j].servers), fmt(v)] for (i, j), v in sorted(integ.rates.items())]
        _write_csv(outdir / "fig12_integral.csv", ["object", "servers", "count"], rows)
        files += ["fig12_fractional.csv", "fig12_integral.csv"]
        calls += ["uniform_split(cat, (1, 3, 0))", "integral_achievable(cat, 1, (1, 3, 0))"]
    else:
        raise UsageError(f"unknown figure id {fig!r}")
    manifest = _envelope("manifest", {"figure": fig, "files": files, "calls": calls, "version": __version__})
    (outdir / f"{fig}_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return files


def cmd_reproduce(args, out: Output) -> int:
    files = reproduce(args.figure, Path(args.outdir))
    out.json("reproduce", {"figure": args.figure, "outdir": str(args.outdir), "files": files})
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="srr", description="Service rate regions of linear storage codes.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_, scheme=True):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        if scheme:
            sp.add_argument("--scheme", required=True, help="scheme JSON file, inline JSON, or fixture:NAME")
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("construct", cmd_construct, "build a storage scheme", scheme=False)
    sp.add_argument("--kind", required=True, choices=["replication", "mds", "simplex", "rm1", "lrc", "fixture"])
    sp.add_argument("--name", choices=sorted(FIXTURES))
    sp.add_argument("--replicas", help="comma-separated replica counts")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int, help="field characteristic")
    sp.add_argument("--m", type=int, default=1, help="field extension degree")
    sp.add_argument("--nonsystematic", action="store_true")
    sp.add_argument("--systematic", action="store_true")
    sp.add_argument("--profile", help="LRC profile JSON")
    sp.add_argument("--mu", default="1", type=q)

    sp = add("recovery", cmd_recovery, "list minimal recovery sets")
    sp.add_argument("--max-size", type=int)

    sp = add("region", cmd_region, "exact region polytope (k <= 3) or support value")
    sp.add_argument("--objects", help="comma-separated objects to keep (others fixed at zero)")
    sp.add_argument("--direction", help="JSON list; report the support value in this direction")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--decimal", type=int, help="render CSV numbers with this many decimals")

    sp = add("check", cmd_check, "is a demand vector achievable?")
    sp.add_argument("--demand", required=True)
    sp.add_argument("--objects")

    sp = add("sweep", cmd_sweep, "achievability over a rational grid")
    sp.add_argument("--hi", default="2")
    sp.add_argument("--steps", type=int, default=9)
    sp.add_argument("--objects")
    sp.add_argument("--mds", action="store_true", help="also compare waterfilling and the closed-form bound")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--decimal", type=int)

    sp = add("bounds", cmd_bounds, "geometric outer bound")
    sp.add_argument("--counting", action="store_true")
    sp.add_argument("--prune", action="store_true", help="drop implied rows (k > 3)")
    sp.add_argument("--objects")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--decimal", type=int)

    sp = add("waterfill", cmd_waterfill, "waterfilling allocation")
    sp.add_argument("--demand", required=True)
    sp.add_argument("--lrc", help="LRC profile JSON")

    sp = add("graph", cmd_graph, "recovery (hyper)graph")
    sp.add_argument("--mode", choices=[PAIRS, FULL], default=PAIRS)
    sp.add_argument("--stats", action="store_true")

    sp = add("batch", cmd_batch, "batch-code / PIR-code check")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--pir", action="store_true")

    sp = add("coverage", cmd_coverage, "mass of a demand distribution inside the region")
    sp.add_argument("--dist", required=True)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--objects")

    sp = add("cost", cmd_cost, "normalised download cost")
    sp.add_argument("--demand")
    sp.add_argument("--alloc")
    sp.add_argument("--dist", help="estimate the expected minimal cost under this distribution")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--objects")

    sp = add("simulate", cmd_simulate, "fork-join queueing simulation")
    sp.add_argument("--demand", required=True)
    sp.add_argument("--alloc")
    sp.add_argument("--split", choices=["lp", "uniform"], default="lp")
    sp.add_argument("--horizon", type=float, default=1e5)
    sp.add_argument("--warmup", type=float, default=0.2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--queue-csv")

    sp = add("reproduce", cmd_reproduce, "write CSVs for a figure", scheme=False)
    sp.add_argument("figure", choices=["fig1", "fig3", "fig10-slice", "fig12"])
    sp.add_argument("--outdir", default="out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"srr: {e}", file=sys.stderr)
        return EXIT_USAGE
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.command == "cost" and not (args.demand or args.dist):
        print("srr: cost needs --demand or --dist", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, Output(args))
    except BadJSON as e:
        print(f"srr: {e}", file=sys.stderr)
        return EXIT_BADJSON
    except UsageError as e:
        print(f"srr: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (
        SchemeError, FieldError, RegionError, WaterfillError, DistributionError, SimError,
        KeyError, ValueError, FileNotFoundError, TypeError, ZeroDivisionError,
    ) as e:
        print(f"srr: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
