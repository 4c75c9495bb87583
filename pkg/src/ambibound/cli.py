"""Command-line entry point: ``ambibound <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import __version__
from .catalog import CATALOG_NAMES, lookup_named_query
from .entropic import AMBIDEXTROUS, DEXTEROUS, compute_bound
from .errors import BudgetExceededError
from .experiment import (DEFAULT_BUDGET, DatasetFailure, aggregate_geomean, fit_origin_slope,
                         read_csv, relative_error_points, run_experiment, write_csv)
from .homcount import DataGraph, count_homomorphisms, estimate_work
from .moments import GridSpec, format_grid_csv, ln_bivariate_moment, load_or_build_grid
from .relation import parse_edge_list, symmetrize
from .venn import BASIS_NAMES, VennCover, check_cover, refine_single_term

log = logging.getLogger("ambibound")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    # Subparser copies default to SUPPRESS so they never clobber values set
    # before the subcommand name.
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = p.add_argument_group("global options")
    g.add_argument("--paper-grid", action="store_true", default=d(False),
                   help="use the fine 0.1-step moment grid")
    g.add_argument("--grid-step", type=float, default=d(None),
                   help="step for both moment grids (overrides --paper-grid)")
    g.add_argument("--mode", choices=("dex", "ambi", "both"), default=d("both"))
    g.add_argument("--budget", type=float, default=d(DEFAULT_BUDGET),
                   help="max estimated backtracking work for exact counts")
    g.add_argument("--out", default=d(None), help="output file (default stdout)")
    g.add_argument("--cache-dir", default=d(None), help="moment-grid cache directory")
    g.add_argument("--lp-dump", default=d(None), help="write LP text files here")
    g.add_argument("-v", "--verbose", action="count", default=d(0))


def _grid_spec(args) -> GridSpec:
    if args.grid_step is not None:
        if args.grid_step <= 0:
            raise ValueError("--grid-step must be positive")
        return GridSpec(args.grid_step, args.grid_step)
    return GridSpec.fine() if args.paper_grid else GridSpec()


def _modes(args) -> list[str]:
    return {"dex": [DEXTEROUS], "ambi": [AMBIDEXTROUS], "both": [DEXTEROUS, AMBIDEXTROUS]}[args.mode]


def _output(args):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w", newline=""), True


def _emit(args, text: str) -> None:
    fh, close = _output(args)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _load(args):
    return parse_edge_list(args.dataset, symmetrize=args.symmetrize,
                           drop_self_loops=args.drop_self_loops)


def cmd_ingest(args) -> int:
    rel = _load(args)
    lines = [
        f"pairs\t{len(rel)}",
        f"left_support\t{rel.left_nodes.size}",
        f"right_support\t{rel.right_nodes.size}",
        f"max_left_degree\t{rel.max_left_degree}",
        f"max_right_degree\t{rel.max_right_degree}",
        f"symmetric\t{rel.symmetric}",
        f"digest\t{rel.digest}",
    ]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_moments(args) -> int:
    rel = _load(args)
    if args.p is not None or args.q is not None:
        p = 1.0 if args.p is None else args.p
        q = 1.0 if args.q is None else args.q
        ln = ln_bivariate_moment(rel, p, q)
        _emit(args, f"p={p:g}\tq={q:g}\tln_moment={ln:.17g}\tmoment={math.exp(ln):.17g}\n")
        return EXIT_OK
    spec = _grid_spec(args)
    grid = load_or_build_grid(rel, spec, args.cache_dir)
    _emit(args, format_grid_csv(grid, spec.key))
    return EXIT_OK


def cmd_bound(args) -> int:
    rel = _load(args)
    query = lookup_named_query(args.query)
    spec = _grid_spec(args)
    grid = load_or_build_grid(rel, spec, args.cache_dir)
    ok = True
    lines = []
    for mode in _modes(args):
        res = compute_bound(query, rel, mode, grid, lp_dump=args.lp_dump)
        ok &= res.ok
        lines.append(f"{query.name}\t{mode}\tstatus={res.status}\tln_bound={res.ln_bound:.17g}"
                     f"\tbound={res.bound:.17g}")
        if args.certificate and res.ok:
            for label, w in res.certificate_labels():
                lines.append(f"  {w:.12g}\t{label}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_count(args) -> int:
    rel = _load(args)
    query = lookup_named_query(args.query)
    data = DataGraph.from_relation(symmetrize(rel))
    work = estimate_work(query, data)
    if work > args.budget and not args.force:
        raise BudgetExceededError(
            f"estimated work {work:.3g} exceeds budget {args.budget:.3g}; use --force")
    total = count_homomorphisms(query, data, workers=args.workers)
    _emit(args, f"{total}\n")
    return EXIT_OK


def cmd_cover_check(args) -> int:
    cover = VennCover.parse(args.cover)
    v = check_cover(cover)
    lines = [f"applicable\t{v.applicable}", f"covering\t{v.covering}"]
    lines += [f"{name}\t{val}" for name, val in zip(BASIS_NAMES, v.basis)]
    if v.witness is not None:
        lines.append(f"witness\t{v.witness}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_refine(args) -> int:
    rel = _load(args)
    w, val = refine_single_term(rel, args.p, args.q, tol=args.tol)
    _emit(args, f"w_star={w:.12g}\tln_bound={val:.17g}\tbound={math.exp(val):.17g}\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    failures: list[DatasetFailure] = []
    queries = args.queries.split(",") if args.queries else list(CATALOG_NAMES)
    for q in queries:
        lookup_named_query(q)
    rows = run_experiment(args.datasets, queries, _modes(args), _grid_spec(args), args.budget,
                          cache_dir=args.cache_dir, workers=args.workers, failures=failures)
    fh, close = _output(args)
    try:
        write_csv(rows, fh)
    finally:
        if close:
            fh.close()
    skipped = sum(r.skipped for r in rows)
    undefined = sum(1 for r in rows if r.true_count == 0)
    print(f"rows={len(rows)} skipped_counts={skipped} zero_counts={undefined} "
          f"failed_datasets={len(failures)}", file=sys.stderr)
    for f in failures:
        print(f"FAILED {f.dataset}: {f.message}", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_FAILED


def cmd_report(args) -> int:
    rows = [r for path in args.csv for r in read_csv(path)]
    agg = aggregate_geomean(rows)
    fh, close = _output(args)
    try:
        write_csv(agg, fh)
    finally:
        if close:
            fh.close()
    skipped = sum(r.skipped for r in rows)
    points = relative_error_points(rows)
    msg = f"rows={len(rows)} defined={len(points)} skipped_counts={skipped}"
    try:
        fit = fit_origin_slope(points)
        msg += f" slope={fit.slope:.6g} r_squared={fit.r_squared:.6g} n_points={fit.n_points}"
    except ValueError:
        msg += " slope=undefined"
    print(msg, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambibound",
        description="Join-size upper bounds from one- and two-sided degree moments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        _add_globals(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def dataset_args(p, symmetrize_default=False):
        p.add_argument("dataset", help="edge-list file")
        p.add_argument("--symmetrize", action="store_true", default=symmetrize_default)
        p.add_argument("--drop-self-loops", action="store_true")

    p = add("ingest", cmd_ingest, "parse an edge list and print its statistics")
    dataset_args(p)

    p = add("moments", cmd_moments, "compute a moment or the full moment grid")
    dataset_args(p)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)

    p = add("bound", cmd_bound, "upper bound for one query over a symmetric graph")
    dataset_args(p, symmetrize_default=True)
    p.add_argument("--query", required=True, help="catalog name, e.g. K3")
    p.add_argument("--certificate", action="store_true", help="print the dual certificate")

    p = add("count", cmd_count, "exact homomorphism count")
    dataset_args(p, symmetrize_default=True)
    p.add_argument("--query", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true", help="ignore the work budget")

    p = add("cover-check", cmd_cover_check, "check a nine-term Venn cover")
    p.add_argument("cover", help="nine comma-separated rationals, lines XY,YZ,ZX")

    p = add("refine", cmd_refine, "single-term refinement of a two-sided moment bound")
    dataset_args(p)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-6)

    p = add("experiment", cmd_experiment, "bounds and counts over datasets x shapes (CSV)")
    p.add_argument("datasets", nargs="*", help="edge-list files (symmetrized)")
    p.add_argument("--queries", help="comma-separated catalog names (default all 29)")
    p.add_argument("--workers", type=int, default=1)

    p = add("report", cmd_report, "per-shape geometric means and the origin fit")
    p.add_argument("csv", nargs="+", help="experiment CSV files")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
