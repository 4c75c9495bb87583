"""End-to-end experiments: bounds and exact counts over datasets and
query shapes, CSV output, per-shape geometric means and the origin-passing
fit of log relative errors."""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

from .catalog import QueryGraph, lookup_named_query
from .entropic import AMBIDEXTROUS, DEXTEROUS, MODES, _mode, compute_bound
from .homcount import DataGraph, count_homomorphisms, estimate_work
from .moments import GridSpec, load_or_build_grid
from .relation import Relation, parse_edge_list, symmetrize

log = logging.getLogger(__name__)

CSV_HEADER = ("dataset", "shape", "true", "dex", "ambi", "dex_rel", "ambi_rel")
DEFAULT_BUDGET = 1e9
REL_TOL = 1e-9
_LN10 = math.log(10.0)


@dataclass
class ExperimentRow:
    """One (dataset, shape) result.

    ``true_count`` is ``None`` when the exact count was skipped for budget;
    ``dex``/``ambi`` are ``nan`` for modes that were not requested.  The
    relative errors are ``log10(bound / true)`` and are ``None`` unless the
    row is defined (a positive exact count is known).
    """

    dataset: str
    shape: str
    true_count: int | float | None
    dex: float
    ambi: float
    dex_rel: float | None = None
    ambi_rel: float | None = None

    @property
    def defined(self) -> bool:
        return self.true_count is not None and self.true_count > 0

    @property
    def skipped(self) -> bool:
        return self.true_count is None


@dataclass(frozen=True)
class FitResult:
    slope: float
    r_squared: float
    n_points: int


@dataclass
class DatasetFailure:
    dataset: str
    message: str


def _log10_ratio(ln_bound: float, true_count) -> float | None:
    if true_count is None or true_count <= 0 or math.isnan(ln_bound):
        return None
    return (ln_bound - math.log(true_count)) / _LN10


def _exp(ln: float) -> float:
    try:
        return math.exp(ln)
    except OverflowError:
        return math.inf


DatasetArg = Union[str, Path, tuple[str, Relation]]


def _load_dataset(ds: DatasetArg) -> tuple[str, Relation]:
    if isinstance(ds, tuple):
        name, rel = ds
        return name, symmetrize(rel)
    path = Path(ds)
    return path.stem, parse_edge_list(path, symmetrize=True)


def _run_one(ds: DatasetArg, queries: Sequence[QueryGraph], modes: Sequence[str],
             spec: GridSpec, budget: float, cache_dir, workers: int) -> list[ExperimentRow]:
    name, rel = _load_dataset(ds)
    grid = load_or_build_grid(rel, spec, cache_dir)
    data = DataGraph.from_relation(rel)

    def one(query: QueryGraph) -> ExperimentRow:
        ln = {m: math.nan for m in MODES}
        for m in modes:
            res = compute_bound(query, rel, m, grid)
            if not res.ok:
                raise RuntimeError(f"{query.name}/{m}: LP status {res.status}")
            ln[m] = res.ln_bound
        work = estimate_work(query, data)
        if work > budget:
            log.info("%s/%s: estimated work %.3g over budget %.3g, count skipped",
                     name, query.name, work, budget)
            true = None
        else:
            true = count_homomorphisms(query, data)
        return ExperimentRow(name, query.name, true, _exp(ln[DEXTEROUS]), _exp(ln[AMBIDEXTROUS]),
                             _log10_ratio(ln[DEXTEROUS], true), _log10_ratio(ln[AMBIDEXTROUS], true))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, queries))
    return [one(q) for q in queries]


def run_experiment(datasets: Iterable[DatasetArg], queries: Iterable[str | QueryGraph],
                   modes: Iterable[str] = MODES, spec: GridSpec | None = None,
                   budget: float = DEFAULT_BUDGET, *, cache_dir=None, workers: int = 1,
                   failures: list[DatasetFailure] | None = None) -> list[ExperimentRow]:
    """Bounds (and exact counts within ``budget``) for every dataset and shape.

    A dataset that fails is logged and appended to ``failures``; the other
    datasets still produce rows.  Rows are sorted by ``(dataset, shape)``.
    """
    spec = spec or GridSpec()
    modes = tuple(dict.fromkeys(_mode(m) for m in modes))
    qs = [q if isinstance(q, QueryGraph) else lookup_named_query(q) for q in queries]
    datasets = list(datasets)

    def guarded(ds):
        try:
            return _run_one(ds, qs, modes, spec, budget, cache_dir, workers)
        except Exception as exc:  # isolate per-dataset failures
            label = ds[0] if isinstance(ds, tuple) else str(ds)
            log.error("dataset %s failed: %s", label, exc)
            if failures is not None:
                failures.append(DatasetFailure(label, f"{type(exc).__name__}: {exc}"))
            return []

    if workers > 1 and len(datasets) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(guarded, datasets))
    else:
        parts = [guarded(ds) for ds in datasets]
    rows = [r for part in parts for r in part]
    rows.sort(key=lambda r: (r.dataset, r.shape))
    return rows


def _geomean(values: list[float]) -> float:
    return _exp(sum(math.log(v) for v in values) / len(values))


def aggregate_geomean(rows: Iterable[ExperimentRow], label: str = "geomean") -> list[ExperimentRow]:
    """Per shape: geometric means of the exact count and both bounds, and
    arithmetic means of the log relative errors.

    Relative-error means use defined rows only; bound means use every row
    with a positive finite bound; the count mean uses positive counts.
    Shapes without any defined row are dropped with a warning.
    """
    groups: dict[str, list[ExperimentRow]] = defaultdict(list)
    for r in rows:
        groups[r.shape].append(r)
    out = []
    for shape in sorted(groups):
        grp = groups[shape]
        defined = [r for r in grp if r.defined]
        if not defined:
            log.warning("shape %s has no defined rows, omitted from aggregate", shape)
            continue

        def gm(vals):
            vals = [v for v in vals if v is not None and v > 0 and math.isfinite(v)]
            return _geomean(vals) if vals else math.nan

        def mean(vals):
            vals = [v for v in vals if v is not None]
            return sum(vals) / len(vals) if vals else None

        out.append(ExperimentRow(
            label, shape, gm([r.true_count for r in defined]),
            gm([r.dex for r in grp]), gm([r.ambi for r in grp]),
            mean([r.dex_rel for r in defined]), mean([r.ambi_rel for r in defined]),
        ))
    return out


def fit_origin_slope(points: Iterable[tuple[float, float]]) -> FitResult:
    """Least-squares line through the origin, ``y ~ slope * x``.

    ``R^2 = 1 - SSE / sum(y^2)`` (uncentred, as usual for origin models).
    """
    pts = [(float(x), float(y)) for x, y in points]
    sxx = sum(x * x for x, _ in pts)
    if not pts or sxx == 0.0:
        raise ValueError("origin fit needs at least one point with x != 0")
    slope = sum(x * y for x, y in pts) / sxx
    syy = sum(y * y for _, y in pts)
    sse = sum((y - slope * x) ** 2 for x, y in pts)
    r2 = 1.0 if syy == 0.0 else 1.0 - sse / syy
    return FitResult(slope, r2, len(pts))


def relative_error_points(rows: Iterable[ExperimentRow]) -> list[tuple[float, float]]:
    return [(r.dex_rel, r.ambi_rel) for r in rows
            if r.defined and r.dex_rel is not None and r.ambi_rel is not None]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def write_csv(rows: Iterable[ExperimentRow], destination) -> None:
    """Write rows with the standard header; ``destination`` is a path or a
    text stream."""
    if hasattr(destination, "write"):
        _write(rows, destination)
        return
    path = Path(destination)
    try:
        with path.open("w", newline="") as fh:
            _write(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _write(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        rel_d = r.dex_rel if r.defined else None
        rel_a = r.ambi_rel if r.defined else None
        w.writerow([r.dataset, r.shape, _fmt(r.true_count), _fmt(r.dex), _fmt(r.ambi),
                    _fmt(rel_d), _fmt(rel_a)])


def _parse_num(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_csv(source) -> list[ExperimentRow]:
    if hasattr(source, "read"):
        return _read(source)
    with Path(source).open(newline="") as fh:
        return _read(fh)


def _read(fh) -> list[ExperimentRow]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        ds, shape, true, dex, ambi, dr, ar = rec
        rows.append(ExperimentRow(ds, shape, _parse_num(true), float(dex), float(ambi),
                                  _parse_num(dr), _parse_num(ar)))
    return rows
