"""The entropic linear program behind degree-sequence bounds.

Coordinates are joint entropies ``h_S`` for nonempty subsets ``S`` of query
vertices (``h_{}`` is zero and eliminated).  Subsets are bitmasks; subset
``S`` lives in LP slot ``S - 1``.  The objective ``h_V`` for the full vertex
set is the log of the join size, so ``exp(max h_V)`` bounds the number of
homomorphisms.

Every row reads ``coefficients . h <= rhs``.  For a query edge ``(u, v)``
carrying relation ``R`` (left column at ``u``), the statistics rows are

* one-sided, ``p >= 0``: ``p h_uv + (1 - p) h_u <= ln sum_a deg(a)^p``
  (and the mirror with ``h_v`` and right degrees);
* max degree: ``h_uv - h_u <= ln max_a deg(a)`` (and mirror);
* two-sided, ``p, q >= 1``:
  ``(p + q - 1) h_uv + (1 - p) h_u + (1 - q) h_v <= ln M_p(R)_q``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Mapping, Union

import numpy as np

from . import simplex
from .catalog import QueryGraph
from .errors import ConfigurationError
from .moments import GridSpec, MomentGrid, build_grid_from_spec
from .relation import Relation

log = logging.getLogger(__name__)

DEXTEROUS = "dexterous"
AMBIDEXTROUS = "ambidextrous"
MODES = (DEXTEROUS, AMBIDEXTROUS)

OBJECTIVE_TOL = 1e-7
ACTIVITY_TOL = 1e-6
MAX_VARIABLES_N = 8


def _mode(mode: str) -> str:
    aliases = {"dex": DEXTEROUS, "ambi": AMBIDEXTROUS}
    mode = aliases.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass
class Row:
    coeffs: dict[int, float]  # slot -> coefficient
    rhs: float
    label: str = ""


@dataclass
class EntropicProgram:
    n: int
    rows: list[Row] = field(default_factory=list)

    @property
    def num_vars(self) -> int:
        return (1 << self.n) - 1

    @property
    def objective_slot(self) -> int:
        return slot(self.num_vars)

    def var_index(self) -> dict[frozenset, int]:
        return {frozenset(i for i in range(self.n) if mask >> i & 1): slot(mask)
                for mask in range(1, 1 << self.n)}

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        A = np.zeros((len(self.rows), self.num_vars))
        b = np.empty(len(self.rows))
        for i, row in enumerate(self.rows):
            for s, v in row.coeffs.items():
                A[i, s] += v
            b[i] = row.rhs
        return A, b

    def extend(self, rows) -> None:
        self.rows.extend(rows)

    def pruned(self) -> "EntropicProgram":
        """Keep the smallest rhs per coefficient pattern; drop empty rows.

        Row order is by first appearance, so pruning is deterministic.
        """
        best: dict[bytes, Row] = {}
        for row in self.rows:
            coeffs = {s: v for s, v in row.coeffs.items() if v != 0.0}
            if not coeffs and row.rhs >= 0:
                continue
            key = np.array(sorted(coeffs.items()), dtype=np.float64).tobytes()
            cur = best.get(key)
            if cur is None or row.rhs < cur.rhs:
                best[key] = Row(coeffs, row.rhs, row.label)
        return EntropicProgram(self.n, list(best.values()))

    def to_lp_text(self, title: str = "") -> str:
        """CPLEX-LP text for cross-checking with external solvers."""
        names = [_var_name(mask) for mask in range(1, 1 << self.n)]

        def fmt(coeffs):
            parts = []
            for s, v in sorted(coeffs.items()):
                parts.append(f"{'-' if v < 0 else '+'} {abs(v):.17g} {names[s]}")
            return " ".join(parts) if parts else "0 " + names[0]

        out = [f"\\ {title}".rstrip(), "Maximize", f" obj: {names[self.objective_slot]}",
               "Subject To"]
        for i, row in enumerate(self.rows):
            out.append(f" r{i}: {fmt(row.coeffs)} <= {row.rhs:.17g}")
        out.append("Bounds")
        out.extend(f" {nm} free" for nm in names)
        out.append("End")
        return "\n".join(out) + "\n"


def slot(mask: int) -> int:
    return mask - 1


def _var_name(mask: int) -> str:
    return "h_" + "".join(chr(ord("A") + i) for i in range(mask.bit_length()) if mask >> i & 1)


def _row(terms: Mapping[int, float], rhs: float, label: str) -> Row:
    coeffs: dict[int, float] = {}
    for mask, v in terms.items():
        if mask == 0:
            continue
        coeffs[slot(mask)] = coeffs.get(slot(mask), 0.0) + v
    return Row(coeffs, float(rhs), label)


def elemental_inequalities(n: int) -> list[Row]:
    """Monotonicity ``h_V >= h_{V-i}`` and elemental submodularity
    ``h_{S+i} + h_{S+j} >= h_{S+i+j} + h_S`` for ``i < j``, ``S`` avoiding
    ``i, j``.  Yields ``n + C(n,2) 2^(n-2)`` rows."""
    if not isinstance(n, int) or not 1 <= n <= MAX_VARIABLES_N:
        raise ValueError(f"n must be in [1, {MAX_VARIABLES_N}], got {n!r}")
    full = (1 << n) - 1
    rows = []
    for i in range(n):
        rows.append(_row({full: -1.0, full & ~(1 << i): 1.0}, 0.0, f"mono[{i}]"))
    for i, j in combinations(range(n), 2):
        rest = [k for k in range(n) if k not in (i, j)]
        for r in range(len(rest) + 1):
            for sub in combinations(rest, r):
                s = sum(1 << k for k in sub)
                si, sj, sij = s | 1 << i, s | 1 << j, s | 1 << i | 1 << j
                terms: dict[int, float] = {}
                for mask, v in ((sij, 1.0), (s, 1.0), (si, -1.0), (sj, -1.0)):
                    terms[mask] = terms.get(mask, 0.0) + v
                rows.append(_row(terms, 0.0, f"sub[{i},{j}|{s:b}]"))
    return rows


def statistics_constraints(edge: tuple[int, int], grid: MomentGrid, mode: str, *,
                           use_max_degree: bool = True) -> list[Row]:
    """Rows bounding entropies on ``edge = (u, v)`` by the relation's moments.

    Both orientations are emitted; the ``v -> u`` orientation uses the
    transposed relation, whose moment at ``(p, q)`` is the grid value at
    ``(q, p)``.
    """
    mode = _mode(mode)
    u, v = edge
    if u == v:
        raise ValueError("edge endpoints must differ")
    if mode == DEXTEROUS and grid.dex_ps.size == 0:
        raise ConfigurationError("dexterous mode needs one-sided grid points")
    if mode == AMBIDEXTROUS and grid.ambi_ln.size == 0:
        raise ConfigurationError("ambidextrous mode needs two-sided grid points")
    U, V = 1 << u, 1 << v
    UV = U | V
    tag = f"{u}-{v}"
    rows = []
    for p, ln_l, ln_r in zip(grid.dex_ps.tolist(), grid.dex_left.tolist(), grid.dex_right.tolist()):
        rows.append(_row({UV: p, U: 1.0 - p}, ln_l, f"dex[{tag},p={p:g}]"))
        rows.append(_row({UV: p, V: 1.0 - p}, ln_r, f"dex[{tag}',p={p:g}]"))
    if use_max_degree:
        rows.append(_row({UV: 1.0, U: -1.0}, math.log(grid.max_left_degree), f"maxdeg[{tag}]"))
        rows.append(_row({UV: 1.0, V: -1.0}, math.log(grid.max_right_degree), f"maxdeg[{tag}']"))
    if mode == AMBIDEXTROUS:
        lookup = {(p, q): val for (p, q), val in zip(grid.ambi_pq.tolist(), grid.ambi_ln.tolist())}
        for (p, q), val in lookup.items():
            rows.append(_row({UV: p + q - 1.0, U: 1.0 - p, V: 1.0 - q}, val,
                             f"ambi[{tag},p={p:g},q={q:g}]"))
            mirrored = lookup.get((q, p))
            if mirrored is not None:
                rows.append(_row({UV: p + q - 1.0, V: 1.0 - p, U: 1.0 - q}, mirrored,
                                 f"ambi[{tag}',p={p:g},q={q:g}]"))
    return rows


@dataclass
class BoundResult:
    query_name: str
    mode: str
    ln_bound: float
    bound: float
    status: str
    tight_rows: list[int] = field(default_factory=list)
    certificate: dict[int, float] = field(default_factory=dict)  # row index -> weight
    h: np.ndarray | None = None
    program: EntropicProgram | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def ok(self) -> bool:
        return self.status == simplex.OPTIMAL

    def certificate_labels(self) -> list[tuple[str, float]]:
        if self.program is None:
            return []
        return [(self.program.rows[i].label, w) for i, w in sorted(self.certificate.items())]


def solve_lp(program: EntropicProgram, *, query_name: str = "", mode: str = "") -> BoundResult:
    """Maximize ``h_V`` over the program's feasible region."""
    A, b = program.matrix()
    c = np.zeros(program.num_vars)
    c[program.objective_slot] = 1.0
    sol = simplex.maximize(c, A, b)
    if sol.status != simplex.OPTIMAL:
        ln = math.inf if sol.status == simplex.UNBOUNDED else math.nan
        return BoundResult(query_name, mode, ln, ln, sol.status, program=program,
                           iterations=sol.iterations)
    h = sol.x
    slack = b - A @ h
    tight = np.flatnonzero(slack <= ACTIVITY_TOL).tolist()
    cert = {int(i): float(sol.y[i]) for i in np.flatnonzero(sol.y > 0)}
    ln_bound = float(sol.objective)
    try:
        bound = math.exp(ln_bound)
    except OverflowError:
        bound = math.inf
    return BoundResult(query_name, mode, ln_bound, bound, sol.status, tight, cert, h,
                       program, sol.iterations)


RelationArg = Union[Relation, Mapping[tuple[int, int], Relation]]
GridArg = Union[MomentGrid, Mapping[tuple[int, int], MomentGrid], None]


def build_program(query: QueryGraph, grids: Mapping[tuple[int, int], MomentGrid], mode: str, *,
                  use_max_degree: bool = True) -> EntropicProgram:
    prog = EntropicProgram(query.n, elemental_inequalities(query.n))
    for edge in query.edge_list:
        prog.extend(statistics_constraints(edge, grids[edge], mode, use_max_degree=use_max_degree))
    return prog.pruned()


def compute_bound(query: QueryGraph, rel: RelationArg, mode: str = AMBIDEXTROUS,
                  grids: GridArg = None, *, spec: GridSpec | None = None,
                  use_max_degree: bool = True, lp_dump: str | Path | None = None) -> BoundResult:
    """Upper bound on the join of ``query`` with ``rel`` on every edge.

    ``rel`` and ``grids`` may also be maps from query edge ``(u, v)`` (with
    ``u < v``) to per-edge relations or grids, for general joins.  Missing
    grids are built from ``spec`` (the default grid when ``None``).
    """
    mode = _mode(mode)
    edges = query.edge_list
    if not edges:
        raise ValueError(f"query {query.name} has no edges")
    rels = rel if isinstance(rel, Mapping) else {e: rel for e in edges}
    if isinstance(grids, MomentGrid):
        grid_map = {e: grids for e in edges}
    else:
        grid_map = dict(grids or {})
    built: dict[str, MomentGrid] = {}
    for e in edges:
        if e not in grid_map:
            r = rels[e]
            if r.digest not in built:
                built[r.digest] = build_grid_from_spec(r, spec or GridSpec())
            grid_map[e] = built[r.digest]
        elif e in rels and grid_map[e].relation_digest != rels[e].digest:
            raise ConfigurationError(f"grid for edge {e} was built from a different relation")

    program = build_program(query, grid_map, mode, use_max_degree=use_max_degree)
    if lp_dump is not None:
        path = Path(lp_dump)
        if path.suffix != ".lp":  # a directory: one file per (query, mode)
            path.mkdir(parents=True, exist_ok=True)
            path = path / f"{query.name}-{mode}.lp"
        path.write_text(program.to_lp_text(f"{query.name} {mode}"))
    result = solve_lp(program, query_name=query.name, mode=mode)
    if result.status != simplex.OPTIMAL:
        log.warning("%s/%s: LP status %s", query.name, mode, result.status)
    return result
