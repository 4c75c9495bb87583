"""Bivariate moments of bi-degree sequences and degree-sequence norms.

For a relation ``R`` the bivariate moment is::

    M_p(R)_q = sum over (a, b) in R of deg(a)**(p-1) * deg(b)**(q-1)

and the one-sided (dexterous) norm is ``sum over a of deg(a)**p``.  Every
value here is returned as a natural log and computed from the bi-degree
histogram, so the cost of one grid point is the number of distinct degree
pairs rather than the number of pairs.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .errors import BudgetExceededError
from .relation import Relation

log = logging.getLogger(__name__)

DEFAULT_STEP = 0.5
FINE_STEP = 0.1
DEX_MAX = 50.0
AMBI_MIN = 1.0
AMBI_MAX = 10.0
CACHE_VERSION = "v1"

# Grid coordinates are rounded to this many decimals so that 0.1 * k style
# arithmetic yields canonical floats (and hence stable row patterns).
_GRID_DECIMALS = 9


def _canon(v: float) -> float:
    return round(float(v), _GRID_DECIMALS) + 0.0


def _check_pq(p: float, q: float) -> None:
    if not (math.isfinite(p) and math.isfinite(q)) or p < 1 or q < 1:
        raise ValueError(f"bivariate moment needs finite p, q >= 1, got p={p}, q={q}")


def _hist_terms(rel: Relation):
    logc = np.log(rel.bideg_count.astype(np.float64))
    x = np.log(rel.bideg_left.astype(np.float64))
    y = np.log(rel.bideg_right.astype(np.float64))
    return logc, x, y


def _degree_terms(counts: np.ndarray):
    degs, mult = np.unique(counts, return_counts=True)
    return np.log(mult.astype(np.float64)), np.log(degs.astype(np.float64))


def ln_bivariate_moment(rel: Relation, p: float, q: float) -> float:
    """``ln M_p(R)_q`` for ``p, q >= 1``."""
    _check_pq(p, q)
    logc, x, y = _hist_terms(rel)
    out = _backend.lse_grid(logc, x, y, np.array([p - 1.0]), np.array([q - 1.0]))
    return float(out[0])


def ln_dexterous_norm(rel: Relation, p: float, side: str = "left") -> float:
    """``ln sum_a deg(a)**p`` over the left (or right) column, ``p >= 0``."""
    if not math.isfinite(p) or p < 0:
        raise ValueError(f"dexterous norm needs finite p >= 0, got {p}")
    counts = _side_counts(rel, side)
    logc, x = _degree_terms(counts)
    out = _backend.lse_grid(logc, x, np.zeros_like(x), np.array([float(p)]), np.zeros(1))
    return float(out[0])


def _side_counts(rel: Relation, side: str) -> np.ndarray:
    if side == "left":
        return rel.left_counts
    if side == "right":
        return rel.right_counts
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


@dataclass(frozen=True)
class GridSpec:
    """Parameter grids: dexterous ``p`` on ``[0, 50]`` and ambidextrous
    ``(p, q)`` on ``[1, 10]^2``, each at a uniform step."""

    dex_step: float = DEFAULT_STEP
    ambi_step: float = DEFAULT_STEP
    dex_max: float = DEX_MAX
    ambi_max: float = AMBI_MAX

    @classmethod
    def fine(cls) -> "GridSpec":
        return cls(FINE_STEP, FINE_STEP)

    def dex_ps(self) -> list[float]:
        k = int(round(self.dex_max / self.dex_step))
        return [_canon(i * self.dex_step) for i in range(k + 1)]

    def ambi_axis(self) -> list[float]:
        k = int(round((self.ambi_max - AMBI_MIN) / self.ambi_step))
        return [_canon(AMBI_MIN + i * self.ambi_step) for i in range(k + 1)]

    def ambi_pqs(self) -> list[tuple[float, float]]:
        axis = self.ambi_axis()
        return [(p, q) for p in axis for q in axis]

    @property
    def key(self) -> str:
        return f"d{self.dex_step:g}-{self.dex_max:g}_a{self.ambi_step:g}-{self.ambi_max:g}"


@dataclass
class MomentGrid:
    """Precomputed log-moments of one relation.

    ``dex_left[i]`` is ``ln sum_a deg(a)**dex_ps[i]`` (``M_p(R)_1``) and
    ``dex_right[i]`` the same over the right column (``M_1(R)_p``).
    ``ambi_ln[i]`` is ``ln M_p(R)_q`` at ``ambi_pq[i] = (p, q)``.
    """

    relation_digest: str
    dex_ps: np.ndarray
    dex_left: np.ndarray
    dex_right: np.ndarray
    ambi_pq: np.ndarray
    ambi_ln: np.ndarray
    max_left_degree: int
    max_right_degree: int
    _ambi_index: dict = field(default=None, repr=False, compare=False)

    @property
    def dexterous(self) -> list[tuple[float, float]]:
        return list(zip(self.dex_ps.tolist(), self.dex_left.tolist()))

    @property
    def ambidextrous(self) -> list[tuple[float, float, float]]:
        return [(p, q, v) for (p, q), v in zip(self.ambi_pq.tolist(), self.ambi_ln.tolist())]

    def ln_ambi(self, p: float, q: float) -> float:
        if self._ambi_index is None:
            self._ambi_index = {
                (p_, q_): i for i, (p_, q_) in enumerate(self.ambi_pq.tolist())
            }
        return float(self.ambi_ln[self._ambi_index[(_canon(p), _canon(q))]])

    def ln_dex(self, p: float, side: str = "left") -> float:
        idx = np.flatnonzero(self.dex_ps == _canon(p))
        if idx.size == 0:
            raise KeyError(p)
        arr = self.dex_left if side == "left" else self.dex_right
        return float(arr[idx[0]])

    def restricted(self, dex_ps: Iterable[float] = (), ambi_pqs: Iterable = ()) -> "MomentGrid":
        """Sub-grid containing only the listed points (which must be present)."""
        dex = sorted({_canon(p) for p in dex_ps})
        pqs = sorted({(_canon(p), _canon(q)) for p, q in ambi_pqs})
        di = [int(np.flatnonzero(self.dex_ps == p)[0]) for p in dex]
        ai = [self._lookup_pq(p, q) for p, q in pqs]
        return MomentGrid(
            self.relation_digest,
            self.dex_ps[di], self.dex_left[di], self.dex_right[di],
            self.ambi_pq[ai].reshape(-1, 2), self.ambi_ln[ai],
            self.max_left_degree, self.max_right_degree,
        )

    def _lookup_pq(self, p, q) -> int:
        self.ln_ambi(p, q)
        return self._ambi_index[(p, q)]


def _normalize_dex(ps: Iterable[float]) -> np.ndarray:
    vals = sorted({_canon(p) for p in ps})
    for p in vals:
        if not math.isfinite(p) or p < 0:
            raise ValueError(f"dexterous p must be finite and >= 0, got {p}")
    return np.array(vals, dtype=np.float64)


def _normalize_ambi(pqs: Iterable[tuple[float, float]]) -> np.ndarray:
    vals = sorted({(_canon(p), _canon(q)) for p, q in pqs})
    for p, q in vals:
        _check_pq(p, q)
    return np.array(vals, dtype=np.float64).reshape(-1, 2)


def build_moment_grid(rel: Relation, dex_ps: Iterable[float],
                      ambi_pqs: Iterable[tuple[float, float]]) -> MomentGrid:
    """Evaluate all grid points with one histogram pass per point.

    Inputs are canonicalized: sorted, deduplicated, rounded to 9 decimals.
    """
    dex = _normalize_dex(dex_ps)
    pq = _normalize_ambi(ambi_pqs)

    if dex.size:
        lc, x = _degree_terms(rel.left_counts)
        dex_left = _backend.lse_grid(lc, x, np.zeros_like(x), dex, np.zeros_like(dex))
        rc, x = _degree_terms(rel.right_counts)
        dex_right = _backend.lse_grid(rc, x, np.zeros_like(x), dex, np.zeros_like(dex))
    else:
        dex_left = dex_right = np.zeros(0)

    if pq.size:
        logc, x, y = _hist_terms(rel)
        ambi = _backend.lse_grid(logc, x, y, pq[:, 0] - 1.0, pq[:, 1] - 1.0)
    else:
        ambi = np.zeros(0)

    return MomentGrid(rel.digest, dex, dex_left, dex_right, pq, ambi,
                      rel.max_left_degree, rel.max_right_degree)


def build_grid_from_spec(rel: Relation, spec: GridSpec) -> MomentGrid:
    return build_moment_grid(rel, spec.dex_ps(), spec.ambi_pqs())


# -- brute-force oracle ---------------------------------------------------

def enumerate_claw_pairs(rel: Relation, p: int, q: int, *, budget: int = 10 ** 8) -> int:
    """Count tuples ``(a_1..a_{q-1}, b, a, b_1..b_{p-1})`` by enumeration.

    Each ``(a_i, b)``, ``(a, b)`` and ``(a, b_j)`` must be a pair of ``rel``.
    Independent of the histogram path: neighbour lists are rebuilt from the
    raw pairs and every tuple is visited.

    Raises:
        BudgetExceededError: if ``|R| ** (p + q - 1)`` exceeds ``budget``.
    """
    if int(p) != p or int(q) != q or p < 1 or q < 1:
        raise ValueError("p and q must be positive integers")
    p, q = int(p), int(q)
    pairs = list(rel)
    if len(pairs) ** (p + q - 1) > budget:
        raise BudgetExceededError(
            f"|R|^(p+q-1) = {len(pairs)}^{p + q - 1} exceeds budget {budget}")
    out_nbrs: dict[int, list[int]] = defaultdict(list)
    in_nbrs: dict[int, list[int]] = defaultdict(list)
    for a, b in pairs:
        out_nbrs[a].append(b)
        in_nbrs[b].append(a)
    count = 0
    for a, b in pairs:
        for _ in itertools.product(in_nbrs[b], repeat=q - 1):
            for _ in itertools.product(out_nbrs[a], repeat=p - 1):
                count += 1
    return count


# -- invariant checks -----------------------------------------------------

def midpoint_convexity_violations(grid: MomentGrid, rtol: float = 1e-9) -> list[tuple]:
    """Grid-aligned midpoint convexity failures of the ambidextrous grid.

    For every lattice point ``x``, direction ``d`` in {(1,0), (0,1), (1,1),
    (1,-1)} and step ``k`` with ``x +- k d`` on the grid, checks
    ``f(x) <= (f(x - kd) + f(x + kd)) / 2`` within ``rtol * max(1, |f|)``.
    Requires a full square lattice; returns the violating triples.
    """
    p_axis = np.unique(grid.ambi_pq[:, 0])
    q_axis = np.unique(grid.ambi_pq[:, 1])
    if p_axis.size * q_axis.size != grid.ambi_ln.size:
        raise ValueError("ambidextrous grid is not a full lattice")
    order = np.lexsort((grid.ambi_pq[:, 1], grid.ambi_pq[:, 0]))
    f = grid.ambi_ln[order].reshape(p_axis.size, q_axis.size)
    n1, n2 = f.shape
    bad = []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        for k in range(1, max(n1, n2)):
            si, sj = k * di, k * dj
            i0, i1 = si, n1 - si
            j0, j1 = abs(sj), n2 - abs(sj)
            if i0 >= i1 or j0 >= j1:
                break
            mid = f[i0:i1, j0:j1]
            lo = f[i0 - si:i1 - si, j0 - sj:j1 - sj]
            hi = f[i0 + si:i1 + si, j0 + sj:j1 + sj]
            slack = (lo + hi) / 2 - mid
            tol = rtol * np.maximum(1.0, np.abs(mid))
            for i, j in zip(*np.nonzero(slack < -tol)):
                bad.append(((p_axis[i + i0], q_axis[j + j0]), (di, dj), k, float(slack[i, j])))
    return bad


def monotonicity_violations(grid: MomentGrid, atol: float = 1e-12) -> list[tuple]:
    """Adjacent grid points where a log-moment decreases in ``p`` or ``q``."""
    bad = []
    for name, vals in (("dex_left", grid.dex_left), ("dex_right", grid.dex_right)):
        drops = np.flatnonzero(np.diff(vals) < -atol)
        bad.extend((name, float(grid.dex_ps[i])) for i in drops)
    pq = grid.ambi_pq
    idx = {(p, q): i for i, (p, q) in enumerate(pq.tolist())}
    p_axis = sorted({p for p, _ in idx})
    q_axis = sorted({q for _, q in idx})
    for i, p in enumerate(p_axis):
        for j, q in enumerate(q_axis):
            k = idx.get((p, q))
            if k is None:
                continue
            for nxt in ((p_axis[i + 1], q) if i + 1 < len(p_axis) else None,
                        (p, q_axis[j + 1]) if j + 1 < len(q_axis) else None):
                if nxt is not None and nxt in idx and grid.ambi_ln[idx[nxt]] < grid.ambi_ln[k] - atol:
                    bad.append(("ambi", (p, q), nxt))
    return bad


# -- disk cache -------------------------------------------------------------

def _header(digest: str, spec_key: str, grid: MomentGrid | None = None) -> str:
    head = f"#ambibound-moments {CACHE_VERSION} digest={digest} grid={spec_key}"
    if grid is not None:
        head += f" max_left={grid.max_left_degree} max_right={grid.max_right_degree}"
    return head


def format_grid_csv(grid: MomentGrid, spec_key: str = "custom") -> str:
    """The versioned ``kind,p,q,ln_value`` cache format as text."""
    lines = [_header(grid.relation_digest, spec_key, grid), "kind,p,q,ln_value"]
    for p, vl, vr in zip(grid.dex_ps.tolist(), grid.dex_left.tolist(), grid.dex_right.tolist()):
        lines.append(f"dex_left,{p:.17g},1,{vl:.17g}")
        lines.append(f"dex_right,1,{p:.17g},{vr:.17g}")
    for (p, q), v in zip(grid.ambi_pq.tolist(), grid.ambi_ln.tolist()):
        lines.append(f"ambi,{p:.17g},{q:.17g},{v:.17g}")
    return "\n".join(lines) + "\n"


def write_grid_csv(grid: MomentGrid, path, spec_key: str = "custom") -> None:
    """Write a grid file atomically (temp file, then rename)."""
    tmp = Path(f"{path}.tmp{os.getpid()}")
    tmp.write_text(format_grid_csv(grid, spec_key))
    os.replace(tmp, path)


def read_grid_csv(path) -> tuple[dict, MomentGrid]:
    """Parse a cache file; returns ``(header fields, grid)``."""
    with open(path) as fh:
        head = fh.readline().strip()
        if not head.startswith("#ambibound-moments "):
            raise ValueError(f"{path}: not a moments cache file")
        parts = head.split()
        meta = {"version": parts[1]}
        meta.update(kv.split("=", 1) for kv in parts[2:])
        if fh.readline().strip() != "kind,p,q,ln_value":
            raise ValueError(f"{path}: bad column header")
        dex_l: dict[float, float] = {}
        dex_r: dict[float, float] = {}
        ambi: list[tuple[float, float, float]] = []
        for line in fh:
            if not line.strip():
                continue
            kind, p, q, v = line.strip().split(",")
            p, q, v = float(p), float(q), float(v)
            if kind == "dex_left":
                dex_l[p] = v
            elif kind == "dex_right":
                dex_r[q] = v
            elif kind == "ambi":
                ambi.append((p, q, v))
            else:
                raise ValueError(f"{path}: unknown kind {kind!r}")
    if dex_l.keys() != dex_r.keys():
        raise ValueError(f"{path}: dex_left and dex_right grids differ")
    ps = sorted(dex_l)
    ambi.sort()
    grid = MomentGrid(
        meta["digest"],
        np.array(ps, dtype=np.float64),
        np.array([dex_l[p] for p in ps]),
        np.array([dex_r[p] for p in ps]),
        np.array([(p, q) for p, q, _ in ambi], dtype=np.float64).reshape(-1, 2),
        np.array([v for _, _, v in ambi], dtype=np.float64),
        int(meta["max_left"]), int(meta["max_right"]),
    )
    return meta, grid


def cache_path(cache_dir, rel: Relation, spec: GridSpec) -> Path:
    key = hashlib.sha256(f"{rel.digest}|{spec.key}".encode()).hexdigest()[:24]
    return Path(cache_dir) / f"moments-{key}.csv"


def load_or_build_grid(rel: Relation, spec: GridSpec, cache_dir=None) -> MomentGrid:
    """Build the grid for ``spec``, reusing a cache file when it matches."""
    if cache_dir is None:
        return build_grid_from_spec(rel, spec)
    path = cache_path(cache_dir, rel, spec)
    if path.exists():
        try:
            meta, grid = read_grid_csv(path)
            if (meta.get("version") == CACHE_VERSION and meta.get("digest") == rel.digest
                    and meta.get("grid") == spec.key):
                return grid
            log.info("stale moments cache %s, recomputing", path)
        except (ValueError, KeyError) as exc:
            log.warning("unreadable moments cache %s (%s), recomputing", path, exc)
    grid = build_grid_from_spec(rel, spec)
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    write_grid_csv(grid, path, spec.key)
    return grid


def ln_max_degree(rel: Relation, side: str = "left") -> float:
    return math.log(int(_side_counts(rel, side).max()))


def support_size(rel: Relation, side: str = "left") -> int:
    return int(_side_counts(rel, side).size)


__all__: Sequence[str] = (
    "GridSpec", "MomentGrid", "build_moment_grid", "build_grid_from_spec",
    "enumerate_claw_pairs", "ln_bivariate_moment", "ln_dexterous_norm",
    "load_or_build_grid", "midpoint_convexity_violations", "monotonicity_violations",
    "read_grid_csv", "write_grid_csv", "format_grid_csv",
)
