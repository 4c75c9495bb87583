"""Three-variable tools: Venn-diagram covering checks and the single-term
refinement of a two-sided moment bound.

A cover assigns nonnegative weights to nine information terms, three per
pair-line::

    line XY: H(Y|X), I(X;Y), H(X|Y)
    line YZ: H(Z|Y), I(Y;Z), H(Y|Z)
    line ZX: H(X|Z), I(Z;X), H(Z|X)

Rewriting in the seven cells of the three-set information diagram shows
whether the combination dominates ``H(X,Y,Z)``.
"""

from __future__ import annotations

import math
from itertools import combinations
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .moments import ln_bivariate_moment
from .relation import Relation

BASIS_NAMES = (
    "H(X|YZ)", "H(Y|ZX)", "H(Z|XY)",
    "I(X;Y|Z)", "I(Y;Z|X)", "I(Z;X|Y)",
    "I(X;Y;Z)",
)
TERM_NAMES = (
    "H(Y|X)", "I(X;Y)", "H(X|Y)",
    "H(Z|Y)", "I(Y;Z)", "H(Y|Z)",
    "H(X|Z)", "I(Z;X)", "H(Z|X)",
)
BASIS_TOL = 1e-12

# Cell-membership of each of the nine terms (rows) over the seven cells.
# A conditional entropy H(Y|X) = H(Y|XZ) + I(Y;Z|X); a mutual information
# I(X;Y) = I(X;Y|Z) + I(X;Y;Z).
_TERM_CELLS = np.array([
    # a  b  g  d  e  z  eta
    [0, 1, 0, 0, 1, 0, 0],  # H(Y|X)
    [0, 0, 0, 1, 0, 0, 1],  # I(X;Y)
    [1, 0, 0, 0, 0, 1, 0],  # H(X|Y)
    [0, 0, 1, 0, 0, 1, 0],  # H(Z|Y)
    [0, 0, 0, 0, 1, 0, 1],  # I(Y;Z)
    [0, 1, 0, 1, 0, 0, 0],  # H(Y|Z)
    [1, 0, 0, 1, 0, 0, 0],  # H(X|Z)
    [0, 0, 0, 0, 0, 1, 1],  # I(Z;X)
    [0, 0, 1, 0, 1, 0, 0],  # H(Z|X)
], dtype=np.int64)


@dataclass(frozen=True)
class VennCover:
    """Nine nonnegative coefficients in line order XY, YZ, ZX; within a line
    (first conditional entropy, mutual information, second conditional)."""

    xy: tuple
    yz: tuple
    zx: tuple

    def __post_init__(self):
        for line in (self.xy, self.yz, self.zx):
            if len(line) != 3:
                raise ValueError("each line needs exactly three coefficients")
            if any(c < 0 for c in line):
                raise ValueError("cover coefficients must be nonnegative")

    @classmethod
    def from_flat(cls, values: Sequence) -> "VennCover":
        if len(values) != 9:
            raise ValueError(f"need nine coefficients, got {len(values)}")
        v = list(values)
        return cls(tuple(v[0:3]), tuple(v[3:6]), tuple(v[6:9]))

    @classmethod
    def parse(cls, text: str) -> "VennCover":
        """From nine comma-separated rationals, e.g. ``"4/9,1/3,5/9,..."``."""
        return cls.from_flat([Fraction(tok.strip()) for tok in text.split(",")])

    @property
    def flat(self) -> tuple:
        return self.xy + self.yz + self.zx

    def scaled(self, factor) -> "VennCover":
        return VennCover.from_flat([factor * c for c in self.flat])

    def __add__(self, other: "VennCover") -> "VennCover":
        return VennCover.from_flat([a + b for a, b in zip(self.flat, other.flat)])


@dataclass(frozen=True)
class VennVerdict:
    applicable: bool
    covering: bool
    basis: tuple
    witness: str | None = None


def venn_basis(cover: VennCover) -> tuple:
    """Coefficients of the seven diagram cells, in ``BASIS_NAMES`` order.

    Exact for rational (``Fraction``/``int``) input.
    """
    flat = cover.flat
    return tuple(sum((c * int(m) for c, m in zip(flat, _TERM_CELLS[:, k]) if m), 0 * flat[0])
                 for k in range(7))


def check_cover(cover: VennCover, tol: float = BASIS_TOL) -> VennVerdict:
    """Decide whether the cover upper-bounds ``H(X,Y,Z)``.

    The criterion is an equivalence only when, on every line, the mutual
    information coefficient is at most both conditional-entropy
    coefficients; otherwise the verdict is ``applicable=False`` and no
    covering claim is made.
    """
    basis = venn_basis(cover)
    applicable = all(line[1] <= line[0] and line[1] <= line[2]
                     for line in (cover.xy, cover.yz, cover.zx))
    witness = None
    for name, val in zip(BASIS_NAMES, basis):
        short = val < 1 if isinstance(val, (Fraction, int)) else val < 1 - tol
        if short:
            witness = name
            break
    covering = applicable and witness is None
    return VennVerdict(applicable, covering, basis, witness)


def cover_value(cover: VennCover, entropies: dict) -> float:
    """Evaluate the nine-term combination from joint entropies keyed by
    frozensets of ``{"X", "Y", "Z"}``."""
    H = lambda *vs: entropies[frozenset(vs)]  # noqa: E731
    hx, hy, hz = H("X"), H("Y"), H("Z")
    hxy, hyz, hzx = H("X", "Y"), H("Y", "Z"), H("Z", "X")
    terms = (
        hxy - hx, hx + hy - hxy, hxy - hy,
        hyz - hy, hy + hz - hyz, hyz - hz,
        hzx - hz, hz + hx - hzx, hzx - hx,
    )
    return float(sum(float(c) * t for c, t in zip(cover.flat, terms)))


def table_entropies(rows: Sequence[tuple]) -> dict:
    """Joint entropies (nats) of a uniformly random row of a 3-column table;
    repeated rows carry proportionally more mass."""
    rows = [tuple(r) for r in rows]
    n = len(rows)
    out = {}
    cols = {"X": 0, "Y": 1, "Z": 2}
    for r in range(1, 4):
        for names in combinations(("X", "Y", "Z"), r):
            counts: dict = {}
            for row in rows:
                key = tuple(row[cols[c]] for c in names)
                counts[key] = counts.get(key, 0) + 1
            out[frozenset(names)] = -sum(c / n * math.log(c / n) for c in counts.values())
    return out




# -- single-term refinement ---------------------------------------------

def single_term_value(rel: Relation, p: float, q: float, w: float) -> float:
    """``w * ln M_{p/w}(R)_{q/w}``."""
    return w * ln_bivariate_moment(rel, p / w, q / w)


def refine_single_term(rel: Relation, p: Real, q: Real, tol: float = 1e-6,
                       max_iter: int = 200) -> tuple[float, float]:
    """Minimize ``f(w) = w ln M_{p/w}(R)_{q/w}`` over ``w in [1, min(p, q)]``.

    ``f`` is convex in ``w``, so ternary search on the bracket is valid; it
    stops once the bracket is narrower than ``tol``.  Returns
    ``(w_star, f(w_star))``.
    """
    if p < 1 or q < 1:
        raise ValueError(f"need p, q >= 1, got p={p}, q={q}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = lambda w: single_term_value(rel, p, q, w)  # noqa: E731
    lo, hi = 1.0, float(min(p, q))
    if hi - lo < tol:
        return lo, f(lo)
    f_lo, f_hi = f(lo), f(hi)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    w = (lo + hi) / 2
    best = min((f(w), w), (f_lo, 1.0), (f_hi, float(min(p, q))))
    return best[1], best[0]
