"""Small connected query graphs: enumeration, canonical codes and names."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_VERTICES = 5


@dataclass(frozen=True)
class QueryGraph:
    n: int
    edges: frozenset  # of (u, v) tuples with u < v
    name: str
    canonical_code: tuple

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def neighbours(self, v: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == v} | {a for a, b in self.edges if b == v})

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def __str__(self) -> str:
        return f"{self.name}(n={self.n}, edges={self.edge_list})"


def _norm_edges(edges) -> frozenset:
    out = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) in query graph")
        out.add((min(u, v), max(u, v)))
    return frozenset(out)


def canonical_code(n: int, edges) -> tuple:
    """Lexicographically smallest upper-triangle adjacency bit string over all
    ``n!`` relabelings; equal exactly for isomorphic graphs."""
    edges = _norm_edges(edges)
    pairs = list(itertools.combinations(range(n), 2))
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in edges}
        code = tuple(1 if pr in relabeled else 0 for pr in pairs)
        if best is None or code < best:
            best = code
    return (n,) + best


def is_connected(n: int, edges) -> bool:
    if n == 0:
        return False
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _complement(n: int, edges) -> list[tuple[int, int]]:
    edges = _norm_edges(edges)
    return [e for e in itertools.combinations(range(n), 2) if e not in edges]


def _cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


def _path(n):
    return [(i, i + 1) for i in range(n - 1)]


# Names follow the query-shape identifiers used in the experiment CSVs.  A
# trailing "c" means complement, "u" disjoint union.
_NAMED_EDGES: dict[str, tuple[int, list]] = {
    "path3": (3, _path(3)),
    "K3": (3, _cycle(3)),
    "claw": (4, [(0, 1), (0, 2), (0, 3)]),
    "path4": (4, _path(4)),
    "pan3": (4, [(1, 2), (2, 3), (1, 3), (3, 0)]),
    "cycle4": (4, _cycle(4)),
    "fan2": (4, _cycle(4) + [(0, 2)]),
    "K4": (4, list(itertools.combinations(range(4), 2))),
    "K14": (5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
    "chair": (5, [(1, 2), (2, 3), (3, 4), (0, 2)]),
    "path5": (5, [(3, 4), (4, 0), (0, 1), (1, 2)]),
    "cricket": (5, [(2, 3), (3, 0), (0, 2), (1, 0), (0, 4)]),
    "pan4": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 3)]),
    "bull": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 4)]),
    "pan4c": (5, _complement(5, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 3)])),
    "cycle5": (5, _cycle(5)),
    "dart": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 4), (4, 2)]),
    "K23": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (1, 3), (2, 4)]),
    "butterfly": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (2, 0), (0, 3)]),
    "house": (5, _cycle(5) + [(1, 4)]),
    "kite": (5, [(3, 4), (4, 0), (0, 1), (1, 2), (0, 2), (2, 4)]),
    "K3u2K1c": (5, _complement(5, [(2, 3), (3, 4), (2, 4)])),
    "fan3": (5, [(1, 2), (2, 3), (3, 4), (0, 1), (0, 2), (0, 3), (0, 4)]),
    "clawuK1c": (5, _complement(5, [(0, 1), (0, 2), (0, 3)])),
    "P2uP3c": (5, _complement(5, [(0, 1), (2, 3), (3, 4)])),
    "P3u2K1c": (5, _complement(5, [(0, 1), (1, 2)])),
    "wheel4": (5, [(0, 1), (0, 2), (0, 3), (0, 4)] + [(1, 2), (2, 3), (3, 4), (4, 1)]),
    "K5_e": (5, [e for e in itertools.combinations(range(5), 2) if e != (1, 4)]),
    "K5": (5, list(itertools.combinations(range(5), 2))),
}

CATALOG_NAMES: tuple[str, ...] = tuple(_NAMED_EDGES)


def make_query(n: int, edges, name: str | None = None) -> QueryGraph:
    edges = _norm_edges(edges)
    if any(not (0 <= v < n) for e in edges for v in e):
        raise ValueError("edge endpoint out of range")
    code = canonical_code(n, edges)
    if name is None:
        name = _name_by_code().get(code, f"graph{n}_{''.join(map(str, code[1:]))}")
    return QueryGraph(n, edges, name, code)


@lru_cache(maxsize=None)
def _name_by_code() -> dict[tuple, str]:
    return {canonical_code(n, e): name for name, (n, e) in _NAMED_EDGES.items()}


@lru_cache(maxsize=None)
def enumerate_connected_graphs(n: int) -> tuple[QueryGraph, ...]:
    """One representative per isomorphism class of connected simple graphs
    on ``n`` vertices, ordered by edge count then canonical code."""
    if not isinstance(n, int) or not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"n must be an integer in [1, {MAX_VERTICES}], got {n!r}")
    all_pairs = list(itertools.combinations(range(n), 2))
    classes: dict[tuple, frozenset] = {}
    for mask in range(1 << len(all_pairs)):
        edges = [all_pairs[i] for i in range(len(all_pairs)) if mask >> i & 1]
        if not is_connected(n, edges):
            continue
        code = canonical_code(n, edges)
        if code not in classes:
            classes[code] = frozenset(edges)
    ordered = sorted(classes.items(), key=lambda kv: (len(kv[1]), kv[0]))
    names = _name_by_code()
    out = []
    for code, edges in ordered:
        if n == 1:
            name = "K1"
        elif n == 2:
            name = "K2"
        else:
            name = names[code]
        out.append(QueryGraph(n, edges, name, code))
    return tuple(out)


@lru_cache(maxsize=None)
def lookup_named_query(name: str) -> QueryGraph:
    """The catalog graph called ``name`` (vertices labeled as in the table)."""
    try:
        n, edges = _NAMED_EDGES[name]
    except KeyError:
        raise KeyError(f"unknown query {name!r}; valid names: {', '.join(CATALOG_NAMES)}") from None
    return make_query(n, edges, name)


def experiment_queries() -> list[QueryGraph]:
    """The 29 catalog queries on 3 to 5 vertices."""
    return [lookup_named_query(name) for name in CATALOG_NAMES]
