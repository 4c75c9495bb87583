"""Exact homomorphism counts from a small query graph into a data graph.

Homomorphisms need not be injective: with a data edge ``(a, b)`` the
4-cycle query maps to ``(a, b, a, b)``, and a self-loop ``(a, a)`` admits
``(a, a, a, a)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _backend
from .catalog import QueryGraph
from .errors import BudgetExceededError
from .relation import Relation

MATRIX_NODE_LIMIT = 2000


@dataclass(frozen=True)
class DataGraph:
    """Undirected view of a symmetric relation in CSR form.

    ``nodes[i]`` is the original id of dense index ``i``; the neighbours of
    ``i`` are ``indices[indptr[i]:indptr[i+1]]`` in increasing order.
    """

    nodes: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_relation(cls, rel: Relation) -> "DataGraph":
        if not rel.symmetric:
            raise ValueError("data graph needs a symmetric relation; call symmetrize() first")
        nodes = rel.left_nodes
        src = np.searchsorted(nodes, rel.left)
        dst = np.searchsorted(nodes, rel.right)
        # rel pairs are sorted by (left, right), so dst is sorted within each row
        indptr = np.zeros(nodes.size + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=nodes.size), out=indptr[1:])
        return cls(nodes, indptr, np.ascontiguousarray(dst, dtype=np.int64))

    @classmethod
    def from_edges(cls, edges, nodes=None) -> "DataGraph":
        """Build from undirected edges; isolated ``nodes`` may be added."""
        ids = set() if nodes is None else set(nodes)
        adj: dict[int, set] = {}
        for a, b in edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
            ids.update((a, b))
        order = np.array(sorted(ids), dtype=np.int64)
        pos = {v: i for i, v in enumerate(order.tolist())}
        indptr = [0]
        indices: list[int] = []
        for v in order.tolist():
            indices.extend(sorted(pos[w] for w in adj.get(v, ())))
            indptr.append(len(indices))
        return cls(order, np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64))

    @property
    def num_nodes(self) -> int:
        return int(self.nodes.size)

    @property
    def num_edges(self) -> int:
        """Undirected edges; a self-loop counts once."""
        loops = int(np.count_nonzero(self.indices == np.repeat(np.arange(self.num_nodes), self.degrees)))
        return (int(self.indices.size) - loops) // 2 + loops

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbours(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.num_nodes, self.num_nodes), dtype=np.float64)
        rows = np.repeat(np.arange(self.num_nodes), self.degrees)
        a[rows, self.indices] = 1.0
        return a

    def with_edge(self, a: int, b: int) -> "DataGraph":
        """Copy with one more undirected edge between original ids."""
        edges = set()
        for i, v in enumerate(self.nodes.tolist()):
            for j in self.neighbours(i).tolist():
                edges.add((v, int(self.nodes[j])))
        edges.add((a, b))
        return DataGraph.from_edges(edges, nodes=self.nodes.tolist())


def search_order(query: QueryGraph) -> list[int]:
    """Connectivity-preserving vertex order for backtracking.

    Starts at a maximum-degree vertex, then repeatedly takes the vertex with
    the most already-placed neighbours (ties: higher degree, lower label).
    """
    if query.n == 1:
        return [0]
    deg = [query.degree(v) for v in range(query.n)]
    nbrs = [set(query.neighbours(v)) for v in range(query.n)]
    order = [max(range(query.n), key=lambda v: (deg[v], -v))]
    while len(order) < query.n:
        placed = set(order)
        cands = [v for v in range(query.n) if v not in placed and nbrs[v] & placed]
        if not cands:
            raise ValueError(f"query {query.name} is not connected")
        order.append(max(cands, key=lambda v: (len(nbrs[v] & placed), deg[v], -v)))
    return order


def _plan(query: QueryGraph):
    order = search_order(query)
    pos = {v: i for i, v in enumerate(order)}
    ptr = [0]
    idx: list[int] = []
    for k, v in enumerate(order):
        idx.extend(sorted(pos[w] for w in query.neighbours(v) if pos[w] < k))
        ptr.append(len(idx))
    return np.array(ptr, dtype=np.int64), np.array(idx, dtype=np.int64)


def count_homomorphisms(query: QueryGraph, data: DataGraph, *, roots=None,
                        workers: int = 1, backend: str | None = None) -> int:
    """Exact number of maps ``V(query) -> V(data)`` sending edges to edges.

    ``roots`` restricts the image of the first search vertex (dense
    indices); counts over a partition of roots add up to the full count,
    which is how ``workers > 1`` splits the work across threads.
    """
    kern = _backend.kernels if backend is None else _backend.available_backends()[backend]
    ptr, idx = _plan(query)
    if roots is None:
        roots = np.arange(data.num_nodes, dtype=np.int64)
    else:
        roots = np.ascontiguousarray(roots, dtype=np.int64)
    if workers <= 1 or roots.size < 2 * workers:
        return int(kern.hom_count(data.indptr, data.indices, ptr, idx, roots))
    chunks = np.array_split(roots, workers * 4)
    with ThreadPoolExecutor(workers) as pool:
        parts = pool.map(lambda r: int(kern.hom_count(data.indptr, data.indices, ptr, idx, r)), chunks)
        return sum(parts)


def cycle_count_via_matrix(k: int, data: DataGraph) -> int:
    """``trace(A^k)``, the number of closed ``k``-walks, for ``3 <= k <= 5``.

    Matrix products run in float64, which is exact here: every entry of
    ``A^j`` with ``j <= 4`` is at most ``n^3 < 2^53`` for ``n <= 2000``.  The
    final trace is summed in int64.
    """
    if not 3 <= k <= 5:
        raise ValueError(f"k must be in [3, 5], got {k}")
    if data.num_nodes > MATRIX_NODE_LIMIT:
        raise BudgetExceededError(
            f"{data.num_nodes} nodes exceeds the dense-matrix limit {MATRIX_NODE_LIMIT}")
    if data.num_nodes == 0:
        return 0
    a = data.adjacency_matrix()
    power = a
    for _ in range(k - 2):
        power = power @ a
    a_int = a.astype(np.int64)
    p_int = np.rint(power).astype(np.int64)
    return int((a_int * p_int).sum())


def estimate_work(query: QueryGraph, data: DataGraph) -> float:
    """Rough count of backtracking node visits.

    For each prefix of the search order, counts homomorphisms of the
    prefix's BFS spanning tree (an upper bound on partial maps of the
    prefix), computed by leaf-to-root message passing.
    """
    order = search_order(query)
    if query.n == 1:
        return float(data.num_nodes)
    rows = np.repeat(np.arange(data.num_nodes), data.degrees)
    parent = {order[0]: None}
    for v in order[1:]:
        placed = [w for w in query.neighbours(v) if w in parent]
        parent[v] = min(placed, key=order.index)
    total = 0.0
    for k in range(2, query.n + 1):
        prefix = order[:k]
        msg = {v: np.ones(data.num_nodes) for v in prefix}
        for v in reversed(prefix[1:]):
            pushed = np.bincount(rows, weights=msg[v][data.indices], minlength=data.num_nodes)
            msg[parent[v]] = msg[parent[v]] * pushed
        total += float(msg[order[0]].sum())
    return total
