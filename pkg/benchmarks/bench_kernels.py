"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--nodes 2000] [--repeat 3]

Times the moment-grid log-sum-exp and homomorphism backtracking on a
synthetic power-law-ish graph, checks that both backends agree, and prints
one line per (kernel, backend).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from ambibound import DataGraph, GridSpec, lookup_named_query, relation_from_pairs, symmetrize
from ambibound._backend import available_backends
from ambibound.homcount import _plan
from ambibound.moments import _hist_terms


def synthetic_graph(n: int, seed: int):
    """Preferential-attachment style graph with a few hubs."""
    rng = np.random.default_rng(seed)
    edges = set()
    targets = [0, 1]
    for v in range(2, n):
        for _ in range(3):
            u = targets[int(rng.integers(len(targets)))]
            if u != v:
                edges.add((min(u, v), max(u, v)))
                targets.extend((u, v))
    rel = symmetrize(relation_from_pairs(edges))
    return rel, DataGraph.from_relation(rel)


def best_of(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rel, data = synthetic_graph(args.nodes, args.seed)
    print(f"graph: {data.num_nodes} nodes, {data.num_edges} edges, "
          f"max degree {int(data.degrees.max())}, {rel.bideg_count.size} bidegree classes")
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the pure-Python backend is available")

    logc, x, y = _hist_terms(rel)
    pq = np.array(GridSpec.fine().ambi_pqs())
    a, b = pq[:, 0] - 1.0, pq[:, 1] - 1.0

    jobs = [("lse_grid (fine grid, %d points)" % len(pq),
             lambda k: k.lse_grid(logc, x, y, a, b))]
    for name in ("K3", "cycle4", "house", "K4"):
        ptr, idx = _plan(lookup_named_query(name))
        roots = np.arange(data.num_nodes, dtype=np.int64)
        jobs.append((f"hom_count {name}",
                     lambda k, ptr=ptr, idx=idx, roots=roots:
                     k.hom_count(data.indptr, data.indices, ptr, idx, roots)))

    for label, job in jobs:
        results = {}
        for bname in sorted(backends):
            secs, out = best_of(lambda: job(backends[bname]), args.repeat)
            results[bname] = (secs, out)
        outs = [r[1] for r in results.values()]
        if isinstance(outs[0], np.ndarray):
            agree = all(np.allclose(o, outs[0], rtol=1e-12) for o in outs)
        else:
            agree = all(o == outs[0] for o in outs)
        line = f"{label:<36}"
        for bname, (secs, _) in sorted(results.items()):
            line += f"  {bname}={secs * 1000:9.2f} ms"
        if len(results) == 2:
            line += f"  speedup={results['python'][0] / results['cython'][0]:6.1f}x"
        line += "  agree" if agree else "  MISMATCH"
        print(line)


if __name__ == "__main__":
    main()
