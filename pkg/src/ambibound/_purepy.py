"""Reference implementations of the hot kernels, used when the compiled
extension is unavailable (or when ``AMBIBOUND_PURE_PYTHON=1``).

The signatures match ``_kernels.pyx`` exactly.
"""

from __future__ import annotations

import numpy as np

# Bounds the temporary (grid points x histogram rows) matrix in lse_grid.
_CHUNK_ELEMENTS = 1 << 22


def lse_grid(logc, x, y, a, b) -> np.ndarray:
    """``out[g] = log(sum_k exp(logc[k] + a[g]*x[k] + b[g]*y[k]))``.

    Max-shifted per grid point, so large exponents never overflow.
    """
    logc = np.asarray(logc, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not (logc.shape == x.shape == y.shape) or a.shape != b.shape:
        raise ValueError("shape mismatch")
    if logc.size == 0:
        raise ValueError("empty histogram")
    out = np.empty(a.size, dtype=np.float64)
    step = max(1, _CHUNK_ELEMENTS // logc.size)
    for lo in range(0, a.size, step):
        hi = min(a.size, lo + step)
        t = logc[None, :] + a[lo:hi, None] * x[None, :] + b[lo:hi, None] * y[None, :]
        m = t.max(axis=1)
        out[lo:hi] = m + np.log(np.exp(t - m[:, None]).sum(axis=1))
    return out


def hom_count(indptr, indices, parent_ptr, parent_idx, roots) -> int:
    """Count homomorphisms by backtracking over a fixed query vertex order.

    Position 0 of the order is mapped to each node in ``roots``; position
    ``k`` must be adjacent to the images of ``parent_idx[parent_ptr[k]:
    parent_ptr[k+1]]``.  The last position is counted, not enumerated.
    """
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    parent_ptr = np.asarray(parent_ptr).tolist()
    parent_idx = np.asarray(parent_idx).tolist()
    roots = np.asarray(roots).tolist()
    n = len(parent_ptr) - 1
    if n < 1:
        raise ValueError("empty query")
    if n == 1:
        return len(roots)
    parents = [parent_idx[parent_ptr[k]:parent_ptr[k + 1]] for k in range(n)]
    if any(not parents[k] for k in range(1, n)):
        raise ValueError("query order is not connectivity-preserving")

    adj_list = [indices[indptr[i]:indptr[i + 1]] for i in range(len(indptr) - 1)]
    adj_set = [frozenset(nb) for nb in adj_list]
    img = [0] * n

    def extend(k: int) -> int:
        images = sorted((img[p] for p in parents[k]), key=lambda v: len(adj_list[v]))
        if k == n - 1:
            if len(images) == 1:
                return len(adj_list[images[0]])
            others = [adj_set[v] for v in images[1:]]
            return sum(1 for c in adj_list[images[0]] if all(c in s for s in others))
        others = [adj_set[v] for v in images[1:]]
        total = 0
        for c in adj_list[images[0]]:
            if all(c in s for s in others):
                img[k] = c
                total += extend(k + 1)
        return total

    total = 0
    for r in roots:
        img[0] = r
        total += extend(1)
    return total
