"""Select the kernel implementation at import time.

The compiled ``_kernels`` extension is preferred.  Set the environment
variable ``AMBIBOUND_PURE_PYTHON=1`` to force the reference implementation.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _purepy

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_force_pure = os.environ.get("AMBIBOUND_PURE_PYTHON", "").strip() not in ("", "0")

if _compiled is not None and not _force_pure:
    kernels: ModuleType = _compiled
    BACKEND = "cython"
else:
    kernels = _purepy
    BACKEND = "python"


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _purepy}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def lse_grid(logc, x, y, a, b):
    return kernels.lse_grid(logc, x, y, a, b)


def hom_count(indptr, indices, parent_ptr, parent_idx, roots):
    return kernels.hom_count(indptr, indices, parent_ptr, parent_idx, roots)
