"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback. Setting ``OODEVAL_BACKEND=python`` forces the fallback for the
whole process. Both expose ``merge_groups``, ``count_below`` and
``mann_whitney_u2`` and must agree exactly.
"""

import os
from types import ModuleType

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels
if os.environ.get("OODEVAL_BACKEND") in BACKENDS:
    _active = BACKENDS[os.environ["OODEVAL_BACKEND"]]


def backend_name() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name: str) -> None:
    """Switch the process-wide kernel backend (``"compiled"`` or ``"python"``)."""
    global _active
    try:
        _active = BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def _c(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def merge_groups(a, b):
    """Distinct values of two sorted arrays with per-array multiplicities."""
    return _active.merge_groups(_c(a), _c(b))


def count_below(s, grid, inclusive):
    """Counts of sorted ``s`` at or below (``inclusive``) / strictly below each grid value.

    ``grid`` may be in any order.
    """
    grid = _c(grid)
    if grid.shape[0] > 1 and np.any(grid[1:] < grid[:-1]):
        order = np.argsort(grid, kind="stable")
        out = np.empty(grid.shape[0], dtype=np.int64)
        out[order] = _active.count_below(_c(s), grid[order], bool(inclusive))
        return out
    return _active.count_below(_c(s), grid, bool(inclusive))


def mann_whitney_u2(neg, pos):
    """Integer ``2*U`` for sorted ``pos`` ranked above sorted ``neg``."""
    return _active.mann_whitney_u2(_c(neg), _c(pos))
