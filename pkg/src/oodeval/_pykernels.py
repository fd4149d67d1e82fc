"""Pure numpy versions of the merge-scan kernels.

Same signatures and results as the compiled module; used when the extension
was not built.
"""

import numpy as np


def merge_groups(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    cat = np.concatenate([a, b])
    # both inputs are sorted, so the stable sort (timsort) only merges two runs
    order = np.argsort(cat, kind="stable")
    merged = cat[order]
    if merged.size == 0:
        return merged, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    starts = np.flatnonzero(np.concatenate([[True], merged[1:] != merged[:-1]]))
    sizes = np.diff(np.append(starts, merged.size))
    count_b = np.add.reduceat((order >= a.size).astype(np.int64), starts)
    return merged[starts], sizes - count_b, count_b


def count_below(s, grid, inclusive):
    side = "right" if inclusive else "left"
    return np.searchsorted(np.asarray(s, dtype=np.float64), grid, side=side).astype(np.int64)


def mann_whitney_u2(neg, pos):
    _, cn, cp = merge_groups(neg, pos)
    below = np.cumsum(cn) - cn
    return int(np.sum(cp * (2 * below + cn)))
