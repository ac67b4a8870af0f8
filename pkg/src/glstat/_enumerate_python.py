"""Pure numpy fallback for the compiled enumeration routines.

Mirrors ``_enumerate.pyx`` operation for operation: subsets are visited in
lexicographic order and arguments are summed left to right, so both
backends produce bit-identical kernel values.
"""

from functools import lru_cache

import numpy as np

from ._errors import DegenerateKernelError, WindowEstimatorError

_CHUNK = 1 << 20


@lru_cache(maxsize=32)
def _combination_index(n, m):
    # lexicographic index matrix of all m-subsets of range(n), read-only
    if m == 1:
        out = np.arange(n, dtype=np.int32)[:, None]
    else:
        blocks = []
        for i in range(n - m + 1):
            tail = _combination_index(n - i - 1, m - 1) + (i + 1)
            head = np.full((tail.shape[0], 1), i, dtype=np.int32)
            blocks.append(np.hstack([head, tail]))
        out = np.vstack(blocks) if blocks else np.empty((0, m), dtype=np.int32)
    out.setflags(write=False)
    return out


def _left_sum(x, idx):
    s = x[idx[:, 0]]
    for t in range(1, idx.shape[1]):
        s = s + x[idx[:, t]]
    return s


def sum_kernel_values(x_sorted, m, divisor, count):
    x = np.asarray(x_sorted, dtype=np.float64)
    idx = _combination_index(x.shape[0], m)
    out = np.empty(count, dtype=np.float64)
    for start in range(0, count, _CHUNK):
        rows = idx[start:start + _CHUNK]
        out[start:start + rows.shape[0]] = _left_sum(x, rows) / divisor
    return out


def _gm_chunk(lg, rows, m, scale, ties_to_inf):
    lo = lg[rows[:, 0]]
    tie = lg[rows[:, -1]] == lo
    if tie.any() and not ties_to_inf:
        raise DegenerateKernelError("GM kernel evaluated on equal arguments")
    d = _left_sum(lg, rows) / m - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = scale / d
    vals[tie | ~(d > 0)] = np.inf
    return vals


def gm_kernel_values(logs_sorted, m, scale, ties_to_inf, count):
    lg = np.asarray(logs_sorted, dtype=np.float64)
    idx = _combination_index(lg.shape[0], m)
    out = np.empty(count, dtype=np.float64)
    for start in range(0, count, _CHUNK):
        rows = idx[start:start + _CHUNK]
        out[start:start + rows.shape[0]] = _gm_chunk(lg, rows, m, scale, ties_to_inf)
    return out


def gm_window_quantiles(logs, b, m, scale, ties_to_inf, count, rank):
    logs = np.asarray(logs, dtype=np.float64)
    nw = logs.shape[0] - b + 1
    result = np.empty(nw, dtype=np.float64)
    for i in range(nw):
        window = np.sort(logs[i:i + b])
        try:
            vals = gm_kernel_values(window, m, scale, ties_to_inf, count)
        except DegenerateKernelError as exc:
            raise WindowEstimatorError(i, exc) from None
        vals.partition(rank - 1)
        result[i] = vals[rank - 1]
    return result


def select_rank(values, rank):
    values.partition(rank - 1)
    return float(values[rank - 1])
