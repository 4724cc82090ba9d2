"""Pure-Python sliding-window argmin, mirror of the compiled kernel."""

from __future__ import annotations

import numpy as np


def last_argmin_offsets(values: np.ndarray, width: int, out: np.ndarray) -> int:
    n = len(values)
    n_out = n - width + 1
    if n_out <= 0:
        return 0
    if len(out) < n_out:
        raise ValueError("output buffer too small")

    vals = values.tolist()  # list indexing is much faster than ndarray scalar access
    ring: list[int] = []
    head = 0
    for j in range(n):
        v = vals[j]
        while len(ring) > head and vals[ring[-1]] >= v:
            ring.pop()
        ring.append(j)
        start = j - width + 1
        if start >= 0:
            while ring[head] < start:
                head += 1
            out[start] = ring[head] - start
    return n_out
