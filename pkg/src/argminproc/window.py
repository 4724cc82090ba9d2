"""Sliding-window last-argmin with compiled core and pure-Python fallback.

The chain of argmin locations is read off a path by sliding a window of
fixed width across it and recording, for each placement, the offset of the
last position attaining the window minimum.  The hot loop is a monotone
deque; a Cython build is used when available, otherwise a pure-Python
implementation with identical semantics.  Set ``ARGMINPROC_PURE=1`` to
force the fallback (used by tests and benchmarks).
"""

from __future__ import annotations

import os

import numpy as np

from . import _window_py

if os.environ.get("ARGMINPROC_PURE") == "1":
    _impl = _window_py
    BACKEND = "python"
else:
    try:
        from . import _window_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build environment
        _impl = _window_py
        BACKEND = "python"


def sliding_last_argmin(values: np.ndarray, width: int) -> np.ndarray:
    """Offsets of the last window minimum, one per window placement.

    ``values`` is a 1-d float array; ``width`` is the window length in
    samples.  Returns an int64 array of length ``len(values) - width + 1``
    whose entries lie in ``[0, width)``.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    values = np.ascontiguousarray(values, dtype=np.float64)
    n_out = max(len(values) - width + 1, 0)
    out = np.empty(n_out, dtype=np.int64)
    if n_out:
        _impl.last_argmin_offsets(values, width, out)
    return out


def naive_last_argmin(values: np.ndarray, width: int) -> np.ndarray:
    """O(n * width) reference used to cross-check the deque implementations."""
    values = np.asarray(values, dtype=np.float64)
    n_out = max(len(values) - width + 1, 0)
    out = np.empty(n_out, dtype=np.int64)
    for i in range(n_out):
        w = values[i : i + width]
        m = w.min()
        out[i] = np.nonzero(w == m)[0][-1]
    return out
