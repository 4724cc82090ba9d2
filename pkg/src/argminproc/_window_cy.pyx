# cython: language_level=3
"""Compiled sliding-window argmin kernel.

Single-pass monotone deque over a float64 buffer.  For every window of
``width`` consecutive values the routine records the offset (within the
window) of the *last* position attaining the window minimum.
"""

from libc.stdlib cimport free, malloc


def last_argmin_offsets(const double[::1] values, Py_ssize_t width,
                        long long[::1] out):
    """Fill ``out[i]`` with the last-argmin offset of ``values[i:i+width]``.

    ``out`` must have length ``len(values) - width + 1``.  Returns the
    number of windows written.
    """
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t n_out = n - width + 1
    if n_out <= 0:
        return 0
    if out.shape[0] < n_out:
        raise ValueError("output buffer too small")

    cdef Py_ssize_t *ring = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if ring == NULL:
        raise MemoryError()

    cdef Py_ssize_t head = 0, tail = 0, j, start
    cdef double v
    try:
        with nogil:
            for j in range(n):
                v = values[j]
                # Ties evict: a later equal value supersedes an earlier one,
                # so the deque front is always the LAST argmin of its window.
                while tail > head and values[ring[tail - 1]] >= v:
                    tail -= 1
                ring[tail] = j
                tail += 1
                start = j - width + 1
                if start >= 0:
                    while ring[head] < start:
                        head += 1
                    out[start] = <long long> (ring[head] - start)
        return n_out
    finally:
        free(ring)
