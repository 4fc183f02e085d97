# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot loops: table convolution gather and random-walk step reduction.

The pure-Python twin of this module is ``_kernels_py``; the two must stay
bitwise-equivalent (same accumulation order, no fused multiply-add), so
results do not depend on which backend was importable.
"""

from libc.stdint cimport int64_t, uint8_t


def gather_mix(double[::1] p,  # flat probability table, length N
               long[:, ::1] idx,  # (s, N) gather indices, one row per support atom
               double[::1] w,  # (s,) atom weights
               double[::1] out):
    """out[g] = sum_s w[s] * p[idx[s, g]], accumulated in row order."""
    cdef Py_ssize_t ns = idx.shape[0]
    cdef Py_ssize_t n = idx.shape[1]
    cdef Py_ssize_t s, g
    cdef double ws
    with nogil:
        ws = w[0]
        for g in range(n):
            out[g] = ws * p[idx[0, g]]
        for s in range(1, ns):
            ws = w[s]
            for g in range(n):
                out[g] = out[g] + ws * p[idx[s, g]]


def walk_endpoints(const uint8_t[:, ::1] steps,  # (trials, k) codes in 0..3
                   int64_t[::1] x, int64_t[::1] y, int64_t[::1] z):
    """Reduce generator-code sequences to unreduced endpoint coordinates.

    Codes: 0 -> (+1,0), 1 -> (-1,0), 2 -> (0,+1), 3 -> (0,-1), applied as
    left multiplications, so z accumulates eps_i * (delta_1+...+delta_{i-1}).
    """
    cdef Py_ssize_t trials = steps.shape[0]
    cdef Py_ssize_t k = steps.shape[1]
    cdef Py_ssize_t t, i
    cdef int64_t cx, cy, cz, e, d
    cdef uint8_t c
    with nogil:
        for t in range(trials):
            cx = 0
            cy = 0
            cz = 0
            for i in range(k):
                c = steps[t, i]
                if c == 0:
                    e = 1
                    d = 0
                elif c == 1:
                    e = -1
                    d = 0
                elif c == 2:
                    e = 0
                    d = 1
                else:
                    e = 0
                    d = -1
                cz = cz + e * cy
                cx = cx + e
                cy = cy + d
            x[t] = cx
            y[t] = cy
            z[t] = cz
