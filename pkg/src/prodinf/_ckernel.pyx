# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled section histogram, same contract as ``_pykernel.section_histogram``."""

import numpy as np

from libc.stdint cimport int64_t


def section_histogram(const unsigned char[::1] bits, const int64_t[::1] pre,
                      const int64_t[::1] suf, int k, Py_ssize_t stride):
    # Caller guarantees k <= 20 and sum(pre) * sum(suf) < 2**63.
    cdef int64_t[::1] hist = np.zeros(1 << k, dtype=np.int64)
    cdef Py_ssize_t hi, lo, base, block = k * stride
    cdef Py_ssize_t npre = pre.shape[0], nsuf = suf.shape[0]
    cdef int t
    cdef unsigned int mask
    cdef int64_t wp
    with nogil:
        for hi in range(npre):
            wp = pre[hi]
            if wp == 0:
                continue
            base = hi * block
            for lo in range(nsuf):
                if suf[lo] == 0:
                    continue
                mask = 0
                for t in range(k):
                    if bits[base + t * stride + lo]:
                        mask |= 1u << t
                hist[mask] += wp * suf[lo]
    arr = np.asarray(hist)
    nz = np.flatnonzero(arr)
    return {int(m): int(arr[m]) for m in nz}
