# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels over a CSR structure-constant table.

Pair (i, j) owns entries ``cols[offsets[i*dim+j] : offsets[i*dim+j+1]]`` with
integer values ``vals``: [b_i, b_j] = sum vals[e] * b_{cols[e]}.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _lookup(const int64_t[:] offsets, const int64_t[:] cols,
                            const int64_t[:] vals, Py_ssize_t pair, int64_t k) noexcept nogil:
    cdef Py_ssize_t e
    for e in range(offsets[pair], offsets[pair + 1]):
        if cols[e] == k:
            return vals[e]
    return 0


def jacobi_violations(const int64_t[:] offsets, const int64_t[:] cols,
                      const int64_t[:] vals, Py_ssize_t dim,
                      const int64_t[:, :] triples):
    """Indices of triples (a, b, c) with [[a,b],c] + [[b,c],a] + [[c,a],b] != 0."""
    cdef Py_ssize_t n = triples.shape[0]
    cdef int64_t[:] acc = np.zeros(dim, dtype=np.int64)
    cdef int64_t[:] touched = np.zeros(dim, dtype=np.int64)
    cdef int64_t[:] stamp = np.full(dim, -1, dtype=np.int64)
    cdef Py_ssize_t ntouched, t, r, e, f, p, q
    cdef int64_t x, y, z, k, v
    cdef bint bad
    out = []
    for t in range(n):
        ntouched = 0
        for r in range(3):
            if r == 0:
                x = triples[t, 0]; y = triples[t, 1]; z = triples[t, 2]
            elif r == 1:
                x = triples[t, 1]; y = triples[t, 2]; z = triples[t, 0]
            else:
                x = triples[t, 2]; y = triples[t, 0]; z = triples[t, 1]
            p = x * dim + y
            for e in range(offsets[p], offsets[p + 1]):
                k = cols[e]
                v = vals[e]
                q = k * dim + z
                for f in range(offsets[q], offsets[q + 1]):
                    if stamp[cols[f]] != t:
                        stamp[cols[f]] = t
                        touched[ntouched] = cols[f]
                        ntouched += 1
                    acc[cols[f]] += v * vals[f]
        bad = False
        for e in range(ntouched):
            if acc[touched[e]] != 0:
                bad = True
            acc[touched[e]] = 0
        if bad:
            out.append(t)
    return np.asarray(out, dtype=np.int64)


def killing_trace(const int64_t[:] offsets, const int64_t[:] cols,
                  const int64_t[:] vals, Py_ssize_t dim):
    """kappa[i, j] = trace(ad b_i ad b_j) as an int64 matrix."""
    res = np.zeros((dim, dim), dtype=np.int64)
    cdef int64_t[:, :] kap = res
    cdef Py_ssize_t i, j, k, e, p
    cdef int64_t s, l
    with nogil:
        for i in range(dim):
            for j in range(i, dim):
                s = 0
                for k in range(dim):
                    p = i * dim + k
                    for e in range(offsets[p], offsets[p + 1]):
                        l = cols[e]
                        # ad_i sends b_k to b_l; ad_j must send b_l back to b_k
                        s += vals[e] * _lookup(offsets, cols, vals, j * dim + l, k)
                kap[i, j] = s
                kap[j, i] = s
    return res
