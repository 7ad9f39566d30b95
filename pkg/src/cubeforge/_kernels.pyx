# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; see ``_kernels_py`` for the reference."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()


def line_duplicates(cube, Py_ssize_t limit):
    cdef const cnp.int32_t[:, :, ::1] c = np.ascontiguousarray(cube, dtype=np.int32)
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t axis, x, y, t
    cdef int s
    cdef uint64_t seen, reported, bit
    cdef int64_t total = 0
    found = []
    if n > 64:
        raise ValueError("compiled line check supports n <= 64")
    for axis in range(3):
        for x in range(n):
            for y in range(n):
                seen = 0
                reported = 0
                for t in range(n):
                    if axis == 0:
                        s = c[x, y, t]
                    elif axis == 1:
                        s = c[x, t, y]
                    else:
                        s = c[t, x, y]
                    if s <= 0:
                        continue
                    bit = (<uint64_t>1) << (s - 1)
                    if seen & bit:
                        reported |= bit
                    seen |= bit
                if reported:
                    for s in range(1, n + 1):
                        bit = (<uint64_t>1) << (s - 1)
                        if reported & bit:
                            total += 1
                            if len(found) < limit:
                                found.append((axis, x, y, s))
    return found, total


cdef inline uint64_t _domain(Py_ssize_t idx, Py_ssize_t n, uint64_t[::1] allowed,
                             uint64_t[::1] uf, uint64_t[::1] ur, uint64_t[::1] uc):
    cdef Py_ssize_t i = idx // (n * n)
    cdef Py_ssize_t j = (idx // n) % n
    cdef Py_ssize_t k = idx % n
    return allowed[idx] & ~(uf[i * n + j] | ur[i * n + k] | uc[j * n + k])


cdef bint _consistent(Py_ssize_t idx, Py_ssize_t n, int[::1] cells, uint64_t[::1] allowed,
                      uint64_t[::1] uf, uint64_t[::1] ur, uint64_t[::1] uc, uint64_t full):
    cdef Py_ssize_t i = idx // (n * n)
    cdef Py_ssize_t j = (idx // n) % n
    cdef Py_ssize_t k = idx % n
    cdef Py_ssize_t t, other
    cdef uint64_t d, cover, missing
    cdef int which
    for which in range(3):
        cover = 0
        if which == 0:
            missing = full & ~uf[i * n + j]
        elif which == 1:
            missing = full & ~ur[i * n + k]
        else:
            missing = full & ~uc[j * n + k]
        for t in range(n):
            if which == 0:
                other = (i * n + j) * n + t
            elif which == 1:
                other = (i * n + t) * n + k
            else:
                other = (t * n + j) * n + k
            if cells[other] == 0:
                d = _domain(other, n, allowed, uf, ur, uc)
                if d == 0:
                    return False
                cover |= d
        if (cover & missing) != missing:
            return False
    return True


cdef inline int _bitlen(uint64_t v):
    cdef int r = 0
    while v:
        v >>= 1
        r += 1
    return r


def search(fixed, allowed_in, Py_ssize_t n, long long budget):
    cdef Py_ssize_t size = n * n * n
    cdef int[::1] cells = np.ascontiguousarray(fixed, dtype=np.intc).copy()
    cdef uint64_t[::1] allowed = np.ascontiguousarray(allowed_in, dtype=np.uint64)
    cdef uint64_t[::1] uf = np.zeros(n * n, dtype=np.uint64)
    cdef uint64_t[::1] ur = np.zeros(n * n, dtype=np.uint64)
    cdef uint64_t[::1] uc = np.zeros(n * n, dtype=np.uint64)
    cdef uint64_t full, bit, low
    cdef Py_ssize_t idx, i, j, k, p, nfree
    cdef int s
    cdef long long nodes = 0
    if n > 63:
        raise ValueError("compiled search supports n <= 63")
    full = ((<uint64_t>1) << n) - 1
    for idx in range(size):
        s = cells[idx]
        if s:
            i = idx // (n * n)
            j = (idx // n) % n
            k = idx % n
            bit = (<uint64_t>1) << (s - 1)
            uf[i * n + j] |= bit
            ur[i * n + k] |= bit
            uc[j * n + k] |= bit
    free_arr = np.flatnonzero(np.asarray(cells) == 0).astype(np.intp)
    cdef Py_ssize_t[::1] free = free_arr
    nfree = free.shape[0]
    if nfree == 0:
        return 1, list(cells), nodes
    cdef uint64_t[::1] cand = np.zeros(nfree, dtype=np.uint64)
    p = 0
    cand[0] = _domain(free[0], n, allowed, uf, ur, uc)
    while True:
        if cand[p] == 0:
            p -= 1
            if p < 0:
                return 0, None, nodes
            idx = free[p]
            i = idx // (n * n)
            j = (idx // n) % n
            k = idx % n
            bit = ~((<uint64_t>1) << (cells[idx] - 1))
            cells[idx] = 0
            uf[i * n + j] &= bit
            ur[i * n + k] &= bit
            uc[j * n + k] &= bit
            continue
        low = cand[p] & (~cand[p] + 1)
        cand[p] ^= low
        nodes += 1
        if nodes > budget:
            return -1, None, nodes
        idx = free[p]
        i = idx // (n * n)
        j = (idx // n) % n
        k = idx % n
        cells[idx] = _bitlen(low)
        uf[i * n + j] |= low
        ur[i * n + k] |= low
        uc[j * n + k] |= low
        if _consistent(idx, n, cells, allowed, uf, ur, uc, full):
            p += 1
            if p == nfree:
                return 1, list(cells), nodes
            cand[p] = _domain(free[p], n, allowed, uf, ur, uc)
        else:
            cells[idx] = 0
            uf[i * n + j] &= ~low
            ur[i * n + k] &= ~low
            uc[j * n + k] &= ~low
