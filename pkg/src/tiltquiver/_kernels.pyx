# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernels; same contract as ``_kernels_py``."""
from libc.stdlib cimport malloc, free
from math import gcd


cdef object _content(list row):
    cdef object g = 0
    cdef object x
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(rows, Py_ssize_t ncols):
    cdef list work = []
    cdef list r, prow, row, new
    cdef Py_ssize_t nrows, i, j, c, piv, rank = 0
    cdef object g, p, a, mp, ma, v, best, av
    for rr in rows:
        r = list(rr)
        g = _content(r)
        if g > 1:
            r = [x // g for x in r]
        work.append(r)
    nrows = len(work)
    pivots = []
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        best = 0
        for i in range(rank, nrows):
            v = (<list>work[i])[c]
            if v:
                av = v if v > 0 else -v
                if piv < 0 or av < best:
                    piv = i
                    best = av
                    if av == 1:
                        break
        if piv < 0:
            continue
        if piv != rank:
            work[rank], work[piv] = work[piv], work[rank]
        prow = <list>work[rank]
        p = prow[c]
        if p < 0:
            prow = [-x for x in prow]
            p = -p
            work[rank] = prow
        for i in range(nrows):
            if i == rank:
                continue
            row = <list>work[i]
            a = row[c]
            if not a:
                continue
            g = gcd(p, a)
            mp = p // g
            ma = a // g
            new = [None] * ncols
            if mp == 1:
                for j in range(ncols):
                    new[j] = row[j] - ma * prow[j]
            else:
                for j in range(ncols):
                    new[j] = mp * row[j] - ma * prow[j]
            g = _content(new)
            if g > 1:
                for j in range(ncols):
                    new[j] = new[j] // g
            work[i] = new
        pivots.append(c)
        rank += 1
    return work[:rank], pivots


def rref_mod(rows, Py_ssize_t ncols, long long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, piv, rank = 0
    cdef long long a, inv
    cdef long long *buf
    cdef long long *prow
    cdef long long *row
    if p >= (1 << 31):
        raise OverflowError("modulus too large for the compiled kernel")
    buf = <long long *>malloc(max(nrows * ncols, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    pivots = []
    try:
        for i in range(nrows):
            r = rows[i]
            for j in range(ncols):
                buf[i * ncols + j] = (r[j] % p)
        for c in range(ncols):
            if rank == nrows:
                break
            piv = -1
            for i in range(rank, nrows):
                if buf[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(ncols):
                    a = buf[rank * ncols + j]
                    buf[rank * ncols + j] = buf[piv * ncols + j]
                    buf[piv * ncols + j] = a
            prow = buf + rank * ncols
            inv = pow(prow[c], p - 2, p)
            if inv != 1:
                for j in range(ncols):
                    prow[j] = (prow[j] * inv) % p
            for i in range(nrows):
                if i == rank:
                    continue
                row = buf + i * ncols
                a = row[c]
                if a != 0:
                    for j in range(ncols):
                        row[j] = (row[j] - a * prow[j]) % p
                        if row[j] < 0:
                            row[j] += p
            pivots.append(c)
            rank += 1
        out = [[buf[i * ncols + j] for j in range(ncols)] for i in range(rank)]
    finally:
        free(buf)
    return out, pivots
