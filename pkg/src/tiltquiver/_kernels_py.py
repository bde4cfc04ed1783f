"""Pure-Python elimination kernels.

Both routines take a list of rows and return ``(rows, pivots)`` where ``rows``
are the nonzero rows of the reduced row echelon form and ``pivots`` the pivot
column of each of them.  The input is never mutated.
"""
from math import gcd


def _content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination over the integers.

    Every output row is primitive (content 1) with a positive pivot; the
    pivot column is zero in every other row.  Dividing each row by its pivot
    gives the rational RREF.
    """
    work = []
    for r in rows:
        r = list(r)
        g = _content(r)
        if g > 1:
            r = [x // g for x in r]
        work.append(r)
    nrows = len(work)
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        best = 0
        for i in range(rank, nrows):
            v = work[i][c]
            if v:
                a = v if v > 0 else -v
                if piv < 0 or a < best:
                    piv = i
                    best = a
                    if a == 1:
                        break
        if piv < 0:
            continue
        if piv != rank:
            work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        p = prow[c]
        if p < 0:
            prow = [-x for x in prow]
            p = -p
            work[rank] = prow
        for i in range(nrows):
            if i == rank:
                continue
            row = work[i]
            a = row[c]
            if not a:
                continue
            g = gcd(p, a)
            mp = p // g
            ma = a // g
            if mp == 1:
                new = [x - ma * y for x, y in zip(row, prow)]
            else:
                new = [mp * x - ma * y for x, y in zip(row, prow)]
            g = _content(new)
            if g > 1:
                new = [x // g for x in new]
            work[i] = new
        pivots.append(c)
        rank += 1
    return work[:rank], pivots


def rref_mod(rows, ncols, p):
    """Gauss-Jordan elimination over F_p; pivots are normalised to 1."""
    work = [[x % p for x in r] for r in rows]
    nrows = len(work)
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if work[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        inv = pow(prow[c], p - 2, p)
        if inv != 1:
            prow = [(x * inv) % p for x in prow]
            work[rank] = prow
        for i in range(nrows):
            if i == rank:
                continue
            row = work[i]
            a = row[c]
            if a:
                work[i] = [(x - a * y) % p for x, y in zip(row, prow)]
        pivots.append(c)
        rank += 1
    return work[:rank], pivots
