# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled row-reduction kernels for dense matrices over GF(p).

Matrices are C-contiguous int64 arrays with entries already reduced into
[0, p).  Both routines work in place.  `p` must fit in 31 bits so that a
product of two reduced entries cannot overflow int64.
"""


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cpdef tuple rref_mod(long long[:, ::1] a, long long p):
    """In-place reduced row echelon form.  Returns (rank, pivot columns)."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, i, j, k, piv
    cdef long long inv, f, t
    pivots = []
    for j in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(j, n):
                t = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = t
        inv = _inv_mod(a[r, j], p)
        if inv != 1:
            for k in range(j, n):
                a[r, k] = (a[r, k] * inv) % p
        for i in range(m):
            if i != r and a[i, j] != 0:
                f = a[i, j]
                for k in range(j, n):
                    a[i, k] = (a[i, k] - f * a[r, k]) % p
                    if a[i, k] < 0:
                        a[i, k] += p
        pivots.append(j)
        r += 1
    return r, pivots


cpdef Py_ssize_t ref_rank(long long[:, ::1] a, long long p):
    """Destructive forward elimination; returns the rank only."""
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t r = 0, i, j, k, piv
    cdef long long inv, f, t
    for j in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(j, n):
                t = a[r, k]
                a[r, k] = a[piv, k]
                a[piv, k] = t
        inv = _inv_mod(a[r, j], p)
        if inv != 1:
            for k in range(j, n):
                a[r, k] = (a[r, k] * inv) % p
        for i in range(r + 1, m):
            if a[i, j] != 0:
                f = a[i, j]
                for k in range(j, n):
                    a[i, k] = (a[i, k] - f * a[r, k]) % p
                    if a[i, k] < 0:
                        a[i, k] += p
        r += 1
    return r
