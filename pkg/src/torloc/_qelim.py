"""Exact elimination over the rationals.

Two lanes share every contract: a fraction-free integer lane (Bareiss
elimination on int64 numpy arrays, used whenever the input is integral and
the guarded intermediates stay below overflow), and a plain Fraction lane
that is always available.  No floating point, no modular shortcuts.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

# products of two entries below this bound fit comfortably in int64
_GUARD = 1 << 30


class _Overflow(Exception):
    pass


def _bareiss_ref(a: np.ndarray):
    """Fraction-free forward elimination in place.

    Returns (rank, pivot columns, pivot values).  Raises _Overflow when the
    growth guard trips; the caller falls back to Fractions.
    """
    m, n = a.shape
    r = 0
    prev = 1
    pivots = []
    for j in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, j])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        p = int(a[r, j])
        if r + 1 < m:
            block = a[r + 1 :, j:]
            if max(abs(p), int(np.abs(block).max(initial=0)),
                   int(np.abs(a[r, j:]).max(initial=0))) >= _GUARD:
                raise _Overflow
            block = p * block - np.outer(a[r + 1 :, j], a[r, j:])
            if prev != 1:
                block //= prev
            a[r + 1 :, j:] = block
        pivots.append(j)
        prev = p
        r += 1
    return r, pivots


def _to_fraction_rows(a) -> list:
    if isinstance(a, np.ndarray):
        return [[Fraction(int(x)) for x in row] for row in a]
    return [[Fraction(x) for x in row] for row in a]


def rref_fracs(rows: list):
    """Reduced row echelon form of a list-of-rows Fraction matrix, in place.

    Returns (rank, pivot columns).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    pivots = []
    for j in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if rows[i][j]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][j]
        if lead != 1:
            inv = 1 / lead
            rows[r] = [x * inv for x in rows[r]]
        rr = rows[r]
        for i in range(m):
            if i != r and rows[i][j]:
                f = rows[i][j]
                ri = rows[i]
                rows[i] = [ri[k] - f * rr[k] for k in range(n)]
        pivots.append(j)
        r += 1
    return r, pivots


def int_rank(a: np.ndarray):
    """Rank over Q of an integral matrix, or None if the guard trips."""
    try:
        r, _ = _bareiss_ref(a)
        return r
    except _Overflow:
        return None


def int_kernel(a: np.ndarray):
    """Canonical right-kernel basis over Q of an integral matrix.

    Returns a list of Fraction columns (the same vectors reduced row echelon
    form would give: unit at the free column, zeros at other free columns),
    or None if the integer lane overflows.
    """
    work = a.copy()
    try:
        rank, pivots = _bareiss_ref(work)
    except _Overflow:
        return None
    n = a.shape[1]
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    cols = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        # back substitution on the echelon rows
        for i in range(rank - 1, -1, -1):
            pj = pivots[i]
            s = Fraction(int(work[i, f]))
            for k in range(i + 1, rank):
                pk = pivots[k]
                if work[i, pk]:
                    s += int(work[i, pk]) * v[pk]
            v[pj] = -s / int(work[i, pj])
        cols.append(v)
    return cols
