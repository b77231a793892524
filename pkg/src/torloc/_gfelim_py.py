"""Pure-Python fallback for the compiled GF(p) elimination kernels.

Same contracts as ``_gfelim``: in-place elimination on C-contiguous int64
arrays with entries in [0, p).  Row updates are vectorized with numpy, so
this stays usable at desk scale when the extension is not built.
"""

from __future__ import annotations

import numpy as np


def rref_mod(a: np.ndarray, p: int):
    """In-place reduced row echelon form.  Returns (rank, pivot columns)."""
    m, n = a.shape
    r = 0
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
        lead = int(a[r, j])
        if lead != 1:
            a[r, j:] = (a[r, j:] * pow(lead, -1, p)) % p
        rows = np.nonzero(a[:, j])[0]
        rows = rows[rows != r]
        if rows.size:
            a[np.ix_(rows, np.arange(j, n))] = (
                a[np.ix_(rows, np.arange(j, n))]
                - np.outer(a[rows, j], a[r, j:])
            ) % p
        pivots.append(j)
        r += 1
    return r, pivots


def ref_rank(a: np.ndarray, p: int) -> int:
    """Destructive forward elimination; returns the rank only."""
    m, n = a.shape
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, j])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = int(a[r, j])
        if lead != 1:
            a[r, j:] = (a[r, j:] * pow(lead, -1, p)) % p
        rows = r + 1 + np.nonzero(a[r + 1 :, j])[0]
        if rows.size:
            a[np.ix_(rows, np.arange(j, n))] = (
                a[np.ix_(rows, np.arange(j, n))]
                - np.outer(a[rows, j], a[r, j:])
            ) % p
        r += 1
    return r
