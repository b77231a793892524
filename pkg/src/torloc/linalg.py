"""Dense exact linear algebra over GF(p) or Q.

This is the substrate every graded-piece computation sits on.  GF(p)
matrices are int64 numpy arrays and eliminations run in the compiled
kernel when the extension built (set TORLOC_PURE=1 to force the fallback).
Rational matrices carry an integer fast lane (fraction-free Bareiss
elimination) that drops to Fraction arithmetic whenever entries leave the
guarded range.

All outputs are canonical: reduced row echelon forms are unique, kernel
bases are the reduced-echelon kernel vectors ordered by free column, so
identical inputs give bit-identical results.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _qelim
from .fields import PrimeField, RationalField

if os.environ.get("TORLOC_PURE"):
    from . import _gfelim_py as _gfkernel

    COMPILED_KERNEL = False
else:
    try:
        from . import _gfelim as _gfkernel  # type: ignore[attr-defined]

        COMPILED_KERNEL = True
    except ImportError:
        from . import _gfelim_py as _gfkernel

        COMPILED_KERNEL = False

_INT_LIMIT = 1 << 40


# ---------------------------------------------------------------------------
# GF(p) backend: plain int64 arrays


class GFOps:
    def __init__(self, field: PrimeField):
        if field.p.bit_length() > 20:
            raise ValueError("prime field modulus must fit in 20 bits")
        self.field = field
        self.p = field.p

    def mat(self, rows):
        if not rows:
            return np.zeros((0, 0), dtype=np.int64)
        width = len(rows[0])
        out = np.zeros((len(rows), width), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                out[i, j] = self.field.coerce(x)
        return out

    def zeros(self, nr, nc):
        return np.zeros((nr, nc), dtype=np.int64)

    def identity(self, n):
        return np.eye(n, dtype=np.int64)

    def shape(self, m):
        return m.shape

    def copy(self, m):
        return np.ascontiguousarray(m.copy())

    def rank(self, m) -> int:
        if 0 in m.shape:
            return 0
        return int(_gfkernel.ref_rank(self.copy(m), self.p))

    def rref(self, m):
        if 0 in m.shape:
            return m.copy(), []
        work = self.copy(m)
        _, pivots = _gfkernel.rref_mod(work, self.p)
        return work, pivots

    def kernel_basis(self, m):
        nr, nc = m.shape
        if nc == 0:
            return np.zeros((0, 0), dtype=np.int64)
        if nr == 0:
            return np.eye(nc, dtype=np.int64)
        red, pivots = self.rref(m)
        pivset = set(pivots)
        free = [j for j in range(nc) if j not in pivset]
        out = np.zeros((nc, len(free)), dtype=np.int64)
        for t, f in enumerate(free):
            out[f, t] = 1
            for i, pj in enumerate(pivots):
                out[pj, t] = (-red[i, f]) % self.p
        return out

    def matmul(self, a, b):
        n = a.shape[1]
        if n == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        # chunk the inner dimension if accumulated products could overflow
        chunk = max(1, (1 << 62) // max(1, (self.p - 1) ** 2))
        if n <= chunk:
            return (a @ b) % self.p
        acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, n, chunk):
            acc = (acc + a[:, s : s + chunk] @ b[s : s + chunk, :]) % self.p
        return acc

    def hstack(self, mats):
        return np.hstack(mats)

    def vstack(self, mats):
        return np.vstack(mats)

    def take_cols(self, m, idx):
        return m[:, list(idx)]

    def transpose(self, m):
        return np.ascontiguousarray(m.T)

    def is_zero_matrix(self, m) -> bool:
        return not m.any()

    def get(self, m, i, j):
        return int(m[i, j])

    def getcol(self, m, j):
        return [int(x) for x in m[:, j]]

    def to_rows(self, m):
        return [[int(x) for x in row] for row in m]

    def eq(self, a, b) -> bool:
        return a.shape == b.shape and bool((a == b).all())

    def reduce_vec(self, red, pivots, v):
        """Reduce a 1-D vector against normalized reduced rows, in place."""
        if len(pivots) == 0:
            return v % self.p
        coeffs = v[pivots]
        if coeffs.any():
            v = (v - coeffs @ red) % self.p
        return v

    def vec(self, entries):
        return np.array([self.field.coerce(x) for x in entries], dtype=np.int64)

    def solve_matrix(self, a, b):
        """Solve a·X = b column-wise; None when some column is unsolvable."""
        na = a.shape[1]
        red, pivots = self.rref(self.hstack([a, b]))
        if any(p >= na for p in pivots):
            return None
        out = np.zeros((na, b.shape[1]), dtype=np.int64)
        for i, pj in enumerate(pivots):
            out[pj, :] = red[i, na:]
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def scale(self, m, c):
        return (m * self.field.coerce(c)) % self.p

    def from_cols(self, cols, nrows):
        if not cols:
            return np.zeros((nrows, 0), dtype=np.int64)
        return np.column_stack(cols).astype(np.int64) % self.p

    def unit_cols(self, nrows, indices):
        out = np.zeros((nrows, len(indices)), dtype=np.int64)
        for t, i in enumerate(indices):
            out[i, t] = 1
        return out

    def place_cols(self, m, positions, sub):
        """Overwrite the given columns of m (m is owned by the caller)."""
        m[:, list(positions)] = sub
        return m

    def place_block(self, m, row_off, col_off, blk):
        nr, nc = blk.shape
        m[row_off : row_off + nr, col_off : col_off + nc] = blk
        return m

    def rref_append(self, red, pivots, v):
        """Append one vector to a maintained reduced row set.

        Returns (red, pivots, accepted): accepted is False when v reduced to
        zero against the current rows.
        """
        v = self.reduce_vec(red, pivots, v.copy() if isinstance(v, np.ndarray) else np.array(v, dtype=np.int64))
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return red, pivots, False
        p = int(nz[0])
        lead = int(v[p])
        if lead != 1:
            v = (v * pow(lead, -1, self.p)) % self.p
        if len(pivots) == 0:
            return v.reshape(1, -1), [p], True
        coeffs = red[:, p]
        if coeffs.any():
            red = (red - np.outer(coeffs, v)) % self.p
        order = sorted(range(len(pivots) + 1), key=lambda t: (pivots + [p])[t])
        red = np.vstack([red, v.reshape(1, -1)])[order]
        pivots = sorted(pivots + [p])
        return red, pivots, True

    def empty_red(self, ncols):
        return np.zeros((0, ncols), dtype=np.int64), []


# ---------------------------------------------------------------------------
# Rational backend: integer fast lane with Fraction fallback


@dataclass
class QMat:
    """Rational matrix: either an integral int64 array or Fraction rows."""

    kind: str  # "i" or "f"
    a: np.ndarray | None
    rows: list | None
    nr: int
    nc: int


def _qmat_int(a: np.ndarray) -> QMat:
    return QMat("i", a, None, a.shape[0], a.shape[1])


def _qmat_frac(rows: list, nc: int) -> QMat:
    return QMat("f", None, rows, len(rows), nc)


class QQOps:
    def __init__(self, field: RationalField):
        self.field = field

    def _fracs(self, m: QMat) -> list:
        if m.kind == "f":
            return m.rows
        return [[Fraction(int(x)) for x in row] for row in m.a]

    def _try_int(self, rows, nc) -> QMat:
        out = np.zeros((len(rows), nc), dtype=np.int64)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x.denominator != 1 or abs(x.numerator) >= _INT_LIMIT:
                    return _qmat_frac(rows, nc)
                out[i, j] = int(x)
        return _qmat_int(out)

    def mat(self, rows):
        if not rows:
            return _qmat_int(np.zeros((0, 0), dtype=np.int64))
        nc = len(rows[0])
        coerced = [[self.field.coerce(x) for x in row] for row in rows]
        return self._try_int(coerced, nc)

    def zeros(self, nr, nc):
        return _qmat_int(np.zeros((nr, nc), dtype=np.int64))

    def identity(self, n):
        return _qmat_int(np.eye(n, dtype=np.int64))

    def shape(self, m: QMat):
        return (m.nr, m.nc)

    def copy(self, m: QMat):
        if m.kind == "i":
            return _qmat_int(m.a.copy())
        return _qmat_frac([row[:] for row in m.rows], m.nc)

    def rank(self, m: QMat) -> int:
        if m.nr == 0 or m.nc == 0:
            return 0
        if m.kind == "i":
            r = _qelim.int_rank(m.a.copy())
            if r is not None:
                return r
        rows = [row[:] for row in self._fracs(m)]
        r, _ = _qelim.rref_fracs(rows)
        return r

    def rref(self, m: QMat):
        if m.nr == 0 or m.nc == 0:
            return self.copy(m), []
        rows = [row[:] for row in self._fracs(m)]
        _, pivots = _qelim.rref_fracs(rows)
        return self._try_int(rows, m.nc), pivots

    def kernel_basis(self, m: QMat):
        if m.nc == 0:
            return self.zeros(0, 0)
        if m.nr == 0:
            return self.identity(m.nc)
        if m.kind == "i":
            cols = _qelim.int_kernel(m.a)
            if cols is not None:
                rows = [[cols[t][i] for t in range(len(cols))] for i in range(m.nc)]
                return self._try_int(rows, len(cols))
        red, pivots = self.rref(m)
        redr = self._fracs(red)
        pivset = set(pivots)
        free = [j for j in range(m.nc) if j not in pivset]
        rows = [[Fraction(0)] * len(free) for _ in range(m.nc)]
        for t, f in enumerate(free):
            rows[f][t] = Fraction(1)
            for i, pj in enumerate(pivots):
                rows[pj][t] = -redr[i][f]
        return self._try_int(rows, len(free))

    def matmul(self, a: QMat, b: QMat):
        if a.kind == "i" and b.kind == "i":
            inner = a.nc
            ma = int(np.abs(a.a).max(initial=0))
            mb = int(np.abs(b.a).max(initial=0))
            if ma * mb * max(1, inner) < (1 << 62):
                return _qmat_int(a.a @ b.a)
        ra, rb = self._fracs(a), self._fracs(b)
        out = [[Fraction(0)] * b.nc for _ in range(a.nr)]
        for i in range(a.nr):
            rai = ra[i]
            oi = out[i]
            for k in range(a.nc):
                x = rai[k]
                if x:
                    rbk = rb[k]
                    for j in range(b.nc):
                        if rbk[j]:
                            oi[j] += x * rbk[j]
        return self._try_int(out, b.nc)

    def hstack(self, mats):
        if all(m.kind == "i" for m in mats):
            return _qmat_int(np.hstack([m.a for m in mats]))
        nc = sum(m.nc for m in mats)
        nr = mats[0].nr
        rows = [[] for _ in range(nr)]
        for m in mats:
            fr = self._fracs(m)
            for i in range(nr):
                rows[i].extend(fr[i])
        return _qmat_frac(rows, nc)

    def vstack(self, mats):
        if all(m.kind == "i" for m in mats):
            return _qmat_int(np.vstack([m.a for m in mats]))
        rows = []
        for m in mats:
            rows.extend([row[:] for row in self._fracs(m)])
        return _qmat_frac(rows, mats[0].nc)

    def take_cols(self, m: QMat, idx):
        idx = list(idx)
        if m.kind == "i":
            return _qmat_int(m.a[:, idx])
        return _qmat_frac([[row[j] for j in idx] for row in m.rows], len(idx))

    def transpose(self, m: QMat):
        if m.kind == "i":
            return _qmat_int(np.ascontiguousarray(m.a.T))
        return _qmat_frac(
            [[m.rows[i][j] for i in range(m.nr)] for j in range(m.nc)], m.nr
        )

    def is_zero_matrix(self, m: QMat) -> bool:
        if m.kind == "i":
            return not m.a.any()
        return all(not x for row in m.rows for x in row)

    def get(self, m: QMat, i, j):
        if m.kind == "i":
            return Fraction(int(m.a[i, j]))
        return m.rows[i][j]

    def getcol(self, m: QMat, j):
        return [self.get(m, i, j) for i in range(m.nr)]

    def to_rows(self, m: QMat):
        return [[self.get(m, i, j) for j in range(m.nc)] for i in range(m.nr)]

    def eq(self, a: QMat, b: QMat) -> bool:
        if (a.nr, a.nc) != (b.nr, b.nc):
            return False
        return self.to_rows(a) == self.to_rows(b)

    def reduce_vec(self, red, pivots, v):
        redr = self._fracs(red)
        for i, pj in enumerate(pivots):
            c = v[pj]
            if c:
                row = redr[i]
                for k in range(len(v)):
                    if row[k]:
                        v[k] -= c * row[k]
        return v

    def vec(self, entries):
        return [self.field.coerce(x) for x in entries]

    def solve_matrix(self, a: QMat, b: QMat):
        na = a.nc
        red, pivots = self.rref(self.hstack([a, b]))
        if any(p >= na for p in pivots):
            return None
        rows = [[Fraction(0)] * b.nc for _ in range(na)]
        redr = self._fracs(red)
        for i, pj in enumerate(pivots):
            rows[pj] = list(redr[i][na:])
        return self._try_int(rows, b.nc)

    def add(self, a: QMat, b: QMat):
        if a.kind == "i" and b.kind == "i":
            return _qmat_int(a.a + b.a)
        ra, rb = self._fracs(a), self._fracs(b)
        return self._try_int(
            [[ra[i][j] + rb[i][j] for j in range(a.nc)] for i in range(a.nr)], a.nc
        )

    def scale(self, m: QMat, c):
        c = self.field.coerce(c)
        if m.kind == "i" and c.denominator == 1 and abs(c.numerator) < _INT_LIMIT:
            cn = int(c)
            if abs(cn) * int(np.abs(m.a).max(initial=0)) < (1 << 62):
                return _qmat_int(m.a * cn)
        rows = [[x * c for x in row] for row in self._fracs(m)]
        return self._try_int(rows, m.nc)

    def from_cols(self, cols, nrows):
        if not cols:
            return self.zeros(nrows, 0)
        rows = [[Fraction(cols[t][i]) for t in range(len(cols))] for i in range(nrows)]
        return self._try_int(rows, len(cols))

    def unit_cols(self, nrows, indices):
        out = np.zeros((nrows, len(indices)), dtype=np.int64)
        for t, i in enumerate(indices):
            out[i, t] = 1
        return _qmat_int(out)

    def place_cols(self, m: QMat, positions, sub: QMat):
        if m.kind == "i" and sub.kind == "i":
            m.a[:, list(positions)] = sub.a
            return m
        rows = self._fracs(m) if m.kind == "f" else [[Fraction(int(x)) for x in row] for row in m.a]
        sr = self._fracs(sub)
        for t, j in enumerate(positions):
            for i in range(m.nr):
                rows[i][j] = sr[i][t]
        return _qmat_frac(rows, m.nc)

    def place_block(self, m: QMat, row_off, col_off, blk: QMat):
        if m.kind == "i" and blk.kind == "i":
            m.a[row_off : row_off + blk.nr, col_off : col_off + blk.nc] = blk.a
            return m
        rows = self._fracs(m) if m.kind == "f" else [[Fraction(int(x)) for x in row] for row in m.a]
        br = self._fracs(blk)
        for i in range(blk.nr):
            for j in range(blk.nc):
                rows[row_off + i][col_off + j] = br[i][j]
        return _qmat_frac(rows, m.nc)

    def rref_append(self, red, pivots, v):
        v = [Fraction(x) for x in v]
        v = self.reduce_vec(red, pivots, v)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return red, pivots, False
        if v[p] != 1:
            inv = 1 / v[p]
            v = [x * inv for x in v]
        rows = [row[:] for row in self._fracs(red)]
        for row in rows:
            c = row[p]
            if c:
                for k in range(len(v)):
                    if v[k]:
                        row[k] -= c * v[k]
        rows.append(v)
        order = sorted(range(len(pivots) + 1), key=lambda t: (pivots + [p])[t])
        rows = [rows[t] for t in order]
        return _qmat_frac(rows, len(v)), sorted(pivots + [p]), True

    def empty_red(self, ncols):
        return self.zeros(0, ncols), []


_OPS_CACHE: dict = {}


def ops_for(field):
    ops = _OPS_CACHE.get(field)
    if ops is None:
        ops = GFOps(field) if isinstance(field, PrimeField) else QQOps(field)
        _OPS_CACHE[field] = ops
    return ops


# ---------------------------------------------------------------------------
# public matrix surface


class DenseMatrix:
    """Immutable dense matrix over an exact field.

    Rows are supplied as ints or Fractions and coerced into the field.
    Zero-row and zero-column matrices are legal (zero maps).
    """

    __slots__ = ("field", "ops", "raw")

    def __init__(self, field, rows=None, raw=None):
        self.field = field
        self.ops = ops_for(field)
        self.raw = raw if raw is not None else self.ops.mat(rows or [])

    @classmethod
    def from_raw(cls, field, raw):
        return cls(field, raw=raw)

    @classmethod
    def zeros(cls, field, nr, nc):
        return cls.from_raw(field, ops_for(field).zeros(nr, nc))

    @classmethod
    def identity(cls, field, n):
        return cls.from_raw(field, ops_for(field).identity(n))

    @property
    def nrows(self):
        return self.ops.shape(self.raw)[0]

    @property
    def ncols(self):
        return self.ops.shape(self.raw)[1]

    def entries(self):
        return self.ops.to_rows(self.raw)

    def __eq__(self, other):
        return (
            isinstance(other, DenseMatrix)
            and other.field == self.field
            and self.ops.eq(self.raw, other.raw)
        )

    def __matmul__(self, other):
        return DenseMatrix.from_raw(self.field, self.ops.matmul(self.raw, other.raw))

    def __repr__(self):
        return f"DenseMatrix({self.nrows}x{self.ncols} over {self.field})"


def rank(m: DenseMatrix) -> int:
    """Rank of the matrix over its field."""
    return m.ops.rank(m.raw)


def kernel_basis(m: DenseMatrix) -> DenseMatrix:
    """Canonical basis of the right kernel, one column per free variable."""
    return DenseMatrix.from_raw(m.field, m.ops.kernel_basis(m.raw))


def solve_in_span(basis: DenseMatrix, target) -> list | None:
    """Express a column in the span of the basis columns.

    `target` is a sequence of field-coercible entries with the same height
    as the basis.  Returns the coefficient list, or None when the column is
    not in the span.
    """
    ops = basis.ops
    col = ops.mat([[x] for x in target]) if len(target) else ops.zeros(0, 1)
    if basis.nrows != ops.shape(col)[0]:
        raise ValueError("target height does not match basis")
    sol = ops.solve_matrix(basis.raw, col)
    if sol is None:
        return None
    return [ops.get(sol, i, 0) for i in range(basis.ncols)]
