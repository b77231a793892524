"""Degreewise graded-space machinery.

A graded space is anything exposing per-degree dimensions and the matrices
of multiplication by each variable.  Free modules over R, presented modules,
and homology subquotients all fit; the routines here (column expansion,
kernel generators, minimal generator selection) are the shared engine for
syzygy steps, truncations, duals and Ext computations.
"""

from __future__ import annotations

from .ring import first_variable, monomial_divide_var


class FreeSpace:
    """Graded free module ⊕ R(-a_k): pieces are concatenations of ring
    pieces, one block per summand, in summand order."""

    def __init__(self, spec, twists):
        self.spec = spec
        self.twists = tuple(twists)
        self._index: dict = {}

    def dim(self, d: int) -> int:
        return sum(self.spec.hilbert_function(d - a) for a in self.twists)

    def block_offsets(self, d: int):
        offs = []
        pos = 0
        for a in self.twists:
            offs.append(pos)
            pos += self.spec.hilbert_function(d - a)
        return offs, pos

    def basis(self, d: int):
        """Piece basis labels [(summand k, monomial)], in order."""
        out = []
        for k, a in enumerate(self.twists):
            for u in self.spec.std_monomials(d - a):
                out.append((k, u))
        return out

    def index(self, d: int):
        idx = self._index.get(d)
        if idx is None:
            idx = {lab: i for i, lab in enumerate(self.basis(d))}
            self._index[d] = idx
        return idx

    def mult_var(self, j: int, d: int):
        """Block-diagonal matrix of x_j: piece(d) -> piece(d + w_j)."""
        spec = self.spec
        ops = spec.ops
        w = spec.weights[j]
        tgt = self.dim(d + w)
        src = self.dim(d)
        out = ops.zeros(tgt, src)
        offs_s, _ = self.block_offsets(d)
        offs_t, _ = self.block_offsets(d + w)
        for k, a in enumerate(self.twists):
            ns = spec.hilbert_function(d - a)
            if ns == 0:
                continue
            blk = spec.mult_var_raw(j, d - a)
            nt = ops.shape(blk)[0]
            if nt == 0:
                continue
            out = ops.place_block(out, offs_t[k], offs_s[k], blk)
        return out

    def free_mult_vector(self, d: int, vec, j: int):
        """Multiply a piece vector by x_j (vector in, vector out)."""
        ops = self.spec.ops
        m = self.mult_var(j, d)
        col = ops.matmul(m, ops.from_cols([vec], self.dim(d)))
        return ops.getcol(col, 0)


class ColumnExpander:
    """Expansion matrices of a homogeneous column set into a target space.

    Columns are (degree c, vector over target piece at degree c).  The
    matrix at degree d has one column per pair (k, u) with u a standard
    monomial of R_{d - c_k}, equal to u times column k; pairs are ordered by
    summand then monomial, matching FreeSpace piece order for the source
    free module ⊕ R(-c_k).
    """

    def __init__(self, target_space, cols):
        self.space = target_space
        self.spec = target_space.spec
        self.ops = self.spec.ops
        self.cols = list(cols)
        self._memo: dict = {}

    def source_twists(self):
        return tuple(c for c, _ in self.cols)

    def source_dim(self, d: int) -> int:
        return sum(self.spec.hilbert_function(d - c) for c, _ in self.cols)

    def append(self, new_cols, degree: int):
        """Add columns of the given degree; earlier expansion matrices stay
        valid, the one at `degree` is invalidated."""
        self.cols.extend((degree, v) for v in new_cols)
        self._memo.pop(degree, None)

    def matrix(self, d: int):
        m = self._memo.get(d)
        if m is None:
            m = self._build(d)
            self._memo[d] = m
        return m

    def _build(self, d: int):
        spec = self.spec
        ops = self.ops
        nrows = self.space.dim(d)
        labels = []  # (k, monomial) per source column
        for k, (c, _) in enumerate(self.cols):
            for u in spec.std_monomials(d - c):
                labels.append((k, u))
        n = len(labels)
        out = ops.zeros(nrows, n)
        if n == 0 or nrows == 0:
            return out
        base_pos = [i for i, (k, u) in enumerate(labels) if first_variable(u) is None]
        if base_pos:
            base = ops.from_cols([self.cols[labels[i][0]][1] for i in base_pos], nrows)
            out = ops.place_cols(out, base_pos, base)
        by_var: dict = {}
        for i, (k, u) in enumerate(labels):
            j = first_variable(u)
            if j is None:
                continue
            by_var.setdefault(j, []).append(i)
        for j, positions in by_var.items():
            w = spec.weights[j]
            lower = self.matrix(d - w)
            lower_index = self._source_index(d - w)
            src_idx = []
            for i in positions:
                k, u = labels[i]
                src_idx.append(lower_index[(k, monomial_divide_var(u, j))])
            gathered = ops.take_cols(lower, src_idx)
            prod = ops.matmul(self.space.mult_var(j, d - w), gathered)
            out = ops.place_cols(out, positions, prod)
        return out

    def _source_index(self, d: int):
        idx = {}
        pos = 0
        for k, (c, _) in enumerate(self.cols):
            for u in self.spec.std_monomials(d - c):
                idx[(k, u)] = pos
                pos += 1
        return idx


def span_complement_units(ops, span_rows_matrix, n: int):
    """Canonical complement of a row-span inside K^n: unit vectors at the
    non-pivot coordinates of the reduced span."""
    if span_rows_matrix is None or ops.shape(span_rows_matrix)[0] == 0:
        return list(range(n))
    _, pivots = ops.rref(span_rows_matrix)
    pivset = set(pivots)
    return [i for i in range(n) if i not in pivset]


def minimal_space_generators(space, d_lo: int, d_hi: int):
    """Canonical minimal generators of a graded space generated in degrees
    <= d_hi: per degree, unit vectors completing sum_j x_j * piece(d - w_j).

    Returns a list of (degree, coordinate index, unit vector as list).
    """
    spec = space.spec
    ops = spec.ops
    gens = []
    for d in range(d_lo, d_hi + 1):
        n = space.dim(d)
        if n == 0:
            continue
        span_parts = []
        for j, w in enumerate(spec.weights):
            if space.dim(d - w):
                span_parts.append(ops.transpose(space.mult_var(j, d - w)))
        span = ops.vstack(span_parts) if span_parts else None
        for i in span_complement_units(ops, span, n):
            vec = [spec.field.zero()] * n
            vec[i] = spec.field.one()
            gens.append((d, i, vec))
    return gens


def kernel_module_generators(target_space, cols, d_lo: int, d_hi: int,
                             kernel_dim_at=None):
    """Minimal generators of the kernel of the free-module map given by
    `cols` into `target_space`, for degrees in [d_lo, d_hi].

    Returns (gens, kernel_dims) where gens is a list of
    (degree, vector over the source free piece) and kernel_dims maps each
    scanned degree to the kernel dimension there.  Generator selection is
    lowest degree first, then canonical kernel-basis order; the produced
    columns automatically have all entries in the maximal ideal.
    """
    spec = target_space.spec
    ops = spec.ops
    expander = ColumnExpander(target_space, cols)
    src = FreeSpace(spec, expander.source_twists())
    gens: list = []
    gen_expander = None
    kernel_dims: dict = {}
    for d in range(d_lo, d_hi + 1):
        ncols = src.dim(d)
        if ncols == 0:
            kernel_dims[d] = 0
            continue
        if kernel_dim_at is not None:
            nullity = kernel_dim_at(d)
        else:
            nullity = ncols - ops.rank(expander.matrix(d))
        kernel_dims[d] = nullity
        if nullity == 0:
            continue
        rank_t = 0
        tmat = None
        if gens:
            tmat = gen_expander.matrix(d)
            rank_t = ops.rank(tmat)
        delta = nullity - rank_t
        if delta < 0:
            raise AssertionError("kernel span exceeded kernel dimension")
        if delta == 0:
            continue
        kb = ops.kernel_basis(expander.matrix(d))
        nkb = ops.shape(kb)[1]
        chosen = []
        if rank_t == 0:
            chosen = [ops.getcol(kb, t) for t in range(nkb)]
        else:
            red, pivots = ops.rref(ops.transpose(tmat))
            for t in range(nkb):
                v = ops.getcol(kb, t)
                red2, piv2, accepted = ops.rref_append(red, pivots, ops.vec(v))
                if accepted:
                    red, pivots = red2, piv2
                    chosen.append(v)
                if len(chosen) == delta:
                    break
        if len(chosen) != delta:
            raise AssertionError("canonical kernel completion failed")
        for v in chosen:
            gens.append((d, v))
        if gen_expander is None:
            gen_expander = ColumnExpander(src, [(d, v) for v in chosen])
        else:
            gen_expander.append(chosen, d)
    return gens, kernel_dims
