"""Weighted polynomial rings S = K[x_1..x_n], homogeneous ideals, and the
quotients R = S/I, handled degree by degree.

A graded piece R_d is presented through a canonical monomial basis: the
multiples of the ideal generators in degree d are row-reduced, the pivot
monomials are the reducible ones, and the non-pivot ("standard") monomials
form the basis.  All multiplication maps between pieces are assembled from
the resulting reduction matrices, so every downstream computation is plain
dense linear algebra over the coefficient field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import CertificateError, InhomogeneousInput, ParseError
from .fields import PrimeField, RationalField
from .linalg import DenseMatrix, ops_for


def weighted_degree(expts, weights) -> int:
    return sum(e * w for e, w in zip(expts, weights))


def monomials_of_degree(weights, d):
    """All exponent tuples of weighted degree d, in graded-lex order
    (descending exponent tuples, so x1^k comes first)."""
    n = len(weights)
    out = []

    def rec(i, rem, prefix):
        if i == n - 1:
            if rem % weights[i] == 0:
                out.append(prefix + (rem // weights[i],))
            return
        w = weights[i]
        for e in range(rem // w, -1, -1):
            rec(i + 1, rem - e * w, prefix + (e,))

    if d < 0:
        return []
    rec(0, d, ())
    return out


def monomial_mul(u, v):
    return tuple(a + b for a, b in zip(u, v))


def first_variable(u):
    """Index of the first variable dividing the monomial, or None for 1."""
    for i, e in enumerate(u):
        if e:
            return i
    return None


def monomial_divide_var(u, j):
    return u[:j] + (u[j] - 1,) + u[j + 1 :]


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """A homogeneous polynomial: weighted degree plus (exponents, coefficient)
    terms in descending graded-lex order.  Coefficients are field scalars."""

    degree: int
    terms: tuple

    def is_zero(self):
        return not self.terms


def poly_from_terms(field, weights, term_map) -> HomogeneousPolynomial:
    terms = [(e, c) for e, c in term_map.items() if not field.is_zero(c)]
    if not terms:
        return HomogeneousPolynomial(0, ())
    degs = {weighted_degree(e, weights) for e, _ in terms}
    if len(degs) > 1:
        raise InhomogeneousInput(f"terms of mixed degrees {sorted(degs)}")
    terms.sort(key=lambda t: t[0], reverse=True)
    return HomogeneousPolynomial(degs.pop(), tuple(terms))


_TERM_RE = re.compile(r"[+-]?[^+-]+")
_PART_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_polynomial(text, names, weights, field) -> HomogeneousPolynomial:
    """Parse `3*x^2*y - y^3` style input against declared variable names."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ParseError("empty polynomial")
    index = {nm: i for i, nm in enumerate(names)}
    acc: dict = {}
    pos = 0
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ParseError(f"cannot parse {text!r} near offset {pos}")
        pos = m.end()
        tok = m.group(0)
        sign = -1 if tok.startswith("-") else 1
        body = tok.lstrip("+-")
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = sign
        expts = [0] * len(names)
        for part in body.split("*"):
            if not part:
                raise ParseError(f"empty factor in {text!r}")
            if part.isdigit():
                coeff *= int(part)
                continue
            pm = _PART_RE.match(part)
            if not pm or pm.group(1) not in index:
                raise ParseError(f"unknown factor {part!r} in {text!r}")
            expts[index[pm.group(1)]] += int(pm.group(2) or 1)
        key = tuple(expts)
        acc[key] = field.add(acc.get(key, field.zero()), field.coerce(coeff))
    if pos != len(s):
        raise ParseError(f"cannot parse {text!r} near offset {pos}")
    return poly_from_terms(field, weights, acc)


def poly_to_string(poly: HomogeneousPolynomial, names) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for expts, coeff in poly.terms:
        mono = "*".join(
            nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, expts) if e
        )
        c = coeff if not isinstance(coeff, Fraction) or coeff.denominator != 1 else coeff.numerator
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)


def poly_mul(spec, f: HomogeneousPolynomial, g: HomogeneousPolynomial):
    field = spec.field
    acc: dict = {}
    for eu, cu in f.terms:
        for ev, cv in g.terms:
            key = monomial_mul(eu, ev)
            acc[key] = field.add(acc.get(key, field.zero()), field.mul(cu, cv))
    return poly_from_terms(field, spec.weights, acc)


class _RingPiece:
    __slots__ = ("monomials", "index", "std", "std_index", "proj")

    def __init__(self, monomials, std, proj):
        self.monomials = monomials
        self.index = {m: i for i, m in enumerate(monomials)}
        self.std = std  # positions of standard monomials within S_d basis
        self.std_index = {s: t for t, s in enumerate(std)}
        self.proj = proj  # dim R_d x dim S_d reduction matrix, None = identity


class GradedAlgebraSpec:
    """The ambient ring S (variables with positive weights), an optional
    homogeneous ideal I, and the quotient R = S/I."""

    def __init__(self, field, weights, names=None, ideal=None):
        weights = tuple(int(w) for w in weights)
        if not weights or any(w < 1 for w in weights):
            raise ValueError("variable weights must be positive integers")
        self.field = field
        self.weights = weights
        self.nvars = len(weights)
        self.names = tuple(names) if names else tuple(f"x{i+1}" for i in range(self.nvars))
        if len(self.names) != self.nvars:
            raise ValueError("one name per variable required")
        self.ops = ops_for(field)
        gens = tuple(ideal) if ideal else ()
        for g in gens:
            if g.is_zero() or g.degree < 1:
                raise InhomogeneousInput("ideal generators must be homogeneous of positive degree")
        self.ideal = gens
        self._pieces: dict[int, _RingPiece] = {}
        self._var_mult: dict = {}

    # -- identity helpers ----------------------------------------------------

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.ideal

    @property
    def is_standard_graded(self) -> bool:
        return all(w == 1 for w in self.weights)

    @property
    def max_weight(self) -> int:
        return max(self.weights)

    @property
    def sigma(self) -> int:
        """Sum of the variable weights (the dualizing twist)."""
        return sum(self.weights)

    def parse_poly(self, text: str) -> HomogeneousPolynomial:
        return parse_polynomial(text, self.names, self.weights, self.field)

    def poly_str(self, poly: HomogeneousPolynomial) -> str:
        return poly_to_string(poly, self.names)

    def key(self):
        ideal_key = tuple((g.degree, g.terms) for g in self.ideal)
        return (self.field, self.weights, ideal_key)

    def __repr__(self):
        base = f"K[{', '.join(self.names)}]"
        if any(w != 1 for w in self.weights):
            base += f" weights {self.weights}"
        if self.ideal:
            base += " / (" + ", ".join(self.poly_str(g) for g in self.ideal) + ")"
        return base

    # -- piece machinery -----------------------------------------------------

    def monomial_basis(self, d: int):
        """All monomials of S of weighted degree d, graded-lex order."""
        return self.piece(d).monomials if d >= 0 else []

    def dim_S(self, d: int) -> int:
        return len(self.monomial_basis(d)) if d >= 0 else 0

    def piece(self, d: int) -> _RingPiece:
        pc = self._pieces.get(d)
        if pc is None:
            pc = self._build_piece(d)
            self._pieces[d] = pc
        return pc

    def _build_piece(self, d: int) -> _RingPiece:
        monomials = monomials_of_degree(self.weights, d) if d >= 0 else []
        if not self.ideal or not monomials:
            return _RingPiece(monomials, list(range(len(monomials))), None)
        index = {m: i for i, m in enumerate(monomials)}
        rows = []
        for g in self.ideal:
            if g.degree > d:
                continue
            for u in monomials_of_degree(self.weights, d - g.degree):
                row = [self.field.zero()] * len(monomials)
                for e, c in g.terms:
                    row[index[monomial_mul(u, e)]] = c
                rows.append(row)
        if not rows:
            return _RingPiece(monomials, list(range(len(monomials))), None)
        red, pivots = self.ops.rref(self.ops.mat(rows))
        pivset = set(pivots)
        std = [j for j in range(len(monomials)) if j not in pivset]
        # reduction matrix: e_std -> itself, e_pivot -> -(standard part of its row)
        cols = []
        for j in range(len(monomials)):
            if j in pivset:
                i = pivots.index(j)
                col = [self.field.neg(self.ops.get(red, i, s)) for s in std]
            else:
                col = [self.field.one() if s == j else self.field.zero() for s in std]
            cols.append(col)
        proj = self.ops.from_cols(cols, len(std)) if std else self.ops.zeros(0, len(monomials))
        return _RingPiece(monomials, std, proj)

    def hilbert_function(self, d: int) -> int:
        """dim_K R_d."""
        if d < 0:
            return 0
        return len(self.piece(d).std)

    def std_monomials(self, d: int):
        pc = self.piece(d)
        return [pc.monomials[s] for s in pc.std]

    def reduce_s_vector(self, d: int, vec):
        """Reduce a coordinate vector over S_d into R_d coordinates."""
        pc = self.piece(d)
        if pc.proj is None:
            return vec
        return self.ops.matmul(pc.proj, self.ops.from_cols([vec], len(pc.monomials)))

    def quotient_piece_basis(self, d: int):
        """Basis of R_d as columns inside S_d (standard monomial selection),
        together with its dimension."""
        pc = self.piece(d)
        mat = DenseMatrix.from_raw(self.field, self.ops.unit_cols(len(pc.monomials), pc.std))
        return mat, len(pc.std)

    def mult_monomial_raw(self, u, d: int):
        """Matrix of R_d -> R_{d+deg u}, v -> u*v, in standard bases."""
        du = weighted_degree(u, self.weights)
        src = self.piece(d)
        tgt = self.piece(d + du)
        cols_idx = [tgt.index[monomial_mul(u, src.monomials[s])] for s in src.std]
        if tgt.proj is None:
            return self.ops.unit_cols(len(tgt.std), [tgt.std_index[j] for j in cols_idx])
        return self.ops.take_cols(tgt.proj, cols_idx)

    def mult_var_raw(self, j: int, d: int):
        key = (j, d)
        m = self._var_mult.get(key)
        if m is None:
            u = tuple(1 if t == j else 0 for t in range(self.nvars))
            m = self.mult_monomial_raw(u, d)
            self._var_mult[key] = m
        return m

    def mult_poly_raw(self, f: HomogeneousPolynomial, d: int):
        acc = None
        for e, c in f.terms:
            part = self.ops.scale(self.mult_monomial_raw(e, d), c)
            acc = part if acc is None else self.ops.add(acc, part)
        if acc is None:
            return self.ops.zeros(self.hilbert_function(d + f.degree), self.hilbert_function(d))
        return acc

    def multiplication_map(self, f: HomogeneousPolynomial, d: int) -> DenseMatrix:
        """Matrix of multiplication by f on the degree-d piece of R."""
        return DenseMatrix.from_raw(self.field, self.mult_poly_raw(f, d))

    def poly_to_rvector(self, poly: HomogeneousPolynomial):
        """Coordinates of the class of poly in R_{deg poly}."""
        d = poly.degree
        pc = self.piece(d)
        vec = [self.field.zero()] * len(pc.monomials)
        for e, c in poly.terms:
            vec[pc.index[e]] = self.field.add(vec[pc.index[e]], c)
        if pc.proj is None:
            return vec
        reduced = self.ops.matmul(pc.proj, self.ops.from_cols([vec], len(pc.monomials)))
        return self.ops.getcol(reduced, 0)

    def rvector_to_poly(self, d: int, coords) -> HomogeneousPolynomial:
        std = self.std_monomials(d)
        acc = {}
        for mono, c in zip(std, coords):
            if not self.field.is_zero(c):
                acc[mono] = c
        return poly_from_terms(self.field, self.weights, acc)


# ---------------------------------------------------------------------------
# Veronese subrings


def binomial(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def veronese_presentation(poly_spec: GradedAlgebraSpec, d: int,
                          relation_degree_cap: int = 2,
                          certify_upto: int | None = None) -> GradedAlgebraSpec:
    """Present the d-th Veronese subring of a standard graded polynomial ring
    as T/J with one degree-one variable per degree-d monomial.

    Relations are found degree by degree as kernels of the monomial
    substitution map, up to `relation_degree_cap`.  The claim that the found
    relations generate is guarded by comparing Hilbert functions of T/J and
    of i -> dim S_{i*d} up to `certify_upto`; a mismatch raises
    CertificateError (raise the cap).
    """
    if poly_spec.ideal:
        raise ValueError("Veronese base must be a polynomial ring")
    if not poly_spec.is_standard_graded:
        raise ValueError("Veronese base must be standard graded")
    if d < 1:
        raise ValueError("Veronese index must be >= 1")
    if certify_upto is None:
        certify_upto = max(4, relation_degree_cap + 2)

    field = poly_spec.field
    ops = poly_spec.ops
    base_monos = monomials_of_degree(poly_spec.weights, d)
    nT = len(base_monos)
    t_weights = (1,) * nT
    t_names = tuple(f"v{i}" for i in range(nT))

    def substitute(t_mono):
        # image in S of a T-monomial: exponent sum of the base monomials
        out = tuple([0] * poly_spec.nvars)
        for i, e in enumerate(t_mono):
            for _ in range(e):
                out = monomial_mul(out, base_monos[i])
        return out

    relations = []
    prev_kernel_cols: list = []
    prev_t_monos: list = []
    for e in range(1, relation_degree_cap + 1):
        t_monos = monomials_of_degree(t_weights, e)
        s_monos = monomials_of_degree(poly_spec.weights, e * d)
        s_index = {m: i for i, m in enumerate(s_monos)}
        cols = []
        for tm in t_monos:
            col = [field.zero()] * len(s_monos)
            col[s_index[substitute(tm)]] = field.one()
            cols.append(col)
        phi = ops.from_cols(cols, len(s_monos))
        ker = ops.kernel_basis(phi)
        nker = ops.shape(ker)[1]
        # span of variable multiples of the previous kernel
        red, pivots = ops.empty_red(len(t_monos))
        t_index = {m: i for i, m in enumerate(t_monos)}
        for v_idx in range(len(prev_kernel_cols)):
            vec = prev_kernel_cols[v_idx]
            for j in range(nT):
                shifted = [field.zero()] * len(t_monos)
                for pos, c in enumerate(vec):
                    if not field.is_zero(c):
                        tm = prev_t_monos[pos]
                        shifted[t_index[monomial_mul(tm, tuple(1 if t == j else 0 for t in range(nT)))]] = c
                red, pivots, _ = ops.rref_append(red, pivots, ops.vec(shifted))
        for t in range(nker):
            vec = ops.getcol(ker, t)
            red2, piv2, accepted = ops.rref_append(red, pivots, ops.vec(vec))
            if accepted:
                red, pivots = red2, piv2
                acc = {}
                for pos, c in enumerate(vec):
                    if not field.is_zero(c):
                        acc[t_monos[pos]] = c
                relations.append(poly_from_terms(field, t_weights, acc))
        prev_kernel_cols = [ops.getcol(ker, t) for t in range(nker)]
        prev_t_monos = t_monos

    out = GradedAlgebraSpec(field, t_weights, names=t_names, ideal=relations)
    for i in range(certify_upto + 1):
        expect = poly_spec.dim_S(i * d)
        got = out.hilbert_function(i)
        if got != expect:
            raise CertificateError(
                f"Veronese Hilbert check failed at degree {i}: {got} != {expect}; "
                f"raise relation_degree_cap"
            )
    out.veronese_certificate = {"base": poly_spec.key(), "d": d, "checked_upto": certify_upto}
    return out
