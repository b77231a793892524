"""Finitely generated graded modules, given by homogeneous presentations
between twisted free modules.

A presentation is a target ⊕ R(-a_i) plus relation columns, each column a
homogeneous vector stored in the coordinates of the target piece at the
column's degree.  Pieces, Hilbert functions and the module action on pieces
are all computed by row reduction of expanded relation matrices.

Constructors for the derived modules the regularity theory needs live here
too: truncation M_{>=q}, powers of the maximal ideal, the residue field,
and Matlis duals of finite-length modules.  They all run through one
presenter that selects minimal generators of a degreewise-described module
and certifies the resulting presentation against the expected Hilbert
function window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CertificateError,
    InhomogeneousInput,
    NonStandardGrading,
    NotFiniteLength,
    ZeroModuleError,
    ZeroTruncationError,
)
from .ring import GradedAlgebraSpec, HomogeneousPolynomial
from .spaces import (
    ColumnExpander,
    FreeSpace,
    kernel_module_generators,
    minimal_space_generators,
)

_FINITE_LENGTH_SCAN_LIMIT = 512


@dataclass(frozen=True)
class FreeGradedModule:
    """⊕ R(-a_i); the order of the twists is the row identity of
    presentation matrices."""

    twists: tuple


@dataclass
class ModulePiece:
    degree: int
    dim: int
    sel: list  # positions inside the free piece forming the canonical basis
    proj: object  # reduction matrix (dim x free dim), None = identity


class PresentedModule:
    """Graded module presented as coker of relation columns into ⊕ R(-a_i)."""

    def __init__(self, spec: GradedAlgebraSpec, gens, relations, name=None):
        self.spec = spec
        self.gens = tuple(int(a) for a in gens)
        self.free = FreeSpace(spec, self.gens)
        rels = []
        for c, vec in relations:
            n = self.free.dim(c)
            if len(vec) != n:
                raise InhomogeneousInput(
                    f"relation at degree {c} has length {len(vec)}, expected {n}"
                )
            if all(spec.field.is_zero(x) for x in vec):
                raise InhomogeneousInput("zero relation columns are not allowed")
            rels.append((int(c), list(vec)))
        self.relations = rels
        self.name = name
        self._pieces: dict = {}
        self._mult: dict = {}
        self._rel_expander = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def free_module(cls, spec, twists, name=None):
        return cls(spec, twists, [], name=name)

    @classmethod
    def from_polynomial_columns(cls, spec, twists, columns, name=None):
        """Build from a matrix of polynomials: columns[j][i] is the entry of
        relation j against generator i (None or 0-polynomial for zero)."""
        twists = tuple(int(a) for a in twists)
        free = FreeSpace(spec, twists)
        rels = []
        for col in columns:
            if len(col) != len(twists):
                raise InhomogeneousInput("relation column has wrong length")
            degree = None
            for i, p in enumerate(col):
                if p is None or p.is_zero():
                    continue
                c = twists[i] + p.degree
                if degree is None:
                    degree = c
                elif degree != c:
                    raise InhomogeneousInput(
                        f"relation column mixes degrees {degree} and {c}"
                    )
            if degree is None:
                raise InhomogeneousInput("zero relation columns are not allowed")
            vec = [spec.field.zero()] * free.dim(degree)
            offs, _ = free.block_offsets(degree)
            for i, p in enumerate(col):
                if p is None or p.is_zero():
                    continue
                coords = spec.poly_to_rvector(p)
                for t, x in enumerate(coords):
                    vec[offs[i] + t] = x
            rels.append((degree, vec))
        return cls(spec, twists, rels, name=name)

    # -- basic structure --------------------------------------------------

    @property
    def min_gen_degree(self):
        return min(self.gens) if self.gens else 0

    @property
    def max_gen_degree(self):
        return max(self.gens) if self.gens else 0

    @property
    def max_relation_degree(self):
        return max((c for c, _ in self.relations), default=None)

    def twist(self, a: int) -> "PresentedModule":
        """M(-a): shift all generator and relation degrees up by a."""
        return PresentedModule(
            self.spec,
            tuple(g + a for g in self.gens),
            [(c + a, vec) for c, vec in self.relations],
        )

    def rel_expander(self) -> ColumnExpander:
        if self._rel_expander is None:
            self._rel_expander = ColumnExpander(self.free, self.relations)
        return self._rel_expander

    def piece(self, d: int) -> ModulePiece:
        pc = self._pieces.get(d)
        if pc is not None:
            return pc
        ops = self.spec.ops
        n = self.free.dim(d)
        if n == 0 or not self.relations:
            pc = ModulePiece(d, n, list(range(n)), None)
        else:
            expanded = self.rel_expander().matrix(d)
            if ops.shape(expanded)[1] == 0:
                pc = ModulePiece(d, n, list(range(n)), None)
            else:
                red, pivots = ops.rref(ops.transpose(expanded))
                pivset = set(pivots)
                sel = [i for i in range(n) if i not in pivset]
                cols = []
                field = self.spec.field
                for jcol in range(n):
                    if jcol in pivset:
                        i = pivots.index(jcol)
                        cols.append([field.neg(ops.get(red, i, s)) for s in sel])
                    else:
                        cols.append(
                            [field.one() if s == jcol else field.zero() for s in sel]
                        )
                proj = (
                    ops.from_cols(cols, len(sel))
                    if sel
                    else ops.zeros(0, n)
                )
                pc = ModulePiece(d, len(sel), sel, proj)
        self._pieces[d] = pc
        return pc

    def hf(self, d: int) -> int:
        """dim_K M_d."""
        return self.piece(d).dim

    def piece_basis_labels(self, d: int):
        labels = self.free.basis(d)
        return [labels[i] for i in self.piece(d).sel]

    def reduce(self, d: int, raw_cols):
        """Project free-piece columns into M_d coordinates."""
        pc = self.piece(d)
        if pc.proj is None:
            return raw_cols
        return self.spec.ops.matmul(pc.proj, raw_cols)

    def lift_matrix(self, d: int):
        """Canonical lift of M_d basis into the free piece (unit columns)."""
        pc = self.piece(d)
        return self.spec.ops.unit_cols(self.free.dim(d), pc.sel)

    def mult_var(self, j: int, d: int):
        key = (j, d)
        m = self._mult.get(key)
        if m is None:
            ops = self.spec.ops
            w = self.spec.weights[j]
            free_mult = self.free.mult_var(j, d)
            m = self.reduce(d + w, ops.matmul(free_mult, self.lift_matrix(d)))
            self._mult[key] = m
        return m

    def dim(self, d: int) -> int:
        # GradedSpace protocol alias
        return self.hf(d)

    def is_zero_module(self) -> bool:
        if not self.gens:
            return True
        w = self.spec.max_weight
        for d in range(self.min_gen_degree, self.max_gen_degree + w + 1):
            if self.hf(d):
                return False
        return True

    def relation_polys(self):
        """Relation columns as polynomial vectors (one entry per generator)."""
        out = []
        for c, vec in self.relations:
            offs, _ = self.free.block_offsets(c)
            col = []
            for i, a in enumerate(self.gens):
                width = self.spec.hilbert_function(c - a)
                col.append(
                    self.spec.rvector_to_poly(c - a, vec[offs[i] : offs[i] + width])
                )
            out.append(col)
        return out

    def __repr__(self):
        nm = self.name or "module"
        return (
            f"<{nm}: gens {list(self.gens)}, {len(self.relations)} relations "
            f"over {self.spec}>"
        )


def module_piece(module: PresentedModule, d: int) -> ModulePiece:
    """The degree-d piece of the module, with its canonical basis."""
    return module.piece(d)


# ---------------------------------------------------------------------------
# degreewise-described spaces used by the presenter


class TruncatedSpace:
    def __init__(self, module: PresentedModule, q: int):
        self.module = module
        self.spec = module.spec
        self.q = q

    def dim(self, d: int) -> int:
        return self.module.hf(d) if d >= self.q else 0

    def mult_var(self, j: int, d: int):
        spec = self.spec
        if d < self.q:
            return spec.ops.zeros(self.dim(d + spec.weights[j]), 0)
        return self.module.mult_var(j, d)


class DualSpace:
    """Graded K-dual with the contragredient action."""

    def __init__(self, module: PresentedModule):
        self.module = module
        self.spec = module.spec

    def dim(self, d: int) -> int:
        return self.module.hf(-d)

    def mult_var(self, j: int, d: int):
        w = self.spec.weights[j]
        return self.spec.ops.transpose(self.module.mult_var(j, -d - w))


def present_from_gens(spec, space, gens, rel_hi, hf_lo, hf_check_hi=None,
                      name=None) -> PresentedModule:
    """Presentation of a degreewise-described module from an already
    selected generating set [(degree, vector)], with the Hilbert-function
    hard check against the space over [hf_lo, hf_check_hi]."""
    if not gens:
        raise ZeroModuleError("space has no generators in the scanned range")
    cols = [(d, vec) for d, vec in gens]
    twists = tuple(d for d, _ in gens)
    src = FreeSpace(spec, twists)
    relations, _ = kernel_module_generators(
        space,
        cols,
        d_lo=min(twists) + 1,
        d_hi=rel_hi,
        kernel_dim_at=lambda d: src.dim(d) - space.dim(d),
    )
    out = PresentedModule(spec, twists, relations, name=name)
    if hf_check_hi is None:
        hf_check_hi = rel_hi + spec.max_weight
    for d in range(hf_lo, hf_check_hi + 1):
        if out.hf(d) != space.dim(d):
            raise CertificateError(
                f"presentation Hilbert check failed at degree {d}: "
                f"{out.hf(d)} != {space.dim(d)}"
            )
    return out


def present_space(spec, space, gen_lo, gen_hi, rel_hi, hf_check_hi=None,
                  name=None) -> PresentedModule:
    """Minimal presentation of a degreewise-described module.

    The space must be generated in degrees <= gen_hi and have all relation
    generators in degrees <= rel_hi; the produced presentation's Hilbert
    function is compared against the space up to hf_check_hi (default:
    rel_hi plus one weight step) and a mismatch raises CertificateError.
    """
    gens = minimal_space_generators(space, gen_lo, gen_hi)
    return present_from_gens(
        spec, space, [(d, vec) for d, _, vec in gens], rel_hi, gen_lo,
        hf_check_hi, name=name,
    )


# ---------------------------------------------------------------------------
# module constructors


def truncate(module: PresentedModule, q: int, rel_hi=None) -> PresentedModule:
    """The truncation M_{>=q}: pieces agree with M from degree q up and
    vanish below."""
    spec = module.spec
    w = spec.max_weight
    top = max(q, module.max_gen_degree)
    if not any(module.hf(d) for d in range(q, top + w + 1)):
        raise ZeroTruncationError(f"module vanishes in all degrees >= {q}")
    gen_hi = top + w - 1
    if rel_hi is None:
        maxrel = module.max_relation_degree
        rel_hi = max(gen_hi + w, q + 1 + (maxrel if maxrel is not None else 0))
    name = f"{module.name or 'M'}>={q}"
    return present_space(
        spec, TruncatedSpace(module, q), q, gen_hi, rel_hi, name=name
    )


def residue_field_module(spec: GradedAlgebraSpec) -> PresentedModule:
    """K = R/m, presented by one degree-0 generator and the minimal
    generators of the maximal ideal as relations."""
    ring_mod = PresentedModule.free_module(spec, (0,), name="R")
    w = spec.max_weight
    mgens = minimal_space_generators(TruncatedSpace(ring_mod, 1), 1, w)
    relations = [(d, vec) for d, _, vec in mgens]
    return PresentedModule(spec, (0,), relations, name="K")


def power_ideal_module(spec: GradedAlgebraSpec, j: int, rel_hi=None) -> PresentedModule:
    """The power m^j of the maximal ideal (standard grading required);
    j = 0 gives R itself."""
    if not spec.is_standard_graded:
        raise NonStandardGrading("powers of m need a standard grading")
    if j < 0:
        raise ValueError("power must be >= 0")
    if j == 0:
        return PresentedModule.free_module(spec, (0,), name="R")
    nj = spec.hilbert_function(j)
    if nj == 0:
        raise ZeroModuleError(f"R has no elements in degree {j}")
    field = spec.field
    cols = []
    for t in range(nj):
        vec = [field.zero()] * nj
        vec[t] = field.one()
        cols.append((j, vec))
    target = FreeSpace(spec, (0,))
    src = FreeSpace(spec, (j,) * nj)
    if rel_hi is None:
        maxideal = max((g.degree for g in spec.ideal), default=2)
        rel_hi = j + max(2, maxideal)
    relations, _ = kernel_module_generators(
        target,
        cols,
        d_lo=j + 1,
        d_hi=rel_hi,
        kernel_dim_at=lambda d: src.dim(d) - spec.hilbert_function(d),
    )
    out = PresentedModule(spec, (j,) * nj, relations, name=f"m^{j}")
    for d in range(j, rel_hi + 2):
        if out.hf(d) != spec.hilbert_function(d):
            raise CertificateError(
                f"power-ideal Hilbert check failed at degree {d}"
            )
    return out


def finite_length_window(module: PresentedModule):
    """Certified support window (lo, hi) of a finite-length module.

    Raises NotFiniteLength when pieces keep appearing past the scan limit,
    ZeroModuleError for the zero module.  The certificate is exact: once a
    module generated in degrees <= a has one weight-span of zero pieces above
    a, every higher piece vanishes.
    """
    if not module.gens:
        raise ZeroModuleError("zero module has no support window")
    spec = module.spec
    w = spec.max_weight
    amax = module.max_gen_degree
    d = module.min_gen_degree
    first = last = None
    consec = 0
    while d <= module.min_gen_degree + _FINITE_LENGTH_SCAN_LIMIT:
        h = module.hf(d)
        if h:
            if first is None:
                first = d
            last = d
            consec = 0
        elif d > amax:
            consec += 1
            if consec >= w:
                if first is None:
                    raise ZeroModuleError("module is zero")
                return first, last
        d += 1
    raise NotFiniteLength(
        "module pieces do not vanish within the scan limit; not finite length"
    )


def top_degree(module: PresentedModule) -> int:
    """Largest degree with a nonzero piece (finite length required)."""
    return finite_length_window(module)[1]


def matlis_dual(module: PresentedModule, rel_hi=None) -> PresentedModule:
    """Graded dual of a finite-length module with the contragredient
    action; Hilbert functions satisfy HF(dual)_i = HF(M)_{-i}."""
    lo, hi = finite_length_window(module)
    spec = module.spec
    w = spec.max_weight
    if rel_hi is None:
        rel_hi = -lo + w + 1
    name = f"dual({module.name})" if module.name else "dual"
    return present_space(
        spec, DualSpace(module), -hi, -lo, rel_hi, name=name
    )
