"""Regularity read-offs from Betti tables: Tor-regularity, linear-resolution
predicates, and the bounded Koszul probe.

Statuses are honest: a value read from a truncated box is only a lower
bound.  Over a ring whose Koszul probe passed, two upgrades are available:
the box value meeting the local-regularity upper bound pins the value
exactly (conditional on Koszulness), and a box that is fully linear at the
generator degree pins it through the truncation characterization
(conditional on Koszulness and on the box caps).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import NonStandardGrading, ZeroModuleError
from .modules import PresentedModule, residue_field_module
from .resolution import BettiTable, Resolution, minimal_free_resolution

EXACT = "exact"
LOWER_BOUND = "lower-bound"
UNKNOWN = "unknown"

LINEAR_YES = "yes"
LINEAR_NO = "no"
LINEAR_YES_UP_TO_CAPS = "yes-up-to-caps"


@dataclass(frozen=True)
class RegularityValue:
    """An integer invariant with a certainty status.

    `koszul_conditional` marks values that are exact only conditional on the
    (finitely unprovable) Koszul property of the ring, plus box sufficiency
    where noted in the witness.
    """

    value: int
    status: str
    koszul_conditional: bool = False
    witness: tuple | None = None

    def describe(self) -> str:
        flag = " [exact-conditional-on-Koszul]" if self.koszul_conditional else ""
        return f"{self.value} ({self.status}{flag})"


def tor_regularity(table: BettiTable) -> RegularityValue:
    """max(j - i) over the nonzero Betti entries; exact iff the table is
    complete."""
    if not table.entries:
        raise ZeroModuleError("empty Betti table")
    value = max(j - i for i, j in table.entries)
    witness = min((i, j) for i, j in table.entries if j - i == value)
    status = EXACT if table.complete else LOWER_BOUND
    return RegularityValue(value, status, witness=witness)


def is_linear_resolution(table: BettiTable, q: int) -> str:
    """Whether all entries sit on slope q.  Truncated tables can refute
    definitively but confirm only up to caps."""
    if not table.entries:
        raise ZeroModuleError("empty Betti table")
    if any(j - i != q for i, j in table.entries):
        return LINEAR_NO
    return LINEAR_YES if table.complete else LINEAR_YES_UP_TO_CAPS


def upgrade_status(rv: RegularityValue, table: BettiTable, koszul_passed: bool,
                   reg_local_module: int | None = None) -> RegularityValue:
    """Apply the exact-conditional-on-Koszul upgrades to a boxed value."""
    if rv.status == EXACT or not koszul_passed:
        return rv
    if reg_local_module is not None and rv.value == reg_local_module:
        # upper bound reg^T <= reg^L over a Koszul ring meets the box value
        return replace(rv, status=EXACT, koszul_conditional=True,
                       witness=("upper-bound-met", rv.value))
    gen_degrees = {j for i, j in table.entries if i == 0}
    if len(gen_degrees) == 1:
        q0 = gen_degrees.pop()
        if rv.value == q0 and is_linear_resolution(table, q0) != LINEAR_NO:
            # fully linear box at the generator degree: the truncation
            # characterization pins the value, conditional on the box
            return replace(rv, status=EXACT, koszul_conditional=True,
                           witness=("linear-box", q0))
    return rv


def module_tor_regularity(module: PresentedModule, hom_cap=None,
                          degree_cap=None):
    """Tor-regularity of a module, with its Betti table.

    Free modules are read off directly (max twist, exact) without resolving.
    """
    if not module.relations:
        if module.is_zero_module():
            raise ZeroModuleError("zero module has no regularity")
        entries: dict = {}
        for a in module.gens:
            entries[(0, a)] = entries.get((0, a), 0) + 1
        table = BettiTable(
            entries, 0, max(module.gens),
            "S" if module.spec.is_polynomial_ring else "R",
            complete=True, pd=0,
        )
        return RegularityValue(max(module.gens), EXACT,
                               witness=(0, max(module.gens))), table
    res = minimal_free_resolution(module, hom_cap=hom_cap, degree_cap=degree_cap)
    table = res.betti_table()
    return tor_regularity(table), table


@dataclass
class KoszulProbe:
    """Bounded probe: a diagonal Betti box of K is evidence, an off-diagonal
    entry is a definitive refutation."""

    passed: bool
    hom_cap: int
    degree_cap: int
    witness: tuple | None
    table: BettiTable

    def describe(self) -> str:
        if self.passed:
            return f"koszul-up-to({self.hom_cap})"
        i, j = self.witness
        return f"not-koszul (witness beta_{{{i},{j}}} != 0)"


def koszul_probe(spec, hom_cap=6, degree_cap=None) -> KoszulProbe:
    """Probe the Koszul property by resolving K inside a box."""
    if not spec.is_standard_graded:
        raise NonStandardGrading("the Koszul property presumes a standard grading")
    if degree_cap is None:
        degree_cap = hom_cap + 2
    k = residue_field_module(spec)
    res = minimal_free_resolution(k, hom_cap=hom_cap, degree_cap=degree_cap)
    table = res.betti_table()
    off = sorted((i, j) for i, j in table.entries if j != i)
    if off:
        return KoszulProbe(False, hom_cap, degree_cap, off[0], table)
    return KoszulProbe(True, hom_cap, degree_cap, None, table)
