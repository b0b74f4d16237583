"""Two small categories whose weight structures are not weight-Karoubian.

Triples.  Objects are triples ``(M1, M2, M3)`` of complexes over a field
whose total homology dimension is even.  The weight classes are

    w_{≤0} = {M1 ≅ 0, H^i(M2) = 0 for i < 0}
    w_{≥0} = {M3 ≅ 0, H^i(M2) = 0 for i > 0}

and truncation acts on the middle component.  The object ``(L, 0, L)``
has zero weight complex, yet it does not split inside the category into a
left degenerate and a right degenerate part: each part would have odd
total homology.

Even complexes.  Complexes all of whose terms have even dimension.  The
Euler characteristic is then even for every object, so a decomposition
whose components have odd Euler characteristic cannot live inside the
category even though it exists among all complexes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (ChainMap, Complex, brutal_truncation, degreewise_identity, direct_sum,
                        homology, sum_inclusion, sum_projection)
from .errors import InvalidComplex, InvalidRange, UnsupportedRing
from .homotopy import is_null_homotopic
from .weights import avoiding_decomposition, without_weights


def total_homology_dim(M: Complex) -> int:
    """``Σ_i dim H^i(M)`` over a field."""
    if not M.ring.is_field:
        raise UnsupportedRing("total homology dimension is taken over a field")
    if M.is_zero():
        return 0
    return sum(homology(M, -i).rank for i in M.degrees)


def is_acyclic(M: Complex) -> bool:
    return total_homology_dim(M) == 0


# ---------------------------------------------------------------------------
# Triples

@dataclass(frozen=True)
class TripleObject:
    c1: Complex
    c2: Complex
    c3: Complex

    def __post_init__(self):
        rings = {self.c1.ring, self.c2.ring, self.c3.ring}
        if len(rings) != 1 or not self.c1.ring.is_field:
            raise UnsupportedRing("triple components must share one field")
        if self.parity() % 2:
            raise InvalidComplex("total homology dimension of a triple must be even")

    @classmethod
    def unchecked(cls, c1: Complex, c2: Complex, c3: Complex) -> "TripleObject":
        """Build a triple without the parity condition (for reporting on candidate parts)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "c1", c1)
        object.__setattr__(obj, "c2", c2)
        object.__setattr__(obj, "c3", c3)
        return obj

    @property
    def ring(self):
        return self.c1.ring

    def parity(self) -> int:
        return sum(total_homology_dim(c) for c in (self.c1, self.c2, self.c3))

    def in_category(self) -> bool:
        return self.parity() % 2 == 0

    def in_le(self, n: int) -> bool:
        """Membership in ``w_{≤n}``."""
        M2 = self.c2
        return is_acyclic(self.c1) and all(homology(M2, -i).is_zero() for i in M2.degrees if i < -n)

    def in_ge(self, n: int) -> bool:
        """Membership in ``w_{≥n}``."""
        M2 = self.c2
        return is_acyclic(self.c3) and all(homology(M2, -i).is_zero() for i in M2.degrees if i > -n)


@dataclass
class TripleDecomposition:
    """``lower → M → upper`` with componentwise maps."""

    M: TripleObject
    n: int
    lower: TripleObject
    upper: TripleObject
    incl: tuple
    proj: tuple
    padded: bool = False


def _triple_recipe(M: TripleObject, n: int):
    ring = M.ring
    Z = Complex.zero(ring)
    low2 = brutal_truncation(M.c2, -n, None)
    up2 = brutal_truncation(M.c2, None, -n - 1)
    lower = TripleObject.unchecked(Z, low2, M.c3)
    upper = TripleObject.unchecked(M.c1, up2, Z)
    return lower, upper


def triple_obstruction(M: TripleObject, n: int) -> str | None:
    """Why the middle-truncation recipe fails at ``n`` (``None`` if it works)."""
    lower, upper = _triple_recipe(M, n)
    pl, pu = lower.parity(), upper.parity()
    if pl % 2 or pu % 2:
        return f"components have odd parity {pl} and {pu}"
    return None


def triple_weight_decompose(M: TripleObject, n: int, pad_parity: bool = False) -> TripleDecomposition | None:
    """Weight decomposition by truncating the middle component, if both parts stay in the category.

    With ``pad_parity`` an obstructed recipe is repaired by adding ``A`` to
    the lower part and ``A[1]`` to the upper part, where ``A`` is a copy of
    the field in the middle component at weight ``n``; this shows that the
    category still has weight decompositions even when the recipe fails.
    """
    ring = M.ring
    lower, upper = _triple_recipe(M, n)
    low2, up2 = lower.c2, upper.c2
    incl2 = degreewise_identity(low2, M.c2)
    proj2 = degreewise_identity(M.c2, up2)
    padded = False
    if lower.parity() % 2 or upper.parity() % 2:
        if not pad_parity:
            return None
        A = Complex.concentrated(ring, -n)
        A1 = Complex.concentrated(ring, -n - 1)
        lower = TripleObject.unchecked(lower.c1, direct_sum([low2, A]), lower.c3)
        upper = TripleObject.unchecked(upper.c1, direct_sum([up2, A1]), upper.c3)
        # the pad maps to and from M by zero
        incl2 = incl2 @ sum_projection([low2, A], 0)
        proj2 = sum_inclusion([up2, A1], 0) @ proj2
        padded = True
    lower = TripleObject(lower.c1, lower.c2, lower.c3)
    upper = TripleObject(upper.c1, upper.c2, upper.c3)
    incl = (ChainMap.zero(lower.c1, M.c1), incl2, ChainMap.identity(M.c3))
    proj = (ChainMap.identity(M.c1), proj2, ChainMap.zero(M.c3, upper.c3))
    return TripleDecomposition(M, n, lower, upper, incl, proj, padded)


@dataclass
class DegeneracyReport:
    degenerate: bool
    left: TripleObject
    right: TripleObject
    left_parity: int
    right_parity: int

    @property
    def decomposable_in_category(self) -> bool:
        """Whether the left/right degenerate parts both lie in the category."""
        return self.degenerate and self.left_parity % 2 == 0 and self.right_parity % 2 == 0

    def to_json(self) -> dict:
        return {"degenerate": self.degenerate, "left_parity": self.left_parity,
                "right_parity": self.right_parity,
                "decomposable_in_category": self.decomposable_in_category}


def triple_degeneracy_report(M: TripleObject) -> DegeneracyReport:
    """Weight complex vanishing and the parities of the ambient degenerate parts."""
    ring = M.ring
    Z = Complex.zero(ring)
    degenerate = is_null_homotopic(ChainMap.identity(M.c2)) is not None
    left = TripleObject.unchecked(M.c1, Z, Z)
    right = TripleObject.unchecked(Z, Z, M.c3)
    return DegeneracyReport(degenerate, left, right, left.parity(), right.parity())


# ---------------------------------------------------------------------------
# Even complexes

@dataclass(frozen=True)
class EvenComplex:
    underlying: Complex

    def __post_init__(self):
        if not self.underlying.ring.is_field:
            raise UnsupportedRing("even complexes live over a field")
        if any(d % 2 for d in self.underlying.dims):
            raise InvalidComplex("every term of an even complex must have even dimension")


@dataclass
class EvenObstructionReport:
    m: int
    n: int
    without_weights: bool
    chi_lower: int | None = None
    chi_upper: int | None = None
    lower: Complex | None = None
    upper: Complex | None = None

    @property
    def exists_in_category(self) -> bool:
        """Whether an avoiding decomposition can be found among even complexes."""
        return (self.without_weights and self.chi_lower % 2 == 0 and self.chi_upper % 2 == 0)

    @property
    def obstructed(self) -> bool:
        return self.without_weights and not self.exists_in_category

    def to_json(self) -> dict:
        return {"range": [self.m, self.n], "without_weights": self.without_weights,
                "euler_characteristics": [self.chi_lower, self.chi_upper],
                "exists_in_category": self.exists_in_category, "obstructed": self.obstructed}


def even_obstruction(M: EvenComplex, m: int, n: int) -> EvenObstructionReport:
    """Decide whether an even complex without weights ``m..n`` has an even avoiding decomposition.

    The Euler characteristic is a homotopy invariant, even on the whole
    category; an ambient avoiding decomposition with an odd component
    therefore has no counterpart among even complexes, and since avoiding
    decompositions are unique up to isomorphism no other one exists.
    """
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    C = M.underlying
    if without_weights(C, m, n) is None:
        return EvenObstructionReport(m, n, False)
    ad = avoiding_decomposition(C, m, n)
    return EvenObstructionReport(m, n, True, ad.X.euler_characteristic(), ad.Y.euler_characteristic(),
                                 ad.X, ad.Y)
