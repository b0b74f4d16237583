"""Base change from dual numbers ``F_p[e]/e^2`` to ``F_p``.

The functor sends ``a + b·e`` to ``a`` entrywise.  It is termwise, so it
preserves the stupid weight classes, it is full on the heart, and an
endomorphism of a free module killed by it has all entries in ``(e)`` and
so squares to zero.  Those are the hypotheses under which a functor
detects the absence of weights: if the reduction of ``M`` is without
weights ``m..n`` then so is ``M``.  :func:`conservativity_check` tests
that implication on a given complex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainMap, Complex
from .errors import InvalidRange, UnsupportedRing
from .ring_linalg import CoeffRing, Matrix
from .weights import KillCertificate, without_weights


def _residue_ring(ring: CoeffRing) -> CoeffRing:
    if ring.tag != "Zeps":
        raise UnsupportedRing("reduction is defined on complexes over dual numbers")
    return CoeffRing.prime_field(ring.p)


def reduce_matrix(A: Matrix) -> Matrix:
    return A.map(_residue_ring(A.ring), lambda x: x.a)


def reduce_mod_eps(M: Complex) -> Complex:
    """Entrywise ``a + b·e ↦ a``."""
    F = _residue_ring(M.ring)
    if M.is_zero():
        return Complex.zero(F)
    return Complex(F, M.lo, M.dims, [reduce_matrix(d) for d in M.diffs])


def reduce_map_mod_eps(f: ChainMap) -> ChainMap:
    return ChainMap(reduce_mod_eps(f.src), reduce_mod_eps(f.tgt),
                    {i: reduce_matrix(m) for i, m in f.comps.items()})


def square_zero_on_kernel(A: Matrix) -> bool:
    """For a square matrix killed by reduction, check ``A·A = 0``; vacuously true otherwise."""
    if not reduce_matrix(A).is_zero():
        return True
    return (A @ A).is_zero()


@dataclass
class ConservativityReport:
    m: int
    n: int
    reduced_without: bool
    original_without: bool
    witness: KillCertificate | None

    @property
    def vacuous(self) -> bool:
        return not self.reduced_without

    @property
    def implication_holds(self) -> bool:
        return (not self.reduced_without) or self.original_without

    def to_json(self) -> dict:
        return {"range": [self.m, self.n], "reduced_without": self.reduced_without,
                "original_without": self.original_without, "vacuous": self.vacuous,
                "implication_holds": self.implication_holds}


def conservativity_check(M: Complex, m: int, n: int) -> ConservativityReport:
    """Compare "without weights ``m..n``" before and after reduction."""
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    FM = reduce_mod_eps(M)
    red = without_weights(FM, m, n) is not None
    cert = without_weights(M, m, n)
    return ConservativityReport(m, n, red, cert is not None, cert)
