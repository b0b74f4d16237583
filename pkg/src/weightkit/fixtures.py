"""Small named complexes used throughout the tests, the CLI and the docs.

``S``   the ring in degree 0.
``T2``  ``R →2 R`` in degrees -1, 0 (homology ``ℤ/2`` in weight 0).
``W``   ``S[1] ⊕ S[-1]``.
``Pb``  dims 2, 2, 2 in degrees -1, 0, 1 with differentials
        ``[[1,0],[0,0]]`` and ``[[0,0],[0,1]]``; over a field it is
        without weight 0 but its avoiding parts have odd Euler characteristic.
``fT``  ``T2 → S[1]``, the identity in degree -1.
``Ma``  the triple ``(L, 0, L)``.
"""

from __future__ import annotations

from .complexes import ChainMap, Complex, direct_sum, shift
from .counterexamples import TripleObject
from .ring_linalg import QQ, ZZ, CoeffRing, Matrix


def S(ring: CoeffRing = ZZ) -> Complex:
    return Complex.concentrated(ring, 0)


def T2(ring: CoeffRing = ZZ) -> Complex:
    return Complex.two_term(ring, -1, [[2]])


def W(ring: CoeffRing = ZZ) -> Complex:
    return direct_sum([shift(S(ring), 1), shift(S(ring), -1)])


def Pb(ring: CoeffRing = QQ) -> Complex:
    return Complex(ring, -1, [2, 2, 2], [Matrix.from_rows(ring, [[1, 0], [0, 0]]),
                                          Matrix.from_rows(ring, [[0, 0], [0, 1]])])


def fT(ring: CoeffRing = ZZ) -> ChainMap:
    return ChainMap(T2(ring), shift(S(ring), 1), {-1: Matrix.from_rows(ring, [[1]])})


def Ma(ring: CoeffRing = QQ) -> TripleObject:
    L = Complex.concentrated(ring, 0)
    return TripleObject(L, Complex.zero(ring), L)


def scalar_map(M: Complex, c) -> ChainMap:
    """``c · id_M``."""
    return ChainMap.identity(M).scale(c)
