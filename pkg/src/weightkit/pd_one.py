"""Homological criteria over rings of global dimension at most one.

Over ℤ and over fields every bounded complex of free modules splits as a
sum of its homology groups placed in the right degrees.  Consequently Hom
sets in the homotopy category, the killing of weights and the absence of
weights are all read off from homology and ``Ext^1``:

* ``Hom(M, N) ≅ ∏_j Hom(H_j M, H_j N) ⊕ ∏_j Ext(H_j M, H_{j+1} N)``;
* ``g`` kills weight ``m`` iff ``H_m(g) = 0``, the ``Ext`` class of ``g``
  in ``Ext(H_{m-1} M, H_m N)`` vanishes and ``H_{m-1}(g)`` factors
  through a free group;
* ``M`` is without weights ``m..n`` iff ``H_j M = 0`` for ``m ≤ j ≤ n``
  and ``H_{m-1} M`` is free.

A homomorphism of finitely generated abelian groups factors through a
free group exactly when it vanishes on the torsion subgroup of its source:
such a map factors through ``A / A_tors``, which is free; conversely a map
into a free (torsion-free) group kills torsion.  :func:`factors_through_free`
uses this test.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .complexes import (ChainMap, Complex, FgModule, canonical_decompose, dual_complex,
                        hom_group, homology, homology_mod_presentation)
from .errors import InvalidRange, RingMismatch, UnsupportedRing
from .ring_linalg import CoeffRing, Matrix


def _require_pid(ring: CoeffRing):
    if not ring.supports_snf:
        raise UnsupportedRing("this criterion is stated over the integers or a field")


# ---------------------------------------------------------------------------
# Hom and Ext of finitely generated modules

def hom_fg(A: FgModule, B: FgModule) -> FgModule:
    """``Hom(A, B)`` for finitely generated modules."""
    if A.ring != B.ring:
        raise RingMismatch("modules over different rings")
    ring = A.ring
    orders = [0] * (A.rank * B.rank)
    orders += list(B.torsion) * A.rank
    for d in A.torsion:
        orders += [gcd(d, e) for e in B.torsion]
    return FgModule.from_cyclic(ring, orders)


def ext1(A: FgModule, B: FgModule) -> FgModule:
    """``Ext^1(A, B) = ⊕_i B / d_i B`` over the torsion factors ``d_i`` of ``A`` (zero over fields)."""
    if A.ring != B.ring:
        raise RingMismatch("modules over different rings")
    if A.ring.tag != "Z":
        if not A.ring.supports_snf:
            raise UnsupportedRing("Ext is computed over the integers or a field")
        return FgModule.zero(A.ring)
    orders = []
    for d in A.torsion:
        orders += [d] * B.rank
        orders += [gcd(d, e) for e in B.torsion]
    return FgModule.from_cyclic(A.ring, orders)


@dataclass
class HomDecomposition:
    hom_part: FgModule
    ext_part: FgModule
    predicted: FgModule
    actual: FgModule

    @property
    def matches(self) -> bool:
        return self.predicted == self.actual


def _homology_range(M: Complex, N: Complex):
    lows = [-X.hi for X in (M, N) if not X.is_zero()]
    highs = [-X.lo for X in (M, N) if not X.is_zero()]
    if not lows:
        return range(0)
    return range(min(lows) - 1, max(highs) + 2)


def hom_decomposition(M: Complex, N: Complex) -> HomDecomposition:
    """Predict ``Hom(M, N)`` from homology and compare with the direct computation."""
    if M.ring != N.ring:
        raise RingMismatch("complexes over different rings")
    _require_pid(M.ring)
    ring = M.ring
    hom_part = FgModule.zero(ring)
    ext_part = FgModule.zero(ring)
    for j in _homology_range(M, N):
        HM = homology(M, j)
        hom_part = hom_part + hom_fg(HM, homology(N, j))
        ext_part = ext_part + ext1(HM, homology(N, j + 1))
    return HomDecomposition(hom_part, ext_part, hom_part + ext_part, hom_group(M, N))


# ---------------------------------------------------------------------------
# Maps of finitely generated modules

@dataclass
class FgModuleMap:
    """A homomorphism given on generators of prescribed orders (0 = infinite).

    ``matrix[r][c]`` is the ``r``-th coordinate of the image of the ``c``-th
    source generator; coordinates on a target generator of order ``e`` are
    read modulo ``e``.
    """

    ring: CoeffRing
    src_orders: tuple
    tgt_orders: tuple
    matrix: list

    def __post_init__(self):
        self.src_orders = tuple(self.src_orders)
        self.tgt_orders = tuple(self.tgt_orders)
        if len(self.matrix) != len(self.tgt_orders) or any(len(r) != len(self.src_orders) for r in self.matrix):
            raise ValueError("matrix shape does not match the generator lists")
        if not self.well_defined():
            raise ValueError("the matrix does not define a homomorphism")

    @property
    def src(self) -> FgModule:
        return FgModule.from_cyclic(self.ring, self.src_orders)

    @property
    def tgt(self) -> FgModule:
        return FgModule.from_cyclic(self.ring, self.tgt_orders)

    def _zero_entry(self, v, e) -> bool:
        return (v % e == 0) if e else not v

    def image_is_zero(self, c: int) -> bool:
        return all(self._zero_entry(self.matrix[r][c], e) for r, e in enumerate(self.tgt_orders))

    def well_defined(self) -> bool:
        for c, d in enumerate(self.src_orders):
            if d:
                for r, e in enumerate(self.tgt_orders):
                    if not self._zero_entry(d * self.matrix[r][c], e):
                        return False
        return True

    def is_zero(self) -> bool:
        return all(self.image_is_zero(c) for c in range(len(self.src_orders)))

    def kills_torsion(self) -> bool:
        return all(self.image_is_zero(c) for c, d in enumerate(self.src_orders) if d)


def factors_through_free(phi: FgModuleMap) -> bool:
    """Whether ``phi`` factors through a free module (equivalently, kills the source torsion)."""
    return phi.kills_torsion()


def homology_map(g: ChainMap, j: int) -> FgModuleMap:
    """``H_j(g)`` in canonical generators."""
    _require_pid(g.ring)
    return _induced(g.comp(-j), homology_mod_presentation(g.src, j, 0), homology_mod_presentation(g.tgt, j, 0),
                    g.ring)


def _induced(F: Matrix, sp, tp, ring) -> FgModuleMap:
    cols = []
    for gen in sp.gens:
        x = F @ Matrix._raw(ring, len(gen), 1, [[v] for v in gen])
        cols.append(tp.coords([x[s, 0] for s in range(x.rows)]))
    mat = [[cols[c][r] for c in range(len(cols))] for r in range(len(tp.gens))]
    return FgModuleMap(ring, sp.orders, tp.orders, mat)


# ---------------------------------------------------------------------------
# Ext class of a chain map

@dataclass
class ExtClass:
    """An element of ``Ext^1(H_{m-1} src, H_m tgt)``.

    ``orders`` lists the cyclic summands ``Ext(ℤ/d, C)`` for each source
    torsion piece ``ℤ/d`` and each target piece ``C`` (``C = ℤ`` gives
    ``ℤ/d``, ``C = ℤ/e`` gives ``ℤ/gcd(d, e)``); ``element`` holds the
    coordinates in that decomposition.
    """

    group: FgModule
    orders: tuple
    element: tuple

    def is_zero(self) -> bool:
        return all(v % o == 0 for v, o in zip(self.element, self.orders))


def ext_class_of(g: ChainMap, m: int) -> ExtClass:
    """The class of ``g`` in ``Ext(H_{m-1}(src), H_m(tgt))``."""
    _require_pid(g.ring)
    ring = g.ring
    if ring.tag != "Z":
        return ExtClass(FgModule.zero(ring), (), ())
    cs = canonical_decompose(g.src)
    ct = canonical_decompose(g.tgt)
    deg = -m
    G = ct.iso @ g @ cs.inverse
    comp = G.comp(deg)
    orders, elem = [], []
    for ks, ps in enumerate(cs.pieces):
        if ps.kind != "torsion" or ps.j != m - 1:
            continue
        col = cs.slots[ks][deg]
        for kt, pt in enumerate(ct.pieces):
            if pt.j != m:
                continue
            row = ct.slots[kt][deg]
            o = ps.d if pt.kind == "free" else gcd(ps.d, pt.d)
            if o == 1:
                continue
            orders.append(o)
            elem.append(comp[row, col] % o)
    return ExtClass(FgModule.from_cyclic(ring, orders), tuple(orders), tuple(elem))


# ---------------------------------------------------------------------------
# Criteria

def kill_criterion_pd1(g: ChainMap, m: int) -> bool:
    """``g`` kills weight ``m``, decided from homology and the Ext class."""
    _require_pid(g.ring)
    if not homology_map(g, m).is_zero():
        return False
    if not ext_class_of(g, m).is_zero():
        return False
    return factors_through_free(homology_map(g, m - 1))


def without_weights_pd1(M: Complex, m: int, n: int) -> bool:
    """``H_j M = 0`` for ``m ≤ j ≤ n`` and ``H_{m-1} M`` free."""
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    _require_pid(M.ring)
    if any(not homology(M, j).is_zero() for j in range(m, n + 1)):
        return False
    return homology(M, m - 1).is_free()


def skeleton_membership(M: Complex, n: int) -> bool:
    """``M ∈ w_{≤n}``: no homology above ``n`` and ``H_n`` free."""
    _require_pid(M.ring)
    top = -M.lo if not M.is_zero() else n
    if any(not homology(M, i).is_zero() for i in range(n + 1, top + 1)):
        return False
    return homology(M, n).is_free()


def coskeleton_membership(M: Complex, n: int) -> bool:
    """``M ∈ w_{≥n}``: no homology below ``n`` (no freeness condition)."""
    _require_pid(M.ring)
    bottom = -M.hi if not M.is_zero() else n
    return all(homology(M, j).is_zero() for j in range(bottom, n))


# ---------------------------------------------------------------------------
# Coefficient (co)homology

HOMOLOGICAL = "tensor"
COHOMOLOGICAL = "hom"


def _cyclic_summands(gamma: FgModule) -> list[int]:
    return list(gamma.cyclic_orders)


def _coefficient_presentations(M: Complex, gamma: FgModule, j: int, variance: str):
    _require_pid(M.ring)
    if gamma.ring != M.ring:
        raise RingMismatch("coefficient module over a different ring")
    if variance == HOMOLOGICAL:
        return [homology_mod_presentation(M, j, c) for c in _cyclic_summands(gamma)]
    if variance == COHOMOLOGICAL:
        D = dual_complex(M)
        return [homology_mod_presentation(D, -j, c) for c in _cyclic_summands(gamma)]
    raise ValueError(f"variance must be {HOMOLOGICAL!r} or {COHOMOLOGICAL!r}")


def coefficient_homology(M: Complex, gamma: FgModule, j: int, variance: str = HOMOLOGICAL) -> FgModule:
    """``H_j(M ⊗ Γ)`` (``variance='tensor'``) or ``H^j(Hom(M, Γ))`` (``variance='hom'``)."""
    out = FgModule.zero(M.ring)
    for p in _coefficient_presentations(M, gamma, j, variance):
        out = out + p.module
    return out


def coefficient_homology_maps(g: ChainMap, gamma: FgModule, j: int,
                              variance: str = HOMOLOGICAL) -> list[FgModuleMap]:
    """The induced maps, one per cyclic summand of ``Γ``.

    Homologically ``H_j(g ⊗ Γ)``; cohomologically ``H^j(Hom(g, Γ))``, which
    runs from the target's group to the source's.
    """
    ring = g.ring
    if variance == HOMOLOGICAL:
        sps = _coefficient_presentations(g.src, gamma, j, variance)
        tps = _coefficient_presentations(g.tgt, gamma, j, variance)
        F = g.comp(-j)
        return [_induced(F, s, t, ring) for s, t in zip(sps, tps)]
    sps = _coefficient_presentations(g.tgt, gamma, j, variance)
    tps = _coefficient_presentations(g.src, gamma, j, variance)
    F = g.comp(-j).T
    return [_induced(F, s, t, ring) for s, t in zip(sps, tps)]


def coefficient_vanishes(g: ChainMap, gamma: FgModule, j: int, variance: str = HOMOLOGICAL) -> bool:
    return all(f.is_zero() for f in coefficient_homology_maps(g, gamma, j, variance))


def coefficient_family(ring: CoeffRing, extra: Sequence[FgModule] = ()) -> list[FgModule]:
    """The finite coefficient family: ``R``, ``ℤ/q`` for prime powers ``q ≤ 16``, plus ``extra``."""
    out = [FgModule(ring, 1)]
    if ring.tag == "Z":
        for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16):
            out.append(FgModule(ring, 0, (q,)))
    for G in extra:
        if G not in out and not G.is_zero():
            out.append(G)
    return out
