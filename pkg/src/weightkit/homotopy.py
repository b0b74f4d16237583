"""Homotopy relations between chain maps, decided by exact linear solving.

Three relations are handled:

* null-homotopy, ``f = d x + x d``;
* weak homotopy, ``f - g = d x + y d`` with ``x`` and ``y`` independent;
* the interval relations: ``f - g - m0`` weakly null for a chain map
  ``m0`` whose components vanish in degrees ``k..l``.

Each question is one affine system, so the answers are exact over every
supported ring, including dual numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .complexes import ChainMap, Complex, _support
from .errors import InvalidRange, SourceTargetMismatch
from .linsys import LinearSystem
from .ring_linalg import Matrix

INF = math.inf


@dataclass
class HomotopyWitness:
    """``f^i = d_N^{i-1} x^i + x^{i+1} d_M^i`` for all ``i``."""

    f: ChainMap
    x: dict

    def verify(self) -> bool:
        f = self.f
        M, N = f.src, f.tgt
        for i in f.degrees:
            lhs = N.d(i - 1) @ _get(self.x, i, N.dim(i - 1), M.dim(i), M) + \
                _get(self.x, i + 1, N.dim(i), M.dim(i + 1), M) @ M.d(i)
            if lhs != f.comp(i):
                return False
        return True


@dataclass
class WeakHomotopyWitness:
    """``(f - g - m0)^i = d_N^{i-1} x^i + y^{i+1} d_M^i``; ``m0`` vanishes on ``[k, l]``."""

    f: ChainMap
    g: ChainMap
    x: dict
    y: dict
    m0: ChainMap | None = None
    k: float = INF
    l: float = -INF

    def verify(self) -> bool:
        f, g = self.f, self.g
        M, N = f.src, f.tgt
        m0 = self.m0 or ChainMap.zero(M, N)
        try:
            ChainMap(M, N, m0.comps)
        except Exception:
            return False
        for i in f.degrees:
            if self.k <= i <= self.l and not m0.comp(i).is_zero():
                return False
            lhs = N.d(i - 1) @ _get(self.x, i, N.dim(i - 1), M.dim(i), M) + \
                _get(self.y, i + 1, N.dim(i), M.dim(i + 1), M) @ M.d(i)
            if lhs != f.comp(i) - g.comp(i) - m0.comp(i):
                return False
        return True


def _get(d: dict, i: int, r: int, c: int, M: Complex) -> Matrix:
    m = d.get(i)
    return m if m is not None else Matrix.zeros(M.ring, r, c)


def _check_pair(f: ChainMap, g: ChainMap):
    if f.src != g.src or f.tgt != g.tgt:
        raise SourceTargetMismatch("maps have different source or target")


def _homotopy_unknowns(sysm: LinearSystem, M: Complex, N: Complex, name: str) -> dict:
    hs = {}
    lo, hi = _support(M, N)
    for i in range(lo, hi + 2):
        r, c = N.dim(i - 1), M.dim(i)
        if r and c:
            hs[i] = sysm.unknown(r, c, f"{name}{i}")
    return hs


def _solve_relation(f: ChainMap, rhs_of, weak: bool, free_m0: set | None):
    """Shared engine; ``rhs_of(i)`` is the target matrix in degree ``i``."""
    M, N = f.src, f.tgt
    ring = M.ring
    sysm = LinearSystem(ring)
    xs = _homotopy_unknowns(sysm, M, N, "x")
    ys = _homotopy_unknowns(sysm, M, N, "y") if weak else xs
    ms = {}
    lo, hi = _support(M, N)
    if free_m0:
        for i in sorted(free_m0):
            r, c = N.dim(i), M.dim(i)
            if r and c:
                ms[i] = sysm.unknown(r, c, f"m{i}")
        # chain condition on m0
        for i in range(lo - 1, hi + 1):
            terms = []
            if i in ms and N.dim(i + 1):
                terms.append((N.d(i), ms[i], None))
            if i + 1 in ms and M.dim(i):
                terms.append((None, ms[i + 1], -M.d(i)))
            if terms:
                sysm.equation(terms, shape=(N.dim(i + 1), M.dim(i)))
    for i in range(lo, hi + 1):
        shape = (N.dim(i), M.dim(i))
        if not shape[0] or not shape[1]:
            continue
        terms = []
        if i in xs:
            terms.append((N.d(i - 1), xs[i], None))
        if i + 1 in ys:
            terms.append((None, ys[i + 1], M.d(i)))
        if i in ms:
            terms.append((None, ms[i], None))
        rhs = rhs_of(i)
        if not terms:
            if not rhs.is_zero():
                return None
            continue
        sysm.equation(terms, rhs)
    sol = sysm.solve()
    if sol is None:
        return None
    x = {i: sol[h] for i, h in xs.items()}
    y = {i: sol[h] for i, h in ys.items()}
    m0 = {i: sol[h] for i, h in ms.items()}
    return x, y, m0


def is_null_homotopic(f: ChainMap) -> HomotopyWitness | None:
    """A null-homotopy of ``f``, or ``None`` if ``f`` is not null-homotopic."""
    res = _solve_relation(f, f.comp, weak=False, free_m0=None)
    if res is None:
        return None
    return HomotopyWitness(f, res[0])


def homotopic(f: ChainMap, g: ChainMap) -> HomotopyWitness | None:
    """A homotopy between ``f`` and ``g`` (a null-homotopy of ``f - g``)."""
    _check_pair(f, g)
    return is_null_homotopic(f - g)


def weakly_homotopic(f: ChainMap, g: ChainMap) -> WeakHomotopyWitness | None:
    """Decide ``f - g = d x + y d`` with independent ``x`` and ``y``."""
    _check_pair(f, g)
    res = _solve_relation(f, lambda i: f.comp(i) - g.comp(i), weak=True, free_m0=None)
    if res is None:
        return None
    return WeakHomotopyWitness(f, g, res[0], res[1])


def _clip(M: Complex, N: Complex, k, l):
    lo, hi = _support(M, N)
    if lo > hi:
        lo, hi = 0, 0
    kk = lo - 1 if k == -INF else max(int(k), lo - 1)
    ll = hi + 1 if l == INF else min(int(l), hi + 1)
    return kk, ll


def sim_interval(f: ChainMap, g: ChainMap, k=-INF, l=INF) -> WeakHomotopyWitness | None:
    """Decide ``f ∼_[k,l] g``: ``f - g`` weakly homotopic to a chain map vanishing on ``[k, l]``.

    ``k`` may be ``-inf`` and ``l`` may be ``+inf``; both are clipped to one
    degree beyond the support, where every component is zero anyway.
    """
    _check_pair(f, g)
    if k > l:
        raise InvalidRange(f"empty interval [{k}, {l}]")
    if k == l and math.isinf(k):
        raise InvalidRange("a one-point interval must be finite")
    M, N = f.src, f.tgt
    kk, ll = _clip(M, N, k, l)
    lo, hi = _support(M, N)
    free = {i for i in range(lo, hi + 1) if i < kk or i > ll}
    res = _solve_relation(f, lambda i: f.comp(i) - g.comp(i), weak=True, free_m0=free)
    if res is None:
        return None
    x, y, m0 = res
    return WeakHomotopyWitness(f, g, x, y, ChainMap(M, N, m0, check=False), k, l)


def stupid_membership(M: Complex, side: str, n: int) -> WeakHomotopyWitness | None:
    """Decide ``M ∈ w_{≤n}`` (``side='le'``) or ``M ∈ w_{≥n}`` (``side='ge'``).

    Weight ``n`` sits in cohomological degree ``-n``: ``w_{≤n}`` is the class
    of complexes homotopy equivalent to ones living in degrees ``≥ -n``.
    """
    idm = ChainMap.identity(M)
    zero = ChainMap.zero(M, M)
    if side == "le":
        return sim_interval(idm, zero, -INF, -n - 1)
    if side == "ge":
        return sim_interval(idm, zero, -n + 1, INF)
    raise ValueError(f"side must be 'le' or 'ge', got {side!r}")
