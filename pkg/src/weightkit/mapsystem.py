"""Linear systems whose unknowns are chain maps, constrained up to homotopy.

A relation ``sum_k L_k ∘ U_k[s_k] ∘ R_k ≃ K`` between maps ``P → Q`` is
encoded degreewise as

    sum_k L_k^i U_k^{i+s_k} R_k^i - d_Q^{i-1} z^i - z^{i+1} d_P^i = K^i

with a fresh homotopy unknown ``z``.  All relations of a diagram go into
one system, so "this diagram can be completed" is a single solve.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .complexes import ChainMap, Complex, _support, shift_map
from .homotopy import HomotopyWitness
from .linsys import LinearSystem
from .ring_linalg import Matrix


@dataclass
class ChainUnknown:
    src: Complex
    tgt: Complex
    handles: dict
    name: str


@dataclass
class _Relation:
    P: Complex
    Q: Complex
    terms: list
    known: ChainMap | None
    z: dict
    label: str


@dataclass
class MapSolution:
    maps: dict
    witnesses: dict

    def verify(self) -> bool:
        return all(w.verify() for w in self.witnesses.values())


class MapSystem:
    def __init__(self, ring):
        self.ring = ring
        self.sys = LinearSystem(ring)
        self.unknowns: list[ChainUnknown] = []
        self.relations: list[_Relation] = []

    def chain_map(self, A: Complex, B: Complex, name: str) -> ChainUnknown:
        """Register an unknown chain map ``A → B`` (chain condition included)."""
        hs = {}
        for i in A.degrees:
            if A.dim(i) and B.dim(i):
                hs[i] = self.sys.unknown(B.dim(i), A.dim(i), f"{name}{i}")
        lo, hi = _support(A, B)
        for i in range(lo - 1, hi + 1):
            terms = []
            if i in hs and B.dim(i + 1):
                terms.append((B.d(i), hs[i], None))
            if i + 1 in hs and A.dim(i):
                terms.append((None, hs[i + 1], -A.d(i)))
            if terms:
                self.sys.equation(terms, shape=(B.dim(i + 1), A.dim(i)))
        u = ChainUnknown(A, B, hs, name)
        self.unknowns.append(u)
        return u

    def homotopic(self, P: Complex, Q: Complex, terms, known: ChainMap | None, label: str = ""):
        """Impose ``sum L∘U[s]∘R ≃ known`` for maps ``P → Q``.

        ``terms`` holds tuples ``(L, U, s, R)``; ``L`` (``U.tgt[s] → Q``) or
        ``R`` (``P → U.src[s]``) may be ``None`` for identities.
        """
        ring = self.ring
        z = {}
        lo, hi = _support(P, Q)
        for i in range(lo, hi + 2):
            if Q.dim(i - 1) and P.dim(i):
                z[i] = self.sys.unknown(Q.dim(i - 1), P.dim(i), f"z{label}{i}")
        for i in range(lo, hi + 1):
            r, c = Q.dim(i), P.dim(i)
            if not r or not c:
                continue
            eq = []
            for L, U, s, R in terms:
                k = i + s
                if k not in U.handles:
                    continue
                Lm = L.comp(i) if L is not None else None
                Rm = R.comp(i) if R is not None else None
                eq.append((Lm, U.handles[k], Rm))
            if i in z:
                eq.append((-Q.d(i - 1), z[i], None))
            if i + 1 in z:
                eq.append((None, z[i + 1], -P.d(i)))
            rhs = known.comp(i) if known is not None else Matrix.zeros(ring, r, c)
            if not eq:
                if not rhs.is_zero():
                    # contradiction: record an unsatisfiable equation
                    self.sys.equation([], rhs)
                continue
            self.sys.equation(eq, rhs)
        self.relations.append(_Relation(P, Q, terms, known, z, label))

    def _materialize(self, blocks) -> MapSolution:
        maps = {}
        for u in self.unknowns:
            maps[u.name] = ChainMap(u.src, u.tgt, {i: blocks[h] for i, h in u.handles.items()}, check=False)
        wits = {}
        for k, rel in enumerate(self.relations):
            lhs = ChainMap.zero(rel.P, rel.Q)
            for L, U, s, R in rel.terms:
                m = maps[U.name]
                if s:
                    m = shift_map(m, s)
                if R is not None:
                    m = m @ R
                if L is not None:
                    m = L @ m
                lhs = lhs + m
            diff = lhs - rel.known if rel.known is not None else lhs
            wits[rel.label or str(k)] = HomotopyWitness(diff, {i: blocks[h] for i, h in rel.z.items()})
        return MapSolution(maps, wits)

    def solve(self) -> MapSolution | None:
        sol = self.sys.solve()
        return None if sol is None else self._materialize(sol)

    def solve_random(self, rng: random.Random, bound: int = 2) -> MapSolution | None:
        """Particular solution plus a random combination of homogeneous solutions."""
        part, ker = self.sys.solve_with_kernel()
        if part is None:
            return None
        ring = self.ring
        blocks = list(part)
        for kv in ker:
            c = rng.randint(-bound, bound)
            if ring.tag == "Zeps":
                c = (c, rng.randint(-bound, bound))
            c = ring.coerce(c)
            if not c:
                continue
            blocks = [b + k.scale(c) for b, k in zip(blocks, kv)]
        return self._materialize(blocks)

    def solve_pair(self, rng: random.Random):
        """Two solutions (second random), used for uniqueness checks."""
        part, ker = self.sys.solve_with_kernel()
        if part is None:
            return None
        first = self._materialize(part)
        blocks = list(part)
        ring = self.ring
        for kv in ker:
            c = ring.coerce(rng.randint(-2, 2))
            if c:
                blocks = [b + k.scale(c) for b, k in zip(blocks, kv)]
        return first, self._materialize(blocks)
