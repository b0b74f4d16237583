"""Bounded cochain complexes of finite free modules and chain maps between them.

Indexing is cohomological: ``M.d(i)`` maps ``M^i`` to ``M^{i+1}``.
Homology is exposed homologically, ``homology(M, j) = H^{-j}(M)``.

The module also computes Hom groups in the homotopy category and the
canonical splitting of a complex over a principal ideal ring into
one-term free pieces, two-term torsion pieces and contractible pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (DimensionMismatch, InvalidComplex, RingMismatch,
                     SourceTargetMismatch, UnsupportedRing)
from .linsys import LinearSystem
from .ring_linalg import (CoeffRing, Matrix, block_diag, hstack, nullspace,
                          snf_with_inverses, solve_linear, vstack)


class Complex:
    """A bounded cochain complex ``M^lo → … → M^hi`` of free modules.

    Zero terms at either end of the support are trimmed on construction,
    so two complexes with the same nonzero data compare equal.
    """

    __slots__ = ("ring", "lo", "hi", "_dims", "_diffs")

    def __init__(self, ring: CoeffRing, lo: int, dims: Sequence[int],
                 diffs: Sequence[Matrix] | Mapping[int, Matrix] | None = None, check: bool = True):
        dims = [int(x) for x in dims]
        if any(x < 0 for x in dims):
            raise DimensionMismatch("negative dimension")
        hi = lo + len(dims) - 1
        if diffs is None:
            dmap = {}
        elif isinstance(diffs, Mapping):
            dmap = dict(diffs)
        else:
            diffs = list(diffs)
            if len(diffs) not in (max(len(dims) - 1, 0), len(dims)):
                raise DimensionMismatch("need one differential per consecutive pair of degrees")
            dmap = {lo + k: m for k, m in enumerate(diffs)}
        for i, m in dmap.items():
            if m.ring != ring:
                raise RingMismatch(f"differential d^{i} over {m.ring}, complex over {ring}")
            src = dims[i - lo] if lo <= i <= hi else 0
            tgt = dims[i + 1 - lo] if lo <= i + 1 <= hi else 0
            if m.shape != (tgt, src):
                raise DimensionMismatch(f"d^{i} has shape {m.shape}, expected {(tgt, src)}")
        # trim zero ends
        a, b = 0, len(dims)
        while a < b and dims[a] == 0:
            a += 1
        while b > a and dims[b - 1] == 0:
            b -= 1
        self.ring = ring
        if a == b:
            self.lo, self.hi, self._dims, self._diffs = 0, -1, (), ()
            return
        self.lo = lo + a
        self.hi = lo + b - 1
        self._dims = tuple(dims[a:b])
        out = []
        for i in range(self.lo, self.hi):
            m = dmap.get(i)
            out.append(m if m is not None else Matrix.zeros(ring, self.dim(i + 1), self.dim(i)))
        self._diffs = tuple(out)
        if check:
            for i in range(self.lo, self.hi - 1):
                if not (self._diffs[i + 1 - self.lo] @ self._diffs[i - self.lo]).is_zero():
                    raise InvalidComplex(f"d^{i + 1} d^{i} != 0")

    @classmethod
    def from_degrees(cls, ring: CoeffRing, dims: Mapping[int, int],
                     diffs: Mapping[int, Matrix] | None = None, check: bool = True) -> "Complex":
        if not dims:
            return cls.zero(ring)
        lo, hi = min(dims), max(dims)
        return cls(ring, lo, [dims.get(i, 0) for i in range(lo, hi + 1)], diffs or {}, check=check)

    @classmethod
    def zero(cls, ring: CoeffRing) -> "Complex":
        return cls(ring, 0, [])

    @classmethod
    def concentrated(cls, ring: CoeffRing, degree: int, rank: int = 1) -> "Complex":
        """``R^rank`` placed in a single cohomological degree."""
        return cls(ring, degree, [rank])

    @classmethod
    def two_term(cls, ring: CoeffRing, degree: int, matrix) -> "Complex":
        """``R^a → R^b`` in degrees ``degree, degree+1``."""
        if not isinstance(matrix, Matrix):
            matrix = Matrix.from_rows(ring, matrix)
        return cls(ring, degree, [matrix.cols, matrix.rows], [matrix])

    def dim(self, i: int) -> int:
        return self._dims[i - self.lo] if self.lo <= i <= self.hi else 0

    def d(self, i: int) -> Matrix:
        """The differential ``d^i : M^i → M^{i+1}`` (zero outside the support)."""
        if self.lo <= i < self.hi:
            return self._diffs[i - self.lo]
        return Matrix.zeros(self.ring, self.dim(i + 1), self.dim(i))

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def diffs(self) -> tuple[Matrix, ...]:
        return self._diffs

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_zero(self) -> bool:
        return not self._dims

    def total_dim(self) -> int:
        return sum(self._dims)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * self.dim(i) for i in self.degrees)

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (self.ring == other.ring and self.lo == other.lo and self._dims == other._dims
                and self._diffs == other._diffs)

    def __hash__(self):
        return hash((self.ring, self.lo, self._dims, self._diffs))

    def __repr__(self):
        if self.is_zero():
            return f"Complex({self.ring}, 0)"
        return f"Complex({self.ring}, degrees {self.lo}..{self.hi}, dims {list(self._dims)})"


def _support(*cs: Complex) -> tuple[int, int]:
    nz = [c for c in cs if not c.is_zero()]
    if not nz:
        return 0, -1
    return min(c.lo for c in nz), max(c.hi for c in nz)


class ChainMap:
    """Degreewise matrices ``f^i : src^i → tgt^i`` commuting with differentials."""

    __slots__ = ("src", "tgt", "_comps")

    def __init__(self, src: Complex, tgt: Complex, comps: Mapping[int, Matrix] | None = None,
                 check: bool = True):
        if src.ring != tgt.ring:
            raise RingMismatch("chain map between complexes over different rings")
        self.src = src
        self.tgt = tgt
        ring = src.ring
        out = {}
        for i, m in (comps or {}).items():
            shape = (tgt.dim(i), src.dim(i))
            if m.ring != ring:
                raise RingMismatch(f"component {i} over {m.ring}")
            if m.shape != shape:
                raise DimensionMismatch(f"component f^{i} has shape {m.shape}, expected {shape}")
            if shape[0] and shape[1] and not m.is_zero():
                out[i] = m
        self._comps = out
        if check:
            lo, hi = _support(src, tgt)
            for i in range(lo - 1, hi + 1):
                if tgt.d(i) @ self.comp(i) != self.comp(i + 1) @ src.d(i):
                    raise InvalidComplex(f"chain map fails to commute with the differential in degree {i}")

    @property
    def ring(self) -> CoeffRing:
        return self.src.ring

    @property
    def comps(self) -> dict[int, Matrix]:
        return dict(self._comps)

    def comp(self, i: int) -> Matrix:
        m = self._comps.get(i)
        if m is None:
            return Matrix.zeros(self.src.ring, self.tgt.dim(i), self.src.dim(i))
        return m

    @property
    def degrees(self) -> range:
        lo, hi = _support(self.src, self.tgt)
        return range(lo, hi + 1)

    @classmethod
    def identity(cls, M: Complex) -> "ChainMap":
        return cls(M, M, {i: Matrix.identity(M.ring, M.dim(i)) for i in M.degrees}, check=False)

    @classmethod
    def zero(cls, M: Complex, N: Complex) -> "ChainMap":
        return cls(M, N, {}, check=False)

    def is_zero(self) -> bool:
        return not self._comps

    def _same(self, other: "ChainMap"):
        if self.src != other.src or self.tgt != other.tgt:
            raise SourceTargetMismatch("maps have different source or target")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        return ChainMap(self.src, self.tgt, {i: self.comp(i) + other.comp(i) for i in self.degrees}, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same(other)
        return ChainMap(self.src, self.tgt, {i: self.comp(i) - other.comp(i) for i in self.degrees}, check=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.src, self.tgt, {i: -m for i, m in self._comps.items()}, check=False)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.src, self.tgt, {i: m.scale(c) for i, m in self._comps.items()}, check=False)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition: ``(g @ f)`` is ``g ∘ f``."""
        if other.tgt != self.src:
            raise SourceTargetMismatch("composition of non-composable maps")
        lo, hi = _support(other.src, self.tgt)
        return ChainMap(other.src, self.tgt,
                        {i: self.comp(i) @ other.comp(i) for i in range(lo, hi + 1)}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self._comps == other._comps

    def __hash__(self):
        return hash((self.src, self.tgt, tuple(sorted(self._comps.items()))))

    def __repr__(self):
        comps = {i: m.to_lists() for i, m in sorted(self._comps.items())}
        return f"ChainMap({self.src!r} -> {self.tgt!r}, {comps})"


# ---------------------------------------------------------------------------
# Constructions

def shift(M: Complex, n: int) -> Complex:
    """``M[n]``: ``M[n]^i = M^{i+n}`` with differential multiplied by ``(-1)^n``."""
    if M.is_zero():
        return M
    sign = -1 if n % 2 else 1
    diffs = [d.scale(sign) if sign == -1 else d for d in M.diffs]
    return Complex(M.ring, M.lo - n, M.dims, diffs, check=False)


def shift_map(f: ChainMap, n: int) -> ChainMap:
    """``f[n]``, with components ``f[n]^i = f^{i+n}``."""
    return ChainMap(shift(f.src, n), shift(f.tgt, n), {i - n: m for i, m in f.comps.items()}, check=False)


def direct_sum(Ms: Sequence[Complex], ring: CoeffRing | None = None) -> Complex:
    """Degreewise block sum; ``direct_sum([])`` is the zero complex over ``ring`` (default ℤ)."""
    Ms = list(Ms)
    if not Ms:
        return Complex.zero(ring or CoeffRing.integers())
    ring = Ms[0].ring
    if any(M.ring != ring for M in Ms):
        raise RingMismatch("direct sum of complexes over different rings")
    lo, hi = _support(*Ms)
    if lo > hi:
        return Complex.zero(ring)
    dims = [sum(M.dim(i) for M in Ms) for i in range(lo, hi + 1)]
    diffs = [block_diag(ring, [M.d(i) for M in Ms]) for i in range(lo, hi)]
    return Complex(ring, lo, dims, diffs, check=False)


def direct_sum_maps(fs: Sequence[ChainMap]) -> ChainMap:
    """Block-diagonal sum of chain maps ``⊕ f_k : ⊕ src_k → ⊕ tgt_k``."""
    fs = list(fs)
    src = direct_sum([f.src for f in fs])
    tgt = direct_sum([f.tgt for f in fs])
    lo, hi = _support(src, tgt)
    return ChainMap(src, tgt, {i: block_diag(src.ring, [f.comp(i) for f in fs]) for i in range(lo, hi + 1)},
                    check=False)


def sum_inclusion(Ms: Sequence[Complex], k: int) -> ChainMap:
    """Inclusion of the ``k``-th summand into ``direct_sum(Ms)``."""
    S = direct_sum(Ms)
    ring = S.ring
    comps = {}
    for i in S.degrees:
        blocks = [Matrix.identity(ring, M.dim(i)) if t == k else Matrix.zeros(ring, M.dim(i), Ms[k].dim(i))
                  for t, M in enumerate(Ms)]
        comps[i] = vstack(blocks, ring, Ms[k].dim(i))
    return ChainMap(Ms[k], S, comps, check=False)


def sum_projection(Ms: Sequence[Complex], k: int) -> ChainMap:
    """Projection of ``direct_sum(Ms)`` onto its ``k``-th summand."""
    S = direct_sum(Ms)
    ring = S.ring
    comps = {}
    for i in S.degrees:
        blocks = [Matrix.identity(ring, M.dim(i)) if t == k else Matrix.zeros(ring, Ms[k].dim(i), M.dim(i))
                  for t, M in enumerate(Ms)]
        comps[i] = hstack(blocks, ring, Ms[k].dim(i))
    return ChainMap(S, Ms[k], comps, check=False)


def cone(f: ChainMap) -> tuple[Complex, ChainMap, ChainMap]:
    """Mapping cone with the maps ``tgt → Cone(f) → src[1]`` of the standard triangle.

    ``Cone(f)^i = tgt^i ⊕ src^{i+1}`` with differential ``[[d_tgt, f], [0, -d_src]]``.
    """
    A, B = f.src, f.tgt
    ring = A.ring
    lo, hi = _support(B, shift(A, 1))
    dims = [B.dim(i) + A.dim(i + 1) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        top = hstack([B.d(i), f.comp(i + 1)])
        bot = hstack([Matrix.zeros(ring, A.dim(i + 2), B.dim(i)), -A.d(i + 1)])
        diffs.append(vstack([top, bot]))
    C = Complex(ring, lo, dims, diffs, check=False)
    incl = {}
    proj = {}
    for i in range(lo, hi + 1):
        incl[i] = vstack([Matrix.identity(ring, B.dim(i)), Matrix.zeros(ring, A.dim(i + 1), B.dim(i))])
        proj[i] = hstack([Matrix.zeros(ring, A.dim(i + 1), B.dim(i)), Matrix.identity(ring, A.dim(i + 1))])
    return C, ChainMap(B, C, incl, check=False), ChainMap(C, shift(A, 1), proj, check=False)


def brutal_truncation(M: Complex, a: int | None = None, b: int | None = None) -> Complex:
    """The complex keeping only the terms of ``M`` in degrees ``[a, b]``."""
    lo = M.lo if a is None else max(a, M.lo)
    hi = M.hi if b is None else min(b, M.hi)
    if lo > hi:
        return Complex.zero(M.ring)
    return Complex(M.ring, lo, [M.dim(i) for i in range(lo, hi + 1)], [M.d(i) for i in range(lo, hi)],
                   check=False)


def degreewise_identity(src: Complex, tgt: Complex) -> ChainMap:
    """Identity matrices in the degrees where ``src`` and ``tgt`` agree.

    Used for the inclusion of a lower brutal truncation and for the
    projection onto an upper one; the caller guarantees it is a chain map.
    """
    lo, hi = _support(src, tgt)
    comps = {}
    for i in range(lo, hi + 1):
        if src.dim(i) and tgt.dim(i):
            if src.dim(i) != tgt.dim(i):
                raise DimensionMismatch("degreewise identity between different ranks")
            comps[i] = Matrix.identity(src.ring, src.dim(i))
    return ChainMap(src, tgt, comps)


# ---------------------------------------------------------------------------
# Finitely generated modules and subquotients

@dataclass(frozen=True)
class FgModule:
    """``R^rank ⊕ R/t_1 ⊕ … ⊕ R/t_k`` with ``t_1 | t_2 | …`` (all ``t > 1``)."""

    ring: CoeffRing
    rank: int
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.rank < 0:
            raise ValueError("negative rank")
        if t and self.ring.tag != "Z":
            raise ValueError("torsion only over the integers")
        if any(x <= 1 for x in t):
            raise ValueError("invariant factors must exceed 1")
        if any(t[k + 1] % t[k] for k in range(len(t) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_cyclic(cls, ring: CoeffRing, orders: Iterable[int]) -> "FgModule":
        """Canonical form of ``⊕ R/o_k`` (``o_k = 0`` gives a free summand; units vanish)."""
        orders = [abs(int(o)) for o in orders]
        rank = sum(1 for o in orders if o == 0)
        tors = [o for o in orders if o > 1]
        if ring.tag != "Z":
            tors = []
        return cls(ring, rank, tuple(_invariant_factors_of(tors)))

    @classmethod
    def zero(cls, ring: CoeffRing) -> "FgModule":
        return cls(ring, 0, ())

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    @property
    def cyclic_orders(self) -> tuple:
        """Orders of the canonical generators: 0 (free) first, then torsion ascending."""
        return (0,) * self.rank + self.torsion

    def __add__(self, other: "FgModule") -> "FgModule":
        if self.ring != other.ring:
            raise RingMismatch("sum of modules over different rings")
        return FgModule.from_cyclic(self.ring, self.cyclic_orders + other.cyclic_orders)

    def __str__(self):
        name = "Z" if self.ring.tag == "Z" else str(self.ring).replace(" ", "")
        parts = []
        if self.rank:
            parts.append(name if self.rank == 1 else f"{name}^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}


def _invariant_factors_of(orders: list[int]) -> list[int]:
    """Invariant factors of ``⊕ ℤ/o_k`` (all ``o_k > 1``)."""
    from math import gcd
    if not orders:
        return []
    # primary decomposition, then regroup by largest powers
    primes: dict[int, list[int]] = {}
    for o in orders:
        n = o
        p = 2
        while p * p <= n:
            if n % p == 0:
                e = 1
                while n % p == 0:
                    n //= p
                    e *= p
                primes.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            primes.setdefault(n, []).append(n)
    k = max(len(v) for v in primes.values())
    out = [1] * k
    for p, powers in primes.items():
        powers.sort(reverse=True)
        for t, q in enumerate(powers):
            out[k - 1 - t] *= q
    return [x for x in out if x > 1]


@dataclass
class Subquotient:
    """``L1 / L0`` for lattices given by generating columns, with canonical generators.

    ``gens[k]`` is an ambient vector representing the ``k``-th canonical
    generator, of additive order ``orders[k]`` (0 = infinite).
    """

    ring: CoeffRing
    module: FgModule
    gens: list
    orders: list
    _G1: Matrix = field(repr=False, default=None)
    _U: Matrix = field(repr=False, default=None)
    _rows: list = field(repr=False, default_factory=list)

    def coords(self, x: Sequence) -> list:
        """Canonical coordinates of the class of ambient vector ``x`` (must lie in ``L1``)."""
        ring = self.ring
        if self._G1.cols == 0:
            if any(x):
                raise ValueError("vector does not lie in the subgroup")
            return []
        b = Matrix._raw(ring, len(x), 1, [[ring.coerce(v)] for v in x])
        y = solve_linear(self._G1, b)
        if y is None:
            raise ValueError("vector does not lie in the subgroup")
        z = self._U @ y
        out = []
        for r, o in zip(self._rows, self.orders):
            v = z[r, 0]
            out.append(v % o if o else v)
        return out


def subquotient(ring: CoeffRing, G1: Matrix, G0: Matrix) -> Subquotient:
    """Presentation of ``span(G1) / span(G0)`` (columns; ``span(G0) ⊆ span(G1)`` required)."""
    if not ring.supports_snf:
        raise UnsupportedRing("subquotients need a principal ideal ring")
    r1 = G1.cols
    if r1 == 0:
        return Subquotient(ring, FgModule.zero(ring), [], [], G1, Matrix.zeros(ring, 0, 0), [])
    rels = [nullspace(G1)]
    if G0.cols:
        sysm = LinearSystem(ring)
        u = sysm.unknown(r1, G0.cols, "Y")
        sysm.equation([(G1, u, None)], G0)
        sol = sysm.solve()
        if sol is None:
            raise ValueError("second lattice is not contained in the first")
        rels.append(sol[0])
    R = hstack([m for m in rels if m.cols], ring, r1) if any(m.cols for m in rels) else Matrix.zeros(ring, r1, 0)
    U, D, V, Ui, Vi = snf_with_inverses(R)
    rk = 0
    while rk < min(D.rows, D.cols) and D[rk, rk]:
        rk += 1
    free_rows = list(range(rk, r1))
    tors_rows = [t for t in range(rk) if not ring.is_unit(D[t, t])]
    rows = free_rows + tors_rows
    orders = [0] * len(free_rows) + [int(D[t, t]) for t in tors_rows]
    amb = G1 @ Ui
    gens = [[amb[s, t] for s in range(amb.rows)] for t in rows]
    module = FgModule(ring, len(free_rows), tuple(orders[len(free_rows):]))
    return Subquotient(ring, module, gens, orders, G1, U, rows)


def _require_pid(M: Complex):
    if not M.ring.supports_snf:
        raise UnsupportedRing("homology over dual numbers is not available; reduce coefficients first")


def homology_presentation(M: Complex, j: int) -> Subquotient:
    _require_pid(M)
    c = -j
    return subquotient(M.ring, nullspace(M.d(c)), M.d(c - 1))


def homology(M: Complex, j: int) -> FgModule:
    """``H_j(M) = H^{-j}(M)`` as a canonical finitely generated module."""
    return homology_presentation(M, j).module


def homology_mod_presentation(M: Complex, j: int, c: int) -> Subquotient:
    """``H_j(M ⊗ R/c)``; ``c = 0`` is plain homology."""
    _require_pid(M)
    if c == 0:
        return homology_presentation(M, j)
    ring = M.ring
    k = -j
    dout, din = M.d(k), M.d(k - 1)
    n = M.dim(k)
    big = hstack([dout, Matrix.scalar(ring, dout.rows, c)], ring, dout.rows)
    ker = nullspace(big)
    G1 = ker.submatrix(range(n), range(ker.cols))
    G0 = hstack([din, Matrix.scalar(ring, n, c)], ring, n)
    return subquotient(ring, G1, G0)


def homology_map_matrix(f: ChainMap, j: int, src_pres: Subquotient | None = None,
                        tgt_pres: Subquotient | None = None) -> list[list]:
    """Matrix of ``H_j(f)`` in canonical generators (rows: target, columns: source)."""
    sp = src_pres or homology_presentation(f.src, j)
    tp = tgt_pres or homology_presentation(f.tgt, j)
    F = f.comp(-j)
    cols = []
    for g in sp.gens:
        x = F @ Matrix._raw(f.ring, len(g), 1, [[v] for v in g])
        cols.append(tp.coords([x[s, 0] for s in range(x.rows)]))
    return [[cols[c][r] for c in range(len(cols))] for r in range(len(tp.gens))]


def dual_complex(M: Complex) -> Complex:
    """Termwise transpose: degree ``-i`` holds ``M^i`` and ``d'^{-i} = (d^{i-1})^T``."""
    if M.is_zero():
        return M
    lo, hi = -M.hi, -M.lo
    dims = [M.dim(-i) for i in range(lo, hi + 1)]
    diffs = [M.d(-i - 1).T for i in range(lo, hi)]
    return Complex(M.ring, lo, dims, diffs, check=False)


# ---------------------------------------------------------------------------
# Hom in the homotopy category

@dataclass
class MapLayout:
    """Flattening of graded families of matrices ``src^i → tgt^{i+shift}``."""

    src: Complex
    tgt: Complex
    shift: int
    slots: list  # (degree, rows, cols, offset)
    size: int

    @classmethod
    def of(cls, src: Complex, tgt: Complex, shift: int = 0) -> "MapLayout":
        slots, off = [], 0
        for i in src.degrees:
            r, c = tgt.dim(i + shift), src.dim(i)
            if r and c:
                slots.append((i, r, c, off))
                off += r * c
        return cls(src, tgt, shift, slots, off)

    def vec(self, comps: Mapping[int, Matrix]) -> list:
        out = [self.src.ring.zero] * self.size
        for i, r, c, off in self.slots:
            m = comps.get(i)
            if m is not None:
                out[off:off + r * c] = m.entries
        return out

    def unvec(self, v: Sequence) -> dict[int, Matrix]:
        ring = self.src.ring
        return {i: Matrix._raw(ring, r, c, [list(v[off + a * c: off + (a + 1) * c]) for a in range(r)])
                for i, r, c, off in self.slots}


def _chain_condition_system(M: Complex, N: Complex):
    lay = MapLayout.of(M, N)
    sysm = LinearSystem(M.ring)
    handles = {}
    for i, r, c, off in lay.slots:
        handles[i] = sysm.unknown(r, c, f"f{i}")
    lo, hi = _support(M, N)
    for i in range(lo - 1, hi + 1):
        terms = []
        if i in handles and N.dim(i + 1):
            terms.append((N.d(i), handles[i], None))
        if i + 1 in handles and M.dim(i):
            terms.append((None, handles[i + 1], -M.d(i)))
        if terms:
            sysm.equation(terms, shape=(N.dim(i + 1), M.dim(i)))
    return lay, sysm


def chain_map_basis(M: Complex, N: Complex) -> list[ChainMap]:
    """A basis (lattice basis over ℤ) of the module of chain maps ``M → N``."""
    lay, sysm = _chain_condition_system(M, N)
    _, ker = sysm.solve_with_kernel()
    out = []
    for blocks in ker:
        comps = {i: blocks[k] for k, (i, _, _, _) in enumerate(lay.slots)}
        out.append(ChainMap(M, N, comps, check=False))
    return out


@dataclass
class HomPresentation:
    layout: MapLayout
    sq: Subquotient

    @property
    def module(self) -> FgModule:
        return self.sq.module

    def class_of(self, f: ChainMap) -> list:
        return self.sq.coords(self.layout.vec(f.comps))

    def generator(self, k: int) -> ChainMap:
        return ChainMap(self.layout.src, self.layout.tgt, self.layout.unvec(self.sq.gens[k]), check=False)


def hom_presentation(M: Complex, N: Complex) -> HomPresentation:
    if M.ring != N.ring:
        raise RingMismatch("hom between complexes over different rings")
    _require_pid(M)
    ring = M.ring
    lay = MapLayout.of(M, N)
    basis = chain_map_basis(M, N)
    G1 = Matrix.from_rows(ring, [lay.vec(f.comps) for f in basis], cols=lay.size).T \
        if basis else Matrix.zeros(ring, lay.size, 0)
    # images of elementary homotopies x^i : M^i → N^{i-1}
    imgs = []
    for i in M.degrees:
        r, c = N.dim(i - 1), M.dim(i)
        for a in range(r):
            for b in range(c):
                x = Matrix._raw(ring, r, c, [[ring.one if (s, t) == (a, b) else ring.zero for t in range(c)]
                                             for s in range(r)])
                imgs.append(lay.vec({i - 1: x @ M.d(i - 1), i: N.d(i - 1) @ x}))
    G0 = Matrix.from_rows(ring, imgs, cols=lay.size).T if imgs else Matrix.zeros(ring, lay.size, 0)
    return HomPresentation(lay, subquotient(ring, G1, G0))


def hom_group(M: Complex, N: Complex) -> FgModule:
    """Chain maps ``M → N`` modulo null-homotopic ones."""
    return hom_presentation(M, N).module


# ---------------------------------------------------------------------------
# Canonical decomposition

@dataclass(frozen=True, order=True)
class ElementaryPiece:
    """``Free{j}``: ``R`` in degree ``-j``; ``Torsion{j, d}``: ``R →d R`` in degrees ``-j-1, -j``."""

    kind: str  # "free" or "torsion"
    j: int
    d: int = 0

    def __post_init__(self):
        if self.kind not in ("free", "torsion"):
            raise ValueError(f"unknown piece kind {self.kind!r}")
        if self.kind == "torsion" and self.d <= 1:
            raise ValueError("torsion pieces need an invariant factor > 1")

    @classmethod
    def free(cls, j: int) -> "ElementaryPiece":
        return cls("free", j)

    @classmethod
    def torsion(cls, j: int, d: int) -> "ElementaryPiece":
        return cls("torsion", j, d)

    @property
    def weights(self) -> tuple[int, int]:
        """Closed range of weights the piece occupies."""
        return (self.j, self.j) if self.kind == "free" else (self.j, self.j + 1)

    @property
    def degrees(self) -> tuple[int, ...]:
        return (-self.j,) if self.kind == "free" else (-self.j - 1, -self.j)

    def complex(self, ring: CoeffRing) -> Complex:
        if self.kind == "free":
            return Complex.concentrated(ring, -self.j)
        return Complex.two_term(ring, -self.j - 1, [[self.d]])

    def sort_key(self):
        return (0 if self.kind == "free" else 1, -self.j, self.d)

    def __str__(self):
        return f"Free{{{self.j}}}" if self.kind == "free" else f"Torsion{{{self.j},{self.d}}}"


@dataclass
class CanonicalDecomposition:
    """Strict isomorphism ``M ≅ ⊕ pieces ⊕ contractibles``.

    ``target`` lists the pieces first (in ``pieces`` order) and then the
    contractible pairs ``R →1 R`` (in ``contractible_degrees`` order, each
    entry being the lower degree of the pair).  ``slots[k]`` maps degree to
    the coordinate of summand ``k`` (pieces then contractibles) in ``target``.
    """

    source: Complex
    pieces: list
    contractible_degrees: list
    target: Complex
    iso: ChainMap
    inverse: ChainMap
    slots: list

    @property
    def contractible_count(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i in self.contractible_degrees:
            out[i] = out.get(i, 0) + 1
        return out

    def piece_multiset(self) -> list[ElementaryPiece]:
        return sorted(self.pieces, key=ElementaryPiece.sort_key)

    def summand_indices(self, pred) -> list[int]:
        return [k for k, p in enumerate(self.pieces) if pred(p)]


def canonical_decompose(M: Complex) -> CanonicalDecomposition:
    """Split ``M`` by iterated Smith normal form, lowest degree first."""
    _require_pid(M)
    ring = M.ring
    if M.is_zero():
        Z = Complex.zero(ring)
        return CanonicalDecomposition(M, [], [], Z, ChainMap.zero(M, Z), ChainMap.zero(Z, M), [])
    P = {i: Matrix.identity(ring, M.dim(i)) for i in M.degrees}  # old -> new coordinates
    Q = {i: Matrix.identity(ring, M.dim(i)) for i in M.degrees}  # new -> old
    slot_coords = {i: set() for i in M.degrees}
    free_recs = []   # (degree, coord)
    pair_recs = []   # (degree, coord in degree, coord in degree+1, d)
    for i in M.degrees:
        comp = [c for c in range(M.dim(i)) if c not in slot_coords[i]]
        if i == M.hi or not comp:
            free_recs += [(i, c) for c in comp]
            continue
        A_full = M.d(i) @ Q[i]
        A = A_full.submatrix(range(A_full.rows), comp)
        U, D, V, Ui, Vi = snf_with_inverses(A)
        n = M.dim(i)
        # extend V on the complement coordinates to the whole degree
        E = [[ring.one if a == b else ring.zero for b in range(n)] for a in range(n)]
        Einv = [r[:] for r in E]
        for a, ca in enumerate(comp):
            for b, cb in enumerate(comp):
                E[ca][cb] = Vi[a, b]
                Einv[ca][cb] = V[a, b]
        P[i] = Matrix._raw(ring, n, n, E) @ P[i]
        Q[i] = Q[i] @ Matrix._raw(ring, n, n, Einv)
        P[i + 1] = U
        Q[i + 1] = Ui
        for t in range(min(D.rows, D.cols)):
            x = D[t, t]
            if not x:
                free_recs += [(i, c) for c in comp[t:]]
                break
            pair_recs.append((i, comp[t], t, x))
            slot_coords[i + 1].add(t)
        else:
            free_recs += [(i, c) for c in comp[min(D.rows, D.cols):]]
    summands = []  # (sort key, piece or None, {degree: new coord})
    for i, c in free_recs:
        p = ElementaryPiece.free(-i)
        summands.append(((0,) + p.sort_key(), p, {i: c}))
    contr = []
    for i, c, t, x in pair_recs:
        if ring.is_unit(x):
            contr.append(((1, i), None, {i: c, i + 1: t}))
        else:
            p = ElementaryPiece.torsion(-(i + 1), int(x))
            summands.append(((0,) + p.sort_key(), p, {i: c, i + 1: t}))
    summands.sort(key=lambda s: s[0])
    contr.sort(key=lambda s: s[0])
    allsum = summands + contr
    pieces = [s[1] for s in summands]
    cdeg = [s[0][1] for s in contr]
    comps_T = [p.complex(ring) for p in pieces] + [Complex.two_term(ring, i, [[1]]) for i in cdeg]
    T = direct_sum(comps_T, ring)
    # permutation from new coordinates to target coordinates
    pos = {i: 0 for i in M.degrees}
    slots = []
    perm = {i: {} for i in M.degrees}
    for _, _, coords in allsum:
        sl = {}
        for deg, c in coords.items():
            sl[deg] = pos[deg]
            perm[deg][pos[deg]] = c
            pos[deg] += 1
        slots.append(sl)
    iso, inv = {}, {}
    for i in M.degrees:
        n = M.dim(i)
        Pi = [[ring.zero] * n for _ in range(n)]
        for row, c in perm[i].items():
            Pi[row][c] = ring.one
        Pm = Matrix._raw(ring, n, n, Pi)
        iso[i] = Pm @ P[i]
        inv[i] = Q[i] @ Pm.T
    return CanonicalDecomposition(M, pieces, cdeg, T, ChainMap(M, T, iso), ChainMap(T, M, inv), slots)


def pieces_from_homology(M: Complex) -> list[ElementaryPiece]:
    """Piece multiset predicted by homology: ``Free{j}`` per rank, ``Torsion{j,d}`` per factor."""
    out = []
    for j in range(-M.hi, -M.lo + 1):
        H = homology(M, j)
        out += [ElementaryPiece.free(j)] * H.rank
        out += [ElementaryPiece.torsion(j, d) for d in H.torsion]
    return sorted(out, key=ElementaryPiece.sort_key)
