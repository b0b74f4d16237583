"""The stupid weight structure on bounded complexes of free modules.

Weight ``i`` corresponds to cohomological degree ``-i``.  Hence
``w_{≤n} M`` is the brutal truncation of ``M`` to degrees ``≥ -n`` (a
subcomplex) and ``w_{≥n+1} M`` the quotient to degrees ``≤ -n-1``; the
triangle joining them is degreewise split.

Besides truncations this module decides whether a chain map kills a range
of weights, by each of the equivalent diagram conditions (selected with the
``mode`` argument of :func:`kills_weights`), whether an object is without
weights in a range, builds avoiding decompositions, and rebuilds the weight
complex of an object from a tower of truncations.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .complexes import (ChainMap, Complex, ElementaryPiece, _support, brutal_truncation,
                        canonical_decompose, cone, degreewise_identity, direct_sum,
                        shift, shift_map, sum_inclusion, sum_projection)
from .errors import InvalidChoice, InvalidRange, UnsupportedRing
from .homotopy import (HomotopyWitness, WeakHomotopyWitness, homotopic, is_null_homotopic,
                       sim_interval, stupid_membership)
from .mapsystem import MapSystem
from .ring_linalg import Matrix, hstack, vstack

INF = math.inf
MODES = ("1", "3", "5", "7", "8", "9", "9f")


@dataclass
class TruncationTriangle:
    """A weight decomposition ``lower → M → upper → lower[1]`` at weight ``n``.

    ``lower`` has weights ``≤ n`` and ``upper`` weights ``≥ n+1``.  The
    stupid choice is produced by :func:`stupid_truncate`; others come from
    :func:`perturbed_truncation` or from the caller.
    """

    M: Complex
    n: int
    lower: Complex
    upper: Complex
    incl: ChainMap
    proj: ChainMap
    delta: ChainMap

    def validate(self) -> None:
        """Raise :class:`InvalidChoice` unless the classes and composites check out."""
        if self.incl.tgt != self.M or self.proj.src != self.M:
            raise InvalidChoice("truncation maps do not meet the object")
        if self.delta.src != self.upper or self.delta.tgt != shift(self.lower, 1):
            raise InvalidChoice("connecting map has the wrong source or target")
        for f in (self.incl, self.proj, self.delta):
            try:
                ChainMap(f.src, f.tgt, f.comps)
            except Exception as exc:
                raise InvalidChoice(f"not a chain map: {exc}") from exc
        if stupid_membership(self.lower, "le", self.n) is None:
            raise InvalidChoice(f"lower part is not of weights <= {self.n}")
        if stupid_membership(self.upper, "ge", self.n + 1) is None:
            raise InvalidChoice(f"upper part is not of weights >= {self.n + 1}")
        if is_null_homotopic(self.proj @ self.incl) is None:
            raise InvalidChoice("composite lower -> M -> upper is not zero")


def stupid_truncate(M: Complex, n: int) -> TruncationTriangle:
    """Brutal truncation: ``lower`` = degrees ``≥ -n``, ``upper`` = degrees ``≤ -n-1``."""
    lower = brutal_truncation(M, -n, None)
    upper = brutal_truncation(M, None, -n - 1)
    incl = degreewise_identity(lower, M)
    proj = degreewise_identity(M, upper)
    # connecting map: minus the component of d_M from upper into lower
    comps = {}
    i = -n - 1
    if upper.dim(i) and lower.dim(i + 1):
        comps[i] = -M.d(i)
    delta = ChainMap(upper, shift(lower, 1), comps)
    return TruncationTriangle(M, n, lower, upper, incl, proj, delta)


# ---------------------------------------------------------------------------
# Perturbed weight decompositions

def _random_unimodular(ring, n: int, rng: random.Random, steps: int = 4):
    """A random invertible matrix and its inverse (products of elementary matrices)."""
    P = Matrix.identity(ring, n)
    Pi = Matrix.identity(ring, n)
    if n < 2:
        if n == 1 and ring.tag != "Z" and ring.tag != "Zeps":
            c = rng.randint(1, 5)
            if ring.tag == "F":
                c = c % ring.p or 1
            P, Pi = Matrix.scalar(ring, 1, c), Matrix.scalar(ring, 1, ring.inverse(ring.coerce(c)))
        elif n == 1 and rng.random() < 0.5:
            P, Pi = Matrix.scalar(ring, 1, -1), Matrix.scalar(ring, 1, -1)
        return P, Pi
    for _ in range(steps):
        a, b = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        E = [[ring.one if r == s else ring.zero for s in range(n)] for r in range(n)]
        Ei = [row[:] for row in E]
        E[a][b] = ring.coerce(c)
        Ei[a][b] = ring.coerce(-c)
        P = Matrix.from_rows(ring, E) @ P
        Pi = Pi @ Matrix.from_rows(ring, Ei)
    return P, Pi


def conjugate_complex(X: Complex, rng: random.Random):
    """A degreewise-isomorphic copy ``X'`` of ``X`` and the isos ``X → X'``, ``X' → X``."""
    if X.is_zero():
        return X, ChainMap.identity(X), ChainMap.identity(X)
    P, Pi = {}, {}
    for i in X.degrees:
        P[i], Pi[i] = _random_unimodular(X.ring, X.dim(i), rng)
    diffs = [P[i + 1] @ X.d(i) @ Pi[i] for i in range(X.lo, X.hi)]
    Y = Complex(X.ring, X.lo, X.dims, diffs)
    return Y, ChainMap(X, Y, P), ChainMap(Y, X, Pi)


def _contractible_at(ring, k: int, rank: int = 1) -> Complex:
    """``cone(id)`` of ``R^rank`` placed in degree ``k``: ``R^rank →1 R^rank`` in degrees ``k-1, k``."""
    return Complex.two_term(ring, k - 1, Matrix.identity(ring, rank))


def _rand_matrix(ring, r: int, c: int, rng: random.Random, bound: int = 2) -> Matrix:
    vals = []
    for _ in range(r * c):
        v = rng.randint(-bound, bound)
        vals.append((v, rng.randint(-bound, bound)) if ring.tag == "Zeps" else v)
    return Matrix(ring, r, c, vals) if r * c else Matrix.zeros(ring, r, c)


def perturbed_truncation(M: Complex, n: int, rng: random.Random, pads: int = 1,
                         base_change: bool = True) -> TruncationTriangle:
    """Another weight decomposition of ``M`` at ``n``.

    Contractible summands ``cone(id)`` are added to both sides in degrees
    admissible for each side, with random maps into and out of ``M``; the
    sides are then conjugated by random degreewise automorphisms.
    """
    ring = M.ring
    base = stupid_truncate(M, n)
    lo, hi = _support(M)
    if lo > hi:
        lo, hi = -n, -n
    Cx = [_contractible_at(ring, rng.randint(-n + 1, max(hi, -n + 1) + 1)) for _ in range(pads)]
    Cy = [_contractible_at(ring, rng.randint(min(lo, -n - 1) - 1, -n - 1)) for _ in range(pads)]
    X = direct_sum([base.lower] + Cx, ring)
    Y = direct_sum([base.upper] + Cy, ring)
    # maps from/to contractibles: alpha = (v, d v) into M, beta = (w d, w) out of M
    incl = base.incl @ sum_projection([base.lower] + Cx, 0)
    for t, C in enumerate(Cx):
        k = C.hi
        v = _rand_matrix(ring, M.dim(k - 1), 1, rng)
        alpha = ChainMap(C, M, {k - 1: v, k: M.d(k - 1) @ v})
        incl = incl + alpha @ sum_projection([base.lower] + Cx, t + 1)
    proj = sum_inclusion([base.upper] + Cy, 0) @ base.proj
    for t, C in enumerate(Cy):
        k = C.hi
        w = _rand_matrix(ring, 1, M.dim(k), rng)
        beta = ChainMap(M, C, {k - 1: w @ M.d(k - 1), k: w})
        proj = proj + sum_inclusion([base.upper] + Cy, t + 1) @ beta
    Xs = shift(X, 1)
    delta = shift_map(sum_inclusion([base.lower] + Cx, 0), 1) @ base.delta @ sum_projection([base.upper] + Cy, 0)
    delta = ChainMap(Y, Xs, delta.comps)
    if base_change:
        X2, fx, gx = conjugate_complex(X, rng)
        Y2, fy, gy = conjugate_complex(Y, rng)
        incl = incl @ gx
        proj = fy @ proj
        delta = shift_map(fx, 1) @ delta @ gy
        X, Y = X2, Y2
    return TruncationTriangle(M, n, X, Y, incl, proj, delta)


# ---------------------------------------------------------------------------
# Extending morphisms across truncations

@dataclass
class TruncationDiagram:
    """A morphism of weight decompositions over ``g``: ``h`` on lower parts, ``j`` on upper parts."""

    g: ChainMap
    row_src: TruncationTriangle
    row_tgt: TruncationTriangle
    h: ChainMap
    j: ChainMap
    witnesses: dict

    def verify(self) -> bool:
        return all(w.verify() for w in self.witnesses.values())


def _morphism_of_triangles(g: ChainMap, A: TruncationTriangle, B: TruncationTriangle) -> MapSystem:
    ms = MapSystem(g.ring)
    h = ms.chain_map(A.lower, B.lower, "h")
    j = ms.chain_map(A.upper, B.upper, "j")
    ms.homotopic(A.lower, B.M, [(B.incl, h, 0, None)], g @ A.incl, "left")
    ms.homotopic(A.M, B.upper, [(None, j, 0, A.proj)], B.proj @ g, "middle")
    # third square: delta_B ∘ j ≃ h[1] ∘ delta_A
    ms.homotopic(A.upper, shift(B.lower, 1),
                 [(B.delta, j, 0, None), (_neg_id(shift(B.lower, 1)), h, 1, A.delta)], None, "right")
    return ms


def _neg_id(X: Complex) -> ChainMap:
    return ChainMap.identity(X).scale(-1)


def extend_truncation_diagram(g: ChainMap, row_src: TruncationTriangle, row_tgt: TruncationTriangle,
                              rng: random.Random | None = None) -> TruncationDiagram | None:
    """Complete ``g`` to a morphism of the two weight decompositions, if possible.

    A completion always exists when ``row_src.n ≤ row_tgt.n``; with a random
    generator the returned completion is a random one rather than the first.
    """
    ms = _morphism_of_triangles(g, row_src, row_tgt)
    sol = ms.solve() if rng is None else ms.solve_random(rng)
    if sol is None:
        return None
    return TruncationDiagram(g, row_src, row_tgt, sol.maps["h"], sol.maps["j"], sol.witnesses)


def connecting_morphism(rowA: TruncationTriangle, rowB: TruncationTriangle) -> ChainMap:
    """The canonical map ``w_{≤a} M → w_{≤b} M`` for ``a ≤ b`` (by extending the identity)."""
    diag = extend_truncation_diagram(ChainMap.identity(rowA.M), rowA, rowB)
    if diag is None:
        raise InvalidRange("connecting morphism needs the first row at a lower weight")
    return diag.h


# ---------------------------------------------------------------------------
# Killing weights

@dataclass
class KillCertificate:
    """A witness that ``g`` kills weights ``m..n`` by the condition ``condition``."""

    condition: str
    g: ChainMap
    m: int
    n: int
    maps: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def verify(self) -> bool:
        return all(w.verify() for w in self.witnesses.values())

    def summary(self) -> str:
        parts = [f"condition {self.condition}"]
        if self.maps:
            parts.append("maps " + ", ".join(sorted(self.maps)))
        return "; ".join(parts)


def _rows(g: ChainMap, m: int, n: int, rows):
    if rows is None:
        return stupid_truncate(g.src, n), stupid_truncate(g.tgt, m - 1)
    rA, rB = rows
    if rA.n != n or rB.n != m - 1 or rA.M != g.src or rB.M != g.tgt:
        raise InvalidChoice("supplied rows must be an n-decomposition of the source and an (m-1)-decomposition of the target")
    return rA, rB


def kills_weights(g: ChainMap, m: int, n: int, mode: str = "1", rows=None,
                  rng: random.Random | None = None) -> KillCertificate | None:
    """Decide whether ``g`` kills weights ``m, …, n``.

    ``mode`` picks the condition used:

    * ``"1"``  the composite ``w_{≤n}M → M → N → w_{≥m}N`` is null-homotopic;
    * ``"3"``  a lift ``h : w_{≤n}M → w_{≤m-1}N`` of ``g`` exists;
    * ``"5"``  a map ``j : w_{≥n+1}M → w_{≥m}N`` under ``g`` exists;
    * ``"7"``  the supplied (default stupid) decompositions extend to a morphism of triangles;
    * ``"8"``  ``h`` exists splitting the square between lower truncations at ``m-1`` and ``n``;
    * ``"9f"`` some such square maps the cone of ``a`` to the cone of ``b`` by zero;
    * ``"9"``  a randomly drawn square of the kind in ``"8"`` does so.

    ``rows`` (mode 7) is a pair of decompositions: source at ``n``, target at ``m-1``.
    """
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
    M, N = g.src, g.tgt
    ring = g.ring
    if mode == "1":
        A = stupid_truncate(M, n)
        B = stupid_truncate(N, m - 1)
        comp = B.proj @ g @ A.incl
        w = is_null_homotopic(comp)
        if w is None:
            return None
        return KillCertificate("1", g, m, n, {"composite": comp}, {"composite": w})
    if mode == "3":
        A = stupid_truncate(M, n)
        B = stupid_truncate(N, m - 1)
        ms = MapSystem(ring)
        h = ms.chain_map(A.lower, B.lower, "h")
        ms.homotopic(A.lower, N, [(B.incl, h, 0, None)], g @ A.incl, "square")
        sol = ms.solve()
        return None if sol is None else KillCertificate("3", g, m, n, sol.maps, sol.witnesses)
    if mode == "5":
        A = stupid_truncate(M, n)
        B = stupid_truncate(N, m - 1)
        ms = MapSystem(ring)
        j = ms.chain_map(A.upper, B.upper, "j")
        ms.homotopic(M, B.upper, [(None, j, 0, A.proj)], B.proj @ g, "square")
        sol = ms.solve()
        return None if sol is None else KillCertificate("5", g, m, n, sol.maps, sol.witnesses)
    if mode == "7":
        A, B = _rows(g, m, n, rows)
        sol = _morphism_of_triangles(g, A, B).solve()
        return None if sol is None else KillCertificate("7", g, m, n, sol.maps, sol.witnesses)
    # modes built on the square between lower truncations at m-1 and n
    aM = stupid_truncate(M, m - 1)
    nM = stupid_truncate(M, n)
    aN = stupid_truncate(N, m - 1)
    nN = stupid_truncate(N, n)
    a = degreewise_identity(aM.lower, nM.lower)
    b = degreewise_identity(aN.lower, nN.lower)
    ms = MapSystem(ring)
    c = ms.chain_map(aM.lower, aN.lower, "c")
    d = ms.chain_map(nM.lower, nN.lower, "d")
    ms.homotopic(aM.lower, nN.lower, [(b, c, 0, None), (_neg_id(nN.lower), d, 0, a)], None, "left")
    ms.homotopic(nM.lower, N, [(nN.incl, d, 0, None)], g @ nM.incl, "right")
    if mode in ("8", "9"):
        # mode 9 draws its square among those admitting the splitting h
        h = ms.chain_map(nM.lower, aN.lower, "h")
        ms.homotopic(aM.lower, aN.lower, [(None, c, 0, None), (_neg_id(aN.lower), h, 0, a)], None, "upper")
        ms.homotopic(nM.lower, nN.lower, [(None, d, 0, None), (_neg(b), h, 0, None)], None, "lower")
    if mode == "8":
        sol = ms.solve()
        return None if sol is None else KillCertificate("8", g, m, n, sol.maps, sol.witnesses)
    Ca, _, pa = cone(a)
    Cb, qb, _ = cone(b)
    if mode == "9f":
        ms.homotopic(nM.lower, Cb, [(qb, d, 0, None)], None, "cone-middle")
        ms.homotopic(Ca, shift(aN.lower, 1), [(None, c, 1, pa)], None, "cone-right")
        sol = ms.solve()
        return None if sol is None else KillCertificate("9f", g, m, n, sol.maps, sol.witnesses)
    # mode 9: a random square must complete
    rng = rng or random.Random(0)
    sol = ms.solve_random(rng)
    if sol is None:
        return None
    cm, dm = sol.maps["c"], sol.maps["d"]
    w1 = is_null_homotopic(qb @ dm)
    w2 = is_null_homotopic(shift_map(cm, 1) @ pa)
    if w1 is None or w2 is None:
        return None
    wits = dict(sol.witnesses)
    wits["cone-middle"] = w1
    wits["cone-right"] = w2
    return KillCertificate("9", g, m, n, sol.maps, wits)


def _neg(f: ChainMap) -> ChainMap:
    return -f


def without_weights(M: Complex, m: int, n: int, method: str = "kills") -> KillCertificate | None:
    """Decide whether ``M`` is without weights ``m, …, n``.

    ``method='kills'`` asks whether ``id_M`` kills the range; ``method='sim'``
    asks whether ``id_M ∼_[-n,-m] 0`` (the weight complex of ``M`` is ``M``).
    """
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    idm = ChainMap.identity(M)
    if method == "kills":
        return kills_weights(idm, m, n)
    if method == "sim":
        w = sim_interval(idm, ChainMap.zero(M, M), -n, -m)
        if w is None:
            return None
        return KillCertificate("sim", idm, m, n, {"m0": w.m0}, {"weak": _WeakAsWitness(w)})
    raise ValueError(f"unknown method {method!r}")


@dataclass
class _WeakAsWitness:
    w: WeakHomotopyWitness

    def verify(self) -> bool:
        return self.w.verify()


# ---------------------------------------------------------------------------
# Avoiding decompositions

@dataclass
class AvoidingDecomposition:
    """A triangle ``X → M → Y → X[1]`` with ``X`` of weights ``≤ m-1`` and ``Y`` of weights ``≥ n+1``."""

    M: Complex
    m: int
    n: int
    X: Complex
    Y: Complex
    a: ChainMap
    b: ChainMap
    delta: ChainMap
    cone_to_Y: ChainMap
    Y_to_cone: ChainMap
    cone_homotopy: HomotopyWitness
    X_membership: WeakHomotopyWitness
    Y_membership: WeakHomotopyWitness

    def verify(self) -> bool:
        if not (self.b @ self.a).is_zero() and is_null_homotopic(self.b @ self.a) is None:
            return False
        if self.cone_to_Y @ self.Y_to_cone != ChainMap.identity(self.Y):
            return False
        return self.cone_homotopy.verify() and self.X_membership.verify() and self.Y_membership.verify()


def avoiding_decomposition(M: Complex, m: int, n: int) -> AvoidingDecomposition | None:
    """Split ``M`` into parts of weights ``< m`` and ``> n``, or ``None`` if some piece meets ``[m, n]``."""
    if m > n:
        raise InvalidRange(f"m = {m} exceeds n = {n}")
    if not M.ring.supports_snf:
        raise UnsupportedRing("avoiding decompositions need a principal ideal ring; use without_weights")
    cd = canonical_decompose(M)
    low, high = [], []
    for k, p in enumerate(cd.pieces):
        w0, w1 = p.weights
        if w1 <= m - 1:
            low.append(k)
        elif w0 >= n + 1:
            high.append(k)
        else:
            return None
    ring = M.ring
    X = direct_sum([cd.pieces[k].complex(ring) for k in low], ring)
    Y = direct_sum([cd.pieces[k].complex(ring) for k in high], ring)
    a = cd.inverse @ _embed(cd, low, X)
    s = cd.inverse @ _embed(cd, high, Y)
    b = _extract(cd, high, Y) @ cd.iso
    delta = ChainMap.zero(Y, shift(X, 1))
    C, _, _ = cone(a)
    # Cone(a)^i = M^i ⊕ X^{i+1}
    phi = ChainMap(C, Y, {i: _hcat(b.comp(i), Matrix.zeros(ring, Y.dim(i), X.dim(i + 1)))
                          for i in C.degrees})
    psi = ChainMap(Y, C, {i: _vcat(s.comp(i), Matrix.zeros(ring, X.dim(i + 1), Y.dim(i)))
                          for i in C.degrees})
    hw = homotopic(psi @ phi, ChainMap.identity(C))
    xm = stupid_membership(X, "le", m - 1)
    ym = stupid_membership(Y, "ge", n + 1)
    if hw is None or xm is None or ym is None:
        raise AssertionError("constructed avoiding decomposition failed its own verification")
    return AvoidingDecomposition(M, m, n, X, Y, a, b, delta, phi, psi, hw, xm, ym)


def _hcat(A: Matrix, B: Matrix) -> Matrix:
    return hstack([A, B])


def _vcat(A: Matrix, B: Matrix) -> Matrix:
    return vstack([A, B])


def _embed(cd, idx: list[int], X: Complex) -> ChainMap:
    """Inclusion of the sum of the selected pieces into the decomposition target."""
    ring = cd.source.ring
    T = cd.target
    comps = {}
    for i in T.degrees:
        rows, cols = T.dim(i), X.dim(i)
        if not rows or not cols:
            continue
        E = [[ring.zero] * cols for _ in range(rows)]
        pos = 0
        for k in idx:
            if i in cd.slots[k]:
                E[cd.slots[k][i]][pos] = ring.one
                pos += 1
        comps[i] = Matrix._raw(ring, rows, cols, E)
    return ChainMap(X, T, comps)


def _extract(cd, idx: list[int], Y: Complex) -> ChainMap:
    return ChainMap(cd.target, Y, {i: m.T for i, m in _embed(cd, idx, Y).comps.items()})


# ---------------------------------------------------------------------------
# Weight complex from a tower of truncations

def weight_range(M: Complex) -> tuple[int, int]:
    """Weights occupied by the terms of ``M`` (empty range ``(0, -1)`` for the zero complex)."""
    if M.is_zero():
        return 0, -1
    return -M.hi, -M.lo


def weight_complex_via_tower(M: Complex, choices: dict | None = None) -> Complex:
    """Rebuild the weight complex of ``M`` from cones of the truncation tower.

    ``choices`` maps a weight ``n`` to a :class:`TruncationTriangle` of ``M``
    at ``n``; missing weights use stupid truncations.  Every supplied choice
    is checked and :class:`InvalidChoice` raised if it is not a valid
    weight decomposition.
    """
    ring = M.ring
    if not ring.supports_snf:
        raise UnsupportedRing("the tower construction decomposes cones and needs a principal ideal ring")
    if M.is_zero():
        return M
    wlo, whi = weight_range(M)
    choices = dict(choices or {})
    rows = {}
    for n in range(wlo - 1, whi + 1):
        r = choices.get(n)
        if r is None:
            r = stupid_truncate(M, n)
        else:
            if r.M != M or r.n != n:
                raise InvalidChoice(f"choice at weight {n} does not decompose the given object")
            r.validate()
        rows[n] = r
    cones = {}
    for n in range(wlo - 1, whi):
        gn = connecting_morphism(rows[n], rows[n + 1])
        C, iota, pi = cone(gn)
        cd = canonical_decompose(C)
        free = [k for k, p in enumerate(cd.pieces) if p.kind == "free"]
        if any(cd.pieces[k] != ElementaryPiece.free(n + 1) for k in range(len(cd.pieces))):
            raise InvalidChoice(f"cone at weight {n + 1} is not concentrated in one degree")
        cones[n] = (C, iota, pi, cd, free)
    dims = {}
    diffs = {}
    for n in range(wlo - 1, whi):
        dims[-n - 1] = len(cones[n][4])
    for n in range(wlo, whi):
        # t^{-n-1} → t^{-n}: free component of iota_{n-1}[1] ∘ pi_n
        C, _, pi, cd, free = cones[n]
        C2, iota2, _, cd2, free2 = cones[n - 1]
        phi = shift_map(iota2, 1) @ pi
        T = shift_map(cd2.iso, 1) @ phi @ cd.inverse
        deg = -n - 1
        comp = T.comp(deg)
        rows_idx = [cd2.slots[k][deg + 1] for k in free2]
        cols_idx = [cd.slots[k][deg] for k in free]
        diffs[deg] = comp.submatrix(rows_idx, cols_idx)
    return Complex.from_degrees(ring, dims, diffs)
