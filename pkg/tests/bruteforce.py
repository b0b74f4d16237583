"""Independent brute-force oracles.

Nothing here calls the package's solvers: matrices are plain lists of
ints and every answer comes from determinantal divisors, exhaustive
enumeration or closed-form counts.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(rows):
    n = len(rows)
    if n == 0:
        return 1
    a = [[Fraction(x) for x in r] for r in rows]
    sign = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            q = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= q * a[c][k]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    assert out.denominator == 1
    return int(out)


def determinantal_divisors(A):
    """``d_k`` = gcd of all ``k × k`` minors, until it vanishes."""
    r = len(A)
    c = len(A[0]) if r else 0
    out = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rs in itertools.combinations(range(r), k):
            for cs in itertools.combinations(range(c), k):
                g = gcd(g, det([[A[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_bf(A):
    ds = determinantal_divisors(A)
    prev = 1
    out = []
    for d in ds:
        out.append(d // prev)
        prev = d
    return out


def rank_mod_p(A, p):
    a = [[x % p for x in r] for r in A]
    rnk = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rnk, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rnk], a[piv] = a[piv], a[rnk]
        inv = pow(a[rnk][c], p - 2, p)
        a[rnk] = [x * inv % p for x in a[rnk]]
        for r in range(len(a)):
            if r != rnk and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rnk])]
        rnk += 1
    return rnk


def homology_Z_bf(dims: dict, diffs: dict, deg: int):
    """``(rank, torsion)`` of ``H^deg`` for a complex of free ℤ-modules (cohomological degree)."""
    n = dims.get(deg, 0)
    d_out = diffs.get(deg)
    d_in = diffs.get(deg - 1)
    r_out = len(invariant_factors_bf(d_out)) if d_out and n and dims.get(deg + 1, 0) else 0
    inf_in = invariant_factors_bf(d_in) if d_in and n and dims.get(deg - 1, 0) else []
    tors = [x for x in inf_in if abs(x) > 1]
    return n - r_out - len(inf_in), sorted(abs(x) for x in tors)


def matmul(A, B, p=None):
    r = len(A)
    k = len(B)
    c = len(B[0]) if k else 0
    out = [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(c)] for i in range(r)]
    if p:
        out = [[x % p for x in row] for row in out]
    return out


def all_matrices(r, c, p):
    for vals in itertools.product(range(p), repeat=r * c):
        yield [list(vals[i * c:(i + 1) * c]) for i in range(r)]


def is_zero(A):
    return all(x == 0 for r in A for x in r)


def count_complexes_bf(span, max_dim, p=2):
    """Complexes over ``F_p`` with ``span`` terms of rank ``≤ max_dim`` (zero counted once)."""
    total = 0
    for dims in itertools.product(range(max_dim + 1), repeat=span):
        if not any(dims):
            continue
        spaces = [list(all_matrices(dims[k + 1], dims[k], p)) for k in range(span - 1)]
        for ds in itertools.product(*spaces):
            if all(is_zero(matmul(ds[k + 1], ds[k], p)) for k in range(len(ds) - 1)):
                total += 1
    return total + 1


def count_rank(q, r, c, k):
    """Number of ``r × c`` matrices of rank ``k`` over ``F_q``."""
    num = 1
    for i in range(k):
        num *= (q ** r - q ** i) * (q ** c - q ** i)
    den = 1
    for i in range(k):
        den *= q ** k - q ** i
    return num // den


def count_complexes_closed(span, max_dim, q=2):
    """Closed form for spans ``1..3``: sum over ranks of ``#{D1 of rank k} · q^{(b - k) c}``."""
    total = 0
    for dims in itertools.product(range(max_dim + 1), repeat=span):
        if not any(dims):
            continue
        if span == 1:
            total += 1
        elif span == 2:
            a, b = dims
            total += q ** (a * b)
        else:
            a, b, c = dims
            total += sum(count_rank(q, b, a, k) * q ** ((b - k) * c) for k in range(min(a, b) + 1))
    return total + 1


def brute_solve(A, b, values):
    """Some ``x`` with ``A x = b`` with entries from ``values``, or ``None``."""
    n = len(A[0]) if A else 0
    for x in itertools.product(values, repeat=n):
        if all(sum(A[i][j] * x[j] for j in range(n)) == b[i] for i in range(len(A))):
            return list(x)
    return None


# -- homotopies over F_p -----------------------------------------------------------

class Cx:
    """A complex as plain data: ``dims[i]`` and ``d[i]`` (``dims[i+1] × dims[i]``)."""

    def __init__(self, dims: dict, d: dict):
        self.dims = {i: n for i, n in dims.items() if n}
        self.d = d

    def dim(self, i):
        return self.dims.get(i, 0)

    def diff(self, i):
        if i in self.d and self.dim(i) and self.dim(i + 1):
            return self.d[i]
        return [[0] * self.dim(i) for _ in range(self.dim(i + 1))]


def cx_of(M) -> Cx:
    """Plain copy of a package complex over ``F_p`` (entries as ints)."""
    dims = {i: M.dim(i) for i in M.degrees}
    d = {i: [[int(x) for x in M.d(i).row(r)] for r in range(M.d(i).rows)] for i in M.degrees}
    return Cx(dims, d)


def map_of(f) -> dict:
    return {i: [[int(x) for x in f.comp(i).row(r)] for r in range(f.comp(i).rows)]
            for i in f.degrees}


def _degrees(M: Cx, N: Cx):
    ds = set(M.dims) | set(N.dims)
    if not ds:
        return range(0)
    return range(min(ds) - 1, max(ds) + 2)


def null_homotopic_maps(M: Cx, N: Cx, p: int):
    """The set of all maps ``d x + x d`` (as frozen tuples), by enumerating every ``x``."""
    degs = list(_degrees(M, N))
    shapes = [(i, N.dim(i - 1), M.dim(i)) for i in degs]
    spaces = [list(all_matrices(r, c, p)) if r * c else [None] for _, r, c in shapes]
    out = set()
    for xs in itertools.product(*spaces):
        x = {i: m for (i, _, _), m in zip(shapes, xs)}
        comp = []
        for i in degs:
            if not (M.dim(i) and N.dim(i)):
                continue
            a = [[0] * M.dim(i) for _ in range(N.dim(i))]
            if x.get(i) is not None:
                a = _add(a, matmul(N.diff(i - 1), x[i], p), p)
            if x.get(i + 1) is not None:
                a = _add(a, matmul(x[i + 1], M.diff(i), p), p)
            comp.append((i, tuple(map(tuple, a))))
        out.add(tuple(comp))
    return out


def _add(A, B, p):
    return [[(x + y) % p for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def freeze(M: Cx, N: Cx, f: dict, p: int):
    comp = []
    for i in _degrees(M, N):
        if not (M.dim(i) and N.dim(i)):
            continue
        a = f.get(i) or [[0] * M.dim(i) for _ in range(N.dim(i))]
        comp.append((i, tuple(tuple(x % p for x in r) for r in a)))
    return tuple(comp)


def is_null_homotopic_bf(M: Cx, N: Cx, f: dict, p: int) -> bool:
    return freeze(M, N, f, p) in null_homotopic_maps(M, N, p)


def weakly_null_bf(M: Cx, N: Cx, f: dict, p: int) -> bool:
    """``f = d x + y d`` with independent ``x, y``, by enumeration."""
    degs = list(_degrees(M, N))
    target = dict(freeze(M, N, f, p))
    for i in degs:
        if not (M.dim(i) and N.dim(i)):
            continue
        want = target[i]
        ok = False
        for x in (all_matrices(N.dim(i - 1), M.dim(i), p) if N.dim(i - 1) and M.dim(i) else [None]):
            for y in (all_matrices(N.dim(i), M.dim(i + 1), p) if N.dim(i) and M.dim(i + 1) else [None]):
                a = [[0] * M.dim(i) for _ in range(N.dim(i))]
                if x is not None:
                    a = _add(a, matmul(N.diff(i - 1), x, p), p)
                if y is not None:
                    a = _add(a, matmul(y, M.diff(i), p), p)
                if tuple(map(tuple, a)) == want:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return False
    return True
