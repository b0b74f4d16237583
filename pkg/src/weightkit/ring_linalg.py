"""Exact matrix arithmetic over the supported coefficient rings.

Four rings are supported: the integers, the rationals, prime fields
``F_p`` and the dual numbers ``F_p[e]/e^2``.  Matrices are dense and
immutable; ring elements are plain Python values (``int``,
``fractions.Fraction``) except for dual numbers, which use :class:`Dual`.

Smith normal form is available over the principal ideal rings
(integers and fields).  :func:`solve_linear` decides solvability over every
supported ring and returns a solution when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, RingMismatch, UnsupportedRing


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


class Dual:
    """An element ``a + b·e`` of ``F_p[e]/e^2``."""

    __slots__ = ("a", "b", "p")

    def __init__(self, a: int, b: int, p: int):
        self.a = a % p
        self.b = b % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Dual):
            return other
        if isinstance(other, int):
            return Dual(other, 0, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Dual(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Dual(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Dual(-self.a, -self.b, self.p)

    def __bool__(self):
        return bool(self.a or self.b)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b and self.p == o.p

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def __repr__(self):
        return f"{self.a}+{self.b}e"


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring tag: ``Z``, ``Q``, ``F`` (prime field) or ``Zeps`` (dual numbers)."""

    tag: str
    p: int | None = None

    def __post_init__(self):
        if self.tag not in ("Z", "Q", "F", "Zeps"):
            raise ValueError(f"unknown ring tag {self.tag!r}")
        if self.tag in ("F", "Zeps"):
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"characteristic must be prime, got {self.p}")
        elif self.p is not None:
            raise ValueError(f"ring {self.tag} takes no characteristic")

    @staticmethod
    def integers() -> "CoeffRing":
        return CoeffRing("Z")

    @staticmethod
    def rationals() -> "CoeffRing":
        return CoeffRing("Q")

    @staticmethod
    def prime_field(p: int) -> "CoeffRing":
        return CoeffRing("F", p)

    @staticmethod
    def dual_numbers(p: int = 2) -> "CoeffRing":
        return CoeffRing("Zeps", p)

    @property
    def is_field(self) -> bool:
        return self.tag in ("Q", "F")

    @property
    def supports_snf(self) -> bool:
        return self.tag != "Zeps"

    @property
    def zero(self):
        return Dual(0, 0, self.p) if self.tag == "Zeps" else (Fraction(0) if self.tag == "Q" else 0)

    @property
    def one(self):
        return Dual(1, 0, self.p) if self.tag == "Zeps" else (Fraction(1) if self.tag == "Q" else 1)

    def coerce(self, x):
        """Convert ``x`` into the canonical representative of this ring."""
        t = self.tag
        if t == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x.numerator)
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"{x!r} is not an integer")
            return x
        if t == "Q":
            return Fraction(x)
        if t == "F":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if isinstance(x, Dual):
            if x.p != self.p:
                raise RingMismatch("dual number characteristic mismatch")
            return x
        if isinstance(x, tuple):
            return Dual(x[0], x[1], self.p)
        return Dual(int(x), 0, self.p)

    def norm(self, x):
        """Normalize the result of native arithmetic (reduction mod p)."""
        if self.tag == "F":
            return x % self.p
        if self.tag == "Zeps" and isinstance(x, int):
            return Dual(x, 0, self.p)
        return x

    def is_unit(self, x) -> bool:
        t = self.tag
        if t == "Z":
            return x == 1 or x == -1
        if t == "Zeps":
            return x.a != 0
        return bool(x)

    def inverse(self, x):
        t = self.tag
        if t == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        if t == "Q":
            return 1 / x
        if t == "F":
            return pow(x, -1, self.p)
        if x.a == 0:
            raise ZeroDivisionError(f"{x} is not a unit")
        ia = pow(x.a, -1, self.p)
        return Dual(ia, -x.b * ia * ia, self.p)

    def __str__(self):
        return self.tag if self.p is None else f"{self.tag} {self.p}"


ZZ = CoeffRing.integers()
QQ = CoeffRing.rationals()


class Matrix:
    """Immutable dense matrix over a :class:`CoeffRing`."""

    __slots__ = ("ring", "rows", "cols", "_r")

    def __init__(self, ring: CoeffRing, rows: int, cols: int, entries: Iterable = ()):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        flat = [ring.coerce(x) for x in entries]
        if not flat:
            flat = [ring.zero] * (rows * cols)
        if len(flat) != rows * cols:
            raise DimensionMismatch(f"expected {rows * cols} entries, got {len(flat)}")
        self._r = tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows))

    @classmethod
    def _raw(cls, ring, rows, cols, data):
        # trusted constructor: data is a sequence of row sequences, already normalized
        m = object.__new__(cls)
        m.ring = ring
        m.rows = rows
        m.cols = cols
        m._r = tuple(tuple(r) for r in data)
        return m

    @classmethod
    def from_rows(cls, ring: CoeffRing, data: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        for r in data:
            if len(r) != cols:
                raise DimensionMismatch("ragged matrix rows")
        return cls._raw(ring, len(data), cols, [[ring.coerce(x) for x in r] for r in data])

    @classmethod
    def zeros(cls, ring: CoeffRing, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return cls._raw(ring, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring: CoeffRing, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ring: CoeffRing, n: int, c) -> "Matrix":
        c = ring.coerce(c)
        z = ring.zero
        return cls._raw(ring, n, n, [[c if i == j else z for j in range(n)] for i in range(n)])

    @property
    def entries(self) -> tuple:
        return tuple(x for r in self._r for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._r]

    def row(self, i: int) -> tuple:
        return self._r[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.rows == other.rows
                and self.cols == other.cols and self._r == other._r)

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self._r))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols}, {[list(r) for r in self._r]})"

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        nm = self.ring.norm
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[nm(a + b) for a, b in zip(ra, rb)] for ra, rb in zip(self._r, other._r)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        nm = self.ring.norm
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[nm(a - b) for a, b in zip(ra, rb)] for ra, rb in zip(self._r, other._r)])

    def __neg__(self) -> "Matrix":
        nm = self.ring.norm
        return Matrix._raw(self.ring, self.rows, self.cols, [[nm(-a) for a in r] for r in self._r])

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        nm = self.ring.norm
        return Matrix._raw(self.ring, self.rows, self.cols, [[nm(c * a) for a in r] for r in self._r])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        ring = self.ring
        nm = ring.norm
        z = ring.zero
        cols_b = list(zip(*other._r)) if other.rows else [()] * other.cols
        out = []
        for ra in self._r:
            nz = [(k, a) for k, a in enumerate(ra) if a]
            if not nz:
                out.append([z] * other.cols)
                continue
            row = []
            for cb in cols_b:
                s = z
                for k, a in nz:
                    b = cb[k]
                    if b:
                        s = s + a * b
                row.append(nm(s))
            out.append(row)
        return Matrix._raw(ring, self.rows, other.cols, out)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.ring, self.cols, self.rows,
                           [list(c) for c in zip(*self._r)] if self.rows else [[] for _ in range(self.cols)])

    def is_zero(self) -> bool:
        return not any(x for r in self._r for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, len(rows), len(cols), [[self._r[i][j] for j in cols] for i in rows])

    def map(self, ring: CoeffRing, fn) -> "Matrix":
        """Apply ``fn`` entrywise, producing a matrix over ``ring``."""
        return Matrix._raw(ring, self.rows, self.cols, [[ring.coerce(fn(x)) for x in r] for r in self._r])


def hstack(mats: Sequence[Matrix], ring: CoeffRing | None = None, rows: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(ring, rows or 0, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise DimensionMismatch("hstack row mismatch")
    return Matrix._raw(mats[0].ring, r, sum(m.cols for m in mats),
                       [[x for m in mats for x in m._r[i]] for i in range(r)])


def vstack(mats: Sequence[Matrix], ring: CoeffRing | None = None, cols: int | None = None) -> Matrix:
    if not mats:
        return Matrix.zeros(ring, 0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise DimensionMismatch("vstack column mismatch")
    return Matrix._raw(mats[0].ring, sum(m.rows for m in mats), c, [r for m in mats for r in m._r])


def block_diag(ring: CoeffRing, mats: Sequence[Matrix]) -> Matrix:
    R = sum(m.rows for m in mats)
    C = sum(m.cols for m in mats)
    z = ring.zero
    out = [[z] * C for _ in range(R)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = m._r[i]
        r0 += m.rows
        c0 += m.cols
    return Matrix._raw(ring, R, C, out)


def determinant(A: Matrix):
    """Exact determinant by fraction-free elimination (integer and field rings)."""
    if A.rows != A.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    ring = A.ring
    if not ring.supports_snf:
        raise UnsupportedRing("determinant over dual numbers is not provided")
    n = A.rows
    M = [[Fraction(x) for x in r] for r in A._r]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return ring.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return ring.coerce(det)


# ---------------------------------------------------------------------------
# Smith normal form

def _snf_work(A: Matrix, track_inverses: bool):
    ring = A.ring
    if not ring.supports_snf:
        raise UnsupportedRing("Smith normal form needs a principal ideal ring (Z, Q or F_p)")
    m, n = A.rows, A.cols
    D = [list(r) for r in A._r]
    z, o = ring.zero, ring.one
    U = [[o if i == j else z for j in range(m)] for i in range(m)]
    V = [[o if i == j else z for j in range(n)] for i in range(n)]
    Ui = [r[:] for r in U] if track_inverses else None
    Vi = [r[:] for r in V] if track_inverses else None
    nm = ring.norm
    is_int = ring.tag == "Z"

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_addmul(dst, src, q):
        # row_dst -= q * row_src
        D[dst] = [nm(a - q * b) for a, b in zip(D[dst], D[src])]
        U[dst] = [nm(a - q * b) for a, b in zip(U[dst], U[src])]
        if Ui is not None:
            for r in Ui:
                if r[dst]:
                    r[src] = nm(r[src] + q * r[dst])

    def col_addmul(dst, src, q):
        # col_dst -= q * col_src
        for r in D:
            if r[src]:
                r[dst] = nm(r[dst] - q * r[src])
        for r in V:
            if r[src]:
                r[dst] = nm(r[dst] - q * r[src])
        if Vi is not None:
            Vi[src] = [nm(a + q * b) for a, b in zip(Vi[src], Vi[dst])]

    def row_scale(i, c, cinv):
        D[i] = [nm(c * a) for a in D[i]]
        U[i] = [nm(c * a) for a in U[i]]
        if Ui is not None:
            for r in Ui:
                r[i] = nm(r[i] * cinv)

    t = 0
    while t < min(m, n):
        # smallest-absolute-value pivot, row-major tie break
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                x = Di[j]
                if x:
                    key = abs(x) if is_int else 0
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key <= 1:
                            break
            if best is not None and best[0] <= 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = D[t][t]
            if not is_int:
                pinv = ring.inverse(p)
                row_scale(t, pinv, p)
                for i in range(t + 1, m):
                    if D[i][t]:
                        row_addmul(i, t, D[i][t])
                for j in range(t + 1, n):
                    if D[t][j]:
                        col_addmul(j, t, D[t][j])
                break
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_addmul(i, t, D[i][t] // p)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_addmul(j, t, D[t][j] // p)
                    if D[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t to the pivot position
                best = (abs(D[t][t]), t, t)
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                _, i, j = best
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            # divisibility: p must divide every remaining entry
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, -1)
        if is_int and D[t][t] < 0:
            row_scale(t, -1, -1)
        t += 1

    def mk(rows, r, c):
        return Matrix._raw(ring, r, c, rows)

    return (mk(U, m, m), mk(D, m, n), mk(V, n, n),
            mk(Ui, m, m) if Ui is not None else None,
            mk(Vi, n, n) if Vi is not None else None)


def snf(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns ``(U, D, V)`` with ``U @ A @ V == D``.

    ``D`` is diagonal with d1 | d2 | ...; over the integers the nonzero
    diagonal entries are positive, over fields they are 1.
    """
    U, D, V, _, _ = _snf_work(A, False)
    return U, D, V


def snf_with_inverses(A: Matrix):
    """Like :func:`snf` but also returns ``U^-1`` and ``V^-1``."""
    return _snf_work(A, True)


def invariant_factors(A: Matrix) -> list:
    """Nonzero diagonal of the Smith form of ``A``."""
    _, D, _ = snf(A)
    return [D[i, i] for i in range(min(D.rows, D.cols)) if D[i, i]]


# ---------------------------------------------------------------------------
# Linear solving.  Systems are handed around as coefficient dictionaries
# {(equation, variable): value}; solvers skip zero entries.

def _z_solve(n_vars, coeffs, rhs, want_kernel):
    cols = [dict() for _ in range(n_vars)]
    for (e, v), c in coeffs.items():
        if c:
            cols[v][e] = c
    V = [{k: 1} for k in range(n_vars)]
    by_row: dict[int, set] = {}
    for k, col in enumerate(cols):
        for e in col:
            by_row.setdefault(e, set()).add(k)
    active = set(range(n_vars))
    pivots = []  # (row, column index)

    def sub(dst, src, q):
        cd, cs = cols[dst], cols[src]
        for e, x in cs.items():
            y = cd.get(e, 0) - q * x
            if y:
                if e not in cd:
                    by_row.setdefault(e, set()).add(dst)
                cd[e] = y
            elif e in cd:
                del cd[e]
                by_row[e].discard(dst)
        vd, vs = V[dst], V[src]
        for e, x in vs.items():
            y = vd.get(e, 0) - q * x
            if y:
                vd[e] = y
            elif e in vd:
                del vd[e]

    for r in sorted(by_row):
        nz = [k for k in by_row[r] if k in active]
        if not nz:
            continue
        while len(nz) > 1:
            k0 = min(nz, key=lambda k: (abs(cols[k][r]), k))
            p = cols[k0][r]
            rest = []
            for k in nz:
                if k == k0:
                    continue
                sub(k, k0, cols[k][r] // p)
                if r in cols[k]:
                    rest.append(k)
            nz = rest + [k0]
        k = nz[0]
        pivots.append((r, k))
        active.discard(k)

    kernel = [dict(V[k]) for k in sorted(active)] if want_kernel else None
    res = {e: x for e, x in rhs.items() if x}
    y = {}
    consistent = True
    pivot_rows = {r: k for r, k in pivots}
    for r in sorted(set(by_row) | set(res)):
        if r in pivot_rows:
            k = pivot_rows[r]
            val = res.get(r, 0)
            if val:
                p = cols[k][r]
                if val % p:
                    consistent = False
                    break
                q = val // p
                y[k] = q
                for e, x in cols[k].items():
                    t = res.get(e, 0) - q * x
                    if t:
                        res[e] = t
                    else:
                        res.pop(e, None)
        elif res.get(r, 0):
            consistent = False
            break
    sol = None
    if consistent:
        sol = [0] * n_vars
        for k, q in y.items():
            for v, x in V[k].items():
                sol[v] += q * x
    return sol, kernel


def _field_solve(ring, n_vars, coeffs, rhs, want_kernel):
    rows: dict[int, dict] = {}
    for (e, v), c in coeffs.items():
        if c:
            rows.setdefault(e, {})[v] = c
    eqs = sorted(set(rows) | {e for e, x in rhs.items() if x})
    is_f = ring.tag == "F"
    p = ring.p
    piv: dict[int, list] = {}  # pivot column -> [rowdict, rhs]
    consistent = True
    for e in eqs:
        r = dict(rows.get(e, {}))
        b = rhs.get(e, ring.zero)
        for c in [c for c in r if c in piv]:
            f = r.get(c)
            if not f:
                continue
            prow, pb = piv[c]
            for v, x in prow.items():
                y = r.get(v, 0) - f * x
                if is_f:
                    y %= p
                if y:
                    r[v] = y
                else:
                    r.pop(v, None)
            b = b - f * pb
            if is_f:
                b %= p
        if not r:
            if b:
                consistent = False
                if not want_kernel:
                    break
            continue
        c = min(r)
        inv = ring.inverse(r[c])
        if is_f:
            r = {v: (x * inv) % p for v, x in r.items()}
            b = (b * inv) % p
        else:
            r = {v: x * inv for v, x in r.items()}
            b = b * inv
        for c2, entry in piv.items():
            prow = entry[0]
            f = prow.get(c)
            if not f:
                continue
            for v, x in r.items():
                y = prow.get(v, 0) - f * x
                if is_f:
                    y %= p
                if y:
                    prow[v] = y
                else:
                    prow.pop(v, None)
            entry[1] = entry[1] - f * b
            if is_f:
                entry[1] %= p
        piv[c] = [r, b]
    sol = None
    if consistent:
        sol = [ring.zero] * n_vars
        for c, (r, b) in piv.items():
            sol[c] = ring.coerce(b)
    kernel = None
    if want_kernel:
        kernel = []
        for f in range(n_vars):
            if f in piv:
                continue
            vec = {f: ring.one}
            for c, (r, _) in piv.items():
                x = r.get(f)
                if x:
                    vec[c] = ring.norm(-x)
            kernel.append(vec)
    return sol, kernel


def _dual_solve(ring, n_eqs, n_vars, coeffs, rhs, want_kernel):
    # x = x0 + e x1 over F_p: the system splits block-triangularly into
    # A0 x0 = b0 and A0 x1 + A1 x0 = b1.
    F = CoeffRing("F", ring.p)
    fc = {}
    for (e, v), c in coeffs.items():
        if c.a:
            fc[(e, v)] = c.a
            fc[(e + n_eqs, v + n_vars)] = c.a
        if c.b:
            fc[(e + n_eqs, v)] = c.b
    fr = {}
    for e, x in rhs.items():
        if x.a:
            fr[e] = x.a
        if x.b:
            fr[e + n_eqs] = x.b
    sol, ker = _field_solve(F, 2 * n_vars, fc, fr, want_kernel)
    p = ring.p
    if sol is not None:
        sol = [Dual(sol[v], sol[v + n_vars], p) for v in range(n_vars)]
    if ker is not None:
        out = []
        for vec in ker:
            d = {}
            for v in range(n_vars):
                a, b = vec.get(v, 0), vec.get(v + n_vars, 0)
                if a or b:
                    d[v] = Dual(a, b, p)
            out.append(d)
        ker = out
    return sol, ker


def solve_system(ring: CoeffRing, n_eqs: int, n_vars: int, coeffs: dict, rhs: dict,
                 want_kernel: bool = False):
    """Solve a system given as ``{(eq, var): coeff}`` and ``{eq: value}``.

    Returns ``(solution, kernel)``; ``solution`` is a list of length
    ``n_vars`` or ``None`` if the system has no solution over ``ring``.
    ``kernel`` (when requested) is a list of sparse vectors spanning the
    solutions of the homogeneous system: a lattice basis over the integers,
    a vector-space basis over fields, and an ``F_p``-basis over dual numbers.
    """
    if ring.tag == "Z":
        return _z_solve(n_vars, coeffs, rhs, want_kernel)
    if ring.tag == "Zeps":
        return _dual_solve(ring, n_eqs, n_vars, coeffs, rhs, want_kernel)
    return _field_solve(ring, n_vars, coeffs, rhs, want_kernel)


def _matrix_system(A: Matrix):
    return {(i, j): x for i, r in enumerate(A._r) for j, x in enumerate(r) if x}


def solve_linear(A: Matrix, b: Matrix) -> Matrix | None:
    """Return a column ``x`` with ``A @ x == b``, or ``None`` if there is none."""
    if b.ring != A.ring:
        raise RingMismatch(f"{A.ring} vs {b.ring}")
    if b.cols != 1 or b.rows != A.rows:
        raise DimensionMismatch(f"A is {A.shape}, b is {b.shape}")
    rhs = {i: b[i, 0] for i in range(b.rows) if b[i, 0]}
    sol, _ = solve_system(A.ring, A.rows, A.cols, _matrix_system(A), rhs)
    if sol is None:
        return None
    return Matrix._raw(A.ring, A.cols, 1, [[A.ring.coerce(x)] for x in sol])


def nullspace(A: Matrix) -> Matrix:
    """Columns spanning ``{x : A x = 0}`` (a lattice basis over the integers)."""
    _, ker = solve_system(A.ring, A.rows, A.cols, _matrix_system(A), {}, want_kernel=True)
    z = A.ring.zero
    cols = [[vec.get(i, z) for i in range(A.cols)] for vec in ker]
    if not cols:
        return Matrix.zeros(A.ring, A.cols, 0)
    return Matrix.from_rows(A.ring, cols).T


def rank(A: Matrix) -> int:
    """Rank over the fraction field (integers) or the field itself."""
    if not A.ring.supports_snf:
        raise UnsupportedRing("rank over dual numbers is not defined here")
    return len(invariant_factors(A))
