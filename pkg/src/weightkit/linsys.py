"""Assemble matrix equations in block unknowns into one linear system.

Every homotopy question in the library has the shape

    sum_k  L_k · X_{u_k} · R_k  =  C

for unknown matrices ``X_u`` and known ``L_k``, ``R_k``, ``C``.  A
:class:`LinearSystem` collects such equations, flattens them into a
single sparse system and hands it to :func:`ring_linalg.solve_system`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch, RingMismatch
from .ring_linalg import CoeffRing, Matrix, solve_system


@dataclass
class _Block:
    rows: int
    cols: int
    offset: int
    name: str


@dataclass
class LinearSystem:
    ring: CoeffRing
    blocks: list = field(default_factory=list)
    n_vars: int = 0
    n_eqs: int = 0
    coeffs: dict = field(default_factory=dict)
    rhs: dict = field(default_factory=dict)

    def unknown(self, rows: int, cols: int, name: str = "") -> int:
        """Register an unknown ``rows × cols`` matrix; returns its handle."""
        self.blocks.append(_Block(rows, cols, self.n_vars, name))
        self.n_vars += rows * cols
        return len(self.blocks) - 1

    def equation(self, terms, rhs: Matrix | None = None, shape: tuple[int, int] | None = None):
        """Add ``sum L·X_u·R = rhs``.

        ``terms`` is a sequence of ``(L, u, R)``; ``L`` or ``R`` may be
        ``None`` for an identity factor.  ``shape`` is required when
        ``rhs`` is omitted (meaning zero) and cannot be inferred.
        """
        ring = self.ring
        if rhs is not None:
            if rhs.ring != ring:
                raise RingMismatch("equation right-hand side over the wrong ring")
            shape = rhs.shape
        if shape is None:
            for L, u, R in terms:
                blk = self.blocks[u]
                shape = (L.rows if L is not None else blk.rows, R.cols if R is not None else blk.cols)
                break
        if shape is None:
            raise DimensionMismatch("cannot infer equation shape")
        m, n = shape
        base = self.n_eqs
        co = self.coeffs
        nm = ring.norm
        for L, u, R in terms:
            blk = self.blocks[u]
            lr = L.rows if L is not None else blk.rows
            rc = R.cols if R is not None else blk.cols
            if (L is not None and L.cols != blk.rows) or (R is not None and R.rows != blk.cols) or (lr, rc) != (m, n):
                raise DimensionMismatch(f"term for unknown {blk.name or u} has incompatible shape")
            if L is not None and L.ring != ring or R is not None and R.ring != ring:
                raise RingMismatch("equation coefficient over the wrong ring")
            if L is None:
                lnz = [[(s, ring.one)] for s in range(m)]
            else:
                lnz = [[(a, x) for a, x in enumerate(L.row(s)) if x] for s in range(m)]
            if R is None:
                rnz = [[(t, ring.one)] for t in range(blk.cols)]
            else:
                rnz = [[(t, x) for t, x in enumerate(R.row(b)) if x] for b in range(blk.cols)]
            off, bc = blk.offset, blk.cols
            for s in range(m):
                for a, lx in lnz[s]:
                    rowvar = off + a * bc
                    for b in range(bc):
                        for t, rx in rnz[b]:
                            key = (base + s * n + t, rowvar + b)
                            val = co.get(key, 0) + lx * rx
                            val = nm(val)
                            if val:
                                co[key] = val
                            else:
                                co.pop(key, None)
        if rhs is not None:
            for s in range(m):
                for t, x in enumerate(rhs.row(s)):
                    if x:
                        self.rhs[base + s * n + t] = x
        self.n_eqs += m * n

    def fix_zero(self, u: int, rows=None, cols=None):
        """Constrain entries of ``X_u`` (restricted to given row/column indices) to vanish."""
        blk = self.blocks[u]
        rows = range(blk.rows) if rows is None else rows
        cols = range(blk.cols) if cols is None else cols
        for a in rows:
            for b in cols:
                self.coeffs[(self.n_eqs, blk.offset + a * blk.cols + b)] = self.ring.one
                self.n_eqs += 1

    def _unpack(self, vec) -> list[Matrix]:
        z = self.ring.zero
        out = []
        for blk in self.blocks:
            vals = [vec.get(blk.offset + k, z) if isinstance(vec, dict) else vec[blk.offset + k]
                    for k in range(blk.rows * blk.cols)]
            out.append(Matrix._raw(self.ring, blk.rows, blk.cols,
                                   [vals[r * blk.cols:(r + 1) * blk.cols] for r in range(blk.rows)]))
        return out

    def solve(self) -> list[Matrix] | None:
        """One solution (a matrix per unknown, in registration order) or ``None``."""
        sol, _ = solve_system(self.ring, self.n_eqs, self.n_vars, self.coeffs, self.rhs)
        return None if sol is None else self._unpack(sol)

    def solve_with_kernel(self):
        """``(particular, kernel)``; ``kernel`` is a list of homogeneous solutions."""
        sol, ker = solve_system(self.ring, self.n_eqs, self.n_vars, self.coeffs, self.rhs, want_kernel=True)
        if sol is None:
            return None, [self._unpack(k) for k in ker]
        return self._unpack(sol), [self._unpack(k) for k in ker]
