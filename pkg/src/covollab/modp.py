"""Dense linear algebra over a prime field F_p on numpy int64 arrays."""

from __future__ import annotations

import numpy as np


def _as_int(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over F_p.

    Returns the nonzero rows of the RREF together with the pivot columns.
    """
    m = _as_int(a, p).copy()
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - col[hit, None] * m[r]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return RowReducer(a.shape[1], p).add(a)


def nullspace(a, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0} over F_p."""
    a = np.asarray(a, dtype=np.int64)
    return RowReducer.from_rows(a, p).kernel()


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b over F_p, or None when inconsistent."""
    a = _as_int(a, p)
    b = _as_int(b, p).reshape(-1, 1)
    red, piv = rref(np.hstack([a, b]), p)
    n = a.shape[1]
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x


def inv(a, p: int) -> np.ndarray:
    a = _as_int(a, p)
    n = a.shape[0]
    red, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod %d" % p)
    return red[:n, n:]


class RowReducer:
    """Incrementally maintained row space over F_p.

    Rows are added in chunks; the basis is kept in reduced echelon form so a
    new chunk is cleared against it with a single matrix product. This keeps
    memory proportional to the chunk size for very tall constraint systems.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pivots: list[int] = []

    @classmethod
    def from_rows(cls, a, p: int) -> "RowReducer":
        a = np.asarray(a, dtype=np.int64)
        red = cls(a.shape[1], p)
        if a.size:
            red.add(a)
        return red

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def reduce(self, rows) -> np.ndarray:
        rows = _as_int(rows, self.p)
        if self.pivots:
            rows = (rows - rows[:, self.pivots] @ self.basis) % self.p
        return rows

    def add(self, rows, chunk: int = 65536) -> int:
        rows = np.asarray(rows)
        for start in range(0, rows.shape[0], chunk):
            if self.full:
                break
            block = self.reduce(rows[start:start + chunk])
            block = block[np.any(block, axis=1)]
            if block.shape[0] == 0:
                continue
            new, newpiv = rref(block, self.p)
            if not newpiv:
                continue
            # clear the new pivot columns out of the old basis
            if self.pivots:
                old = (self.basis - self.basis[:, newpiv] @ new) % self.p
            else:
                old = self.basis
            merged = np.vstack([old, new])
            order = np.argsort(self.pivots + newpiv, kind="stable")
            self.basis = merged[order]
            self.pivots = sorted(self.pivots + newpiv)
        return self.rank

    def contains(self, row) -> bool:
        return not np.any(self.reduce(np.atleast_2d(row)))

    def kernel(self) -> np.ndarray:
        """Basis of the orthogonal complement {x : B x = 0}."""
        free = [c for c in range(self.ncols) if c not in set(self.pivots)]
        out = np.zeros((len(free), self.ncols), dtype=np.int64)
        for k, f in enumerate(free):
            out[k, f] = 1
            if self.pivots:
                out[k, self.pivots] = (-self.basis[:, f]) % self.p
        return out
