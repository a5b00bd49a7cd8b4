"""Finite fields F_q and prime-power utilities.

Elements of F_q (q = p^e) are encoded as integers 0..q-1: the base-p digits
of the integer are the coefficients of a polynomial in a fixed root ``w`` of
the defining modulus, lowest degree first. Prime fields are plain residues.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

# Conway polynomials, coefficients lowest degree first (monic).
CONWAY = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
    49: (3, 6, 1),
    81: (2, 0, 0, 2, 1),
    121: (2, 7, 1),
    125: (3, 3, 0, 1),
}

MAX_TABLE_Q = 1 << 12


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p**e, or None if q is not a prime power.

    Trial division; adequate for q < 2**31.
    """
    if not isinstance(q, (int, np.integer)) or q < 2:
        return None
    q = int(q)
    p = None
    d = 2
    while d * d <= q:
        if q % d == 0:
            p = d
            break
        d += 1 if d == 2 else 2
    if p is None:
        return q, 1
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


def is_prime_power(q: int) -> bool:
    return factor_prime_power(q) is not None


def _poly_mulmod(a, b, mod, p):
    e = len(mod) - 1
    out = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k]
        if c:
            for j in range(e + 1):
                out[k - e + j] = (out[k - e + j] - c * mod[j]) % p
    return out[:e]


def _is_irreducible(mod, p) -> bool:
    # brute force: no monic factor of degree 1..e//2
    e = len(mod) - 1
    for d in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=d):
            fac = list(tail) + [1]
            rem = list(mod)
            for k in range(e, d - 1, -1):
                c = rem[k]
                if c:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - c * fac[j]) % p
            if not any(rem[:d]):
                return False
    return True


def _find_modulus(p: int, e: int):
    for tail in product(range(p), repeat=e):
        mod = tuple(reversed(tail)) + (1,)
        if mod[0] and _is_irreducible(mod, p):
            return mod
    raise ValueError("no irreducible polynomial found")


class FqField:
    """The finite field with q elements, with vectorised table arithmetic."""

    def __init__(self, q: int):
        pe = factor_prime_power(q)
        if pe is None:
            raise ValueError(f"q={q} is not a prime power")
        if q > MAX_TABLE_Q:
            raise ValueError(f"q={q} too large for table arithmetic (max {MAX_TABLE_Q})")
        self.q = q
        self.p, self.e = pe
        if self.e == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = CONWAY.get(q) or _find_modulus(self.p, self.e)
            if not _is_irreducible(self.modulus, self.p):
                raise ValueError(f"modulus for F_{q} is reducible")
        self._build_tables()

    def __repr__(self):
        return f"FqField({self.q})"

    def __eq__(self, other):
        return isinstance(other, FqField) and other.q == self.q and other.modulus == self.modulus

    def __hash__(self):
        return hash((self.q, self.modulus))

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_digits(self, ds) -> int:
        v = 0
        for d in reversed(list(ds)):
            v = v * self.p + int(d) % self.p
        return v

    def _build_tables(self):
        q, p = self.q, self.p
        els = np.arange(q)
        dig = np.array([self.digits(a) for a in range(q)], dtype=np.int64)
        self.digit_table = dig
        weights = p ** np.arange(self.e)
        self.add_table = (((dig[:, None, :] + dig[None, :, :]) % p) @ weights).astype(np.int64)
        self.neg_table = (((-dig) % p) @ weights).astype(np.int64)
        if self.e == 1:
            self.mul_table = (els[:, None] * els[None, :]) % p
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                da = self.digits(a)
                for b in range(a, q):
                    v = self.from_digits(_poly_mulmod(da, self.digits(b), self.modulus, p))
                    mul[a, b] = mul[b, a] = v
            self.mul_table = mul
        # discrete logs w.r.t. a primitive element
        for g in range(2, q) if q > 2 else [1]:
            seen = np.zeros(q, dtype=bool)
            x = 1
            order = 0
            while not seen[x]:
                seen[x] = True
                x = int(self.mul_table[x, g])
                order += 1
            if order == q - 1:
                break
        self.generator = g
        exp = np.zeros(q - 1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            x = int(self.mul_table[x, g])
        self.exp_table = exp
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        self.log_table = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        self.inv_table = inv

    # scalar and vectorised operations share the same table lookups
    def add(self, a, b):
        return self.add_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.inv_table[a]

    def power(self, a, k):
        """a**k elementwise; negative k allowed for nonzero a."""
        a = np.asarray(a)
        k = np.asarray(k)
        if np.any((a == 0) & (k < 0)):
            raise ZeroDivisionError("negative power of 0")
        res = self.exp_table[(self.log_table[np.where(a == 0, 1, a)] * k) % (self.q - 1)]
        res = np.where(a == 0, np.where(k == 0, 1, 0), res)
        return res if res.ndim else int(res)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return int(n) % self.p

    def basis(self) -> list[int]:
        """F_p-basis 1, w, ..., w^(e-1) of F_q."""
        return [self.p ** k for k in range(self.e)]

    def units(self) -> np.ndarray:
        return np.arange(1, self.q)

    def to_fp_matrix(self, m) -> np.ndarray:
        """Restriction of scalars for a matrix with F_q entries.

        An (r x c) matrix becomes (r*e x c*e) over F_p whose F_p-row space
        has dimension e * rank_Fq(m).
        """
        m = np.asarray(m, dtype=np.int64)
        r, c = m.shape
        blocks = []
        for k in range(self.e):
            scaled = self.mul_table[m, self.p ** k]
            blocks.append(self.digit_table[scaled].reshape(r, c * self.e))
        return np.vstack(blocks)


@lru_cache(maxsize=None)
def get_field(q: int) -> FqField:
    return FqField(q)
