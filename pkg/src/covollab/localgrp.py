"""SL_n and Sp_2n over truncated power-series rings F_q[u]/(u^L), u = t^-1.

A ring element is an F_p-coordinate vector of length D = L*e: block l holds
the base-p digits of the F_q coefficient of u^l. Matrices are numpy arrays
of shape (..., n, n, D); multiplication contracts against the ring's
structure tensor so batches of matrices multiply in one einsum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations

import numpy as np

from . import modp
from .chevorder import congruence_kernel_order
from .fields import FqField, get_field
from .rootsys import Root, RootSystem, RootSystemType, build_root_system, euclidean_simple_roots


class PreconditionError(ValueError):
    pass


class InsufficientPrecision(ArithmeticError):
    """A negative power of u was applied to an entry of too low valuation."""


class NotInGroup(ValueError):
    pass


class TruncRing:
    """F_q[u]/(u^L) as an F_p-algebra of dimension D = L*e."""

    def __init__(self, fq: FqField | int, L: int):
        if isinstance(fq, int):
            fq = get_field(fq)
        if L < 1:
            raise PreconditionError(f"truncation level must be >= 1, got {L}")
        self.field = fq
        self.L = L
        self.p = fq.p
        self.e = fq.e
        self.D = L * fq.e
        e, D = self.e, self.D
        t = np.zeros((D, D, D), dtype=np.int64)
        for l1 in range(L):
            for l2 in range(L - l1):
                for c1 in range(e):
                    for c2 in range(e):
                        prod = int(fq.mul_table[self.p ** c1, self.p ** c2])
                        t[l1 * e + c1, l2 * e + c2, (l1 + l2) * e:(l1 + l2 + 1) * e] = fq.digit_table[prod]
        self.tensor = t

    def __repr__(self):
        return f"TruncRing(F_{self.field.q}, L={self.L})"

    def __eq__(self, other):
        return isinstance(other, TruncRing) and other.field == self.field and other.L == self.L

    def __hash__(self):
        return hash((self.field, self.L))

    @property
    def q(self) -> int:
        return self.field.q

    def truncated(self, L: int) -> "TruncRing":
        return TruncRing(self.field, L)

    def zero(self) -> np.ndarray:
        return np.zeros(self.D, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.element([1])

    def element(self, coeffs) -> np.ndarray:
        """Ring element sum_l coeffs[l] u^l, coefficients given as F_q ints."""
        v = self.zero()
        for l, c in enumerate(coeffs):
            if l < self.L:
                v[l * self.e:(l + 1) * self.e] = self.field.digit_table[int(c)]
        return v

    def monomial(self, c: int, power: int) -> np.ndarray:
        v = self.zero()
        if power < self.L:
            v[power * self.e:(power + 1) * self.e] = self.field.digit_table[int(c)]
        return v

    def coefficients(self, a) -> list[int]:
        a = np.asarray(a)
        return [self.field.from_digits(a[l * self.e:(l + 1) * self.e]) for l in range(self.L)]

    def add(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self.p

    def sub(self, a, b):
        return (np.asarray(a) - np.asarray(b)) % self.p

    def neg(self, a):
        return (-np.asarray(a)) % self.p

    def scale(self, a, k: int):
        return (np.asarray(a) * (k % self.p)) % self.p

    def mul(self, a, b):
        return np.einsum("...a,...b,abc->...c", a, b, self.tensor) % self.p

    def mul_matrix(self, a) -> np.ndarray:
        """Matrix of y -> a*y on coordinate vectors."""
        return np.einsum("a,abc->cb", np.asarray(a, dtype=np.int64), self.tensor) % self.p

    def is_unit(self, a) -> bool:
        return bool(np.any(np.asarray(a)[: self.e]))

    def inv(self, a) -> np.ndarray:
        if not self.is_unit(a):
            raise ZeroDivisionError("element is not a unit")
        x = modp.solve(self.mul_matrix(a), self.one(), self.p)
        return x

    def power(self, a, k: int) -> np.ndarray:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.one()
        base = np.asarray(a, dtype=np.int64)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def valuation(self, a) -> int:
        """u-adic valuation, capped at L (L means zero at this truncation)."""
        blocks = np.asarray(a).reshape(self.L, self.e)
        nz = np.nonzero(blocks.any(axis=1))[0]
        return int(nz[0]) if nz.size else self.L

    def shift(self, a, s: int, L_out: int | None = None) -> np.ndarray:
        """Multiply by u^s (s may be negative) and truncate at level L_out.

        Negative s requires every coefficient below u^-s to vanish.
        """
        L_out = self.L if L_out is None else L_out
        e = self.e
        a = np.asarray(a)
        blocks = a.reshape(a.shape[:-1] + (self.L, e))
        if s < 0 and np.any(blocks[..., : -s, :]):
            raise InsufficientPrecision(f"u^{s} applied to an entry of valuation < {-s}")
        out = np.zeros(a.shape[:-1] + (L_out, e), dtype=np.int64)
        for l in range(L_out):
            src = l - s
            if 0 <= src < self.L:
                out[..., l, :] = blocks[..., src, :]
        return out.reshape(a.shape[:-1] + (L_out * e,))

    def elements(self):
        """Every element as an int array (q^L rows); for small rings only."""
        n = self.q ** self.L
        out = np.zeros((n, self.D), dtype=np.int64)
        for idx in range(n):
            k = idx
            coeffs = []
            for _ in range(self.L):
                coeffs.append(k % self.q)
                k //= self.q
            out[idx] = self.element(coeffs)
        return out


# ---------------------------------------------------------------------------
# matrices over a TruncRing

def mat_identity(ring: TruncRing, n: int) -> np.ndarray:
    m = np.zeros((n, n, ring.D), dtype=np.int64)
    for i in range(n):
        m[i, i, 0] = 1
    return m


def mat_from_field(ring: TruncRing, rows) -> np.ndarray:
    """Constant matrix from nested lists of F_q ints."""
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[0]
    m = np.zeros((n, n, ring.D), dtype=np.int64)
    m[..., : ring.e] = ring.field.digit_table[rows]
    return m


def matmul(ring: TruncRing, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if ring.D == 1:
        return (np.matmul(a[..., 0], b[..., 0]) % ring.p)[..., None]
    return np.einsum("...ika,...kjb,abc->...ijc", a, b, ring.tensor, optimize=True) % ring.p


def mat_regular(ring: TruncRing, a) -> np.ndarray:
    """(nD x nD) F_p matrix of left multiplication by a on R^n."""
    a = np.asarray(a, dtype=np.int64)
    n, D = a.shape[0], ring.D
    blocks = np.einsum("ija,abc->icjb", a, ring.tensor) % ring.p
    return blocks.reshape(n * D, n * D)


def mat_inv(ring: TruncRing, a) -> np.ndarray:
    n, D = a.shape[0], ring.D
    big = modp.inv(mat_regular(ring, a), ring.p)
    # block (i, j) of the inverse is multiplication by (a^-1)_ij; read it off on 1
    return big.reshape(n, D, n, D)[:, :, :, 0].transpose(0, 2, 1).copy()


def mat_det(ring: TruncRing, a) -> np.ndarray:
    """Leibniz determinant, batched over leading axes."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[-3]
    total = np.zeros(a.shape[:-3] + (ring.D,), dtype=np.int64)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = a[..., 0, perm[0], :]
        for i in range(1, n):
            term = ring.mul(term, a[..., i, perm[i], :])
        total = (total + sign * term) % ring.p
    return total


def mat_truncate(ring: TruncRing, a, L: int) -> np.ndarray:
    return np.asarray(a)[..., : L * ring.e]


def mat_key(a) -> bytes:
    return np.asarray(a, dtype=np.uint8).tobytes()


def entry_valuations(ring: TruncRing, a) -> np.ndarray:
    """u-adic valuation of each entry (batched), capped at L."""
    a = np.asarray(a)
    blocks = np.any(a.reshape(a.shape[:-1] + (ring.L, ring.e)) != 0, axis=-1)
    first = np.argmax(blocks, axis=-1)
    return np.where(blocks.any(axis=-1), first, ring.L)


def mat_level(ring: TruncRing, a) -> np.ndarray:
    """Largest l <= L with a = I mod u^l (batched)."""
    n = np.asarray(a).shape[-3]
    diff = (np.asarray(a) - mat_identity(ring, n)) % ring.p
    v = entry_valuations(ring, diff)
    return v.min(axis=(-1, -2))


@dataclass(frozen=True, eq=False)
class TruncMatrix:
    ring: TruncRing
    data: np.ndarray

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __matmul__(self, other: "TruncMatrix") -> "TruncMatrix":
        return TruncMatrix(self.ring, matmul(self.ring, self.data, other.data))

    def __eq__(self, other):
        return (isinstance(other, TruncMatrix) and self.ring == other.ring
                and np.array_equal(self.data % self.ring.p, other.data % other.ring.p))

    def __hash__(self):
        return hash(mat_key(self.data))

    def inverse(self) -> "TruncMatrix":
        return TruncMatrix(self.ring, mat_inv(self.ring, self.data))

    def det(self) -> np.ndarray:
        return mat_det(self.ring, self.data)

    def reduce(self, L: int) -> "TruncMatrix":
        return TruncMatrix(self.ring.truncated(L), mat_truncate(self.ring, self.data, L).copy())

    def entries(self) -> list[list[list[int]]]:
        """Entries as lists of F_q coefficients of 1, u, u^2, ..."""
        return [[self.ring.coefficients(self.data[i, j]) for j in range(self.n)]
                for i in range(self.n)]


# ---------------------------------------------------------------------------
# group models

def _symplectic_form(n: int) -> np.ndarray:
    j = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        j[a, n - 1 - a] = 1 if a < n // 2 else -1
    return j


@dataclass(eq=False)
class GroupModel:
    """SL_n (type A_{n-1}) or Sp_2r (type C_r) over a TruncRing.

    ``weights[a]`` is the torus weight of basis vector a in orthonormal
    coordinates; root elements are u_beta(x) = I + x X_beta with X_beta a
    Chevalley basis vector supported where weight differences equal beta.
    """

    kind: str
    rank: int
    ring: TruncRing
    rs: RootSystem = field(init=False)
    size: int = field(init=False)

    def __post_init__(self):
        if self.kind not in ("SL", "Sp"):
            raise PreconditionError(f"no matrix model for kind {self.kind!r}")
        if self.kind == "SL":
            self.rs = build_root_system(RootSystemType("A", self.rank))
            self.size = self.rank + 1
        else:
            if self.rank < 2:
                raise PreconditionError("Sp_2r model covers C_r with r >= 2")
            self.rs = build_root_system(RootSystemType("C", self.rank))
            self.size = 2 * self.rank
        self._setup()

    @classmethod
    def for_type(cls, rstype: RootSystemType, ring: TruncRing) -> "GroupModel":
        if rstype.family == "A":
            return cls("SL", rstype.rank, ring)
        if rstype.family == "C":
            return cls("Sp", rstype.rank, ring)
        raise PreconditionError(f"matrix models exist for types A and C only, not {rstype}")

    def with_ring(self, ring: TruncRing) -> "GroupModel":
        return GroupModel(self.kind, self.rank, ring)

    @property
    def rstype(self) -> RootSystemType:
        return self.rs.rstype

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.size}"

    def _setup(self):
        N = self.size
        simple_e = euclidean_simple_roots(self.rstype)
        dim = len(simple_e[0])
        if self.kind == "SL":
            weights = [tuple(Fraction(int(i == a)) for i in range(dim)) for a in range(N)]
            self.form = None
        else:
            r = self.rank
            weights = []
            for a in range(N):
                k = a if a < r else N - 1 - a
                sgn = 1 if a < r else -1
                weights.append(tuple(Fraction(sgn * int(i == k)) for i in range(dim)))
            self.form = _symplectic_form(N)
        self.weights = weights
        # euclidean vector of each root -> simple coordinates
        e_of_root = {}
        for beta in self.rs.roots:
            v = tuple(sum(c * s[i] for c, s in zip(beta, simple_e)) for i in range(dim))
            e_of_root[v] = beta
        self._e_to_root = e_of_root
        self._root_to_e = {b: v for v, b in e_of_root.items()}
        vecs = {}
        for beta, v in self._root_to_e.items():
            pos = [(a, b) for a in range(N) for b in range(N)
                   if tuple(x - y for x, y in zip(weights[a], weights[b])) == v]
            x = np.zeros((N, N), dtype=np.int64)
            i, j = pos[0]
            x[i, j] = 1
            if self.kind == "Sp":
                eps = np.array([self.form[c, N - 1 - c] for c in range(N)])
                jp, ip = N - 1 - j, N - 1 - i
                x[jp, ip] = -eps[ip] * eps[jp] if (jp, ip) != (i, j) else 1
                assert not np.any(x.T @ self.form + self.form @ x)
            assert {tuple(t) for t in np.argwhere(x)} <= set(pos)
            vecs[beta] = x
        self.root_vectors = vecs

    def root_of_weight_difference(self, a: int, b: int) -> Root | None:
        v = tuple(x - y for x, y in zip(self.weights[a], self.weights[b]))
        return self._e_to_root.get(v)

    # -- elements -------------------------------------------------------
    def identity(self) -> np.ndarray:
        return mat_identity(self.ring, self.size)

    def root_element_array(self, beta, x) -> np.ndarray:
        beta = self.rs.check(beta)
        X = self.root_vectors[beta]
        g = self.identity()
        g = (g + X[:, :, None] * np.asarray(x, dtype=np.int64)[None, None, :]) % self.ring.p
        return g

    def coroot(self, beta) -> tuple[Fraction, ...]:
        v = self._root_to_e[self.rs.check(beta)]
        nrm = sum(c * c for c in v)
        return tuple(2 * c / nrm for c in v)

    def torus_element_array(self, cochar, s) -> np.ndarray:
        """Image of the unit s under the cocharacter ``cochar`` (euclidean coords)."""
        g = np.zeros((self.size, self.size, self.ring.D), dtype=np.int64)
        for a, w in enumerate(self.weights):
            k = sum(x * y for x, y in zip(w, cochar))
            assert k.denominator == 1
            g[a, a] = self.ring.power(s, int(k))
        return g

    def coroot_element_array(self, j: int, s) -> np.ndarray:
        """alpha_j^vee(s) for the simple root with 0-based index j."""
        return self.torus_element_array(self.coroot(self.rs.simple[j]), s)

    def is_member(self, a) -> bool:
        a = np.asarray(a, dtype=np.int64)
        if self.kind == "SL":
            return bool(np.array_equal(mat_det(self.ring, a), self.ring.one()))
        J = np.zeros((self.size, self.size, self.ring.D), dtype=np.int64)
        J[..., 0] = self.form % self.ring.p
        at = np.swapaxes(a, 0, 1)
        return bool(np.array_equal(matmul(self.ring, matmul(self.ring, at, J), a), J % self.ring.p))

    def field_generators(self) -> np.ndarray:
        """u_{+-alpha_i}(w^c) over this ring: generators of G(F_q)."""
        gens = []
        for s in self.rs.simple:
            for sign in (1, -1):
                beta = tuple(sign * c for c in s)
                for c in self.ring.field.basis():
                    gens.append(self.root_element_array(beta, self.ring.monomial(c, 0)))
        return np.array(gens)

    def congruence_generators(self, level: int) -> np.ndarray:
        """u_beta(w^c u^m) for all roots, l <= m < L, and alpha_j^vee(1 + w^c u^m)."""
        ring = self.ring
        gens = []
        for m in range(level, ring.L):
            for c in ring.field.basis():
                x = ring.monomial(c, m)
                for beta in self.rs.roots:
                    gens.append(self.root_element_array(beta, x))
                s = ring.add(ring.one(), x)
                for j in range(self.rank):
                    gens.append(self.coroot_element_array(j, s))
        return np.array(gens) if gens else np.zeros((0, self.size, self.size, ring.D), dtype=np.int64)

    def full_generators(self) -> np.ndarray:
        """Generators of G(F_q[u]/u^L): field generators plus level-1 congruence ones."""
        gens = self.field_generators()
        if self.ring.L > 1:
            gens = np.concatenate([gens, self.congruence_generators(1)])
        return gens

    # -- shape predicates for the standard parabolics of a simple root ---
    def grading(self, alpha) -> list[int]:
        """k_a = alpha-coefficient of weight_a - weight_0, shifted to start at 0."""
        i = self._simple_index(alpha)
        k = [0]
        for a in range(1, self.size):
            beta = self.root_of_weight_difference(a, 0)
            k.append(beta[i])
        lo = min(k)
        return [x - lo for x in k]

    def _simple_index(self, alpha) -> int:
        if isinstance(alpha, (int, np.integer)):
            if not 1 <= alpha <= self.rank:
                raise PreconditionError(f"simple root index {alpha} out of range 1..{self.rank}")
            return int(alpha) - 1
        alpha = self.rs.check(alpha)
        if alpha not in self.rs.simple:
            raise PreconditionError(f"{alpha} is not a simple root")
        return alpha.index(1)

    def in_opposite_unipotent(self, alpha, a) -> np.ndarray:
        """Batched test for membership in R_u(P_alpha^-)."""
        k = np.array(self.grading(alpha))
        mask = k[:, None] >= k[None, :]
        diff = (np.asarray(a) - self.identity()) % self.ring.p
        bad = np.any(diff != 0, axis=-1) & mask
        return ~np.any(bad, axis=(-1, -2))

    def in_opposite_parabolic(self, alpha, a) -> np.ndarray:
        k = np.array(self.grading(alpha))
        mask = k[:, None] > k[None, :]
        bad = np.any(np.asarray(a) != 0, axis=-1) & mask
        return ~np.any(bad, axis=(-1, -2))

    def center_size_over_field(self) -> int:
        q = self.ring.q
        if self.kind == "SL":
            from math import gcd
            return gcd(self.size, q - 1)
        return 1 if q % 2 == 0 else 2


def root_element(model: GroupModel, beta, x) -> TruncMatrix:
    """u_beta(x); ``x`` is a ring coordinate vector or an F_q int (constant)."""
    if np.ndim(x) == 0:
        x = model.ring.monomial(int(x), 0)
    return TruncMatrix(model.ring, model.root_element_array(beta, x))


def congruence_level(model: GroupModel, g: TruncMatrix) -> int:
    if not model.is_member(g.data):
        raise NotInGroup(f"matrix is not in {model.name}")
    return int(mat_level(model.ring, g.data))


# ---------------------------------------------------------------------------
# h(theta_alpha)

@dataclass(frozen=True)
class ThetaConjugator:
    """Diagonal d = diag(u^k_a) realizing h(theta_alpha) by g -> d g d^-1.

    Entries of d may have negative total degree relative to each other, so
    d is kept symbolically; conjugation shifts entry (a, b) by u^(k_a - k_b).
    """

    model: GroupModel
    alpha_index: int
    exponents: tuple[int, ...]

    @property
    def spread(self) -> int:
        return max(self.exponents) - min(self.exponents)

    def _conj(self, g, sign: int) -> np.ndarray:
        ring = self.model.ring
        g = np.asarray(g, dtype=np.int64)
        L_out = ring.L - self.spread
        if L_out < 1:
            raise InsufficientPrecision("truncation too short for this conjugator")
        N = self.model.size
        out = np.zeros(g.shape[:-1] + (L_out * ring.e,), dtype=np.int64)
        for a in range(N):
            for b in range(N):
                s = sign * (self.exponents[a] - self.exponents[b])
                out[..., a, b, :] = ring.shift(g[..., a, b, :], s, L_out)
        return out

    def apply(self, g) -> np.ndarray:
        """h(theta)(g) modulo u^(L - spread)."""
        return self._conj(g, 1)

    def apply_inverse(self, g) -> np.ndarray:
        return self._conj(g, -1)

    def symplectic_exponents(self) -> tuple[int, ...] | None:
        """Exponents of a scalar multiple of d lying in Sp itself, if one exists.

        d always lies in GSp with multiplier u^c, c = k_a + k_a'; dividing by
        u^(c/2) lands in Sp exactly when c is even.
        """
        if self.model.kind != "Sp":
            return None
        k = self.exponents
        N = self.model.size
        sums = {k[a] + k[N - 1 - a] for a in range(N)}
        assert len(sums) == 1
        c = sums.pop()
        if c % 2:
            return None
        return tuple(x - c // 2 for x in k)


def theta_conjugator(model: GroupModel, alpha) -> ThetaConjugator:
    i = model._simple_index(alpha)
    return ThetaConjugator(model, i + 1, tuple(model.grading(i + 1)))


def verify_p_properties(model: GroupModel, alpha, level: int) -> dict:
    """Check P1-P3 for h(theta_alpha) on the generators of G_level."""
    ring = model.ring
    L = ring.L
    i = model._simple_index(alpha)
    theta = theta_conjugator(model, i + 1)
    drop = model.rs.highest[i]
    lG = max(model.rs.highest)
    L_eff = L - theta.spread
    if not (lG <= level < L):
        raise PreconditionError(f"need l(G)={lG} <= l={level} < L={L}")
    if L_eff < level + 1:
        raise PreconditionError(
            f"truncation L={L} too short: images are only known mod u^{L_eff}, need u^{level + 1}")
    small = ring.truncated(L_eff)

    # P1 on every root element over a spanning set of parameters
    p1_fail = []
    p1_count = 0
    for beta in model.rs.roots:
        c = beta[i]
        for m in range(max(0, -c), L):
            for w in ring.field.basis():
                x = ring.monomial(w, m)
                img = theta.apply(model.root_element_array(beta, x))
                want = model.with_ring(small).root_element_array(beta, ring.shift(x, c, L_eff))
                p1_count += 1
                if not np.array_equal(img, want):
                    p1_fail.append((beta, m, w))
    # torus elements commute with d; sample units w and w + u
    for j in range(model.rank):
        for w in ring.field.units()[:3]:
            for s in (ring.monomial(int(w), 0), ring.add(ring.monomial(int(w), 0), ring.monomial(1, 1))):
                t = model.coroot_element_array(j, s)
                p1_count += 1
                if not np.array_equal(theta.apply(t), mat_truncate(ring, t, L_eff)):
                    p1_fail.append(("torus", j, int(w)))

    gens = model.congruence_generators(level)
    images = theta.apply(gens)
    levels = mat_level(small, images)
    min_level = int(levels.min())
    observed_drop = level - min_level
    p2_ok = bool(np.all(levels >= level - drop))
    red_l = mat_truncate(small, images, level)
    red_l1 = mat_truncate(small, images, level + 1)
    m_l = model.with_ring(ring.truncated(level))
    m_l1 = model.with_ring(ring.truncated(level + 1))
    p3_u = m_l.in_opposite_unipotent(i + 1, red_l)
    p3_p = m_l1.in_opposite_parabolic(i + 1, red_l1)
    return {
        "model": model.name,
        "q": ring.q,
        "alpha": i + 1,
        "level": level,
        "trunc": L,
        "effective_trunc": L_eff,
        "conjugator_exponents": list(theta.exponents),
        "l_G": lG,
        "expected_drop": drop,
        "observed_drop": observed_drop,
        "p1_checked": p1_count,
        "p1_failures": p1_fail,
        "p1_ok": not p1_fail,
        "generators": int(len(gens)),
        "p2_ok": p2_ok,
        "p2_drop_exact": observed_drop == drop,
        "p3_unipotent_ok": bool(np.all(p3_u)),
        "p3_parabolic_ok": bool(np.all(p3_p)),
    }


def congruence_generation_audit(model: GroupModel, level: int, max_elements: int | None = None) -> dict:
    """BFS closure of the level-l generators against the kernel order."""
    from .cayley import EnumerationBoundExceeded, enumerate_group

    ring = model.ring
    if not 1 <= level < ring.L:
        raise PreconditionError(f"need 1 <= l={level} < L={ring.L}")
    expected = congruence_kernel_order(model.rstype, ring.q, level, ring.L)
    gens = model.congruence_generators(level)
    report = {"model": model.name, "q": ring.q, "level": level, "trunc": ring.L,
              "generators": int(len(gens)), "expected_order": expected}
    try:
        table = enumerate_group(ring, gens, max_elements=max_elements, cayley=False)
    except EnumerationBoundExceeded as exc:
        report.update(closure_order=None, complete=False, matches=False, detail=str(exc))
        return report
    report.update(closure_order=table.order, complete=True, matches=table.order == expected)
    return report


def centralizer_audit(model: GroupModel, max_elements: int = 10 ** 6) -> dict:
    """Centralizer of G(F_q) inside G(F_q[u]/u^L), compared with the center."""
    ring = model.ring
    if ring.q <= 3:
        raise PreconditionError("centralizer claim needs q > 3")
    N, D, p = model.size, ring.D, ring.p
    nvar = N * N * D
    basis = np.eye(nvar, dtype=np.int64).reshape(nvar, N, N, D)
    rows = []
    for s in model.field_generators():
        comm = (matmul(ring, basis, s) - matmul(ring, s, basis)) % p
        rows.append(comm.reshape(nvar, -1).T)
    kernel = modp.nullspace(np.vstack(rows), p)
    dim = kernel.shape[0]
    if p ** dim > max_elements:
        raise PreconditionError(f"commutant has {p}^{dim} elements, above bound {max_elements}")
    members = []
    for coeffs in np.ndindex(*([p] * dim)):
        x = (np.array(coeffs, dtype=np.int64) @ kernel) % p if dim else np.zeros(nvar, dtype=np.int64)
        g = x.reshape(N, N, D)
        if ring.is_unit(mat_det(ring, g)) and model.is_member(g):
            members.append(g)
    # center of G(R): scalar matrices inside the group
    center = []
    for r in ring.elements():
        g = np.zeros((N, N, D), dtype=np.int64)
        for a in range(N):
            g[a, a] = r
        if model.is_member(g):
            center.append(g)
    ckeys = {mat_key(g) for g in center}
    mkeys = {mat_key(g) for g in members}
    const = sum(1 for g in center if not np.any(g[..., ring.e:]))
    return {
        "model": model.name,
        "q": ring.q,
        "trunc": ring.L,
        "commutant_dim_fp": dim,
        "centralizer_order": len(members),
        "center_order": len(center),
        "center_constant_order": const,
        "expected_field_center": model.center_size_over_field(),
        "equals_center": ckeys == mkeys,
        "centralizer": [TruncMatrix(ring, g).entries() for g in members],
    }
