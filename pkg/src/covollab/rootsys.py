"""Root systems of the split simple types, in simple-root coordinates.

Roots are integer tuples of coefficients on the simple roots, Bourbaki
numbering. A Euclidean realization is used only to derive the Cartan matrix;
everything after construction is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

Root = tuple[int, ...]

SUPPORTED = {
    "A": "r >= 1",
    "B": "r >= 2",
    "C": "r >= 2",
    "D": "r >= 2",
    "E": "r in {6, 7, 8}",
    "F": "r = 4",
    "G": "r = 2",
}


class UnsupportedType(ValueError):
    pass


class RootError(ValueError):
    """A vector passed as a root is not in the system."""


def _supported(family: str, rank: int) -> bool:
    if family in "ABCD":
        return rank >= (1 if family == "A" else 2)
    return {"E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2}.get(family, False)


@dataclass(frozen=True)
class RootSystemType:
    family: str
    rank: int

    def __post_init__(self):
        if not isinstance(self.rank, int) or not _supported(self.family, self.rank):
            ranges = ", ".join(f"{k}: {v}" for k, v in SUPPORTED.items())
            raise UnsupportedType(
                f"unsupported type {self.family}_{self.rank}; supported: {ranges}")

    @classmethod
    def parse(cls, name: str) -> "RootSystemType":
        """``"E6"`` or ``"E_6"`` -> RootSystemType("E", 6)."""
        name = name.strip().replace("_", "")
        try:
            return cls(name[0].upper(), int(name[1:]))
        except (IndexError, ValueError):
            raise UnsupportedType(f"cannot parse type {name!r}") from None

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"

    def __str__(self):
        return f"{self.family}_{self.rank}"


def _e(n, *pairs):
    v = [Fraction(0)] * n
    for i, c in pairs:
        v[i] += Fraction(c)
    return tuple(v)


def euclidean_simple_roots(t: RootSystemType) -> list[tuple[Fraction, ...]]:
    """Bourbaki simple roots in an orthonormal basis (construction only)."""
    r, f = t.rank, t.family
    if f == "A":
        return [_e(r + 1, (i, 1), (i + 1, -1)) for i in range(r)]
    if f == "B":
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 1, 1))]
    if f == "C":
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 1, 2))]
    if f == "D":
        return [_e(r, (i, 1), (i + 1, -1)) for i in range(r - 1)] + [_e(r, (r - 2, 1), (r - 1, 1))]
    if f == "G":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    if f == "F":
        h = Fraction(1, 2)
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)),
                _e(4, (0, h), (1, -h), (2, -h), (3, -h))]
    if f == "E":
        h = Fraction(1, 2)
        e8 = [tuple(Fraction(x) for x in (h, -h, -h, -h, -h, -h, -h, h)),
              _e(8, (0, 1), (1, 1))]
        e8 += [_e(8, (i, -1), (i + 1, 1)) for i in range(6)]
        return e8[:r]
    raise UnsupportedType(f)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class RootSystem:
    rstype: RootSystemType
    roots: tuple[Root, ...]
    cartan: tuple[tuple[int, ...], ...]
    highest: Root
    # symmetric form on simple roots, scaled so the short roots have norm 2
    gram: tuple[tuple[int, ...], ...] = field(repr=False)
    index: dict = field(repr=False, compare=False, hash=False)

    @property
    def rank(self) -> int:
        return self.rstype.rank

    @property
    def positive(self) -> tuple[Root, ...]:
        return tuple(b for b in self.roots if any(c > 0 for c in b))

    @property
    def simple(self) -> tuple[Root, ...]:
        r = self.rank
        return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))

    def __contains__(self, beta) -> bool:
        return tuple(beta) in self.index

    def __len__(self):
        return len(self.roots)

    def check(self, beta) -> Root:
        beta = tuple(int(c) for c in beta)
        if beta not in self.index:
            raise RootError(f"{beta} is not a root of {self.rstype}")
        return beta

    def inner(self, u, v) -> int:
        """Symmetric bilinear form on simple-root coordinates."""
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(self.rank) for j in range(self.rank)
                   if u[i] and v[j])

    def height(self, beta) -> int:
        return sum(beta)


@lru_cache(maxsize=None)
def build_root_system(rstype: RootSystemType) -> RootSystem:
    """All roots of ``rstype`` generated from simple roots by root strings."""
    simple_e = euclidean_simple_roots(rstype)
    r = rstype.rank
    ip = [[_dot(a, b) for b in simple_e] for a in simple_e]
    cartan = tuple(tuple(int(2 * ip[i][j] / ip[j][j]) for j in range(r)) for i in range(r))
    short = min(ip[i][i] for i in range(r))
    scale = Fraction(2) / short
    gram = tuple(tuple(int(ip[i][j] * scale) for j in range(r)) for i in range(r))

    def pair(beta, j):
        # <beta, alpha_j> = sum_i c_i <alpha_i, alpha_j>
        return sum(c * cartan[i][j] for i, c in enumerate(beta))

    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for j in range(r):
                # length of the alpha_j-string below beta
                down = 0
                probe = list(beta)
                while True:
                    probe[j] -= 1
                    if tuple(probe) in found:
                        down += 1
                    else:
                        break
                up = down - pair(beta, j)
                if up > 0:
                    gamma = tuple(c + (k == j) for k, c in enumerate(beta))
                    if gamma not in found:
                        found.add(gamma)
                        nxt.append(gamma)
        layer = nxt
    positive = sorted(found, key=lambda b: (sum(b), tuple(-c for c in b)))
    roots = tuple(positive) + tuple(tuple(-c for c in b) for b in positive)
    highest = max(positive, key=sum)
    return RootSystem(rstype, roots, cartan, highest, gram,
                      {b: i for i, b in enumerate(roots)})


def root_system(family: str, rank: int) -> RootSystem:
    return build_root_system(RootSystemType(family, rank))


def cartan_pairing(rs: RootSystem, beta, alpha) -> int:
    """<beta, alpha> = 2 (beta, alpha) / (alpha, alpha)."""
    beta, alpha = rs.check(beta), rs.check(alpha)
    num = 2 * rs.inner(beta, alpha)
    den = rs.inner(alpha, alpha)
    assert num % den == 0
    return num // den


def reflect(rs: RootSystem, alpha, beta) -> Root:
    """sigma_alpha(beta) = beta - <beta, alpha> alpha."""
    c = cartan_pairing(rs, beta, alpha)
    return tuple(b - c * a for a, b in zip(alpha, beta))


def highest_and_l(rs: RootSystem) -> tuple[Root, int]:
    return rs.highest, max(rs.highest)


def weight_coords(rs: RootSystem, beta) -> tuple[int, ...]:
    """Coordinates of beta in the fundamental-weight basis."""
    return tuple(cartan_pairing(rs, beta, a) for a in rs.simple)


def negate(beta) -> Root:
    return tuple(-c for c in beta)


def add(a, b) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def phi_alpha(rs: RootSystem, alpha0) -> frozenset:
    """{beta in Phi : alpha0 + beta not in Phi}, read literally (includes -alpha0)."""
    alpha0 = rs.check(alpha0)
    return frozenset(b for b in rs.roots if add(alpha0, b) not in rs)


def xi_span(rs: RootSystem, xi) -> frozenset:
    """Positive roots with a nonzero coefficient on some simple root of ``xi``."""
    cols = []
    for s in xi:
        s = rs.check(s)
        if s not in rs.simple:
            raise RootError(f"{s} is not a simple root")
        cols.append(s.index(1))
    return frozenset(b for b in rs.positive if any(b[i] for i in cols))


def xi_counts(rs: RootSystem, xi, alpha0) -> tuple[frozenset, int, int]:
    """(<Xi>, n, m) with n = |Phi_a0 minus -<Xi>| and m = |Phi_a0 cap <Xi>|."""
    span = xi_span(rs, xi)
    phi = phi_alpha(rs, alpha0)
    neg_span = {negate(b) for b in span}
    n = sum(1 for b in phi if b not in neg_span)
    m = sum(1 for b in phi if b in span)
    return span, n, m


def coefficient_root(rs: RootSystem, value: int) -> Root:
    """The unique simple root whose highest-root coefficient equals ``value``."""
    hits = [s for s, c in zip(rs.simple, rs.highest) if c == value]
    if len(hits) != 1:
        raise RootError(f"{len(hits)} simple roots have coefficient {value}")
    return hits[0]


def e6_inequality_audit(rs: RootSystem) -> dict:
    if rs.rstype != RootSystemType("E", 6):
        raise UnsupportedType(f"e6 audit needs E_6, got {rs.rstype}")
    alpha0 = coefficient_root(rs, 3)
    size = len(rs)
    not_minus_one = sum(1 for b in rs.roots if cartan_pairing(rs, alpha0, b) != -1)
    others = [s for s in rs.simple if s != alpha0]
    rows = []
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            xi = (alpha0,) + extra
            span, n, m = xi_counts(rs, xi, alpha0)
            minus = sum(1 for b in span if cartan_pairing(rs, b, alpha0) == -1)
            plus = sum(1 for b in span if cartan_pairing(rs, b, alpha0) == 1)
            rows.append({
                "xi": sorted(s.index(1) + 1 for s in xi),
                "n": n,
                "m": m,
                "n_plus_m_plus_1": n + m + 1,
                "inequality": n + m + 1 < size,
                "identity_target": not_minus_one,
                "identity_discrepancy": n + m + 1 - not_minus_one,
                "balance_minus": minus,
                "balance_plus": plus,
                "balance": minus == plus,
            })
    return {
        "alpha0": alpha0,
        "alpha0_index": alpha0.index(1) + 1,
        "num_roots": size,
        "not_minus_one_count": not_minus_one,
        "subsets": rows,
        "inequality_holds": sum(r["inequality"] for r in rows),
        "balance_holds": sum(r["balance"] for r in rows),
        "identity_holds": sum(r["identity_discrepancy"] == 0 for r in rows),
    }


def simply_laced_audit(rs: RootSystem) -> list[dict]:
    """Check both clauses of the simply-laced remark over all ordered pairs.

    Clause (ii) uses the bilinear extension of the pairing, which for a
    simply-laced system with roots of norm 2 is the form itself.
    """
    if not rs.rstype.simply_laced:
        raise UnsupportedType(
            f"{rs.rstype} is not simply laced: root lengths differ, so "
            "alpha+beta in Phi is not governed by <alpha,beta> = -1 alone")
    violations = []
    for a in rs.roots:
        for b in rs.roots:
            pab = cartan_pairing(rs, a, b)
            s = add(a, b)
            if (s in rs) != (pab == -1):
                violations.append({"clause": "i", "alpha": a, "beta": b, "pairing": pab})
            # <alpha, alpha + beta> = (alpha, alpha + beta) when norms are 2
            p2 = rs.inner(a, s)
            if (pab == -1) != (p2 == 1):
                violations.append({"clause": "ii", "alpha": a, "beta": b, "pairing": pab})
    return violations
