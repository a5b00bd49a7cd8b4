"""Orders of finite Chevalley groups from the exponent table."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .fields import factor_prime_power
from .rootsys import RootSystemType


class InvalidPrimePower(ValueError):
    pass


@dataclass(frozen=True)
class ExponentProfile:
    rstype: RootSystemType
    exponents: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.rstype.rank

    @property
    def num_positive(self) -> int:
        return sum(self.exponents)

    @property
    def dim(self) -> int:
        """dim G = r + 2 * sum(m_i)."""
        return self.rank + 2 * self.num_positive


_EXCEPTIONAL = {
    ("G", 2): (1, 5),
    ("F", 4): (1, 5, 7, 11),
    ("E", 6): (1, 4, 5, 7, 8, 11),
    ("E", 7): (1, 5, 7, 9, 11, 13, 17),
    ("E", 8): (1, 7, 11, 13, 17, 19, 23, 29),
}


def exponents(rstype: RootSystemType) -> ExponentProfile:
    f, r = rstype.family, rstype.rank
    if f == "A":
        m = tuple(range(1, r + 1))
    elif f in "BC":
        m = tuple(range(1, 2 * r, 2))
    elif f == "D":
        m = tuple(range(1, 2 * r - 2, 2)) + (r - 1,)
    else:
        m = _EXCEPTIONAL[(f, r)]
    return ExponentProfile(rstype, m)


def check_q(q) -> tuple[int, int]:
    pe = factor_prime_power(q)
    if pe is None:
        raise InvalidPrimePower(f"q={q} is not a prime power")
    return pe


def group_order(rstype: RootSystemType, q: int) -> int:
    """|G(F_q)| = q^(sum m_i) * prod(q^(m_i+1) - 1)."""
    check_q(q)
    m = exponents(rstype).exponents
    return q ** sum(m) * prod(q ** (k + 1) - 1 for k in m)


def ring_group_order(rstype: RootSystemType, q: int, level: int) -> int:
    """|G(O / u^L O)| = |G(F_q)| * q^((L-1) dim G), by smoothness of reduction."""
    if not isinstance(level, int) or level < 1:
        raise ValueError(f"truncation level must be >= 1, got {level}")
    return group_order(rstype, q) * q ** ((level - 1) * exponents(rstype).dim)


def congruence_kernel_order(rstype: RootSystemType, q: int, level: int, trunc: int) -> int:
    """Order of the kernel of G(O/u^trunc) -> G(O/u^level)."""
    if not 1 <= level <= trunc:
        raise ValueError("need 1 <= level <= trunc")
    return q ** ((trunc - level) * exponents(rstype).dim)
