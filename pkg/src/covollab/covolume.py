"""Covolumes of G(O_k(v0)) in G(k_v0) and the bounds built on them.

Haar measure is normalized so the first congruence subgroup has measure 1.
All certified claims are exact rational comparisons or comparisons against
``RationalInterval`` enclosures; floats appear only in advisory diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np
import sympy

from .chevorder import check_q, exponents, group_order
from .intervals import RationalInterval, sqrt_enclosure
from .rootsys import RootSystemType

DEFAULT_WIDTH = Fraction(1, 10 ** 12)


class InvalidZeta(ValueError):
    def __init__(self, failed: list[str], report: "ZetaValidity"):
        super().__init__("invalid zeta polynomial: " + ", ".join(failed))
        self.failed = failed
        self.report = report


@dataclass(frozen=True)
class ZetaPolynomial:
    """Numerator P(T) = sum a_i T^i of the zeta function of a genus-g field."""

    q: int
    genus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def rational(cls, q: int) -> "ZetaPolynomial":
        return cls(q, 0, (1,))

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return sum((Fraction(a) * t ** i for i, a in enumerate(self.coeffs)), Fraction(0))


@dataclass
class ZetaValidity:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


@dataclass(frozen=True)
class CovolumeResult:
    value: Fraction
    rstype: RootSystemType
    q: int
    genus: int = 0
    zeta: tuple[int, ...] = (1,)


def _dickson_in_y(g: int, q: int) -> list[list[int]]:
    # D_k(y) = z^k + (q/z)^k written in y = z + q/z; coefficient lists, low first
    d = [[2], [0, 1]]
    for k in range(2, g + 1):
        a = [0] + d[k - 1]
        b = d[k - 2] + [0] * (len(a) - len(d[k - 2]))
        d.append([x - q * y for x, y in zip(a, b)])
    return d


def real_trace_polynomial(zeta: ZetaPolynomial) -> list[int]:
    """h(y) with z^(2g) P(1/z) = z^g h(z + q/z); needs the functional equation."""
    g, q, a = zeta.genus, zeta.q, zeta.coeffs
    d = _dickson_in_y(g, q)
    h = [0] * (g + 1)
    h[0] += a[g]
    for k in range(1, g + 1):
        for i, c in enumerate(d[k]):
            h[i] += a[g - k] * c
    return h


def _roots_in_band(h: list[int], q: int, warnings: list[str]) -> tuple[bool | None, str]:
    """All roots of h real with y^2 <= 4q? Exact isolation via sympy."""
    y = sympy.symbols("y")
    poly = sympy.Poly(list(reversed(h)), y, domain="ZZ")
    deg = poly.degree()
    if deg <= 0:
        return True, "no roots"
    edge = sympy.Poly(y ** 2 - 4 * q, y)
    boundary = 0
    while True:
        quo, rem = sympy.div(poly, edge)
        if rem.is_zero and quo.degree() >= 0:
            poly = quo
            boundary += 2
        else:
            break
    if poly.degree() <= 0:
        return True, f"{boundary} roots on the boundary y^2 = 4q"
    isolated = poly.intervals()
    nreal = sum(mult for _, mult in isolated)
    if nreal < poly.degree():
        return False, f"{poly.degree() - nreal} non-real roots of h"
    bound = Fraction(4 * q)
    for eps_exp in range(0, 60, 4):
        undecided = False
        for (a, b), _ in isolated:
            a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
            if max(a * a, b * b) <= bound:
                continue
            if a * b > 0 and min(a * a, b * b) > bound:
                return False, f"real root of h outside [-2 sqrt q, 2 sqrt q] near {float(a):.6g}"
            undecided = True
        if not undecided:
            return True, f"{nreal} real roots inside the band, {boundary} on its edge"
        isolated = poly.intervals(eps=sympy.Rational(1, 2 ** (eps_exp + 8)))
    warnings.append("root-modulus check undecided at refinement limit")
    return None, "undecided"


def validate_zeta(zeta: ZetaPolynomial) -> ZetaValidity:
    rep = ZetaValidity()
    q, g, a = zeta.q, zeta.genus, zeta.coeffs
    try:
        check_q(q)
        rep.checks["q_prime_power"] = True
    except ValueError as exc:
        rep.checks["q_prime_power"] = False
        rep.details["q_prime_power"] = str(exc)
    rep.checks["genus_nonnegative"] = isinstance(g, int) and g >= 0
    if not rep.checks["genus_nonnegative"]:
        return rep
    rep.checks["degree"] = len(a) == 2 * g + 1
    if not rep.checks["degree"]:
        rep.details["degree"] = f"expected {2 * g + 1} coefficients, got {len(a)}"
        return rep
    rep.checks["constant_term"] = a[0] == 1
    rep.checks["leading_coefficient"] = a[2 * g] == q ** g
    if not rep.checks["leading_coefficient"]:
        rep.details["leading_coefficient"] = f"a_2g = {a[2 * g]} but q^g = {q ** g}"
    sym = all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))
    rep.checks["functional_equation"] = sym
    if not sym or g == 0:
        return rep
    h = real_trace_polynomial(zeta)
    ok, detail = _roots_in_band(h, q, rep.warnings)
    rep.details["root_modulus"] = detail
    if ok is not None:
        rep.checks["root_modulus"] = ok
    # float diagnostic only; reciprocal roots solve sum a_i z^(2g-i) = 0
    zs = np.roots([float(c) for c in a])
    if len(zs):
        dev = float(np.max(np.abs(np.abs(zs) - np.sqrt(q))))
        rep.details["numeric_modulus_deviation"] = f"{dev:.3e}"
    return rep


def covol_rational(rstype: RootSystemType, q: int) -> CovolumeResult:
    """prod_i (1 - q^-m_i)^-1, the covolume of G(F_q[t])."""
    check_q(q)
    m = exponents(rstype).exponents
    value = prod((1 / (1 - Fraction(1, q ** k)) for k in m), start=Fraction(1))
    return CovolumeResult(value, rstype, q)


def covol_genus(rstype: RootSystemType, zeta: ZetaPolynomial) -> CovolumeResult:
    """q^(g dim G) * prod P(q^(-m_i-1)) * prod (1 - q^-m_i)^-1."""
    rep = validate_zeta(zeta)
    if not rep.valid:
        raise InvalidZeta(rep.failed, rep)
    q, g = zeta.q, zeta.genus
    prof = exponents(rstype)
    value = Fraction(q) ** (g * prof.dim)
    for k in prof.exponents:
        value *= zeta(Fraction(1, q ** (k + 1)))
        value /= 1 - Fraction(1, q ** k)
    return CovolumeResult(value, rstype, q, g, zeta.coeffs)


@dataclass(frozen=True)
class EulerEnclosure:
    x: int
    depth: int
    interval: RationalInterval
    log_upper: Fraction


def euler_enclosure(x: int, n: int) -> EulerEnclosure:
    """Enclosure of F(x) = prod_{i>=1} (1 - x^-i)^-1 for integer x >= 2.

    Lower end: the partial product F_n(x). Upper end: F_n(x) / (1 - eps) with
    eps = 2 * sum_{i>n} x^-i = 2 x^-n / (x - 1). For y = x^-i <= 1/2 we have
    -ln(1 - y) <= 2y, so the tail product is at most exp(eps) <= 1/(1 - eps).

    ``log_upper`` bounds ln F(x) = sum_j 1/(j (x^j - 1)) from above: n terms
    plus the remainder sum_{j>n} 2/(j x^j) <= 2 x^-(n+1) / ((n+1)(1 - 1/x)).
    """
    if x < 2 or n < 1:
        raise ValueError("need x >= 2 and n >= 1")
    lower = Fraction(1)
    for i in range(1, n + 1):
        lower /= 1 - Fraction(1, x ** i)
    eps = Fraction(2, x ** n * (x - 1))
    if eps >= 1:
        raise ValueError(f"depth n={n} too small for a tail bound at x={x}")
    upper = lower / (1 - eps)
    log_up = sum((Fraction(1, j * (x ** j - 1)) for j in range(1, n + 1)), Fraction(0))
    log_up += Fraction(2, (n + 1) * x ** (n + 1)) / (1 - Fraction(1, x))
    return EulerEnclosure(x, n, RationalInterval(lower, upper), log_up)


def ln2_lower(terms: int = 60) -> Fraction:
    """Partial sum of ln 2 = sum_j 1/(j 2^j); every partial sum is a lower bound."""
    return sum((Fraction(1, j * 2 ** j) for j in range(1, terms + 1)), Fraction(0))


def exp_neg_lower(y: Fraction) -> Fraction:
    """Lower bound 1 - y + y^2/2 - y^3/6 <= exp(-y) for 0 <= y <= 1."""
    return 1 - y + y ** 2 / 2 - y ** 3 / 6


def _cert(name: str, status: str, detail: str) -> dict:
    return {"name": name, "status": status, "detail": detail}


def upperbound_threshold(rstype: RootSystemType) -> int:
    return 4 if rstype == RootSystemType("D", 2) else 3


def bound_audits(rstype: RootSystemType, q: int, zeta: ZetaPolynomial | None = None,
                 width: Fraction = DEFAULT_WIDTH) -> dict:
    """Covolume < 2 with the corollary's q thresholds, plus genus bounds."""
    rat = covol_rational(rstype, q).value
    thr = upperbound_threshold(rstype)
    covered = q >= thr
    below = rat < 2
    if covered:
        status = "pass" if below else "fail"
    else:
        status = "pass" if below else "flagged"
    certs = [_cert("covolume_below_2", status,
                   f"covol={rat} {'<' if below else '>='} 2; corollary covers q>={thr}, q={q}")]
    out = {"covol_rational": rat, "threshold": thr, "covered": covered, "certificates": certs}
    if zeta is None or zeta.genus == 0:
        return out

    res = covol_genus(rstype, zeta)
    g, r = zeta.genus, rstype.rank
    out["covol_genus"] = res.value
    root_q = sqrt_enclosure(q, width)
    lb = (q - root_q) ** (2 * g * r)
    if res.value >= lb.upper:
        st = "pass"
    elif res.value < lb.lower:
        st = "fail"
    else:
        st = "undecided"
    certs.append(_cert("genus_lower_bound", st,
                       f"covol={res.value} vs (q-sqrt q)^(2gr) in [{float(lb.lower):.6g}, {float(lb.upper):.6g}]"))
    hyp = r > 1 and q > 2
    certs.append(_cert("genus_covolume_above_2", "pass" if res.value > 2 else "fail",
                       f"covol={res.value}; corollary hypotheses (rank>1, q>2) "
                       f"{'hold' if hyp else 'do not hold'}"))
    inv_root = sqrt_enclosure(Fraction(1, q), width)
    local = (1 - inv_root) ** (2 * g)
    worst = "pass"
    for k in exponents(rstype).exponents:
        lhs = Fraction(q) ** g * zeta(Fraction(1, q ** (k + 1)))
        if lhs < local.lower:
            worst = "fail"
        elif lhs < local.upper and worst == "pass":
            worst = "undecided"
    certs.append(_cert("zeta_factor_lower_bound", worst,
                       "q^g P(q^-s) >= (1 - q^-1/2)^(2g) for s = m_i + 1"))
    return out


def index_lower_bound(group_order: int, intersection_order: int) -> Fraction:
    """|G(F_q)| / |Gamma cap G_0|, a lower bound for vol(G / Gamma)."""
    if group_order <= 0 or intersection_order <= 0:
        raise ValueError("orders must be positive")
    if intersection_order > group_order:
        raise ValueError("intersection order exceeds the group order")
    return Fraction(group_order, intersection_order)


def local_factor(rstype: RootSystemType, q: int) -> Fraction:
    """|G(F_q)| / q^dim G, the local volume factor of the hyperspecial G(O)."""
    return Fraction(group_order(rstype, q), q ** exponents(rstype).dim)
