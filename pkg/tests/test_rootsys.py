from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from covollab.chevorder import exponents
from covollab.rootsys import (RootError, RootSystemType, UnsupportedType, build_root_system,
                              cartan_pairing, coefficient_root, e6_inequality_audit, euclidean_simple_roots,
                              highest_and_l, phi_alpha, reflect, root_system, simply_laced_audit,
                              weight_coords, xi_counts)

TYPES = [("A", r) for r in range(1, 5)] + [("B", r) for r in range(2, 5)] + \
        [("C", r) for r in range(2, 5)] + [("D", r) for r in range(2, 6)] + \
        [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]


def to_euclid(t, beta):
    simple = euclidean_simple_roots(t)
    return tuple(sum(c * s[i] for c, s in zip(beta, simple)) for i in range(len(simple[0])))


@pytest.mark.parametrize("family,rank", TYPES)
def test_roots_match_weyl_orbit(family, rank):
    t = RootSystemType(family, rank)
    rs = build_root_system(t)
    assert {to_euclid(t, b) for b in rs.roots} == oracles.weyl_orbit_roots(family, rank)
    assert len(rs.positive) == sum(exponents(t).exponents)


@pytest.mark.parametrize("family,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_classical_root_lists(family, rank):
    got = {tuple(int(x) for x in v) for v in oracles.weyl_orbit_roots(family, rank)}
    assert got == oracles.classical_roots(family, rank)


def test_e8_orbit_matches_coordinate_description():
    h = Fraction(1, 2)
    want = set()
    for i in range(8):
        for j in range(i + 1, 8):
            for si, sj in product((1, -1), repeat=2):
                v = [Fraction(0)] * 8
                v[i], v[j] = Fraction(si), Fraction(sj)
                want.add(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            want.add(tuple(h * s for s in signs))
    assert oracles.weyl_orbit_roots("E", 8) == want


def test_unsupported_types_rejected():
    for bad in [("E", 5), ("B", 1), ("G", 3), ("H", 3), ("A", 0)]:
        with pytest.raises(UnsupportedType, match="supported"):
            RootSystemType(*bad)
    assert RootSystemType.parse("e_6") == RootSystemType("E", 6)


def test_pairing_examples():
    a2 = root_system("A", 2)
    assert cartan_pairing(a2, (1, 0), (0, 1)) == -1
    c2 = root_system("C", 2)
    assert cartan_pairing(c2, (0, 1), (1, 0)) == -2
    assert cartan_pairing(c2, (1, 0), (0, 1)) == -1
    with pytest.raises(RootError):
        cartan_pairing(a2, (2, 0), (1, 0))


def test_reflection_examples():
    a2 = root_system("A", 2)
    assert reflect(a2, (1, 0), (0, 1)) == (1, 1)
    assert reflect(a2, (1, 0), (1, 0)) == (-1, 0)
    b2 = root_system("B", 2)
    for a in b2.roots:
        for b in b2.roots:
            if cartan_pairing(b2, b, a) == 0:
                assert reflect(b2, a, b) == b


@pytest.mark.parametrize("family,rank,l", [("A", 3, 1), ("B", 3, 2), ("C", 3, 2), ("D", 4, 2),
                                           ("E", 6, 3), ("E", 7, 4), ("E", 8, 6), ("F", 4, 4),
                                           ("G", 2, 3)])
def test_l_table(family, rank, l):
    assert highest_and_l(root_system(family, rank))[1] == l


def test_highest_roots_bourbaki():
    assert root_system("E", 6).highest == (1, 2, 2, 3, 2, 1)
    assert root_system("G", 2).highest == (3, 2)
    assert root_system("C", 2).highest == (2, 1)
    assert root_system("F", 4).highest == (2, 3, 4, 2)


def test_weight_coords_examples():
    a2 = root_system("A", 2)
    assert weight_coords(a2, (1, 1)) == (1, 1)
    assert weight_coords(a2, (1, 0)) == (2, -1)
    for i, s in enumerate(a2.simple):
        assert weight_coords(a2, s) == a2.cartan[i]


@pytest.mark.parametrize("family,rank", TYPES)
def test_weight_coord_bound(family, rank):
    rs = root_system(family, rank)
    bound = 3 if family == "G" else 2
    assert max(abs(c) for b in rs.roots for c in weight_coords(rs, b)) <= bound


def test_phi_alpha_examples():
    a1 = root_system("A", 1)
    assert phi_alpha(a1, (1,)) == {(1,), (-1,)}
    a2 = root_system("A", 2)
    assert phi_alpha(a2, (1, 1)) == {(1, 0), (0, 1), (1, 1), (-1, -1)}
    e6 = root_system("E", 6)
    a0 = coefficient_root(e6, 3)
    minus_one = sum(1 for b in e6.roots if cartan_pairing(e6, a0, b) == -1)
    assert len(phi_alpha(e6, a0)) == 72 - minus_one


def test_xi_counts_examples():
    a2 = root_system("A", 2)
    span, n, m = xi_counts(a2, [], (1, 1))
    assert span == frozenset() and n == len(phi_alpha(a2, (1, 1))) and m == 0
    span, _, _ = xi_counts(a2, [(1, 0)], (1, 1))
    assert span == {(1, 0), (1, 1)}
    span, _, _ = xi_counts(a2, a2.simple, (1, 1))
    assert span == set(a2.positive)
    with pytest.raises(RootError):
        xi_counts(a2, [(1, 1)], (1, 0))


def test_e6_audit_shape():
    rep = e6_inequality_audit(root_system("E", 6))
    assert rep["alpha0_index"] == 4
    assert len(rep["subsets"]) == 32
    assert rep["inequality_holds"] == 32
    first = rep["subsets"][0]
    assert first["xi"] == [4] and (first["n"], first["m"]) == (33, 24)
    with pytest.raises(UnsupportedType):
        e6_inequality_audit(root_system("E", 7))


@pytest.mark.parametrize("family,rank", [("A", 2), ("A", 3), ("D", 4), ("D", 5), ("E", 6)])
def test_simply_laced_remark(family, rank):
    assert simply_laced_audit(root_system(family, rank)) == []


def test_simply_laced_rejects_multiply_laced():
    with pytest.raises(UnsupportedType, match="not simply laced"):
        simply_laced_audit(root_system("B", 2))


@pytest.mark.parametrize("family,rank", [("A", 3), ("D", 4), ("E", 6)])
def test_phi_alpha_simply_laced_characterization(family, rank):
    rs = root_system(family, rank)
    for a0 in rs.roots:
        assert phi_alpha(rs, a0) == {b for b in rs.roots if cartan_pairing(rs, a0, b) != -1}


type_strategy = st.sampled_from(TYPES)


@settings(max_examples=60, deadline=None)
@given(type_strategy, st.data())
def test_weyl_closure_and_involution(t, data):
    rs = root_system(*t)
    a = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    img = reflect(rs, a, b)
    assert img in rs
    assert reflect(rs, a, img) == b
    assert cartan_pairing(rs, a, b) * cartan_pairing(rs, b, a) in {0, 1, 2, 3, 4}


@settings(max_examples=40, deadline=None)
@given(type_strategy, st.data())
def test_root_sign_and_negation(t, data):
    rs = root_system(*t)
    b = data.draw(st.sampled_from(rs.roots))
    assert all(c >= 0 for c in b) or all(c <= 0 for c in b)
    assert tuple(-c for c in b) in rs


@settings(max_examples=40, deadline=None)
@given(type_strategy, st.data(), st.integers(-3, 3))
def test_pairing_value_symmetry(t, data, c):
    rs = root_system(*t)
    a0 = data.draw(st.sampled_from(rs.roots))
    plus = sum(1 for b in rs.roots if cartan_pairing(rs, a0, b) == c)
    minus = sum(1 for b in rs.roots if cartan_pairing(rs, a0, b) == -c)
    assert plus == minus


@pytest.mark.parametrize("family,rank", TYPES)
def test_cartan_diagonal_and_highest_unique(family, rank):
    rs = root_system(family, rank)
    assert all(rs.cartan[i][i] == 2 for i in range(rank))
    dominated = [b for b in rs.positive if all(x >= y for x, y in zip(b, rs.highest))]
    if (family, rank) != ("D", 2):
        assert dominated == [rs.highest]
