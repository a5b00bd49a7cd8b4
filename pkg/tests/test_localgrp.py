import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covollab.cayley import EnumerationBoundExceeded, enumerate_group
from covollab.chevorder import ring_group_order
from covollab.localgrp import (GroupModel, InsufficientPrecision, NotInGroup, PreconditionError, TruncMatrix,
                               TruncRing, centralizer_audit, congruence_generation_audit, congruence_level,
                               mat_det, mat_identity, mat_inv, mat_level, matmul, root_element,
                               theta_conjugator, verify_p_properties)
from covollab.rootsys import RootSystemType


def poly_mul(a, b, p, L):
    """Reference product of coefficient lists in F_p[u]/u^L."""
    out = [0] * L
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < L:
                out[i + j] = (out[i + j] + x * y) % p
    return out


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 4), st.data())
def test_ring_mul_matches_polynomial_reference(p, L, data):
    R = TruncRing(p, L)
    a = data.draw(st.lists(st.integers(0, p - 1), min_size=L, max_size=L))
    b = data.draw(st.lists(st.integers(0, p - 1), min_size=L, max_size=L))
    assert R.coefficients(R.mul(R.element(a), R.element(b))) == poly_mul(a, b, p, L)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([4, 9, 25]), st.integers(1, 3), st.data())
def test_extension_ring_associative_and_inverse(q, L, data):
    R = TruncRing(q, L)
    els = [R.element(data.draw(st.lists(st.integers(0, q - 1), min_size=L, max_size=L))) for _ in range(3)]
    a, b, c = els
    assert np.array_equal(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
    if R.is_unit(a):
        assert np.array_equal(R.mul(a, R.inv(a)), R.one())


def test_root_element_examples():
    R = TruncRing(5, 2)
    sl2 = GroupModel("SL", 1, R)
    g = root_element(sl2, (1,), 3)
    assert g.entries() == [[[1, 0], [3, 0]], [[0, 0], [1, 0]]]
    assert root_element(sl2, (1,), 0) == TruncMatrix(R, mat_identity(R, 2))
    sp4 = GroupModel("Sp", 2, TruncRing(3, 3))
    for beta in sp4.rs.roots:
        for x in range(3):
            assert sp4.is_member(root_element(sp4, beta, x).data)
    long_root = (2, 1)
    J = sp4.form
    X = sp4.root_vectors[long_root]
    assert not np.any(X.T @ J + J @ X)


@pytest.mark.parametrize("kind,rank,q", [("SL", 2, 5), ("Sp", 2, 5), ("Sp", 3, 3)])
def test_root_subgroup_additivity_and_torus_character(kind, rank, q):
    R = TruncRing(q, 2)
    m = GroupModel(kind, rank, R)
    x, y = R.element([1, 2]), R.element([2, 1])
    s = R.element([2, 1])
    for beta in m.rs.roots:
        lhs = matmul(R, m.root_element_array(beta, x), m.root_element_array(beta, y))
        assert np.array_equal(lhs, m.root_element_array(beta, R.add(x, y)))
        for j in range(m.rank):
            t = m.coroot_element_array(j, s)
            conj = matmul(R, matmul(R, t, m.root_element_array(beta, x)), mat_inv(R, t))
            c = sum(b * m.rs.cartan[i][j] for i, b in enumerate(beta))
            want = m.root_element_array(beta, R.mul(R.power(s, c), x))
            assert np.array_equal(conj, want)


def test_congruence_level_examples():
    R = TruncRing(5, 4)
    sl2 = GroupModel("SL", 1, R)
    assert congruence_level(sl2, TruncMatrix(R, sl2.identity())) == 4
    assert congruence_level(sl2, root_element(sl2, (1,), R.monomial(2, 1))) == 1
    s = R.element([1, 0, 1])
    diag = np.zeros((2, 2, R.D), dtype=np.int64)
    diag[0, 0], diag[1, 1] = s, R.inv(s)
    assert congruence_level(sl2, TruncMatrix(R, diag)) == 2
    bad = sl2.identity()
    bad[0, 0] = R.element([2])
    with pytest.raises(NotInGroup):
        congruence_level(sl2, TruncMatrix(R, bad))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_filtration_and_reduction_homomorphism(data):
    R = TruncRing(3, 4)
    m = GroupModel("SL", 2, R)
    gens = m.full_generators()
    def word():
        idx = data.draw(st.lists(st.integers(0, len(gens) - 1), min_size=1, max_size=6))
        g = m.identity()
        for i in idx:
            g = matmul(R, g, gens[i])
        return g
    g, h = word(), word()
    lg, lh = int(mat_level(R, g)), int(mat_level(R, h))
    assert int(mat_level(R, matmul(R, g, mat_inv(R, h)))) >= min(lg, lh)
    for l in (1, 2, 3):
        red = R.truncated(l)
        assert np.array_equal(matmul(red, g[..., :l], h[..., :l]), matmul(R, g, h)[..., :l])
    assert m.is_member(matmul(R, g, h))


def test_commutator_filtration_on_generators():
    R = TruncRing(3, 5)
    m = GroupModel("SL", 1, R)
    g1, g2 = m.congruence_generators(1), m.congruence_generators(2)
    for a in g1:
        for b in g2:
            comm = matmul(R, matmul(R, a, b), matmul(R, mat_inv(R, a), mat_inv(R, b)))
            assert int(mat_level(R, comm)) >= 3


def test_full_group_matches_ring_order():
    for L in (1, 2):
        m = GroupModel("SL", 1, TruncRing(3, L))
        tab = enumerate_group(m.ring, m.full_generators())
        assert tab.order == ring_group_order(RootSystemType("A", 1), 3, L)


def test_theta_examples():
    R = TruncRing(5, 6)
    sl3 = GroupModel("SL", 2, R)
    th = theta_conjugator(sl3, 1)
    small = GroupModel("SL", 2, R.truncated(6 - th.spread))
    x = R.monomial(1, 0)
    assert np.array_equal(th.apply(sl3.root_element_array((1, 0), x)),
                          small.root_element_array((1, 0), small.ring.monomial(1, 1)))
    assert np.array_equal(th.apply(sl3.root_element_array((-1, 0), R.monomial(1, 3))),
                          small.root_element_array((-1, 0), small.ring.monomial(1, 2)))
    with pytest.raises(InsufficientPrecision):
        th.apply(sl3.root_element_array((-1, 0), x))


def test_theta_sp4_long_root_direction():
    R = TruncRing(3, 8)
    sp4 = GroupModel("Sp", 2, R)
    th = theta_conjugator(sp4, 1)
    assert th.symplectic_exponents() == (1, 0, 0, -1)
    small = GroupModel("Sp", 2, R.truncated(8 - th.spread))
    # coordinate 2 on alpha_1: the forward map multiplies by u^2, the inverse divides
    fwd = th.apply(sp4.root_element_array((2, 1), R.monomial(1, 3)))
    assert np.array_equal(fwd, small.root_element_array((2, 1), small.ring.monomial(1, 5)))
    back = th.apply_inverse(sp4.root_element_array((2, 1), R.monomial(1, 3)))
    assert np.array_equal(back, small.root_element_array((2, 1), small.ring.monomial(1, 1)))
    assert theta_conjugator(sp4, 2).symplectic_exponents() is None


@pytest.mark.parametrize("kind,rank,q,alpha,l,L,drop", [("SL", 2, 5, 1, 3, 5, 1), ("Sp", 2, 3, 1, 3, 6, 2),
                                                        ("SL", 1, 5, 1, 1, 3, 1), ("Sp", 2, 3, 2, 2, 5, 1),
                                                        ("Sp", 3, 3, 2, 2, 5, 2)])
def test_p_properties(kind, rank, q, alpha, l, L, drop):
    rep = verify_p_properties(GroupModel(kind, rank, TruncRing(q, L)), alpha, l)
    assert rep["p1_ok"] and rep["p2_ok"] and rep["p3_unipotent_ok"] and rep["p3_parabolic_ok"]
    assert rep["observed_drop"] == drop == rep["expected_drop"]


def test_p_properties_preconditions():
    with pytest.raises(PreconditionError):
        verify_p_properties(GroupModel("Sp", 2, TruncRing(3, 6)), 1, 1)
    with pytest.raises(PreconditionError):
        verify_p_properties(GroupModel("Sp", 2, TruncRing(3, 4)), 1, 3)


def test_p3_lower_triangular_for_sl2():
    R = TruncRing(5, 3)
    m = GroupModel("SL", 1, R)
    th = theta_conjugator(m, 1)
    imgs = th.apply(m.congruence_generators(1))[..., :R.e]
    assert not np.any(imgs[:, 0, 1])
    assert np.all(imgs[:, 0, 0, 0] == 1) and np.all(imgs[:, 1, 1, 0] == 1)


@pytest.mark.parametrize("q,l,L,want", [(3, 1, 2, 27), (3, 1, 3, 3 ** 6), (5, 2, 3, 125)])
def test_generation_audit(q, l, L, want):
    rep = congruence_generation_audit(GroupModel("SL", 1, TruncRing(q, L)), l)
    assert rep["complete"] and rep["closure_order"] == want == rep["expected_order"]


def test_generation_audit_partial_report():
    rep = congruence_generation_audit(GroupModel("SL", 1, TruncRing(3, 3)), 1, max_elements=100)
    assert rep["complete"] is False and rep["closure_order"] is None and not rep["matches"]


def test_enumeration_bound_env(monkeypatch):
    monkeypatch.setenv("COVOLLAB_MAX_ELEMENTS", "50")
    m = GroupModel("SL", 1, TruncRing(5, 1))
    with pytest.raises(EnumerationBoundExceeded):
        enumerate_group(m.ring, m.field_generators())


@pytest.mark.parametrize("kind,rank,q,L,order", [("SL", 1, 5, 3, 2), ("SL", 2, 7, 2, 3), ("Sp", 2, 5, 2, 2)])
def test_centralizer(kind, rank, q, L, order):
    rep = centralizer_audit(GroupModel(kind, rank, TruncRing(q, L)))
    assert rep["equals_center"] and rep["centralizer_order"] == order


def test_centralizer_gate_and_char_dividing_n():
    with pytest.raises(PreconditionError, match="q > 3"):
        centralizer_audit(GroupModel("SL", 1, TruncRing(3, 2)))
    rep = centralizer_audit(GroupModel("SL", 1, TruncRing(4, 2)))
    # (1 + b u) I has determinant 1 when p = 2 = n: central but non-constant
    assert rep["equals_center"] and rep["center_order"] == 4 and rep["center_constant_order"] == 1


def test_determinant_of_generators():
    R = TruncRing(9, 2)
    m = GroupModel("SL", 2, R)
    dets = mat_det(R, m.full_generators())
    assert np.all(dets == R.one())
