import numpy as np
import sympy
from hypothesis import given, settings, strategies as st

from covollab import modp
from covollab.fields import FqField, factor_prime_power, get_field

primes = st.sampled_from([2, 3, 5, 7, 13])


@st.composite
def matrices(draw, max_dim=7):
    p = draw(primes)
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(vals, dtype=np.int64).reshape(r, c), p


def _gauss_rank(a, p):
    m = [list(map(int, row)) for row in a]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        for i in range(len(m)):
            if i != rank and m[i][c] % p:
                f = m[i][c] * inv
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_reference_and_transpose(mp):
    a, p = mp
    assert modp.rank(a, p) == _gauss_rank(a, p) == modp.rank(a.T, p)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_nullspace_is_kernel(mp):
    a, p = mp
    k = modp.nullspace(a, p)
    assert k.shape[0] == a.shape[1] - modp.rank(a, p)
    assert not np.any((a @ k.T) % p)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_systems(mp, data):
    a, p = mp
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = (a @ x0) % p
    x = modp.solve(a, b, p)
    assert x is not None and np.array_equal((a @ x) % p, b)


def test_solve_inconsistent_and_inverse():
    assert modp.solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 5) is None
    a = np.array([[2, 1], [1, 1]])
    assert np.array_equal((a @ modp.inv(a, 7)) % 7, np.eye(2, dtype=np.int64))


@settings(max_examples=40, deadline=None)
@given(matrices(max_dim=6), st.integers(1, 4))
def test_chunked_reducer_matches_one_shot(mp, chunk):
    a, p = mp
    red = modp.RowReducer(a.shape[1], p)
    red.add(a, chunk=chunk)
    assert red.rank == _gauss_rank(a, p)
    for row in a:
        assert red.contains(row)


def test_prime_power_detection():
    assert factor_prime_power(2 ** 31 - 1) == (2 ** 31 - 1, 1)
    assert factor_prime_power(3 ** 19) == (3, 19)
    assert factor_prime_power(12) is None and factor_prime_power(1) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 8, 9, 16, 25, 27, 49]), st.data())
def test_field_axioms(q, data):
    F = get_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.power(a, q - 1) == 1
    assert F.add(a, F.neg(a)) == 0


def test_moduli_irreducible_by_sympy():
    for q in [4, 8, 9, 16, 25, 27, 49, 81, 121, 125]:
        F = FqField(q)
        x = sympy.symbols("x")
        poly = sympy.Poly(list(reversed(F.modulus)), x, modulus=F.p)
        assert poly.is_irreducible
