import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF as SGF, Matrix as SMatrix, Poly, symbols
from sympy.polys.matrices import DomainMatrix

from grpx.gf import (GF, FieldError, Matrix, array_matmul, determinant, field_of_order, gf2_matmul_packed,
                     gf2_nullspace_packed, gf2_pack, gf2_rref, gf2_unpack, is_irreducible_poly,
                     least_irreducible, mat_inv, normalize_projective, nullspace_array, parse_matrix,
                     row_space, solve_linear)

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (7, 1), (5, 2)]
x = symbols("x")


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_defining_polynomial_is_least_irreducible(p, e):
    poly = least_irreducible(p, e)
    assert Poly(list(reversed(poly)), x, modulus=p).is_irreducible
    # every smaller code is reducible (sympy oracle)
    code = sum(c * p ** i for i, c in enumerate(poly[:-1]))
    for c in range(code):
        coeffs = [(c // p ** i) % p for i in range(e)] + [1]
        if coeffs[0] == 0:
            continue
        assert not Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible


def test_rabin_matches_sympy():
    for p in (2, 3):
        for e in range(1, 5):
            for code in range(p ** e):
                coeffs = [(code // p ** i) % p for i in range(e)] + [1]
                assert is_irreducible_poly(coeffs, p) == Poly(list(reversed(coeffs)), x, modulus=p).is_irreducible


@pytest.mark.parametrize("p,e", FIELDS)
def test_field_axioms_exhaustive(p, e):
    F = GF(p, e)
    a = np.arange(F.q)[:, None]
    b = np.arange(F.q)[None, :]
    S, P = F.add(a, b), F.mul(a, b)
    assert np.array_equal(S, S.T) and np.array_equal(P, P.T)
    assert all(sorted(S[i]) == list(range(F.q)) for i in range(F.q))
    assert all(sorted(P[i]) == list(range(F.q)) for i in range(1, F.q))
    nz = np.arange(1, F.q)
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    assert np.all(F.add(np.arange(F.q), F.neg(np.arange(F.q))) == 0)
    # distributivity on all triples
    A, B, C = np.meshgrid(np.arange(F.q), np.arange(F.q), np.arange(F.q), indexing="ij")
    assert np.array_equal(F.mul(A, F.add(B, C)), F.add(F.mul(A, B), F.mul(A, C)))


def test_prime_field_matches_integers_mod_p():
    F = GF(7)
    a = np.arange(7)
    assert np.array_equal(F.mul(a[:, None], a[None, :]), (a[:, None] * a[None, :]) % 7)


@pytest.mark.parametrize("p,e", [(2, 4), (3, 2), (5, 2)])
def test_multiplicative_group_cyclic(p, e):
    F = GF(p, e)
    g = F.root_of_unity(F.q - 1)
    seen = {1}
    y = 1
    for _ in range(F.q - 2):
        y = int(F.mul(y, g))
        seen.add(y)
    assert len(seen) == F.q - 1


def test_frobenius_fixes_prime_subfield():
    F = GF(3, 2)
    fixed = [a for a in range(F.q) if int(F.frobenius(a)) == a]
    assert sorted(fixed) == sorted(F.subfield_elements(1).tolist())
    assert len(fixed) == 3


def test_field_of_order():
    assert field_of_order(9) is GF(3, 2)
    with pytest.raises(FieldError):
        field_of_order(12)
    with pytest.raises(FieldError):
        GF(4)


def test_entries_out_of_range():
    with pytest.raises(FieldError):
        Matrix(GF(2), [[0, 2]])


def _rand_matrix(rng, F, n, m=None):
    return rng.integers(0, F.q, size=(n, m or n))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_determinant_and_inverse_vs_sympy(p):
    rng = np.random.default_rng(p)
    F = GF(p)
    for _ in range(20):
        a = _rand_matrix(rng, F, 5)
        d = determinant(Matrix(F, a))
        assert d == int(SMatrix(a.tolist()).det()) % p
        if d:
            inv = mat_inv(Matrix(F, a))
            assert (Matrix(F, a) @ inv).is_identity()


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (2, 3)])
def test_rank_nullity_extension_fields(p, e):
    rng = np.random.default_rng(0)
    F = GF(p, e)
    for _ in range(20):
        a = _rand_matrix(rng, F, 4, 6)
        a[3] = F.add(a[0], F.mul(a[1], 2 % F.q))
        N = nullspace_array(F, a)
        R = row_space(F, a)
        assert R.shape[0] + N.shape[0] == 6
        if N.shape[0]:
            assert not array_matmul(F, a, N.T).any()


def test_solve_linear():
    F = GF(5)
    a = Matrix(F, [[1, 2], [3, 4]])
    b = np.array([1, 0])
    xs = solve_linear(a, b)
    assert np.array_equal(array_matmul(F, a.a, xs.reshape(-1, 1)).reshape(-1), b)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(1, 150), st.integers(0, 2 ** 32 - 1))
def test_packed_gf2_matches_dense(rows, cols, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(rows, cols))
    assert np.array_equal(gf2_unpack(gf2_pack(a), cols), a)
    ech, r, piv = gf2_rref(a)
    assert r == row_space(GF(2), a).shape[0]
    N = gf2_nullspace_packed(gf2_pack(a), cols)
    assert N.shape[0] == cols - r
    if N.shape[0]:
        assert not ((a @ N.T) % 2).any()
    b = rng.integers(0, 2, size=(cols, 7))
    prod = gf2_unpack(gf2_matmul_packed(a, gf2_pack(b)), 7)
    assert np.array_equal(prod, (a @ b) % 2)


def test_gf2_rank_vs_sympy():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rng.integers(0, 2, size=(8, 12))
        dm = DomainMatrix.from_list_sympy(8, 12, a.tolist()).convert_to(SGF(2))
        assert gf2_rref(a)[1] == dm.rank()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 2 ** 32 - 1))
def test_matmul_associative(pe, seed):
    F = GF(*pe)
    rng = np.random.default_rng(seed)
    a, b, c = (_rand_matrix(rng, F, 4) for _ in range(3))
    assert np.array_equal(array_matmul(F, array_matmul(F, a, b), c), array_matmul(F, a, array_matmul(F, b, c)))


def test_normalize_projective():
    F = GF(5)
    a = np.array([[0, 3], [1, 4]])
    s, c = normalize_projective(F, a)
    assert s[0, 1] == 1 and np.array_equal(F.mul(a, c), s)


def test_matrix_text_round_trip():
    F = GF(3, 2)
    m = Matrix(F, [[0, 8, 3], [1, 2, 5]])
    back, _ = parse_matrix(m.to_text())
    assert back == m
