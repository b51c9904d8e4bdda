import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix as SMatrix, Poly, symbols

from grpx.gf import GF, array_matmul, mat_inv, Matrix
from grpx.groupcore import Group, alternating_group, symmetric_group
from grpx.modrep import (GModule, all_irreducibles_up_to_dim, arf_invariant, charpoly, chop, dual,
                         endo_field_degree, format_module, hom_space, invariant_alternating_form,
                         invariant_quadratic_form, is_submodule, meataxe, module_iso, parse_module,
                         permutation_module, quadratic_sign, spin, symplectic_basis, tensor)

x = symbols("x")


def exhaustive_irreducible(m: GModule) -> bool:
    F = m.field
    for t in itertools.product(range(F.q), repeat=m.dim):
        if any(t) and spin(F, np.array(t)[None, :], list(m.mats)).shape[0] < m.dim:
            return False
    return True


def _random_invertible(rng, F, d):
    while True:
        a = rng.integers(0, F.q, size=(d, d))
        try:
            mat_inv(Matrix(F, a))
            return a
        except Exception:
            continue


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2)]), st.integers(1, 5), st.integers(1, 2), st.integers(0, 2 ** 32 - 1))
def test_meataxe_vs_exhaustive(pe, d, k, seed):
    F = GF(*pe)
    if F.q ** d > 5000:
        d = 3
    rng = np.random.default_rng(seed)
    m = GModule(F, [_random_invertible(rng, F, d) for _ in range(k)])
    res = meataxe(m, seed=seed % 7)
    assert res.irreducible == exhaustive_irreducible(m)
    if not res.irreducible:
        S = res.submodule
        assert 0 < S.shape[0] < d and is_submodule(m, S)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_charpoly_vs_sympy(p):
    F = GF(p)
    rng = np.random.default_rng(p)
    for _ in range(10):
        a = rng.integers(0, p, size=(6, 6))
        ours = [int(c) for c in charpoly(F, a)]
        ref = Poly(SMatrix(a.tolist()).charpoly(x).as_expr(), x, modulus=p).all_coeffs()
        assert ours == [int(c) % p for c in reversed(ref)]


def test_permutation_module_of_a5_chops_to_1_4():
    g = alternating_group(5)
    pm = permutation_module(g, GF(2))
    dims = sorted(f.dim for f, mult in chop(pm) for _ in range(mult))
    assert dims == [1, 4]


def _hom_dim_linear(a: GModule, b: GModule) -> int:
    """dim of {X : A X = X B for all generators}, by a direct linear solve."""
    F = a.field
    d1, d2 = a.dim, b.dim
    cols = []
    for k in range(d1 * d2):
        E = np.zeros(d1 * d2, dtype=np.int64)
        E[k] = 1
        E = E.reshape(d1, d2)
        cols.append(np.concatenate([F.sub(array_matmul(F, A, E), array_matmul(F, E, B)).reshape(-1)
                                    for A, B in zip(a.mats, b.mats)]))
    from grpx.gf import nullspace_array
    return nullspace_array(F, np.array(cols).T).shape[0]


@pytest.mark.parametrize("g", [symmetric_group(4), alternating_group(5)])
@pytest.mark.parametrize("p", [2, 3])
def test_hom_space_vs_linear_solve(g, p):
    pm = permutation_module(g, GF(p))
    for f, _ in chop(pm):
        H = hom_space(f, pm)
        assert len(H) == _hom_dim_linear(f, pm)
        for X in H:
            for A, B in zip(f.mats, pm.mats):
                assert np.array_equal(array_matmul(pm.field, A, X), array_matmul(pm.field, X, B))


def test_module_iso_detects_conjugate():
    F = GF(3)
    g = symmetric_group(4)
    pm = permutation_module(g, F)
    rng = np.random.default_rng(0)
    P = _random_invertible(rng, F, pm.dim)
    Pi = mat_inv(Matrix(F, P)).a
    conj = GModule(F, [array_matmul(F, array_matmul(F, P, A), Pi) for A in pm.mats], g)
    assert module_iso(pm, conj) is not None
    assert module_iso(pm, dual(tensor(pm, pm))) is None


def test_endo_field_degree_of_non_absolutely_irreducible():
    # C3 acting on GF(2)^2 by an element of order 3: End is GF(4)
    m = GModule(GF(2), [np.array([[0, 1], [1, 1]])])
    assert meataxe(m).irreducible
    assert endo_field_degree(m) == 2


def test_sp4_2_invariant_forms():
    F = GF(2)
    from grpx.bundle import Bundle
    g = Bundle.open().group("sp4_2")
    m = GModule.natural(g)
    B = invariant_alternating_form(m)
    assert B is not None and B.is_alternating() and B.is_invariant(m.mats) and B.is_nondegenerate()
    pairs = symplectic_basis(F, B.gram)
    basis = np.array([v for pair in pairs for v in pair])
    G2 = array_matmul(F, array_matmul(F, basis, B.gram), basis.T)
    assert np.array_equal(G2, np.kron(np.eye(2, dtype=np.int64), np.array([[0, 1], [1, 0]])))
    assert invariant_quadratic_form(m) is None


@pytest.mark.parametrize("name,sign", [("o4p_2", 1), ("o4m_2", -1)])
def test_quadratic_sign(name, sign):
    from grpx.bundle import Bundle
    m = GModule.natural(Bundle.open().group(name))
    Q = invariant_quadratic_form(m)
    assert Q is not None and Q.is_invariant(m.mats)
    assert quadratic_sign(Q.upper) == sign
    assert arf_invariant(Q.upper) == (0 if sign == 1 else 1)


def test_irreducibles_of_a5_over_gf2():
    cat = all_irreducibles_up_to_dim(alternating_group(5), GF(2), 8)
    assert cat.dims() == [1, 4, 4]
    assert len(cat.certificate["irreducibles_found"]) == 3


def test_module_text_round_trip():
    g = alternating_group(5)
    pm = permutation_module(g, GF(3))
    back = parse_module(format_module(pm, "a5"), g)
    assert back.dim == 5 and all(np.array_equal(a, b) for a, b in zip(back.mats, pm.mats))


def test_restriction_and_faithfulness():
    g = symmetric_group(4)
    pm = permutation_module(g, GF(2))
    assert pm.is_faithful()
    h = g.subgroup([g.gens[0]])
    assert pm.restrict(h).dim == 4
    triv = GModule.trivial(GF(2), len(g.gens), group=g)
    assert not triv.is_faithful()


def test_natural_module_of_matrix_group():
    F = GF(3)
    g = Group.matrix(F, 2, [Matrix(F, [[1, 1], [0, 1]]), Matrix(F, [[0, 2], [1, 0]])])
    m = GModule.natural(g)
    assert m.dim == 2 and meataxe(m).irreducible
