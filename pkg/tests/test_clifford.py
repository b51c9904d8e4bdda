import numpy as np
import pytest

from grpx.bundle import Bundle
from grpx.clifford import (CliffordError, FeitTitsFailure, FeitTitsResult, feit_tits_reduce, homogeneous_components,
                           imprimitivity_witness, is_nilpotent, lower_central_series, tensor_factorize)
from grpx.gf import GF, Matrix, array_matmul
from grpx.groupcore import Group, Perm, alternating_group, symmetric_group
from grpx.modrep import GModule, chop, permutation_module
from grpx.reproduce import psu3_3_extension, sp4_2_extension
from grpx.symtype import FormData, construct_R, weil_rep


def _matrix_module(F, mats):
    g = Group.matrix(F, mats[0].shape[0], [Matrix._wrap(F, A) for A in mats])
    return GModule(F, mats, g), g


def test_dihedral_over_gf5_two_components():
    F = GF(5)
    r = np.array([[2, 0], [0, 3]])        # order 4
    s = np.array([[0, 1], [1, 0]])
    V, g = _matrix_module(F, [r, s])
    assert g.order() == 8
    M = g.subgroup([g.gens[0]])
    dec = homogeneous_components(V, M)
    assert dec.k == 2
    assert dec.action == [[0, 1], [1, 0]]
    assert dec.is_transitive()
    blocks = imprimitivity_witness(dec)
    assert blocks is not None and len(blocks) == 2
    with pytest.raises(CliffordError):
        tensor_factorize(V, M, dec)


def test_weil_minus_restricted_to_centre():
    F = GF(3)
    w = weil_rep(construct_R(FormData.standard(2, 2, "minus")), F)
    V, g = _matrix_module(F, list(w.module.mats))
    minus_one = Matrix._wrap(F, F.neg(np.eye(4, dtype=np.int64)))
    assert g.contains(minus_one)
    Z = g.subgroup([minus_one])
    dec = homogeneous_components(V, Z)
    assert dec.k == 1
    tf = tensor_factorize(V, Z, dec)
    assert (tf.m1, tf.m2) == (4, 1) and tf.degenerate
    assert imprimitivity_witness(dec) is None


def _a5_four():
    g = alternating_group(5)
    four = [f for f, _ in chop(permutation_module(g, GF(2))) if f.dim == 4][0]
    return [np.asarray(A) for A in four.mats]


def test_a5_squared_tensor_product_splits_as_4_4():
    F = GF(2)
    A = _a5_four()
    I = np.eye(4, dtype=np.int64)
    mats = [np.kron(X, I) for X in A] + [np.kron(I, X) for X in A]
    V, g = _matrix_module(F, mats)
    assert g.order() == 3600
    k = len(A)
    M = g.subgroup(g.gens[:k])
    dec = homogeneous_components(V, M)
    assert dec.k == 1
    tf = tensor_factorize(V, M, dec)
    assert (tf.m1, tf.m2) == (4, 4) and not tf.degenerate
    P = tf.change_of_basis
    for Amat, (U, W) in zip(V.mats, tf.factors):
        # P A P^-1 = U (x) W, i.e. P A = (U (x) W) P
        assert np.array_equal(array_matmul(F, P, Amat), array_matmul(F, np.kron(U, W) % 2, P))
    # M acts only on the M-type factor, the other A5 only on the multiplicity factor
    for U, W in tf.factors[:k]:
        assert np.array_equal(U, I)
    for U, W in tf.factors[k:]:
        assert np.array_equal(W, I)


def test_homogeneous_components_requires_normal():
    s4 = symmetric_group(4)
    V = permutation_module(s4, GF(3))
    with pytest.raises(CliffordError):
        homogeneous_components(V, s4.subgroup([Perm.parse("(0 1)", 4)]))


def test_nilpotency():
    d8 = Group.perm(4, [Perm.parse("(0 1 2 3)", 4), Perm.parse("(0 2)", 4)])
    assert is_nilpotent(d8)
    assert [h.order() for h in lower_central_series(d8)] == [8, 2, 1]
    assert not is_nilpotent(symmetric_group(3))


def test_feit_tits_sp4_2():
    ext, _ = sp4_2_extension()
    res = feit_tits_reduce(ext.group, ext.kernel)
    assert isinstance(res, FeitTitsResult)
    assert (res.r, res.n) == (2, 2)
    assert res.image_order == 720 == res.quotient_order
    assert res.faithful and res.irreducible and res.preserves_form
    assert ext.weil.dim == res.r ** res.n
    assert res.to_dict()["m_equals_r_pow_n"]


def test_feit_tits_reports_failed_clause():
    ext, _ = sp4_2_extension()
    H = ext.group
    Hs = H.subgroup(H.gens[:4])
    Ns = H.subgroup([H.gens[0]])
    res = feit_tits_reduce(Hs, Ns)
    assert isinstance(res, FeitTitsFailure)
    assert res.clause == "iii"
    assert res.to_dict()["failed_clause"] == "iii"


@pytest.mark.slow
def test_feit_tits_psu3_3():
    ext, _ = psu3_3_extension(Bundle.open())
    res = feit_tits_reduce(ext.group, ext.kernel)
    assert isinstance(res, FeitTitsResult)
    assert (res.r, res.n) == (2, 3)
    assert res.image_order == 6048
    assert res.faithful and res.irreducible and res.preserves_form
