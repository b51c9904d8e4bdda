import itertools
import random

import numpy as np
import pytest

from grpx.gf import GF
from grpx.groupcore import Group, Perm
from grpx.symtype import (KINDS, FormData, FormError, classify_R, construct_R, defect_one_lift, is_isometry,
                          isometry_group_generators, normalizer_extension, orthogonal_order, sp_order, verify_weil,
                          weil_rep)

FIELD = {"plus": GF(3), "minus": GF(3), "central4": GF(5), "extraspecial": GF(2, 2)}


def _cases(nmax=3):
    for kind in KINDS:
        for n in range(1, nmax + 1):
            yield kind, (3 if kind == "extraspecial" else 2), n


@pytest.mark.parametrize("kind,r,n", list(_cases()))
def test_construction_laws(kind, r, n):
    R = construct_R(FormData.standard(r, n, kind))
    laws = R.check_laws()
    expected_order = r ** (2 * n + 1) * (2 if kind == "central4" else 1)
    assert R.order == expected_order
    assert laws["mode"] == ("exhaustive" if R.order <= 2 ** 10 else laws["mode"])
    assert laws["commutator"] and laws["power"] and laws["associative"]
    assert R.center_order == (4 if kind == "central4" else r)


@pytest.mark.parametrize("kind,r,n", [pytest.param(*c, marks=pytest.mark.slow) if c[2] == 3 else c
                                      for c in _cases()])
def test_weil_representation(kind, r, n):
    w = weil_rep(construct_R(FormData.standard(r, n, kind)), FIELD[kind])
    v = verify_weil(w)
    assert v["dim"] == r ** n == v["expected_dim"]
    assert v["faithful"] and v["kernel_order"] == 1
    assert v["irreducible"]


def test_weil_needs_roots_of_unity():
    with pytest.raises(FormError):
        weil_rep(construct_R(FormData.standard(3, 1, "extraspecial")), GF(5))
    with pytest.raises(FormError):
        weil_rep(construct_R(FormData.standard(2, 1, "central4")), GF(3))


@pytest.mark.parametrize("kind,r,n", [c for c in _cases(2)])
def test_classify_round_trip(kind, r, n):
    R = construct_R(FormData.standard(r, n, kind))
    assert classify_R(R.as_group(), r) == (kind, n)


def test_classify_classical_small_groups():
    d8 = Group.perm(4, [Perm.parse("(0 1 2 3)", 4), Perm.parse("(0 2)", 4)])
    assert classify_R(d8, 2) == ("plus", 1)
    # Q8 in its regular representation
    q8 = Group.perm(8, [Perm.parse("(0 1 2 3)(4 5 6 7)", 8), Perm.parse("(0 4 2 6)(1 7 3 5)", 8)])
    assert q8.order() == 8
    assert classify_R(q8, 2) == ("minus", 1)
    c8 = Group.perm(8, [Perm.parse("(0 1 2 3 4 5 6 7)", 8)])
    assert classify_R(c8, 2) is None


def _brute_isometry_count(fd: FormData) -> int:
    """Count all d x d matrices over GF(2) preserving the form data (d = 4)."""
    d = fd.d
    count = 0
    vecs = np.array(list(itertools.product([0, 1], repeat=d)))
    for bits in itertools.product([0, 1], repeat=d * d):
        x = np.array(bits).reshape(d, d)
        if round(np.linalg.det(x)) % 2 == 0:
            continue
        if not np.array_equal((x @ fd.f @ x.T) % 2, fd.f % 2):
            continue
        if fd.Q is not None:
            img = (vecs @ x) % 2
            if not all(fd.Qvalue(a) == fd.Qvalue(b) for a, b in zip(vecs, img)):
                continue
        count += 1
    return count


@pytest.mark.parametrize("kind,want", [("plus", 72), ("minus", 120)])
def test_isometry_orders_vs_brute_force(kind, want):
    fd = FormData.standard(2, 2, kind)
    assert _brute_isometry_count(fd) == want
    assert isometry_group_generators(fd).order() == want


def test_isometry_group_orders():
    assert isometry_group_generators(FormData.standard(2, 2, "central4")).order() == 720 == sp_order(2, 2)
    assert orthogonal_order(2, 1) == 72 and orthogonal_order(2, -1) == 120
    assert isometry_group_generators(FormData.standard(3, 1, "extraspecial")).order() == sp_order(1, 3) == 24


def test_generators_are_isometries():
    fd = FormData.standard(2, 2, "minus")
    for x in isometry_group_generators(fd).gens:
        assert is_isometry(fd, x)


def test_defect_one_lift_is_isometry():
    fd = FormData.standard(2, 2, "central4")
    rng = random.Random(0)
    G = isometry_group_generators(fd)
    for _ in range(20):
        x = np.asarray(G.uniform_random(rng).a)
        y = defect_one_lift(x[:4, :4], fd)
        assert is_isometry(fd, y)


def test_normalizer_extension_small():
    fd = FormData.standard(2, 1, "minus")
    w = weil_rep(construct_R(fd), GF(3))
    S = isometry_group_generators(fd)
    ext = normalizer_extension(w, S)
    assert ext.kernel.order() == 4
    assert ext.group.order() == 4 * S.order()


def test_bad_form_data():
    with pytest.raises(FormError):
        FormData.standard(2, 1, "extraspecial")
    with pytest.raises(FormError):
        FormData.standard(3, 1, "plus")
    with pytest.raises(FormError):
        FormData(2, np.array([[0, 1], [0, 0]]), np.zeros((2, 2)))
