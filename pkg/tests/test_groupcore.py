import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from grpx.gf import GF, Matrix
from grpx.groupcore import (Group, Homomorphism, Perm, ResourceError, alternating_group, direct_product,
                            factorize, format_group, parse_group, symmetric_group)


def sympy_order(g: Group) -> int:
    return PermutationGroup([Permutation(list(map(int, x.a))) for x in g.gens]).order()


def test_perm_basics():
    a = Perm.parse("(0 1 2)(3 4)", 5)
    assert a.order() == 6
    assert (a * a.inverse()).is_identity()
    assert (a ** 6).is_identity() and not (a ** 3).is_identity()
    assert Perm.from_cycles(5, [[0, 1, 2], [3, 4]]) == a
    assert a.sign() == -1


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10 ** 6), st.integers(1, 3))
def test_schreier_sims_vs_sympy(n, seed, k):
    rng = random.Random(seed)
    gens = []
    for _ in range(k):
        a = list(range(n))
        rng.shuffle(a)
        gens.append(Perm(a))
    g = Group.perm(n, gens)
    assert g.order() == sympy_order(g)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_symmetric_alternating(n):
    import math
    assert symmetric_group(n).order() == math.factorial(n)
    assert alternating_group(n).order() == math.factorial(n) // 2


def test_membership_and_random_elements():
    g = alternating_group(6)
    rng = random.Random(1)
    for _ in range(50):
        assert g.contains(g.uniform_random(rng))
    assert not g.contains(Perm.parse("(0 1)", 6))


def test_matrix_group_orders():
    F = GF(2)
    # GL3(2) from two generators
    a = Matrix(F, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    b = Matrix(F, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert Group.matrix(F, 3, [a, b]).order() == 168
    F5 = GF(5)
    s = Matrix(F5, [[1, 1], [0, 1]])
    t = Matrix(F5, [[0, 4], [1, 0]])
    assert Group.matrix(F5, 2, [s, t]).order() == 120
    assert Group.matrix(F5, 2, [s, t], projective=True).order() == 60


def test_closure_agrees_with_schreier_sims():
    for g in (symmetric_group(5), alternating_group(5)):
        assert len(g.closure_elements()) == g.order()


def test_derived_series_and_solubility():
    s4 = symmetric_group(4)
    assert s4.is_soluble()
    assert [h.order() for h in s4.derived_series()][:3] == [24, 12, 4]
    a5 = alternating_group(5)
    assert not a5.is_soluble()
    assert a5.derived_subgroup().order() == 60


def test_center_centralizer_normality():
    d8 = Group.perm(4, [Perm.parse("(0 1 2 3)", 4), Perm.parse("(0 2)", 4)])
    assert d8.order() == 8
    assert d8.center().order() == 2
    r = d8.subgroup([Perm.parse("(0 1 2 3)", 4)])
    assert r.is_normal_in(d8)
    assert d8.centralizer_of(Perm.parse("(0 1 2 3)", 4)).order() == 4
    s = d8.subgroup([Perm.parse("(0 2)", 4)])
    assert not s.is_normal_in(d8)


@pytest.mark.parametrize("p,expected", [(2, 8), (3, 3), (5, 5)])
def test_sylow(p, expected):
    s = alternating_group(5).sylow_subgroup(p) if p != 2 else symmetric_group(4).sylow_subgroup(2)
    assert s.order() == expected


def test_soluble_radical():
    g = direct_product([alternating_group(5), symmetric_group(3)])
    assert g.order() == 360
    assert g.soluble_radical().order() == 6


def test_conjugacy_classes():
    assert len(alternating_group(5).conjugacy_class_reps()) == 5
    assert len(symmetric_group(5).conjugacy_class_reps()) == 7


def test_homomorphism_kernel_image_preimage():
    # S4 -> S3 via the action on the three pair partitions
    s4 = symmetric_group(4)
    parts = [frozenset({frozenset({0, 1}), frozenset({2, 3})}), frozenset({frozenset({0, 2}), frozenset({1, 3})}),
             frozenset({frozenset({0, 3}), frozenset({1, 2})})]

    def img(g):
        out = []
        for P in parts:
            Q = frozenset(frozenset(int(g.a[i]) for i in pair) for pair in P)
            out.append(parts.index(Q))
        return Perm(out)
    h = Homomorphism(s4, symmetric_group(3), [img(x) for x in s4.gens])
    assert h.kernel().order() == 4
    assert h.image().order() == 6
    y = Perm.parse("(0 1)", 3)
    x = h.preimage(y)
    assert h(x) == y


def test_bad_homomorphism_rejected():
    from grpx.groupcore import GroupError
    s3 = symmetric_group(3)
    with pytest.raises(GroupError):
        Homomorphism(s3, s3, [s3.gens[0], s3.identity()] if len(s3.gens) == 2 else [s3.identity()])


def test_element_cap():
    g = Group(symmetric_group(12).kind, symmetric_group(12).gens, cap=1000)
    with pytest.raises(ResourceError):
        g.order()


def test_group_text_round_trip():
    g = alternating_group(5)
    h = parse_group(format_group(g))
    assert h.order() == 60
    F = GF(3, 2)
    m = Group.matrix(F, 2, [Matrix(F, [[1, 1], [0, 1]]), Matrix(F, [[0, 1], [2, 0]])], name="m")
    back = parse_group(format_group(m))
    assert back.order() == m.order()


def test_factorize():
    assert factorize(6048) == {2: 5, 3: 3, 7: 1}
    assert factorize(1) == {}


def test_orbit_stabilizer():
    g = alternating_group(6)
    act = lambda pt, x: int(x.a[pt])  # noqa: E731
    assert len(g.orbit(0, act)) == 6
    assert g.stabilizer(0, act).order() == 60


def test_projective_kind_identifies_scalars():
    F = GF(5)
    g = Group.matrix(F, 2, [Matrix(F, [[2, 0], [0, 2]])], projective=True)
    assert g.order() == 1
    assert np.array_equal(g.gens[0].a, np.eye(2, dtype=np.int64))
