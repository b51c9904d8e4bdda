import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from grpx.groupcore import Perm, alternating_group, symmetric_group
from grpx.presentations import (SyntaxErrorAt, evaluate_in_group, format_word, invert_word, low_index_subgroups,
                                parse_presentation, parse_word, reduce_word, todd_coxeter, verify_presentation)

A5 = "gens a b / rel a^2 / rel b^3 / rel (a b)^5"
S4 = "gens a b / rel a^2 / rel b^3 / rel (a b)^4"
PRESENTATIONS = [
    (A5, 60),
    (S4, 24),
    ("gens a b / rel a^2 / rel b^3 / rel (a b)^3", 12),
    ("gens a b / rel a^4 / rel b^2 / rel (a b)^2", 8),
    ("gens x y / rel x^3 / rel y^3 / rel (x y)^3 / rel (x^-1 y)^3", 27),
    ("gens a b / rel a^8 / rel b^2 a^4 / rel b^-1 a b a", 16),   # generalized quaternion Q16
    ("gens a b c / rel a^2 / rel b^2 / rel c^2 / rel (a b)^3 / rel (b c)^3 / rel (a c)^2", 24),
]


def sympy_order(text):
    p = parse_presentation(text)
    F, *gs = free_group(" ".join(p.gens))

    def to_sym(w):
        out = F.identity
        for g, e in w:
            out = out * gs[g] ** e
        return out
    return FpGroup(F, [to_sym(r) for r in p.relators]).order()


@pytest.mark.parametrize("text,order", PRESENTATIONS)
@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
def test_todd_coxeter_orders(text, order, strategy):
    t = todd_coxeter(parse_presentation(text), strategy=strategy)
    assert t.index == order
    assert t.check()


@pytest.mark.parametrize("text,order", PRESENTATIONS[:5])
def test_orders_vs_sympy(text, order):
    assert sympy_order(text) == order


def test_subgroup_index_and_permutation_rep():
    p = parse_presentation(A5)
    t = todd_coxeter(p, [p.word("b")])
    assert t.index == 20
    assert t.permutation_group().order() == 60


def test_verify_presentation_against_group():
    p = parse_presentation(A5)
    g = alternating_group(5)
    a, b = Perm.parse("(0 1)(2 3)", 5), Perm.parse("(0 2 4)", 5)
    ref = g.subgroup([a, b])
    assert evaluate_in_group(p.word("(a b)^5"), ref) is not None
    assert verify_presentation(p, ref) == (ref.order() == 60)
    wrong = parse_presentation("gens a b / rel a^2 / rel b^3")
    with pytest.raises(Exception):
        verify_presentation(wrong, ref, cap=5000)


def test_parse_errors_have_positions():
    with pytest.raises(SyntaxErrorAt) as e:
        parse_presentation("gens a b\nrel a^2 c")
    assert e.value.line == 2
    with pytest.raises(SyntaxErrorAt):
        parse_presentation("rel a^2")
    with pytest.raises(SyntaxErrorAt):
        parse_presentation("gens a\nfoo a")
    with pytest.raises(SyntaxErrorAt):
        parse_presentation("gens a\nrel a a^-1")


def test_commutator_and_round_trip():
    gens = ["a", "b"]
    w = parse_word("[a, b]", gens)
    assert w == parse_word("a^-1 b^-1 a b", gens)
    p = parse_presentation(PRESENTATIONS[5][0])
    q = parse_presentation(p.to_text())
    assert q.relators == p.relators and q.gens == p.gens


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([(0, 1), (0, -1), (1, 1), (1, -1)]), max_size=30))
def test_free_reduction(word):
    w = reduce_word(word)
    assert all(w[i] != (w[i + 1][0], -w[i + 1][1]) for i in range(len(w) - 1))
    assert reduce_word(tuple(w) + invert_word(w)) == ()
    if w:
        assert reduce_word(parse_word(format_word(w, ["a", "b"]), ["a", "b"])) == w


def _subgroup_classes_by_brute_force(g, bound):
    """Conjugacy classes of subgroups of index <= bound (2-generated groups only)."""
    elems = [Permutation(list(map(int, x.a))) for x in g.closure_elements()]
    G = PermutationGroup(elems)
    n = G.order()
    seen = set()
    classes = []
    for x, y in itertools.combinations_with_replacement(elems, 2):
        H = PermutationGroup([x, y])
        if n // H.order() > bound:
            continue
        key = frozenset(H.elements)
        if key in seen:
            continue
        conj = {frozenset(e ^ c for e in key) for c in elems}
        seen |= conj
        classes.append(n // H.order())
    return sorted(classes)


@pytest.mark.parametrize("text,group,bound", [(S4, symmetric_group(4), 6), (A5, alternating_group(5), 12)])
def test_low_index_vs_brute_force(text, group, bound):
    tables = low_index_subgroups(parse_presentation(text), bound)
    assert sorted(t.index for t in tables) == _subgroup_classes_by_brute_force(group, bound)
    for t in tables:
        assert t.check()


def test_low_index_a5_minimal_degree():
    idx = sorted(t.index for t in low_index_subgroups(parse_presentation(A5), 6))
    assert idx == [1, 5, 6]


def test_coset_cap():
    from grpx.presentations import EnumerationError
    with pytest.raises((EnumerationError, RuntimeError)):
        todd_coxeter(parse_presentation(A5), cap=20)
