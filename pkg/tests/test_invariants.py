import pytest
from hypothesis import given, settings, strategies as st

from grpx.gf import GF
from grpx.groupcore import symmetric_group
from grpx.invariants import (InvariantError, a5, brauer_count, check_multiplicative, check_subdirect,
                             d_p_instance_check, decorated_factor, fiber_product, n_prime, n_symplectic,
                             perm_degree, power_group, psl2_5_on_lines, random_subdirect, solve_subdirect,
                             validate_module_witness, validate_perm_witness, SubdirectInstance)
from grpx.modrep import all_irreducibles_up_to_dim
from grpx.presentations import parse_presentation

A5_PRES = "gens a b / rel a^2 / rel b^3 / rel (a b)^5"


@pytest.mark.parametrize("q,count", [(2, 3), (4, 4), (3, 3), (9, 4), (5, 3)])
def test_brauer_count_a5(q, count):
    assert brauer_count(a5(), q) == count


def test_catalogue_matches_brauer_count_s4_gf3():
    cat = all_irreducibles_up_to_dim(symmetric_group(4), GF(3), 6)
    assert cat.dims() == [1, 1, 3, 3]
    assert brauer_count(symmetric_group(4), 3) == 4


def test_perm_degree_a5():
    pres = parse_presentation(A5_PRES)
    rep = perm_degree(pres, 6, "A5")
    assert rep.value == 5
    assert validate_perm_witness(pres, rep)
    assert perm_degree(pres, 4, "A5").value is None


def test_n_prime_and_n_a5():
    g = a5()
    rp = n_prime(g, 4)
    rn = n_symplectic(g, 4)
    assert rp.value == 2 and rn.value == 2
    assert rp.certificate["level"].startswith("exhaustive")
    assert rp.certificate["brauer_count"] == 3
    assert validate_module_witness(g, rp) and validate_module_witness(g, rn)
    assert rp.value <= rn.value


def test_fiber_product_sl2_5_over_a5():
    sl, T, pi = psl2_5_on_lines()
    assert (sl.order(), T.order()) == (120, 60)
    inst = solve_subdirect(fiber_product(SubdirectInstance([sl], [pi], sl, 60), sl, pi, pi, pi))
    assert inst.group.order() == 240
    assert inst.normal.order() == 4
    assert inst.ell == 1 and inst.ells == [1, 1]
    c = check_subdirect(inst)
    assert c["holds"] and c["surjective"] and c["n_soluble"] and c["perfect_mod_n"]


def test_fiber_product_rejects_mismatched_quotients():
    sl, T, pi = psl2_5_on_lines()
    H, q, _ = decorated_factor("A5", symmetric_group(3))
    from grpx.groupcore import Group, Homomorphism, PermKind
    triv = Group(PermKind(1), [], "1")
    qt = Homomorphism(H, triv, [triv.identity()] * len(H.gens))
    with pytest.raises(InvariantError):
        fiber_product(sl, H, pi, qt)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_subdirect_lemma(seed):
    c = check_subdirect(random_subdirect(seed))
    assert c["shape_ok"]
    assert sum(c["ells"]) >= c["ell"]
    assert c["holds"]


def test_d_p_instance_check():
    assert d_p_instance_check([4, 16], 2)
    assert not d_p_instance_check([2], 2)


def test_power_group():
    assert power_group(a5(), 2).order() == 3600


@pytest.mark.slow
def test_multiplicative_a5_squared():
    out = check_multiplicative(a5(), 2, 2)
    assert out["n_prime_T"] == 2 and out["n_prime_power"] == 4
    assert out["bound"] == 4 and out["holds"] and out["equality"]


@pytest.mark.slow
def test_multiplicative_negative_control():
    out = check_multiplicative(a5(), 2, 2, claimed_nT=3)
    assert not out["holds"]
