import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhalg.algebra import AlgebraPresentation, center, endomorphism_algebra, realize
from hhalg.base import BaseRing, GradedFreeModule, HomogeneousMap, LaurentGenerator, hom_pair_index
from hhalg.dg import ChainMap, make_quotient_dga
from hhalg.ground import GroundRing, ZZ
from hhalg.hochschild import (
    BarCochainComplex,
    Bimodule,
    action_map_mu,
    hochschild_cohomology,
    hochschild_via_enveloping,
    mu_homology_image,
    mu_is_iso,
)

F2 = GroundRing.prime_field(2)
F3 = GroundRing.prime_field(3)
F5 = GroundRing.prime_field(5)
KU2 = BaseRing(F2, LaurentGenerator("v", 2))
KUZ = BaseRing(ZZ, LaurentGenerator("v", 2))


def m2_f3():
    # Clifford presentation of the 2x2 matrix algebra over F3
    base = BaseRing(F3)
    return realize(AlgebraPresentation(base, (("x", 0), ("y", 0)), (
        [(1, ("x", "x"), 0), (-1, (), 0)],
        [(1, ("y", "y"), 0), (-1, (), 0)],
        [(1, ("y", "x"), 0), (1, ("x", "y"), 0)],
    )))


def dual_numbers_f3():
    base = BaseRing(F3)
    return realize(AlgebraPresentation(base, (("t", 0),), ([(1, ("t", "t"), 0)],)))


def lam_tau():
    return realize(AlgebraPresentation(KU2, (("t", 1),), ([(1, ("t", "t"), 0)],)))


def lam_x_f3():
    return realize(AlgebraPresentation(BaseRing(F3), (("x", -1),), ([(1, ("x", "x"), 0)],)))


def n_ranks(table, n):
    return sum(p.free_rank for (s, _), p in table.entries.items() if s == n)


# -- bar complex cohomology -----------------------------------------------------

def test_hh_matrix_algebra():
    t = hochschild_cohomology(m2_f3(), n_max=3)
    assert n_ranks(t, 0) == 1
    for n in (1, 2, 3):
        assert n_ranks(t, n) == 0


def test_hh_dual_numbers_periodic_pattern():
    # small-resolution oracle: [dim A, 1, 1, 1, ...] in odd characteristic
    t = hochschild_cohomology(dual_numbers_f3(), n_max=4)
    assert [n_ranks(t, n) for n in range(5)] == [2, 1, 1, 1, 1]


def test_hh_base_algebra_trivial():
    one = realize(AlgebraPresentation(BaseRing(F3), (), ()))
    t = hochschild_cohomology(one, n_max=3)
    assert [n_ranks(t, n) for n in range(4)] == [1, 0, 0, 0]


def test_hh_exterior_char_two_laurent():
    # in characteristic 2 the small-resolution differentials vanish, so
    # every cochain degree contributes a copy of the algebra
    t = hochschild_cohomology(lam_tau(), n_max=3)
    assert [n_ranks(t, n) for n in range(4)] == [2, 2, 2, 2]


def test_hh_zero_equals_graded_center():
    for A in (m2_f3(), dual_numbers_f3(), lam_tau()):
        t = hochschild_cohomology(A, n_max=1)
        want = sum(p.free_rank for p in center(A).values())
        assert n_ranks(t, 0) == want


def test_hh_trivial_coefficients():
    # Hom(Abar^n, k) with all outer actions zero; for the dual numbers the
    # only product of ideal monomials is t*t = 0, so every differential dies
    A = dual_numbers_f3()
    k = GradedFreeModule(A.base, (("k", 0),))
    ident = HomogeneousMap.identity(k)
    M = Bimodule(A, k, {A.unit_index: ident}, {A.unit_index: ident})
    t = hochschild_cohomology(A, M, n_max=4)
    assert [n_ranks(t, n) for n in range(5)] == [1, 1, 1, 1, 1]


def test_hh_budget_reports_completed_range():
    t = hochschild_cohomology(m2_f3(), n_max=3, budget=15)
    assert t.notes and "n = 0" in t.notes[0]
    assert n_ranks(t, 0) == 1
    assert all(s == 0 for (s, _) in t.entries)


def test_bar_differential_squares_to_zero_with_signs():
    # odd-degree generators over F3 exercise every Koszul sign; the
    # constructor hard-checks d^2 = 0
    BarCochainComplex(lam_x_f3(), Bimodule.regular(lam_x_f3()), n_max=3)


# -- the enveloping-algebra path --------------------------------------------------

def test_enveloping_path_matrix_algebra():
    t = hochschild_via_enveloping(m2_f3(), n_max=2)
    assert n_ranks(t, 0) == 1
    assert n_ranks(t, 1) == 0


def test_enveloping_path_dual_numbers():
    t = hochschild_via_enveloping(dual_numbers_f3(), n_max=3)
    assert [n_ranks(t, n) for n in range(4)] == [2, 1, 1, 1]


def test_enveloping_path_graded_signs():
    # odd generator: the cross-check inside compares bar and Ext degrees
    t = hochschild_via_enveloping(lam_x_f3(), n_max=2)
    assert n_ranks(t, 0) == 2


def test_enveloping_path_laurent():
    t = hochschild_via_enveloping(lam_tau(), n_max=2)
    assert [n_ranks(t, n) for n in range(3)] == [2, 2, 2]


# -- the action map ----------------------------------------------------------------

def test_mu_iso_for_matrix_algebra():
    assert mu_is_iso(m2_f3())


def test_mu_not_iso_for_dual_numbers():
    assert not mu_is_iso(dual_numbers_f3())


def test_mu_multiplicative_check_runs():
    # construction hard-checks the algebra-map property
    f = action_map_mu(lam_tau())
    assert f.degree == 0
    assert f.source.rank == 4 and f.target.rank == 4


def test_mu_dg_chain_map():
    A = make_quotient_dga(KUZ, 3, 1).dga
    mu = action_map_mu(A)
    assert isinstance(mu, ChainMap)
    assert mu.degree == 0
    # mu(y (x) 1): 1 -> y and y -> y^2 = w = v
    names = [n for n, _ in mu.source.module.generators]
    M = A.algebra.module
    out = mu.f.apply_coords({names.index("y|1"): 1})
    assert out == {hom_pair_index(M, M, 0, 1): 1, hom_pair_index(M, M, 1, 0): 1}


@settings(max_examples=8, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_mu_iso_for_endomorphism_algebras(degs):
    E = GradedFreeModule(BaseRing(F5), tuple((f"e{i}", d) for i, d in enumerate(degs)))
    assert mu_is_iso(endomorphism_algebra(E))


def test_endomorphism_algebra_shape():
    E = GradedFreeModule(BaseRing(F5), (("a", 0), ("b", 3)))
    A = endomorphism_algebra(E)
    assert A.rank == 4
    assert sorted(A.degree(i) for i in range(4)) == [-3, 0, 0, 3]
    assert not mu_is_iso(dual_numbers_f3())


# -- homology image of alpha --------------------------------------------------------

def test_mu_image_unit_for_odd_p():
    for p in (3, 5):
        Q = make_quotient_dga(KUZ, p, 1)
        r = mu_homology_image(Q)
        assert r.is_unit
        assert (r.coefficient - r.modeled_defect) % p == 0
        assert r.alpha_choice == "y|1 - 1|y"


def test_mu_image_vanishes_for_commutative_shadow():
    r = mu_homology_image(make_quotient_dga(KUZ, 3, 0))
    assert r.coefficient == 0
    assert not r.is_unit


def test_mu_image_defect_dies_at_two():
    r = mu_homology_image(make_quotient_dga(KUZ, 2, 1))
    assert r.coefficient % 2 == 0
    assert not r.is_unit
    assert r.modeled_defect == 2
