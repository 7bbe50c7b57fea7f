import pytest

from hhalg.algebra import AlgebraPresentation, realize
from hhalg.base import BaseRing, HomogeneousMap, LaurentGenerator
from hhalg.ground import GroundRing
from hhalg.resolve import (
    AModule,
    ResolutionError,
    ext_base_change,
    ext_table,
    ext_with_coefficients,
    free_resolution,
    minimal_resolution,
    yoneda_square,
)

F2 = GroundRing.prime_field(2)
F3 = GroundRing.prime_field(3)
KU2 = BaseRing(F2, LaurentGenerator("v", 2))


def exterior(base, names_degrees):
    gens = tuple(names_degrees)
    rels = []
    names = [n for n, _ in gens]
    for a in names:
        rels.append([(1, (a, a), 0)])
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            rels.append([(1, (b, a), 0), (1, (a, b), 0)])
    return realize(AlgebraPresentation(base, gens, tuple(rels)))


def lam_x():
    return exterior(BaseRing(F3), (("x", -1),))


def lam_tau():
    return exterior(KU2, (("t", 1),))


def trunc_poly(T, deg, p=3):
    base = BaseRing(GroundRing.prime_field(p))
    return realize(AlgebraPresentation(base, (("y", deg),), (
        [(1, ("y",) * T, 0)],
    )))


def k1k1_op_trunc():
    # gens a0 (deg 1), t1 (deg 2); a0^2 = t1, t1^2 = v t1, commutative
    return realize(AlgebraPresentation(KU2, (("a0", 1), ("t1", 2)), (
        [(1, ("a0", "a0"), 0), (-1, ("t1",), 0)],
        [(1, ("t1", "t1"), 0), (-1, ("t1",), 1)],
        [(1, ("t1", "a0"), 0), (-1, ("a0", "t1"), 0)],
    )))


def sigma1():
    return realize(AlgebraPresentation(KU2, (("t1", 2),), (
        [(1, ("t1", "t1"), 0), (-1, ("t1",), 1)],
    )))


# -- minimal resolutions ------------------------------------------------------

def test_resolution_exterior_negative_degree():
    res = minimal_resolution(lam_x(), s_max=6)
    assert res.stage_ranks() == [1] * 7
    # stage-s generator sits in internal degree -s
    for s, st in enumerate(res.stages):
        assert st.gen_degrees == (-s,)


def test_resolution_truncated_polynomial_koszul():
    T, deg = 3, 2
    res = minimal_resolution(trunc_poly(T, deg), s_max=4, t_window=(0, 40))
    assert res.stage_ranks() == [1] * 5
    # alternating shifts: deg, (T-1)*deg, deg, ...
    degs = [st.gen_degrees[0] for st in res.stages]
    diffs = [b - a for a, b in zip(degs, degs[1:])]
    assert diffs == [deg, (T - 1) * deg, deg, (T - 1) * deg]


def test_resolution_of_base_algebra():
    one = realize(AlgebraPresentation(BaseRing(F3), (), ()))
    res = minimal_resolution(one, s_max=3)
    assert res.stage_ranks() == [1, 0, 0, 0]


def test_resolution_rejects_non_augmented():
    b2 = realize(AlgebraPresentation(KU2, (("t", 1),), (
        [(1, ("t", "t"), 0), (-1, (), 1)],
    )))
    with pytest.raises(ResolutionError):
        minimal_resolution(b2)


def test_resolution_rejects_non_nilpotent_ideal():
    with pytest.raises(ResolutionError):
        minimal_resolution(sigma1())


# -- ext tables ---------------------------------------------------------------

def test_ext_exterior_tau_diagonal():
    t = ext_table(lam_tau(), s_max=6)
    assert {k for k in t.entries} == {(s, s) for s in range(7)}
    assert all(p.free_rank == 1 for p in t.entries.values())


def test_ext_two_exterior_generators_polynomial_pattern():
    A = exterior(BaseRing(F3), (("x1", -1), ("x2", -1)))
    t = ext_table(A, s_max=5)
    for s in range(6):
        assert t.entry(s, -s).free_rank == s + 1


def test_ext_binomial_pattern_up_to_three_generators():
    from math import comb
    for n in (1, 2, 3):
        A = exterior(BaseRing(F3), tuple((f"x{i}", -1) for i in range(n)))
        t = ext_table(A, s_max=6)
        for s in range(7):
            assert t.entry(s, -s).free_rank == comb(s + n - 1, n - 1)


def test_ext_truncated_window_cut_is_exterior():
    # F3[y]/(y^20), |y| = 1: stage 2 sits at t = 20, outside [-16, 16]
    A = trunc_poly(20, 1)
    t = ext_table(A, s_max=6, t_window=(-16, 16))
    ranks = [sum(p.free_rank for (s2, _), p in t.entries.items() if s2 == s)
             for s in range(7)]
    assert ranks == [1, 1, 0, 0, 0, 0, 0]


def test_ext_permutation_independence():
    A = exterior(BaseRing(F3), (("x1", -1), ("x2", -2)))
    B = exterior(BaseRing(F3), (("x2", -2), ("x1", -1)))
    assert ext_table(A, s_max=4) == ext_table(B, s_max=4)


def test_hilbert_euler_consistency():
    # sum_s (-1)^s q^{t_g} * H_A(q) = 1 in all degrees visible in the window
    for A, s_max, window in (
        (lam_x(), 6, (-16, 16)),
        (trunc_poly(3, 2), 5, (0, 40)),
        (trunc_poly(4, 1), 5, (0, 40)),
    ):
        res = minimal_resolution(A, s_max=s_max, t_window=window)
        E = {}
        for s, st in enumerate(res.stages):
            for t in st.gen_degrees:
                E[t] = E.get(t, 0) + (1 if s % 2 == 0 else -1)
        H = {}
        for _, d in A.monomials:
            H[d] = H.get(d, 0) + 1
        P = {}
        for t1, c1 in E.items():
            for t2, c2 in H.items():
                P[t1 + t2] = P.get(t1 + t2, 0) + c1 * c2
        top = res.stages[-1].gen_degrees
        amax = max(abs(d) for _, d in A.monomials)
        bound = (min(abs(t) for t in top) - amax) if top else 10 ** 6
        for t, c in P.items():
            if abs(t) < bound:
                assert c == (1 if t == 0 else 0), (t, c)


# -- non-minimal resolutions -----------------------------------------------------

def test_free_resolution_of_regular_module():
    A = lam_tau()
    res = free_resolution(A, AModule.regular(A), s_max=3)
    assert res.stage_ranks() == [1, 0, 0, 0]


def test_free_resolution_ext_matches_minimal():
    for A in (lam_tau(), trunc_poly(3, 2)):
        window = (-16, 40)
        s_max = 4
        mini = ext_table(A, s_max=s_max, t_window=window)
        res = free_resolution(A, AModule.trivial(A), s_max=s_max, t_window=window)
        via = ext_with_coefficients(res, AModule.trivial(A), window)
        for (s, t), p in via.entries.items():
            key = t % 2 if A.base.laurent else t
            want = sum(
                q.free_rank for (s2, t2), q in mini.entries.items()
                if s2 == s and (t2 % 2 if A.base.laurent else t2) == key
            )
            assert p.free_rank <= want
        for s in range(s_max):
            got = sum(p.free_rank for (s2, _), p in via.entries.items() if s2 == s)
            want = sum(p.free_rank for (s2, _), p in mini.entries.items() if s2 == s)
            assert got == want


def test_free_resolution_seed_determinism():
    A = trunc_poly(3, 2)
    r1 = free_resolution(A, AModule.trivial(A), s_max=3, seed=7)
    r2 = free_resolution(A, AModule.trivial(A), s_max=3, seed=7)
    assert r1.stage_ranks() == r2.stage_ranks()
    assert [m.entries for m in r1.maps] == [m.entries for m in r2.maps]


# -- base change -----------------------------------------------------------------

def test_ext_base_change_k1k1():
    A = k1k1_op_trunc()
    S = sigma1()
    # S includes via 1 -> 1, t1 -> the t1 monomial of A
    t1_idx = [n for n, _ in A.monomials].index("t1")
    inc = HomogeneousMap(S.module, A.module, 0, {(0, 0): 1, (t1_idx, 1): 1})
    table = ext_base_change(A, S, inc, s_max=5)
    lam_a0 = exterior(KU2, (("a0", 1),))
    assert table == ext_table(lam_a0, s_max=5)


def test_ext_base_change_trivial_subalgebra():
    A = exterior(KU2, (("a0", 1),))
    one = realize(AlgebraPresentation(KU2, (), ()))
    inc = HomogeneousMap(one.module, A.module, 0, {(0, 0): 1})
    assert ext_base_change(A, one, inc, s_max=4) == ext_table(A, s_max=4)


def test_ext_base_change_rejects_nilpotents():
    S = trunc_poly(2, 0, p=2)
    inc = HomogeneousMap.identity(S.module)
    with pytest.raises(ResolutionError):
        ext_base_change(S, S, inc)


# -- yoneda squares ----------------------------------------------------------------

def test_yoneda_square_polynomial_over_exterior():
    res = minimal_resolution(lam_tau(), s_max=3)
    out = yoneda_square(res, {0: 1}, 1)
    assert out and all(v != 0 for v in out.values())


def test_yoneda_square_zero_over_truncated():
    res = minimal_resolution(trunc_poly(4, 2), s_max=3, t_window=(0, 40))
    out = yoneda_square(res, {0: 1}, 2)
    assert out == {}


def test_yoneda_square_of_zero_class():
    res = minimal_resolution(lam_tau(), s_max=3)
    assert yoneda_square(res, {}, 1) == {}
