from fractions import Fraction as F

import pytest

from endokit.builtins import gl, gunitary, sl, trivial_action, unitary
from endokit.endoscopy import (
    SSPair,
    class_key,
    dual_datum,
    enumerate_elliptic,
    enumerate_triples,
    ss_pair_to_triple,
    triple_from_element,
    trivial_triple,
)
from endokit.galois import split_form, stable_subsets
from endokit.kottwitz import kottwitz_set, minuscule_cochars
from endokit.levi import (
    analytic_bound,
    acceptance_threshold,
    eff_filter,
    embed,
    fiber,
    inner_class_count,
    is_acceptable,
    restricts,
    slope_datum,
    ss_pair_via_levi,
    w_mh,
    x_map,
    y_map,
)
from endokit.lattice import RatVec, identity
from endokit.rootdatum import levi_from_cochar, weyl_group

from oracles import brute_fiber_count, brute_inner_count, brute_w_mh, centralizer_coroots, grid_feasible

H = F(1, 2)
GL3 = split_form(gl(3))
GL4 = split_form(gl(4))
SL2 = trivial_action(sl(2), 2)
U3 = unitary(3)
GL22 = triple_from_element(GL4, (0, 0, H, H))


@pytest.mark.parametrize("S", [frozenset(), frozenset({0}), frozenset({1}), frozenset({0, 1})])
def test_x_map_trivial(S):
    (e,) = fiber(trivial_triple(GL3), S)
    assert class_key(x_map(e)) == class_key(trivial_triple(GL3, levi=S))


def test_x_map_gl22_by_root_intersection():
    S = frozenset({0, 2})
    e = embed(GL22, S, weyl_group(GL22.dual)[0])
    from endokit.endoscopy import ambient_roots

    assert x_map(e).h_roots == GL22.h_roots & ambient_roots(GL4, S)
    assert len(x_map(e).h_roots) == 4
    assert sorted(len(x_map(f).h_roots) for f in fiber(GL22, S)) == [0, 4]


def test_x_map_whole_group_is_identity():
    (e,) = fiber(GL22, frozenset({0, 1, 2}))
    assert class_key(x_map(e)) == class_key(GL22)


def test_y_map_trivial():
    t = trivial_triple(GL3, levi={0})
    assert class_key(y_map(t)) == class_key(trivial_triple(GL3))


def test_y_map_sl2_torus_levi():
    t = triple_from_element(SL2, (H,), levi=frozenset())
    assert class_key(y_map(t)) == class_key(triple_from_element(SL2, (H,)))


def test_y_map_gl3_block():
    t = triple_from_element(GL3, (H, 0, 0), levi={0})
    assert t.h_roots == frozenset()
    y = y_map(t)
    assert y.h_roots == centralizer_coroots(GL3, (H, 0, 0))
    assert sorted(dual_datum(GL3).roots[i] for i in y.h_roots) == [(0, -1, 1), (0, 1, -1)]


def test_w_mh_trivial_and_whole():
    t = trivial_triple(U3)
    for S in stable_subsets(U3):
        assert len(w_mh(t, S)) == 6
    for t in enumerate_triples(U3, 2):
        assert len(w_mh(t, {0, 1})) == 6


@pytest.mark.parametrize("G", [GL4, U3, unitary(4)], ids=["GL4", "U3", "U4"])
def test_w_mh_brute_force(G):
    for t in enumerate_triples(G, 2):
        for S in stable_subsets(G):
            assert sorted(w.matrix for w in w_mh(t, S)) == sorted(brute_w_mh(t, S))


def test_w_mh_gl4_example():
    # with trivial Gamma the Galois condition is vacuous
    assert len(w_mh(GL22, {0, 1})) == len(brute_w_mh(GL22, {0, 1})) == 24


def test_fiber_trivial_and_whole():
    for S in stable_subsets(GL4):
        assert len(fiber(trivial_triple(GL4), S)) == 1
    assert len(fiber(GL22, {0, 1, 2})) == 1


def test_fiber_gl4_example():
    S = frozenset({0, 1})
    assert len(fiber(GL22, S)) == brute_fiber_count(GL22, S) == 1


def test_inner_class_count():
    (e,) = fiber(trivial_triple(GL4), {0, 1})
    assert inner_class_count(e) == 1
    (e,) = fiber(GL22, {0, 1})
    assert len(x_map(e).h_roots) == 2  # GL2 x GL1 x GL1
    assert inner_class_count(e) == 2 == brute_inner_count(GL22, {0, 1})
    (e,) = fiber(GL22, {0, 1, 2})
    assert inner_class_count(e) == 1


def test_restricts_identity_for_trivial():
    t = trivial_triple(GL3)
    assert restricts(t, {0}, identity(3))


def test_acceptable_basic_cases():
    rd = gl(3)
    nu = RatVec((1, 0, -1))
    M = levi_from_cochar(rd, nu)
    assert is_acceptable(RatVec((3, 0, -3)), nu, M, rd)
    assert not is_acceptable(RatVec((-1, 0, 1)), nu, M, rd)
    t = RatVec((0, 5, 0))
    b = analytic_bound(rd, nu, t)
    assert is_acceptable(RatVec((b + 1, 5, -b - 1)), nu, M, rd)
    assert acceptance_threshold(rd, nu, t) <= b


def test_acceptable_needs_centralizer():
    rd = gl(2)
    with pytest.raises(ValueError):
        is_acceptable((1, 0), (1, 0), levi_from_cochar(rd, (0, 0)), rd)


def test_eff_filter_trivial_kept():
    b = kottwitz_set(GL4, (1, 0, 0, 0))[-1]
    fib = fiber(trivial_triple(GL4), frozenset(b.levi))
    assert eff_filter(fib, b.slope) == fib


def test_eff_filter_wrong_levi_empty():
    fib = fiber(trivial_triple(GL4), frozenset())
    regular = slope_datum(gl(4), (3, 2, 1, 0))
    assert eff_filter(fib, regular) == fib
    bad = slope_datum(gl(4), (1, 1, 0, 0))  # M_b = GL2 x GL2, not inside T
    assert eff_filter(fib, bad) == []


def test_eff_filter_unitary_regular_slope():
    # U(2) x U(1) is not a Levi of U(3); a regular slope cannot be witnessed in it
    t = next(t for t in enumerate_elliptic(U3, 2) if len(t.h_roots) == 2)
    fib = fiber(t, frozenset({0, 1}))
    slope = slope_datum(gl(3), (1, 0, -1))
    assert eff_filter(fib, slope) == []
    assert not grid_feasible(fib[0], (1, 0, -1), frozenset())


@pytest.mark.parametrize("G", [GL4, U3, unitary(4), gunitary(3)], ids=["GL4", "U3", "U4", "GU3"])
def test_eff_filter_matches_grid(G):
    rd = G.datum
    for mu in minuscule_cochars(G):
        for b in kottwitz_set(G, mu):
            for t in enumerate_triples(G, 2):
                for S in stable_subsets(G):
                    if not frozenset(b.levi) <= S:
                        continue
                    fib = fiber(t, S)
                    kept = eff_filter(fib, b.slope)
                    for e in fib:
                        assert (e in kept) == grid_feasible(e, b.nu, b.levi), (t, S, b)


def test_ss_pair_via_levi_agrees():
    p = SSPair((0, 0, 0), (0, 0, 1), (H, H, 0))
    direct = ss_pair_to_triple(GL3, p)
    assert class_key(ss_pair_via_levi(GL3, {0}, p)) == class_key(direct)
    with pytest.raises(ValueError):
        ss_pair_via_levi(GL3, {1}, p)
