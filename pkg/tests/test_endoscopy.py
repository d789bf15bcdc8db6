from fractions import Fraction as F

import pytest

from endokit.builtins import gl, sl, sp, trivial_action, unitary
from endokit.endoscopy import (
    ConstructionError,
    SSPair,
    canonical_representative,
    class_key,
    dual_datum,
    enumerate_elliptic,
    enumerate_triples,
    h_weyl,
    is_elliptic,
    is_isomorphic,
    out_group,
    ss_pair_to_triple,
    triple_from_element,
    trivial_triple,
)
from endokit.galois import split_form
from endokit.rootdatum import weyl_group

from oracles import stabilizer

GL2 = split_form(gl(2))
GL4 = split_form(gl(4))
SL2 = trivial_action(sl(2), 2)
U3 = unitary(3)
H = F(1, 2)


def brute_classes(G, bound, elliptic=True, refined=False):
    """Every s of order <= bound with every Weyl twist, deduplicated by is_isomorphic."""
    from itertools import product

    D = dual_datum(G)
    W = weyl_group(D)
    found = []
    pts = sorted({tuple(F(a, n) for a in v) for n in range(1, bound + 1) for v in product(range(n), repeat=D.rank)})
    for s in pts:
        for tw in product(W, repeat=G.ngens):
            try:
                t = triple_from_element(G, s, list(tw))
            except ConstructionError:
                continue
            if is_elliptic(t) != elliptic:
                continue
            if not any(is_isomorphic(t, u, refined) is not None for u in found):
                found.append(t)
    return found


def test_trivial_triple_is_everything():
    t = trivial_triple(GL2)
    assert t.h_roots == frozenset(range(len(dual_datum(GL2).roots)))
    assert is_elliptic(t)


def test_sl2_split_torus():
    t = triple_from_element(SL2, (H,))
    assert t.h_roots == frozenset()
    assert t.twist_words() == ((),)
    assert not is_elliptic(t)


def test_sl2_norm_one_torus():
    refl = weyl_group(dual_datum(SL2))[1]
    t = triple_from_element(SL2, (H,), [refl])
    assert t.h_roots == frozenset()
    assert t.twist_words() == ((0,),)
    assert is_elliptic(t)


def test_twist_must_fix_s():
    G = trivial_action(gl(2), 2)
    refl = weyl_group(dual_datum(G))[1]
    # the reflection moves (1/2, 0) to (0, 1/2)
    with pytest.raises(ConstructionError, match="moves s"):
        triple_from_element(G, (H, 0), [refl])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gl_has_one_elliptic_class(n):
    assert len(enumerate_elliptic(split_form(gl(n)), 2)) == 1


def test_sl2_two_elliptic_classes():
    ell = enumerate_elliptic(SL2, 2)
    assert len(ell) == 2
    assert len(ell) == len(brute_classes(SL2, 2))


def test_u3_elliptic_matches_brute_force():
    ell = enumerate_elliptic(U3, 2)
    assert len(ell) == len(brute_classes(U3, 2)) == 2
    # shapes U(3) and U(2) x U(1)
    assert sorted(len(t.h_roots) for t in ell) == [2, 6]


def test_enumeration_complete_sp4():
    G = split_form(sp(4))
    assert len(enumerate_elliptic(G, 2)) == len(brute_classes(G, 2))
    assert len(enumerate_triples(G, 2, elliptic=False)) == len(brute_classes(G, 2, elliptic=False))


def test_isomorphic_to_itself():
    t = triple_from_element(GL2, (H, 0))
    w = is_isomorphic(t, t)
    assert w is not None and w.word == ()


def test_gl2_order_two_points_conjugate_by_transposition():
    a = triple_from_element(GL2, (H, 0))
    b = triple_from_element(GL2, (0, H))
    w = is_isomorphic(a, b, refined=True)
    assert w is not None and w.word == (0,)


def test_sl2_split_vs_norm_one_not_isomorphic():
    refl = weyl_group(dual_datum(SL2))[1]
    a = triple_from_element(SL2, (H,))
    b = triple_from_element(SL2, (H,), [refl])
    assert is_isomorphic(a, b) is None
    assert is_isomorphic(a, b, refined=True) is None


def test_canonical_representative_is_class_function():
    a = triple_from_element(GL2, (H, 0))
    b = triple_from_element(GL2, (0, H))
    ra, _ = canonical_representative(a, True)
    rb, _ = canonical_representative(b, True)
    assert ra == rb
    assert class_key(a, True) == class_key(b, True)


def test_out_group_trivial():
    assert out_group(trivial_triple(GL4)).order == 1


def test_out_group_gl4_block_swap():
    t = triple_from_element(GL4, (0, 0, H, H))
    assert out_group(t).order == 2
    assert len(stabilizer(t)) == 2 * len(h_weyl(t))


def test_out_group_sl2_norm_one_matches_stabilizer():
    refl = weyl_group(dual_datum(SL2))[1]
    t = triple_from_element(SL2, (H,), [refl])
    # the nontrivial Weyl element fixes s (order 2) and commutes with the twist
    assert len(stabilizer(t)) == 2 and len(h_weyl(t)) == 1
    assert out_group(t).order == 2


def test_ss_pair_central():
    t = ss_pair_to_triple(GL2, SSPair((0, 0), (0, 0), (0, 0)))
    assert class_key(t) == class_key(trivial_triple(GL2))


def test_ss_pair_regular_gl2():
    t = ss_pair_to_triple(GL2, SSPair((0, 0), (1, 0), (H, 0)))
    assert t.h_roots == frozenset()


def test_ss_pair_gl3_block():
    G = split_form(gl(3))
    t = ss_pair_to_triple(G, SSPair((0, 0, 0), (0, 0, 1), (H, H, 0)))
    D = dual_datum(G)
    assert sorted(D.roots[i] for i in t.h_roots) == [(-1, 1, 0), (1, -1, 0)]


def test_ss_pair_lambda_not_central_rejected():
    G = split_form(gl(3))
    with pytest.raises(ConstructionError):
        ss_pair_to_triple(G, SSPair((0, 0, 0), (0, 0, 1), (H, 0, 0)))
