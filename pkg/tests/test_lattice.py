from fractions import Fraction as F

import pytest

from endokit.lattice import (
    DimensionError,
    LatAut,
    LatVec,
    QuotientLattice,
    RatVec,
    TorsionVec,
    determinant,
    hermite_rows,
    invariant_subspace,
    mat_inv,
    mat_mul,
    nullspace,
    pair,
    solve,
)


def test_pair_integral():
    assert pair(LatVec((1, -1)), LatVec((1, 0))) == 1


def test_pair_torsion_cancels():
    assert pair(LatVec((1, -1)), TorsionVec((F(1, 2), F(1, 2)))) == 0


def test_pair_torsion_third():
    assert pair(LatVec((2, 0, -1)), TorsionVec((F(1, 3), 0, F(1, 3)))) == F(1, 3)


def test_pair_rank_mismatch():
    with pytest.raises(DimensionError):
        pair((1, 0), (1, 0, 0))


def test_torsion_reduced_and_order():
    t = TorsionVec((F(3, 2), F(-1, 3)))
    assert t.coords == (F(1, 2), F(2, 3))
    assert t.order() == 6
    assert (t * 6) == TorsionVec((0, 0))


def test_vector_arithmetic():
    assert LatVec((1, 2)) + LatVec((3, -1)) == LatVec((4, 1))
    assert RatVec((F(1, 2), 0)) * 2 == RatVec((1, 0))
    with pytest.raises(DimensionError):
        LatVec((1, 2)) + LatVec((1,))


def test_invariant_identity():
    assert invariant_subspace([LatAut.identity(3)]) == [RatVec((1, 0, 0)), RatVec((0, 1, 0)), RatVec((0, 0, 1))]


def test_invariant_swap():
    assert invariant_subspace([((0, 1), (1, 0))]) == [RatVec((1, 1))]


def test_invariant_cycle():
    basis = invariant_subspace([((0, 0, 1), (1, 0, 0), (0, 1, 0))])
    assert basis == [RatVec((1, 1, 1))]


def test_latauto_rejects_singular():
    with pytest.raises(ValueError):
        LatAut(((2, 0), (0, 1)))


def test_latauto_inverse_and_contragredient():
    g = LatAut(((1, 1), (0, 1)))
    assert (g @ g.inverse()).is_identity()
    c = g.contragredient()
    # <g x, c y> = <x, y>
    x, y = (2, -3), (5, 7)
    assert pair(g(x), c(y)) == pair(x, y)


def test_det_and_inverse():
    m = ((2, 1), (1, 1))
    assert determinant(m) == 1
    assert mat_mul(m, mat_inv(m)) == ((1, 0), (0, 1))


def test_nullspace_and_solve():
    assert nullspace([(1, -1, 0)], 3) == [(1, 1, 0), (0, 0, 1)]
    assert solve(((2, -1), (-1, 2)), (1, 0)) == (F(2, 3), F(1, 3))


def test_hermite_and_quotient():
    assert hermite_rows([(2, 4), (0, 6)], 2) == [(2, 4), (0, 6)]
    q = QuotientLattice([(1, -1)], 2)
    assert q.equal((1, 0), (0, 1))
    assert not q.equal((1, 0), (0, 0))
    assert q.reduce((3, 4)) == q.reduce((7, 0))
