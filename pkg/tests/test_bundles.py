from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from divpos.bundles import (CharZero, Curve, HNProfile, SplitBundle, frobenius_pullback, h0_genus0,
                            hn_profile, mu_max, mu_min, pullback_cover, splitting_frobenius_power,
                            sym_power, sym_vanishing_holds, tensor)

split = st.lists(st.integers(-6, 6), min_size=1, max_size=5).map(SplitBundle)


def pieces(P):
    return [(r, d) for r, d in P.pieces]


def test_hn_profile_examples():
    assert pieces(hn_profile(SplitBundle([2, 2, 0, -1]))) == [(2, 4), (1, 0), (1, -1)]
    assert pieces(hn_profile(SplitBundle([0]))) == [(1, 0)]
    assert pieces(hn_profile(SplitBundle([3, 3, 3]))) == [(3, 9)]


def test_mu_examples():
    P = HNProfile([(2, 4), (1, -1)])
    assert (mu_max(P), mu_min(P)) == (2, -1)
    assert mu_max(HNProfile([(3, 9)])) == mu_min(HNProfile([(3, 9)])) == 3
    P = hn_profile(SplitBundle([3, 1]))
    assert (mu_max(P), mu_min(P)) == (3, 1)


def test_profile_rejects_unsorted():
    with pytest.raises(ValueError):
        HNProfile([(1, 0), (1, 1)])
    with pytest.raises(ValueError):
        HNProfile([(2, 2), (1, 1)])  # equal slopes


def test_sym_examples():
    assert sorted(sym_power(SplitBundle([1, 0]), 2).degrees) == [0, 1, 2]
    E = SplitBundle([4, -1, 2])
    assert sorted(sym_power(E, 1).degrees) == sorted(E.degrees)
    assert sym_power(SplitBundle([5, 5]), 2).degrees == (10, 10, 10)


def test_tensor_examples():
    assert sorted(tensor(SplitBundle([1, 0]), SplitBundle([-1])).degrees) == [-1, 0]
    assert tensor(SplitBundle([1]), SplitBundle([1])).degrees == (2,)
    assert sorted(tensor(SplitBundle([2, 0]), SplitBundle([1, -1])).degrees) == [-1, 1, 1, 3]


def test_pullback_examples():
    P = HNProfile([(1, 1), (1, 0)])
    assert pieces(pullback_cover(P, 3)) == [(1, 3), (1, 0)]
    assert pullback_cover(P, 1) == P
    assert pieces(pullback_cover(HNProfile([(2, 1)]), 2)) == [(2, 2)]
    assert pieces(frobenius_pullback(P, 3, Curve(0, 2))) == [(1, 8), (1, 0)]
    assert frobenius_pullback(P, 0, Curve(1, 3)) == P
    assert pieces(frobenius_pullback(HNProfile([(1, -1)]), 2, Curve(0, 3))) == [(1, -9)]
    with pytest.raises(CharZero):
        frobenius_pullback(P, 1, Curve(0, 0))


def test_planner_examples():
    P = HNProfile([(1, 1), (1, 0)])
    assert splitting_frobenius_power(P, Curve(2, 2)) == 2
    assert splitting_frobenius_power(P, Curve(0, 2)) == 0
    assert splitting_frobenius_power(HNProfile([(3, 1)]), Curve(5, 7)) == 0
    with pytest.raises(CharZero):
        splitting_frobenius_power(P, Curve(2, 0))


def test_h0_examples():
    assert h0_genus0(SplitBundle([3, -2])) == 4
    assert h0_genus0(SplitBundle([-1, -1])) == 0
    assert h0_genus0(SplitBundle([0])) == 1


def test_sym_vanishing_examples():
    assert sym_vanishing_holds(HNProfile([(1, -1), (1, -2)]), (1, 0))
    assert not sym_vanishing_holds(HNProfile([(1, 0)]), (1, 0))
    assert not sym_vanishing_holds(HNProfile([(1, -1)]), (1, 1))


def test_curve_validation():
    with pytest.raises(ValueError):
        Curve(0, 4)
    with pytest.raises(ValueError):
        Curve(0, 0, over_fpbar=True)
    assert Curve(3, 5).canonical_degree == 4


@given(split, split)
def test_tensor_degree_rank(E, G):
    T = tensor(E, G)
    assert T.rank == E.rank * G.rank
    assert T.degree == E.degree * G.rank + E.rank * G.degree


@given(split, st.integers(1, 4))
def test_sym_rank(E, m):
    assert sym_power(E, m).rank == comb(E.rank + m - 1, m)


@given(st.integers(-5, 5), st.integers(1, 4), st.integers(1, 4))
def test_sym_slope_semistable(d, r, m):
    E = SplitBundle([d] * r)
    assert sym_power(E, m).slope == m * E.slope


@given(split)
def test_hn_slopes_strictly_decrease(E):
    sl = hn_profile(E).slopes
    assert all(a > b for a, b in zip(sl, sl[1:]))
    assert hn_profile(E).rank == E.rank and hn_profile(E).degree == E.degree


@given(split, st.integers(1, 5), st.integers(0, 3), st.sampled_from([2, 3, 5]))
def test_pullbacks_scale_slopes(E, n, m, p):
    P = hn_profile(E)
    Q = pullback_cover(P, n)
    assert Q.slopes == [n * s for s in P.slopes]
    assert (mu_max(Q), mu_min(Q)) == (n * mu_max(P), n * mu_min(P))
    F = frobenius_pullback(P, m, Curve(0, p))
    assert F.slopes == [p**m * s for s in P.slopes]


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=4, unique=True),
       st.integers(0, 3), st.sampled_from([2, 3, 5]))
def test_planner_minimal(grid, g, p):
    slopes = sorted((Fraction(x, 4) for x in grid), reverse=True)
    P = HNProfile([(1, s) for s in slopes])
    c = Curve(g, p)
    m = splitting_frobenius_power(P, c)

    def ok(k):
        return all(p**k * (b - a) + 2 * g - 2 < 0 for a, b in zip(slopes, slopes[1:]))

    assert ok(m)
    assert m == 0 or not ok(m - 1)
