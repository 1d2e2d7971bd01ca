from grdb.flags import (FLAG_NAMES, in_semigroup, index_capacity, realisability_flags, semigroup_members, strata,
                        tangent_monomial, variable_usage, well_formed)
from grdb.formats import ci_format, gr25_format
from grdb.orbifold import QuotientSingularity
from grdb.search import Basket


def test_semigroup():
    assert semigroup_members([3, 5], 8) == [True, False, False, True, False, True, True, False, True]
    assert not in_semigroup(7, [3, 5])
    assert not in_semigroup(-1, [1])


def test_strata_of_weighted_hypersurface():
    f = ci_format([6])
    ss = {s.g: s for s in strata(f, (1, 1, 1, 1, 2))}
    assert set(ss) == {2}
    # x5^3 has degree 6, so the sextic misses the vertex
    assert ss[2].dim < 0


def test_fermat_flags_pass():
    f = ci_format([10])
    W = (1, 1, 1, 2, 5)
    flags = realisability_flags(f, W, [Basket()])
    assert tuple(flags) == FLAG_NAMES
    assert all(flags.values())


def test_not_well_formed():
    # P(1,2,2,2,3) contains the surface x1 = x5 = 0 of index 2; a degree 9 equation cuts it in a curve
    f = ci_format([9])
    assert not well_formed(f, (1, 2, 2, 2, 3))
    assert not well_formed(f, (2, 2, 2, 4, 6))


def test_variable_usage_fails_for_large_weight():
    assert not variable_usage(ci_format([6]), (1, 1, 1, 1, 7))
    assert variable_usage(ci_format([6]), (1, 1, 1, 1, 2))


def test_tangent_monomial():
    # X_7 in P(1,1,1,2,3): at the index-3 vertex x5^2 * x_e needs e of weight 1, fine
    assert tangent_monomial(ci_format([7]), (1, 1, 1, 2, 3))
    # X_8 in P(1,1,1,3,3): on the line P(3,3) nothing of degree 8 restricts and no x_e * m exists
    assert not tangent_monomial(ci_format([8]), (1, 1, 1, 3, 3))


def test_index_capacity_on_a_line():
    f = ci_format([10])
    caps = index_capacity(f, (1, 1, 2, 2, 5))
    # a degree 10 form on P(2,2) has 6 monomials, so at most 5 points of index 2
    assert caps[2] == 5


def test_index_capacity_flag_uses_some_basket():
    f = ci_format([10])
    W = (1, 1, 2, 2, 5)
    half = QuotientSingularity(2, (1, 1, 1))
    ok = Basket.from_counts({half: 5})
    bad = Basket.from_counts({half: 6})
    assert realisability_flags(f, W, [bad, ok])["index_capacity"]
    assert not realisability_flags(f, W, [bad])["index_capacity"]


def test_gr25_standard_grading_passes():
    f = gr25_format((0, 2, 2, 2, 2))
    assert all(realisability_flags(f, (1,) * 7, [Basket()]).values())
