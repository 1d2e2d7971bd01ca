from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings, strategies as st

from grdb.formats import ci_format, gr25_format
from grdb.orbifold import QuotientSingularity, porb, terminal_types
from grdb.search import (Basket, SearchConfig, admissible_ambient_weights, basket_series, candidate_singularities,
                         enumerate_ambient_weights, find_kernels, has_multiple_poles, hilbert_series,
                         initial_numerator, initial_series, match_baskets, subset_gcds)
from grdb.series import CycloRational, expand, rational_equal

from oracles import hilbert_coeffs

TERMINAL = [s for r in range(2, 8) for s in terminal_types(r, 1)]


def test_basket_parse_and_strings():
    b = Basket.parse("1/2(1,1,1), 2*1/3(1,2,2); 1/2(1,1,1)")
    assert b.strings() == ["2*1/2(1,1,1)", "2*1/3(1,2,2)"]
    assert len(b) == 4
    assert Basket.parse("3x1/2(1,1,1)") == Basket.parse("3*1/2(1,1,1)")
    assert str(Basket.parse("")) == "{}"


def test_subset_gcds():
    assert subset_gcds((4, 6, 9)) == {1, 2, 3, 4, 6, 9}


def test_candidates_sorted_unique():
    c = candidate_singularities((1, 1, 2, 2, 3, 3, 4), "terminal", 1)
    assert c == sorted(set(c))
    assert {s.r for s in c} == {2, 3, 4}


def test_hilbert_series_matches_sympy():
    f = ci_format([6])
    P = hilbert_series(f, (1, 1, 1, 1, 2))
    assert list(expand(P, 12).coefficients) == hilbert_coeffs(f.numerator.coeffs, (1, 1, 1, 1, 2), 12)


def test_hilbert_series_rejects_zero_weight():
    with pytest.raises(ValueError):
        hilbert_series(ci_format([6]), (0, 1, 1, 1, 2))


@pytest.mark.parametrize("k", [-1, 0, 1, 2, 3])
def test_initial_numerator_palindromic_and_agrees(k):
    f = ci_format([10])
    P = hilbert_series(f, (1, 1, 1, 2, 5))
    N = initial_numerator(expand(P, 10).coefficients, k)
    assert N.reciprocal(k + 4) == N
    ini = initial_series(P, k)
    h = (k + 4) // 2
    assert expand(ini, h).coefficients == expand(P, h).coefficients


def test_admissible_weights_is_enumeration_minus_multiple_poles():
    f = gr25_format((2, 2, 2, 4, 4))
    want = [W for W in enumerate_ambient_weights(f, 3, 1) if not has_multiple_poles(f.numerator, W)]
    assert list(admissible_ambient_weights(f, 3, 1)) == want


def test_match_smooth_quintic():
    f = ci_format([5])
    P = hilbert_series(f, (1, 1, 1, 1, 1))
    R = P - initial_series(P, 0)
    baskets, kernels = match_baskets(R, [], 0)
    assert baskets == [Basket()]


def test_match_calabi_yau_sextic():
    f = ci_format([6])
    W = (1, 1, 1, 1, 2)
    P = hilbert_series(f, W)
    R = P - initial_series(P, 0)
    baskets, _ = match_baskets(R, candidate_singularities(W, "canonical-isolated", 0), 0, poles=P)
    assert baskets == [Basket()]


@settings(max_examples=40)
@given(st.lists(st.sampled_from(TERMINAL), min_size=1, max_size=5))
def test_matcher_recovers_planted_basket(points):
    planted = Basket.from_counts({s: points.count(s) for s in set(points)})
    R = basket_series(planted, 1)
    baskets, kernels = match_baskets(R, TERMINAL, 1)
    assert planted in baskets
    assert not kernels
    for b in baskets:
        assert rational_equal(basket_series(b, 1), R)


def test_matcher_agrees_with_brute_force():
    cands = [s for r in (2, 3, 5) for s in terminal_types(r, 1)]
    target = Basket.parse("2*1/2(1,1,1), 1/5(2,3,4)")
    R = basket_series(target, 1)
    brute = []
    for n in range(1, 6):
        for combo in combinations_with_replacement(cands, n):
            b = Basket.from_counts({s: combo.count(s) for s in set(combo)})
            if rational_equal(basket_series(b, 1), R):
                brute.append(b)
    assert match_baskets(R, cands, 1)[0] == brute


def test_sign_rules_out_positive_residual():
    R = basket_series(Basket.parse("1/2(1,1,1)"), 1).scale(-1)
    assert match_baskets(R, TERMINAL, 1)[0] == []


def test_opposite_thirds_cancel():
    a = porb(QuotientSingularity(3, (1, 1, 1)), 0)
    b = porb(QuotientSingularity(3, (2, 2, 2)), 0)
    assert (a + b).is_zero()


def test_kernels_contain_the_third_pair():
    from grdb.orbifold import canonical_types
    cands = [s for r in range(2, 7) for s in canonical_types(r, 0)]
    ks = [b.strings() for b in find_kernels(cands, 0, 6)]
    assert ["1*1/3(1,1,1)", "1*1/3(2,2,2)"] in ks
    for b in find_kernels(cands, 0, 6):
        assert basket_series(b, 0).is_zero()


def test_terminal_k1_has_no_kernels():
    assert find_kernels(TERMINAL, 1, 8) == []


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(family="nope")
    with pytest.raises(ValueError):
        SearchConfig(sing_class="klt")
    c = SearchConfig(family="ci", ci_degrees=(35, 18))
    assert c.ci_degrees == (18, 35) and c.codim == 2
