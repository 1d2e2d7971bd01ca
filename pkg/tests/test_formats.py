import pytest
from hypothesis import given, strategies as st

from grdb.formats import (FormatError, ci_format, enumerate_gradings, format_w, gr25_format, ogr510_format,
                          ogr510_weights, parse_w, product_format)
from grdb.series import format_poly, is_gorenstein_symmetric

# doubled gradings: five sorted integers of one parity
sorted_w2 = st.tuples(st.integers(0, 1), st.lists(st.integers(0, 6), min_size=5, max_size=5)).map(
    lambda pv: sorted(2 * v + pv[0] for v in pv[1]))


def test_standard_gr25():
    f = gr25_format((0, 2, 2, 2, 2))
    assert f.equation_degrees == (3, 3, 3, 3, 4)
    assert format_poly(f.numerator) == "1-4t^3+4t^5-t^8"
    assert f.adjunction == 8


def test_gr25_golden_numerators():
    f = gr25_format(parse_w("1,2,3,3,4"))
    assert format_poly(f.numerator).startswith("1-t^9-2t^10-t^11-t^12+")
    g = gr25_format(parse_w("-1/2,-1/2,3/2,3/2,3/2"), positive=False)
    assert format_poly(g.numerator) == "1-3t^2+2t^3-2t^4+3t^5-t^7"


def test_gr25_positivity():
    with pytest.raises(FormatError):
        gr25_format(parse_w("-1/2,-1/2,3/2,3/2,3/2"))


def test_mixed_parity_rejected():
    with pytest.raises(FormatError):
        gr25_format((1, 2, 2, 2, 2))


def test_product_adjunction():
    f = product_format(gr25_format(parse_w("3/2,5/2,7/2,9/2,11/2")), [18])
    assert f.adjunction == 53
    assert f.family == "gr25xh" and f.codim == 4


def test_standard_ogr510():
    f = ogr510_format(1, (0, 0, 0, 0, 0))
    assert f.adjunction == 8
    assert f.equation_degrees == (2,) * 10
    assert format_poly(f.numerator) == "1-10t^2+16t^3-16t^5+10t^6-t^8"
    assert len(f.key_weights) == 16


def test_ogr510_weights():
    x, xi, xij = ogr510_weights(1, (0, 0, 0, 0, 2))
    assert x == 1 and xi == (2, 2, 2, 2, 1) and xij[-1] == 2


def test_parse_and_format_w():
    assert parse_w("1/2(1,1,3,3,3)") == (1, 1, 3, 3, 3)
    assert parse_w("0,1,1,1,1") == (0, 2, 2, 2, 2)
    assert format_w((1, 1, 3, 3, 3)) == "1/2(1, 1, 3, 3, 3)"
    assert format_w((0, 2, 2, 2, 2)) == "(0, 1, 1, 1, 1)"
    with pytest.raises(FormatError):
        parse_w("1/3,1,1,1,1")


def test_ci_rejects_linear():
    with pytest.raises(FormatError):
        ci_format([1, 4])


@given(sorted_w2.filter(lambda w: w[0] + w[1] > 0))
def test_gr25_gorenstein(w2):
    f = gr25_format(w2)
    assert is_gorenstein_symmetric(f.numerator, f.adjunction, 3)
    assert f.numerator[0] == 1


@given(st.integers(1, 3), sorted_w2)
def test_ogr510_gorenstein(u, w2):
    f = ogr510_format(u, w2)
    assert is_gorenstein_symmetric(f.numerator, f.adjunction, 5)
    assert f.numerator(1) == 0


@given(st.lists(st.integers(2, 30), min_size=1, max_size=4))
def test_ci_gorenstein(degrees):
    f = ci_format(degrees)
    assert is_gorenstein_symmetric(f.numerator, f.adjunction, len(degrees))


@pytest.mark.parametrize("family,k,codim", [("ci", 12, 2), ("gr25", 14, None), ("ogr510", 16, None),
                                            ("gr25xh", 12, None)])
def test_every_enumerated_grading_is_gorenstein(family, k, codim):
    fs = enumerate_gradings(family, k, codim=codim)
    assert fs
    for f in fs:
        assert f.adjunction == k
        assert is_gorenstein_symmetric(f.numerator, f.adjunction, f.codim)
        assert min(f.key_weights) > 0


def test_enumeration_is_duplicate_free():
    fs = enumerate_gradings("gr25", 20)
    assert len({tuple(f.params["w2"]) for f in fs}) == len(fs)
