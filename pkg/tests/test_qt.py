from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orthlmov.qt import (
    BracketDenominator,
    NotDivisible,
    NotExpressible,
    QTLaurent,
    QTSeries,
    RationalQT,
    bracket,
    exact_divide,
    n_basis_convert,
    n_basis_sum,
    reduce,
    series_expand,
    z_basis_expand,
    z_basis_sum,
)

from conftest import laurents

q = QTLaurent.monomial(1, 0)
qi = QTLaurent.monomial(-1, 0)
t = QTLaurent.monomial(0, 1)
ti = QTLaurent.monomial(0, -1)


def test_bracket():
    assert bracket(1) == q - qi
    assert bracket(2) == q * q - qi * qi
    for n in range(1, 6):
        assert bracket(n).invert_q() == -bracket(n)


def test_ring_examples():
    assert (t - ti).negate_t() == -t + ti
    assert (q - qi).adams(2) == bracket(2)
    assert (q - qi) * (q + qi) == bracket(2)


@given(laurents(), st.integers(1, 4), st.integers(1, 4))
def test_substitutions(f, d1, d2):
    assert f.invert_q().invert_q() == f
    assert f.negate_t().negate_t() == f
    assert f.adams(d1).adams(d2) == f.adams(d1 * d2)


def test_exact_divide_examples():
    assert exact_divide(bracket(2), 1) == q + qi
    with pytest.raises(NotDivisible):
        exact_divide(q - qi, 2)
    assert exact_divide(bracket(3) * (t - ti), 3) == t - ti


@given(laurents(), st.integers(1, 10))
def test_exact_divide_inverts_multiplication(f, k):
    assert exact_divide(f * bracket(k), k) == f


def test_reduce_examples():
    r = reduce(RationalQT(bracket(2), BracketDenominator.of({1: 1}), _reduce=False))
    assert r.is_laurent() and r.numerator == q + qi
    r = reduce(RationalQT(t - ti, BracketDenominator.of({1: 1})))
    assert r.denominator.factors == ((1, 1),) and r.numerator == t - ti
    r = reduce(RationalQT(bracket(1) ** 2 * t, BracketDenominator.of({1: 2}), _reduce=False))
    assert r.is_laurent() and r.numerator == t


def test_reduce_idempotent_and_equality_by_value():
    r = RationalQT(bracket(2) * (q + 3), BracketDenominator.of({1: 1, 2: 2}))
    assert reduce(reduce(r)).denominator == reduce(r).denominator
    assert RationalQT(q + qi, BracketDenominator.of({2: 1})) == RationalQT.inverse_brackets([1])


@given(laurents(), laurents(), st.lists(st.integers(1, 4), max_size=3), st.lists(st.integers(1, 4), max_size=3))
def test_rational_field_ops(a, b, da, db):
    x = RationalQT(a, BracketDenominator.from_parts(da))
    y = RationalQT(b, BracketDenominator.from_parts(db))
    assert (x + y) - y == x
    assert x * y == y * x
    assert x.invert_q().invert_q() == x
    assert x.adams(2).adams(3) == x.adams(6)
    assert (x * y).negate_t() == x.negate_t() * y.negate_t()


def _coeffs(s: QTSeries):
    return {a: c for (a, b), c in s.terms.items()}


def test_series_expand_examples():
    s = series_expand(RationalQT.inverse_brackets([1, 1]), "qlt1", 13)
    assert _coeffs(s) == {2: 1, 4: 2, 6: 3, 8: 4, 10: 5, 12: 6}
    s = series_expand(RationalQT.inverse_brackets([1, 1]), "qgt1", 13)
    assert _coeffs(s) == {-2: 1, -4: 2, -6: 3, -8: 4, -10: 5, -12: 6}
    s = series_expand(RationalQT.inverse_brackets([1]), "qlt1", 7)
    assert _coeffs(s) == {1: -1, 3: -1, 5: -1}
    # oracle: multiplying back by [1] gives 1 up to order
    back = s * bracket(1)
    assert back.agrees_with(QTSeries({(0, 0): 1}, "qlt1", back.order))
    assert back.order == 6


@pytest.mark.parametrize("regime", ["qlt1", "qgt1"])
@pytest.mark.parametrize("k", range(1, 9))
def test_series_inverse_bracket_times_bracket(regime, k):
    order = 30
    s = series_expand(RationalQT.inverse_brackets([k]), regime, order)
    assert s.order == order
    back = s * bracket(k)
    assert back.order == order - k
    assert back.agrees_with(QTSeries({(0, 0): 1}, regime, back.order))


def test_series_order_contract():
    s = series_expand(RationalQT(QTLaurent.monomial(-3, 0), BracketDenominator.of({2: 1})), "qlt1", 10)
    assert s.order == 10
    shifted = s * QTLaurent.monomial(-4, 0)
    assert shifted.order == 6
    assert shifted.terms == {(a - 4, b): c for (a, b), c in s.terms.items() if a - 4 < 6}
    with pytest.raises(ValueError):
        s + series_expand(RationalQT(1), "qgt1", 10)
    assert s.invert_q().regime == "qgt1"
    assert s.invert_q().invert_q() == s


@given(laurents(qmax=3), st.lists(st.integers(1, 3), min_size=1, max_size=3), st.sampled_from(["qlt1", "qgt1"]))
def test_series_expand_matches_multiplication(f, parts, regime):
    r = RationalQT(f, BracketDenominator.from_parts(parts))
    s = series_expand(r, regime, 20)
    back = s * BracketDenominator.from_parts(parts).as_laurent()
    assert back.agrees_with(QTSeries.from_laurent(f, regime, back.order))


def test_z_basis_examples():
    assert z_basis_expand(t - ti) == {(0, 1): 1, (0, -1): -1}
    assert z_basis_expand(q * q - 2 + qi * qi) == {(2, 0): 1}
    with pytest.raises(NotExpressible) as info:
        z_basis_expand(q + qi)
    assert info.value.beta == 0 and info.value.residual == q + qi


@st.composite
def z_profiles(draw):
    keys = draw(st.lists(st.tuples(st.integers(0, 6), st.integers(-4, 4)), max_size=6))
    return {k: draw(st.integers(-5, 5)) for k in keys}


@given(z_profiles())
def test_z_basis_roundtrip(N):
    f = z_basis_sum(N)
    got = z_basis_expand(f)
    assert got == {k: Fraction(v) for k, v in N.items() if v}
    assert z_basis_sum(got) == f


@given(laurents())
def test_z_basis_rejects_exactly_non_invariant(f):
    invariant = all(c == f.negate_invert_q().terms.get(k, 0) for k, c in f.terms.items()) and \
        len(f.terms) == len(f.negate_invert_q().terms)
    try:
        z_basis_expand(f)
        assert invariant
    except NotExpressible:
        assert not invariant


def test_n_basis_examples():
    assert n_basis_convert({0: 1}) == {0: 1}
    assert n_basis_convert({2: 1}) == {2: 1, 0: -3}
    # re-expansion: B_2 - 3 B_0 = q^2 + 1 + q^-2 - 3
    assert n_basis_sum({2: 1, 0: -3}) == {2: 1, 0: -2, -2: 1}
    assert n_basis_convert({}) == {}
    assert n_basis_convert({4: 1}) == {4: 1, 2: -5, 0: 10}


def test_n_basis_odd_genus_is_not_expressible():
    # (q - 1/q) is anti-symmetric under q -> 1/q; every sum_k q^(g-2k) is symmetric
    with pytest.raises(NotExpressible) as info:
        n_basis_convert({1: 1})
    assert info.value.residual == QTLaurent({(-1, 0): -2})


@given(st.dictionaries(st.integers(0, 4).map(lambda g: 2 * g), st.integers(-5, 5), max_size=5))
def test_n_basis_roundtrip_and_integrality(N):
    n = n_basis_convert(N)
    assert all(v.denominator == 1 for v in n.values())
    poly = {}
    for g, c in N.items():
        for (a, _), v in z_basis_sum({(g, 0): c}).terms.items():
            poly[a] = poly.get(a, 0) + v
    assert n_basis_sum(n) == {a: v for a, v in poly.items() if v}


def test_laurent_json_roundtrip():
    f = QTLaurent({(2, -1): Fraction(3, 4), (0, 0): -2})
    assert f.to_json() == [[2, -1, "3/4"], [0, 0, "-2"]]
    assert QTLaurent.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        QTLaurent.from_json([[0, 0, "0.5"]])
    r = RationalQT(t, BracketDenominator.of({1: 2, 3: 1}))
    assert RationalQT.from_json(r.to_json()) == r
    s = series_expand(r, "qgt1", 12)
    assert QTSeries.from_json(s.to_json()) == s
