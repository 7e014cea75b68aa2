from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from scatterlab.series import (
    Series, SeriesError, hbar_leg, hbar_ngp, hbar_vertex, invert_series,
    parse_series, qbinom_sym, qbracket_poly, qlog_slab,
)


def S(text, t_cut=12, h_cut=0, x_window=None, rank=0):
    return parse_series(text, t_cut=t_cut, h_cut=h_cut, x_window=x_window,
                        rank=rank)


def test_binomial_square():
    f = S("1 + t^1*x^1", t_cut=4)
    assert f * f == S("1 + 2*t^1*x^1 + t^2*x^2", t_cut=4)


def test_slab_power_term():
    # t^3 x^-1 y^-2 * (1 + t^3 x y^-3)^5 contains 5 t^6 y^-5
    f = S("1 + t^3*x^1*y^-3", t_cut=12)
    val = S("t^3*x^-1*y^-2", t_cut=12) * f.pow_int(5)
    assert val.coeff(a=0, b=-5, d=6) == 5


def test_additive_inverse():
    s = S("3*x^2*y^-1 + t^2 - 1/7*t^5*y^4", t_cut=6)
    assert (s + (-s)).is_zero()


def test_geometric_inverse_window():
    f = Series.monomial(1, t_cut=0, x_window=(-3, 0)) + \
        Series.monomial(1, a=-1, t_cut=0, x_window=(-3, 0))
    inv = f.pow_int(-1)
    assert inv == S("1 - x^-1 + x^-2 - x^-3", t_cut=0, x_window=(-3, 0))


def test_square_mod_t7():
    f = S("1 + t^3*x^1*y^-3", t_cut=6)
    assert f * f == S("1 + 2*t^3*x^1*y^-3 + t^6*x^2*y^-6", t_cut=6)


def test_w2_reduction():
    # (y + t^3 x y^-2) * f2^-1 = y with f2 = 1 + t^3 x y^-3
    f2 = S("1 + t^3*x^1*y^-3", t_cut=12)
    val = S("y^1 + t^3*x^1*y^-2", t_cut=12)
    assert val * f2.pow_int(-1) == S("y^1", t_cut=12)


def test_exp_zero():
    z = Series.zero(t_cut=5)
    assert z.exp() == Series.const(1, t_cut=5)


def F_series(n_max):
    """Hypergeometric tail F(z) = sum_{k>=1} (-1)^k (3k)!/(k (k!)^3) z^k on the t-axis."""
    terms = {}
    for k in range(1, n_max + 1):
        terms[(0, 0, k, 0, ())] = Fraction(
            (-1) ** k * factorial(3 * k), k * factorial(k) ** 3)
    return Series(terms, t_cut=n_max)


def test_z_exp_F():
    f = F_series(6)
    q = Series.monomial(1, d=1, t_cut=6) * f.exp()
    expect = {1: 1, 2: -6, 3: 63, 4: -866, 5: 13899, 6: -246366}
    for n, v in expect.items():
        assert q.coeff(d=n) == v


def test_log_mercator():
    a = Fraction(3, 2)
    arg = Series.monomial(a, a=1, d=1, t_cut=5) + 1
    lg = arg.log()
    for k in range(1, 6):
        assert lg.coeff(a=k, d=k) == Fraction((-1) ** (k + 1)) * a ** k / k


def test_invert_Q():
    f = F_series(6)
    q = Series.monomial(1, d=1, t_cut=6) * f.exp()
    z_of_q = invert_series(q)
    expect = {1: 1, 2: 6, 3: 9, 4: 56, 5: -300, 6: 3942}
    for n, v in expect.items():
        assert z_of_q.coeff(d=n) == v


def test_invert_identity():
    z = Series.monomial(1, d=1, t_cut=5)
    assert invert_series(z) == z


def test_invert_catalan():
    s = Series.monomial(1, d=1, t_cut=4) + Series.monomial(1, d=2, t_cut=4)
    inv = invert_series(s)
    # brute-force oracle values: t(s(z)) = z to order 4 forces Catalan signs
    assert [inv.coeff(d=n) for n in range(1, 5)] == [1, -1, 2, -5]


def test_vertex_kernel_one():
    v = hbar_vertex(1, 8)
    inv = v.inverse()
    for g in range(0, 5):
        assert v.coeff(h=2 * g) == Fraction((-1) ** g, 4 ** g * factorial(2 * g + 1))
    assert inv.coeff(h=0) == 1
    assert inv.coeff(h=2) == Fraction(1, 24)
    assert inv.coeff(h=4) == Fraction(7, 5760)


def test_ngp_is_reciprocal():
    assert (hbar_ngp(1, 8) * hbar_vertex(1, 8)) == Series.const(1, t_cut=0, h_cut=8)


def test_vertex_leg_product():
    # vertex(2)*leg(1) = q^{1/2}+q^{-1/2} = sum 2(-1)^g hbar^{2g}/((2g)! 2^{2g})
    prod = hbar_vertex(2, 8) * hbar_leg(1, 8)
    for g in range(0, 5):
        assert prod.coeff(h=2 * g) == Fraction(2 * (-1) ** g,
                                               factorial(2 * g) * 4 ** g)
    assert prod == qbracket_poly([(1, 1)], 8)


def test_vertex_leg_unit():
    for m in (1, 2, 3, 5):
        prod = hbar_vertex(m, 10) * hbar_leg(m, 10)
        assert prod.scale(m * (-1) ** (m + 1)) == Series.const(1, t_cut=0, h_cut=10)


def test_even_powers_only():
    for m in (1, 2, 3, 4):
        for ser in (hbar_vertex(m, 9), hbar_leg(m, 9), hbar_ngp(m, 9)):
            assert all(mm[3] % 2 == 0 for mm in ser.terms)


def test_qbinom_classical_limit():
    from math import comb
    for k in range(0, 6):
        for j in range(0, k + 1):
            assert qbinom_sym(k, j, 6).coeff(h=0) == comb(k, j)
    assert qbinom_sym(2, 1, 6) == qbracket_poly([(1, 1)], 6)
    assert qbinom_sym(2, 2, 6) == Series.const(1, t_cut=0, h_cut=6)


def test_qlog_slab_classical():
    f = qlog_slab(1, (1,), (1, -3), t_cut=9, h_cut=0, rank=1, degree=3)
    assert f == Series.monomial(1, a=1, b=-3, d=3, c=(1,), t_cut=9, rank=1) + \
        Series.const(1, t_cut=9, rank=1)


def test_qlog_slab_round_trip():
    for a in (1, 2, Fraction(-1, 3)):
        f = qlog_slab(a, (1,), (0, 1), t_cut=8, h_cut=0, rank=1, degree=2)
        one_plus = Series.monomial(a, b=1, d=2, c=(1,), t_cut=8, rank=1) + 1
        assert f == one_plus


def test_qlog_slab_hbar_oracle():
    # beta = 0, m = x, window truncation; oracle: hand expansion to (x^2, h^2).
    f = qlog_slab(1, (), (1, 0), t_cut=2, h_cut=2, rank=0, degree=0,
                  x_window=(0, 2))
    # log f = B1 x + (-1) B2 x^2 with Bk = i hbar/(q^{k/2}-q^{-k/2})
    # B1 = 1 + h^2/24, B2 = 1/2 + h^2/12.
    # f = 1 + B1 x + (B1^2/2 - B2) x^2 + ...
    assert f.coeff(a=1) == 1
    assert f.coeff(a=1, h=2) == Fraction(1, 24)
    assert f.coeff(a=2) == Fraction(1, 2) - Fraction(1, 2)
    assert f.coeff(a=2, h=2) == Fraction(1, 24) - Fraction(1, 12)


def test_assert_window_clear():
    s = Series.monomial(1, a=-3, t_cut=0, x_window=(-3, 0))
    with pytest.raises(SeriesError):
        s.assert_window_clear()


def test_parse_round_trip():
    s = S("y^1 + 2*t^3*y^-2 - 1/3*t^6*x^2*y^-5", t_cut=9)
    assert parse_series(str(s), t_cut=9) == s


def test_rank_mismatch_rejected():
    a = Series.monomial(1, c=(1,), t_cut=2, rank=1)
    b = Series.monomial(1, t_cut=2, rank=0)
    with pytest.raises(SeriesError):
        _ = a + b


small_series = st.builds(
    lambda entries: Series(
        {(a, b, d, 0, ()): Fraction(n, m)
         for (a, b, d, n, m) in entries},
        t_cut=4),
    st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                       st.integers(0, 4), st.integers(-4, 4),
                       st.integers(1, 4)), max_size=5))


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                          st.integers(1, 3), st.integers(-3, 3),
                          st.integers(1, 3)), max_size=3),
       st.integers(1, 3))
def test_pow_inverse(entries, n):
    base = Series.const(1, t_cut=6) + Series(
        {(a, b, d, 0, ()): Fraction(p, q) for (a, b, d, p, q) in entries},
        t_cut=6)
    assert base.pow_int(n) * base.pow_int(-n) == Series.const(1, t_cut=6)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2),
                          st.integers(1, 3), st.integers(-3, 3),
                          st.integers(1, 3)), max_size=3))
def test_exp_log_round_trip(entries):
    p = Series({(a, b, d, 0, ()): Fraction(n, m)
                for (a, b, d, n, m) in entries}, t_cut=6)
    one_plus = p.exp()
    assert one_plus.log() == p
    n = Series({(a, b, d, 0, ()): Fraction(num, den)
                for (a, b, d, num, den) in entries}, t_cut=6)
    assert (n + 1).log().exp() == n + 1
