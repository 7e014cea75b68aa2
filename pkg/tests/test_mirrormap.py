from fractions import Fraction

import pytest

from scatterlab.mirrormap import (
    blowup_convolution, ggr_check, gv_crosscheck, lm_operator_check,
    lm_potential, n_gp, n_gp_text, open_closed_maps, theorem_check,
    winding_one_part,
)
from scatterlab.series import Series, parse_series

M_COEFFS = [1, -2, 5, -32, 286, -3038, 35870, -454880, 6073311]
Q_COEFFS = {1: 1, 2: -6, 3: 63, 4: -866, 5: 13899, 6: -246366}
Z_COEFFS = {1: 1, 2: 6, 3: 9, 4: 56, 5: -300, 6: 3942}


def test_m_series():
    maps = open_closed_maps(8)
    for n, v in enumerate(M_COEFFS):
        assert maps["M"].coeff(d=n) == v


def test_q_and_z_series():
    maps = open_closed_maps(6)
    for n, v in Q_COEFFS.items():
        assert maps["Q_of_z"].coeff(d=n) == v
    for n, v in Z_COEFFS.items():
        assert maps["z_of_Q"].coeff(d=n) == v


def test_x_over_u_in_z():
    # x = U(1 - 2z + 17 z^2 - 218 z^3 + 3404 z^4 - 59644 z^5 + 1127009 z^6)
    maps = open_closed_maps(6)
    e = maps["F"].scale(Fraction(1, 3)).exp()
    expect = {0: 1, 1: -2, 2: 17, 3: -218, 4: 3404, 5: -59644, 6: 1127009}
    for n, v in expect.items():
        assert e.coeff(d=n) == v


def test_trivial_tail():
    maps = open_closed_maps(1)
    assert maps["M"].coeff(d=0) == 1


def test_operator_checks_vanish():
    rep = lm_operator_check(10)
    assert rep["pass"], rep


def test_potential_coefficients():
    pot = lm_potential(4, 2)
    assert pot.coeff(a=1) == 1
    assert pot.coeff(a=3) == Fraction(1, 9)
    assert pot.coeff(a=3, d=1) == Fraction(-1, 3)


def test_winding_one_is_m():
    w1 = winding_one_part(8)
    assert [w1.coeff(d=n) for n in range(9)] == M_COEFFS


def test_theorem_check_fixture():
    w = parse_series(
        "y^1 + 2*t^3*y^-2 + 5*t^6*y^-5 + 32*t^9*y^-8 + 286*t^12*y^-11",
        t_cut=12)
    rep = theorem_check(w, 4)
    assert rep["pass"], rep
    assert theorem_check(Series.monomial(1, b=1, t_cut=0), 0)["pass"]


def test_theorem_check_detects_mismatch():
    w = parse_series("y^1 + 3*t^3*y^-2", t_cut=3)
    rep = theorem_check(w, 1)
    assert not rep["pass"]


def test_n_gp_values():
    assert n_gp(0, 1) == 1
    assert n_gp(1, 1) == Fraction(1, 24)
    # open question: the displayed expression gives -1/4 at (0,2), the prose -1/2
    assert n_gp(0, 2) == Fraction(-1, 4)
    assert n_gp_text(2) == Fraction(-1, 2)


def test_cor65_matches_thm64_at_p1():
    table = {0: Fraction(4), 1: Fraction(-1, 2)}

    def r_table(g0, ps=None, q=None):
        assert ps is None or ps == (1,)
        return table[g0]

    for g in (0, 1):
        a = blowup_convolution("cor65", g=g, r_table=lambda g0: table[g0])
        b = blowup_convolution("thm64", p=1, g=g, q=2,
                               r_table=lambda g0, ps, q: table[g0])
        assert a == b


def test_cor710_rows():
    assert blowup_convolution("cor710", r0=4, r1=Fraction(-1, 3)) == \
        Fraction(-1, 2)
    assert blowup_convolution("cor710", r0=25, r1=Fraction(-575, 24)) == -25


def test_gv_crosscheck():
    row1 = gv_crosscheck(-2, 0, 1)
    assert row1["N1"] == Fraction(-1, 6)
    assert row1["R_genus1"] == Fraction(-1, 3)
    row2 = gv_crosscheck(5, 0, 2)
    assert row2["N1"] == Fraction(5, 12)
    assert row2["R_genus1"] == Fraction(-575, 24)
    assert gv_crosscheck(0, 0, 1)["R_genus1"] == 0


def test_ggr():
    assert ggr_check(4, -2, 2)
    assert ggr_check(25, 5, 5)
    assert ggr_check(0, 0, 3)
    assert not ggr_check(4, 2, 2)
