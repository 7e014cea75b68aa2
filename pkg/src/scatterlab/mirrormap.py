"""Hypergeometric mirror maps, Lerche-Mayr operators and blow-up cross-checks.

Single-variable series are carried on the t-axis of :class:`Series` (z- or
Q-powers), the open-string variable on the x-axis.  Logarithms are never
expanded: :class:`LogSeries` keeps series-valued log coefficients so the
Euler-operator actions stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .series import Series, SeriesError, compose_axis, hbar_ngp, invert_series


def hypergeometric_tail(n_max: int) -> Series:
    """F(z) = sum_{k>=1} (-1)^k (3k)! / (k (k!)^3) z^k, z on the t-axis."""
    terms = {}
    for k in range(1, n_max + 1):
        terms[(0, 0, k, 0, ())] = Fraction(
            (-1) ** k * factorial(3 * k), k * factorial(k) ** 3)
    return Series(terms, t_cut=n_max)


def open_closed_maps(order: int) -> dict:
    """Closed and open mirror maps of the cubic surface pair to the given order.

    Returns F(z), Q(z) = z e^{F}, its compositional inverse z(Q) and the
    open map M(Q) = (Q/z(Q))^{1/3} = exp(F(z(Q))/3); checks M^3 z(Q) = Q.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    f = hypergeometric_tail(order)
    z = Series.monomial(1, d=1, t_cut=order)
    q_of_z = z * f.exp()
    z_of_q = invert_series(q_of_z)
    f_at_zq = compose_axis(f, z_of_q)
    m = f_at_zq.scale(Fraction(1, 3)).exp()
    if m.pow_int(3) * z_of_q != Series.monomial(1, d=1, t_cut=order):
        raise SeriesError("internal check M^3 * z(Q) = Q failed")
    return {"F": f, "Q_of_z": q_of_z, "z_of_Q": z_of_q, "M": m}


# ---------------------------------------------------------------------------
# Lerche-Mayr operator check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogSeries:
    """c_z * log z + c_x * log x + tail, with series-valued coefficients.

    z lives on the t-axis, x on the x-axis.  The log parts never mix into
    tail arithmetic; Euler operators act exactly.
    """

    c_z: Series
    c_x: Series
    tail: Series

    def theta_z(self) -> "LogSeries":
        return LogSeries(_euler_t(self.c_z), _euler_t(self.c_x),
                         _euler_t(self.tail) + self.c_z)

    def theta_x(self) -> "LogSeries":
        return LogSeries(_euler_x(self.c_z), _euler_x(self.c_x),
                         _euler_x(self.tail) + self.c_x)

    def mul_z(self) -> "LogSeries":
        return LogSeries(self.c_z.shift(d=1), self.c_x.shift(d=1),
                         self.tail.shift(d=1))

    def mul_x(self) -> "LogSeries":
        return LogSeries(self.c_z.shift(a=1), self.c_x.shift(a=1),
                         self.tail.shift(a=1))

    def scale(self, co) -> "LogSeries":
        return LogSeries(self.c_z.scale(co), self.c_x.scale(co),
                         self.tail.scale(co))

    def __add__(self, other):
        return LogSeries(self.c_z + other.c_z, self.c_x + other.c_x,
                         self.tail + other.tail)

    def is_zero(self) -> bool:
        return self.c_z.is_zero() and self.c_x.is_zero() and self.tail.is_zero()


def _euler_t(s: Series) -> Series:
    return Series({m: co * m[2] for m, co in s.terms.items()},
                  t_cut=s.t_cut, h_cut=s.h_cut, x_window=s.x_window,
                  rank=s.rank)


def _euler_x(s: Series) -> Series:
    return Series({m: co * m[0] for m, co in s.terms.items()},
                  t_cut=s.t_cut, h_cut=s.h_cut, x_window=s.x_window,
                  rank=s.rank)


def _combo(f: LogSeries, cz: int, cx: int, shift: int) -> LogSeries:
    """(cz*theta_z + cx*theta_x + shift) f"""
    out = f.scale(shift) if shift else LogSeries(
        f.c_z.scale(0), f.c_x.scale(0), f.tail.scale(0))
    if cz:
        out = out + f.theta_z().scale(cz)
    if cx:
        out = out + f.theta_x().scale(cx)
    return out


def lm_operator_check(order: int) -> dict:
    """Apply the closed and open-closed Picard-Fuchs operators to their
    logarithmic solutions; every coefficient must vanish exactly.

    Closed operator   L_c    = theta^3 + 3 z theta (3 theta + 1)(3 theta + 2)
    Open operators    L_oc1  = theta^2 (theta - theta_o)
                               + z (3 th - th_o)(3 th - th_o + 1)(3 th - th_o + 2)
                      L_oc2  = (th_o - 3 th) th_o - x (th_o - th) th_o
    acting on t(z) = log z + F(z) and t_o = log x - F(z)/3.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    window = (0, order + 4)
    f = hypergeometric_tail(order).with_cuts(x_window=window)
    one = Series.const(1, t_cut=order, x_window=window)
    zero = one.scale(0)

    t_closed = LogSeries(one, zero, f)           # log z + F
    t_open = LogSeries(zero, one, f.scale(Fraction(-1, 3)))  # log x - F/3

    # L_c
    g = _combo(t_closed, 3, 0, 2)
    g = _combo(g, 3, 0, 1)
    g = _combo(g, 1, 0, 0)
    lc = g.mul_z().scale(3) + t_closed.theta_z().theta_z().theta_z()

    # L_oc1
    g = _combo(t_open, 3, -1, 2)
    g = _combo(g, 3, -1, 1)
    g = _combo(g, 3, -1, 0)
    first = _combo(t_open, 1, -1, 0).theta_z().theta_z()
    loc1 = first + g.mul_z()

    # L_oc2
    g = t_open.theta_x()
    loc2 = _combo(g, -3, 1, 0) + _combo(g, -1, 1, 0).mul_x().scale(-1)

    report = {"L_c": lc.is_zero(), "L_oc1": loc1.is_zero(),
              "L_oc2": loc2.is_zero()}
    report["pass"] = all(report.values())
    return report


# ---------------------------------------------------------------------------
# The 4d disk potential
# ---------------------------------------------------------------------------

def lm_potential(order_x: int, order_z: int) -> Series:
    """Double series W4d = sum_{n>m>=0, n-3m>=0} (-1)^m (n-m-1)!/(n (n-3m)! (m!)^2) x^n z^m.

    Terms with n - 3m < 0 are excluded (the factorial is undefined there);
    the x^1-part is exactly x.
    """
    if order_x < 1 or order_z < 0:
        raise ValueError("orders must be positive")
    terms = {}
    for n in range(1, order_x + 1):
        for m in range(0, min(order_z, n - 1) + 1):
            if n - 3 * m < 0:
                continue
            co = Fraction((-1) ** m * factorial(n - m - 1),
                          n * factorial(n - 3 * m) * factorial(m) ** 2)
            terms[(n, 0, m, 0, ())] = co
    return Series(terms, t_cut=order_z, x_window=(0, order_x))


def winding_one_part(order: int) -> Series:
    """Coefficient of U^1 after substituting x = U*M(Q), z = z(Q) into the
    4d potential; reproduces M(Q) on the Q-axis."""
    maps = open_closed_maps(order)
    pot = lm_potential(1, order)
    # only n = 1, m = 0 contributes to U^1: the term "x"
    coeff = pot.coeff(a=1)
    return maps["M"].scale(coeff)


# ---------------------------------------------------------------------------
# Theorem 1.1-style substitution check
# ---------------------------------------------------------------------------

def theorem_check(w: Series, order: int) -> dict:
    """Compare the pure-y part of a superpotential with y*M(Q) under
    Q = -t^3 y^-3 through the given Q-order.

    ``w`` is a series in y and t (x-terms ignored only if of higher t-order
    than the comparison window); returns per-coefficient report.
    """
    maps = open_closed_maps(max(order, 1))
    m = maps["M"]
    rows = []
    ok = True
    for n in range(0, order + 1):
        # coefficient of Q^n in M vs coefficient of t^{3n} y^{1-3n} in W
        lhs = w.coeff(b=1 - 3 * n, d=3 * n, c=(0,) * w.rank if w.rank else None)
        rhs = m.coeff(d=n) * (-1) ** n   # Q^n = (-1)^n t^{3n} y^{-3n}
        rows.append({"Q_power": n, "W_coeff": lhs, "M_term": rhs,
                     "match": lhs == rhs})
        ok = ok and lhs == rhs
    return {"pass": ok, "rows": rows}


# ---------------------------------------------------------------------------
# Local P1 contributions and blow-up convolutions
# ---------------------------------------------------------------------------

def n_gp(g: int, p: int) -> Fraction:
    """hbar^{2g}-coefficient of ((-1)^{p+1}/p) i hbar / (q^{p/2} - q^{-p/2}).

    At g = 0 the displayed expression evaluates to (-1)^{p+1}/p^2 while the
    surrounding text states (-1)^{p+1}/p; both agree at p = 1.  This returns
    the expression's value; see :func:`n_gp_text` for the other reading.
    """
    if g < 0 or p < 1:
        raise ValueError("need g >= 0 and p >= 1")
    return hbar_ngp(p, 2 * g).coeff(h=2 * g)


def n_gp_text(p: int) -> Fraction:
    """The genus-0 value (-1)^{p+1}/p as stated in prose."""
    return Fraction((-1) ** (p + 1), p)


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def blowup_convolution(mode: str, **kw) -> Fraction:
    """Evaluate the blow-up convolution identities over supplied tables.

    mode = "thm64":  R^g(Xhat, pi*beta - p C)
        = sum over p_1+..+p_r = p, g_0+..+g_r = g of
          (p_1...p_r / r!) R^{g_0}_{p_1..p_r,q} prod N(g_i, p_i)
      with kw: p, g, q, r_table(g0, ps, q) -> Fraction.
    mode = "cor65":  sum_{g0+g1=g} R^{g0}_{1,q} N(g1, 1)
      with kw: g, r_table(g0) -> Fraction.
    mode = "cor710": R^1_{1,d} = sum_{g1+g2=1} R^{g1}_d(F1) (-1/4)^{g2}/(2 g2+1)!
      with kw: r0, r1 (the genus 0/1 one-point invariants of the blow-up).
    """
    if mode == "thm64":
        p, g, q, r_table = kw["p"], kw["g"], kw["q"], kw["r_table"]
        total = Fraction(0)
        for r in range(1, p + 1):
            for ps in compositions(p, r):
                weight = Fraction(1, factorial(r))
                for pi in ps:
                    weight *= pi
                for gs in _genus_splits(g, r + 1):
                    term = r_table(gs[0], ps, q)
                    for gi, pi in zip(gs[1:], ps):
                        term *= n_gp(gi, pi)
                    total += weight * term
        return total
    if mode == "cor65":
        g, r_table = kw["g"], kw["r_table"]
        return sum((r_table(g0) * n_gp(g - g0, 1) for g0 in range(g + 1)),
                   Fraction(0))
    if mode == "cor710":
        r0, r1 = Fraction(kw["r0"]), Fraction(kw["r1"])
        out = Fraction(0)
        for g2 in range(0, 2):
            rg = r1 if g2 == 0 else r0
            out += rg * Fraction((-1) ** g2, 4 ** g2 * factorial(2 * g2 + 1))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def _genus_splits(g: int, slots: int):
    if slots == 1:
        yield (g,)
        return
    for first in range(0, g + 1):
        for rest in _genus_splits(g - first, slots - 1):
            yield (first,) + rest


def gv_crosscheck(n0, n1, d: int) -> dict:
    """Gopakumar-Vafa step N^1 = n^1 + n^0/12 chained with the genus-1
    log-local transform for the class d L - C on the blown-up plane."""
    if d < 1:
        raise ValueError("d must be >= 1")
    n0, n1 = Fraction(n0), Fraction(n1)
    nn0 = n0
    nn1 = n1 + n0 / 12
    e = 3 * d - 1
    r1 = Fraction((-1) ** (3 * d)) * e * (nn1 - Fraction(e * e, 24) * nn0)
    return {"N0": nn0, "N1": nn1, "R_genus1": r1}


def ggr_check(r, n_local, d: int) -> bool:
    """Log-local correspondence R = (-1)^{d+1} d N at genus zero."""
    return Fraction(r) == Fraction((-1) ** (d + 1)) * d * Fraction(n_local)
