"""Exact truncated multivariate Laurent series over arbitrary-precision rationals.

The universal value type of the package: finitely many terms

    coef * x^a * y^b * t^d * s^(c1,..,cr) * h^e

with ``coef`` an exact rational.  ``t`` and ``h`` are truncation axes
(orders above ``t_cut`` / ``h_cut`` are dropped on construction), ``x`` may
additionally be truncated to a bounded Laurent window, and ``s`` is a vector
of curve-class markers of fixed rank per computation.  All arithmetic is
exact; no floating point is used anywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial, gcd
from typing import Iterable, Iterator, Optional

Mono = tuple  # (a, b, d, h, c) with c a tuple of ints of length rank

ZERO = Fraction(0)
ONE = Fraction(1)


def mono_key(m: Mono):
    """Deterministic term order: by t, then h, then y descending, then x, then class."""
    a, b, d, h, c = m
    return (d, h, -b, a, c)


class SeriesError(ValueError):
    pass


class Series:
    """Immutable sparse Laurent series truncated in t (and optionally h, x)."""

    __slots__ = ("terms", "t_cut", "h_cut", "x_window", "rank", "_hash")

    def __init__(self, terms=None, *, t_cut: int, h_cut: int = 0,
                 x_window: Optional[tuple] = None, rank: int = 0):
        if t_cut < 0 or h_cut < 0:
            raise SeriesError("cuts must be non-negative")
        self.t_cut = t_cut
        self.h_cut = h_cut
        self.x_window = x_window
        self.rank = rank
        out = {}
        if terms:
            for m, co in terms.items():
                if not co:
                    continue
                a, b, d, h, c = m
                if len(c) != rank:
                    raise SeriesError("class-rank mismatch in term")
                if d > t_cut or h > h_cut:
                    continue
                if x_window is not None and not (x_window[0] <= a <= x_window[1]):
                    continue
                co = Fraction(co)
                if co:
                    out[m] = co
        self.terms = out
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, *, t_cut, h_cut=0, x_window=None, rank=0):
        return cls({}, t_cut=t_cut, h_cut=h_cut, x_window=x_window, rank=rank)

    @classmethod
    def monomial(cls, coef, a=0, b=0, d=0, h=0, c=None, *, t_cut, h_cut=0,
                 x_window=None, rank=0):
        c = tuple(c) if c is not None else (0,) * rank
        return cls({(a, b, d, h, c): Fraction(coef)}, t_cut=t_cut, h_cut=h_cut,
                   x_window=x_window, rank=rank)

    @classmethod
    def const(cls, coef, *, t_cut, h_cut=0, x_window=None, rank=0):
        return cls.monomial(coef, t_cut=t_cut, h_cut=h_cut, x_window=x_window,
                            rank=rank)

    def one_like(self):
        return Series.const(1, t_cut=self.t_cut, h_cut=self.h_cut,
                            x_window=self.x_window, rank=self.rank)

    def with_cuts(self, *, t_cut=None, h_cut=None, x_window="keep"):
        return Series(self.terms,
                      t_cut=self.t_cut if t_cut is None else t_cut,
                      h_cut=self.h_cut if h_cut is None else h_cut,
                      x_window=self.x_window if x_window == "keep" else x_window,
                      rank=self.rank)

    # -- basic queries ------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def items(self) -> Iterator[tuple]:
        """Terms in the deterministic order."""
        return iter(sorted(self.terms.items(), key=lambda kv: mono_key(kv[0])))

    def coeff(self, a=0, b=0, d=0, h=0, c=None) -> Fraction:
        c = tuple(c) if c is not None else (0,) * self.rank
        return self.terms.get((a, b, d, h, c), ZERO)

    def constant_term(self) -> Fraction:
        return self.coeff()

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- ring operations ----------------------------------------------

    def _meet(self, other: "Series"):
        if self.rank != other.rank:
            raise SeriesError("class-rank mismatch")
        t_cut = min(self.t_cut, other.t_cut)
        h_cut = min(self.h_cut, other.h_cut)
        if self.x_window is None:
            window = other.x_window
        elif other.x_window is None:
            window = self.x_window
        else:
            window = (max(self.x_window[0], other.x_window[0]),
                      min(self.x_window[1], other.x_window[1]))
        return t_cut, h_cut, window

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series.const(other, t_cut=self.t_cut, h_cut=self.h_cut,
                                 x_window=self.x_window, rank=self.rank)
        t_cut, h_cut, window = self._meet(other)
        out = dict(self.terms)
        for m, co in other.terms.items():
            v = out.get(m, ZERO) + co
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Series(out, t_cut=t_cut, h_cut=h_cut, x_window=window, rank=self.rank)

    __radd__ = __add__

    def __neg__(self):
        return Series({m: -co for m, co in self.terms.items()}, t_cut=self.t_cut,
                      h_cut=self.h_cut, x_window=self.x_window, rank=self.rank)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Series) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, coef):
        coef = Fraction(coef)
        if not coef:
            return Series.zero(t_cut=self.t_cut, h_cut=self.h_cut,
                               x_window=self.x_window, rank=self.rank)
        return Series({m: co * coef for m, co in self.terms.items()},
                      t_cut=self.t_cut, h_cut=self.h_cut,
                      x_window=self.x_window, rank=self.rank)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        t_cut, h_cut, window = self._meet(other)
        out = {}
        for (a1, b1, d1, h1, c1), co1 in self.terms.items():
            if d1 > t_cut or h1 > h_cut:
                continue
            for (a2, b2, d2, h2, c2), co2 in other.terms.items():
                d = d1 + d2
                if d > t_cut:
                    continue
                h = h1 + h2
                if h > h_cut:
                    continue
                a = a1 + a2
                if window is not None and not (window[0] <= a <= window[1]):
                    continue
                m = (a, b1 + b2, d, h, tuple(u + v for u, v in zip(c1, c2)))
                v = out.get(m, ZERO) + co1 * co2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Series(out, t_cut=t_cut, h_cut=h_cut, x_window=window, rank=self.rank)

    __rmul__ = __mul__

    def shift(self, a=0, b=0, d=0, h=0, c=None):
        """Multiply by a single monomial."""
        c = tuple(c) if c is not None else (0,) * self.rank
        out = {}
        for (a1, b1, d1, h1, c1), co in self.terms.items():
            out[(a1 + a, b1 + b, d1 + d, h1 + h,
                 tuple(u + v for u, v in zip(c1, c)))] = co
        return Series(out, t_cut=self.t_cut, h_cut=self.h_cut,
                      x_window=self.x_window, rank=self.rank)

    # -- powers ---------------------------------------------------------

    def _nilpotency_bound(self) -> int:
        """Max power a series with no admissible constant term survives truncation."""
        bound = self.t_cut + self.h_cut + 2
        if self.x_window is not None:
            bound += self.x_window[1] - self.x_window[0] + 1
        return bound

    def pow_int(self, n: int) -> "Series":
        """Exact integer power; negative powers by geometric expansion.

        For n < 0 the base must factor as u*(1+N) with u a single invertible
        monomial and N truncation-nilpotent (positive t-order, positive
        h-order or drifting out of the x-window).
        """
        if n >= 0:
            result = self.one_like()
            base = self
            e = n
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        u = self._unit_part()
        u_m, u_co = u
        inv_unit = Series.monomial(
            1 / u_co, -u_m[0], -u_m[1], -u_m[2], -u_m[3],
            tuple(-v for v in u_m[4]), t_cut=self.t_cut, h_cut=self.h_cut,
            x_window=self.x_window, rank=self.rank)
        n_part = inv_unit * self - 1
        inv = self.one_like()
        power = self.one_like()
        for k in range(n_part._nilpotency_bound()):
            power = power * n_part
            if power.is_zero():
                break
            inv = inv + power.scale((-1) ** (k + 1))
        if not power.is_zero():
            raise SeriesError("non-invertible base for negative power")
        # inv == (1+N)^-1; full inverse = inv * u^-1, then raise to |n|
        return (inv * inv_unit).pow_int(-n)

    def _unit_part(self):
        """An invertible monomial u with self = u*(1+N), N truncation-nilpotent.

        Candidates are tried in descending term order, so 1+x^-1 in a window
        expands in negative x-powers.
        """
        if not self.terms:
            raise SeriesError("zero series has no inverse")
        for m0, co0 in sorted(self.terms.items(),
                              key=lambda kv: mono_key(kv[0]), reverse=True):
            a0, b0, d0, h0, c0 = m0
            ok = True
            for m in self.terms:
                if m == m0:
                    continue
                a, b, d, h, c = m
                dr, hr, ar = d - d0, h - h0, a - a0
                nilpotent = (dr > 0 or hr > 0
                             or (self.x_window is not None and ar != 0))
                if dr < 0 or hr < 0 or not nilpotent:
                    ok = False
                    break
            if ok:
                return m0, co0
        raise SeriesError("series does not factor as unit * (1 + nilpotent)")

    def inverse(self):
        return self.pow_int(-1)

    # -- exp / log ------------------------------------------------------

    def exp(self) -> "Series":
        if self.constant_term():
            raise SeriesError("exp requires zero constant term")
        self._check_positive_order()
        result = self.one_like()
        power = self.one_like()
        for k in range(1, self._nilpotency_bound() + 1):
            power = power * self
            if power.is_zero():
                break
            result = result + power.scale(Fraction(1, factorial(k)))
        else:
            raise SeriesError("exp argument is not truncation-nilpotent")
        return result

    def log(self) -> "Series":
        if self.constant_term() != 1:
            raise SeriesError("log requires constant term exactly 1")
        n = self - 1
        n._check_positive_order()
        result = Series.zero(t_cut=self.t_cut, h_cut=self.h_cut,
                             x_window=self.x_window, rank=self.rank)
        power = self.one_like()
        for k in range(1, n._nilpotency_bound() + 1):
            power = power * n
            if power.is_zero():
                break
            result = result + power.scale(Fraction((-1) ** (k + 1), k))
        else:
            raise SeriesError("log argument is not truncation-nilpotent")
        return result

    def _check_positive_order(self):
        """Every term must die under repeated multiplication (t, h or window)."""
        for (a, b, d, h, c), _ in self.terms.items():
            if d > 0 or h > 0:
                continue
            if self.x_window is not None and a != 0:
                continue
            raise SeriesError("term of non-positive order in exp/log argument")

    # -- windows ----------------------------------------------------------

    def assert_window_clear(self, margin: int = 0):
        """Fail if any retained term touches the x-window boundary.

        Used after summing bounded-Laurent expansions: interior coefficients
        are exact only when the boundary ones cancelled.
        """
        if self.x_window is None:
            return self
        lo, hi = self.x_window
        for (a, _, _, _, _) in self.terms:
            if a <= lo + margin or a >= hi - margin:
                raise SeriesError(
                    f"term with x^{a} touches the x-window boundary {self.x_window}")
        return self

    # -- printing / parsing -----------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, co in self.items():
            parts.append(_term_str(m, co, first=not parts))
        return "".join(parts)

    def __repr__(self):
        return f"Series({self}; t^{self.t_cut}, h^{self.h_cut})"


def _term_str(m: Mono, co: Fraction, first: bool) -> str:
    a, b, d, h, c = m
    factors = []
    if a:
        factors.append(f"x^{a}")
    if b:
        factors.append(f"y^{b}")
    if d:
        factors.append(f"t^{d}")
    if any(c):
        factors.append("s^(" + ",".join(str(v) for v in c) + ")")
    if h:
        factors.append(f"h^{h}")
    mag = abs(co)
    if mag != 1 or not factors:
        factors.insert(0, str(mag))
    body = "*".join(factors)
    if first:
        return body if co > 0 else "-" + body
    return (" + " if co > 0 else " - ") + body


_FACTOR_RE = re.compile(
    r"(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xyth])\^(?P<exp>-?\d+)|"
    r"s\^\((?P<cls>[^)]*)\)|(?P<bare>[xyth])(?!\^))")


def _split_terms(text: str):
    """Split on top-level +/- signs (not the ones inside exponents)."""
    out = []
    sign = 1
    cur = []
    prev = ""
    for ch in text:
        if ch in "+-" and prev not in "^(," and not (prev == "" and not cur):
            if "".join(cur).strip():
                out.append((sign, "".join(cur).strip()))
            cur = []
            sign = -1 if ch == "-" else 1
        elif ch in "+-" and prev == "" and not cur:
            sign = -1 if ch == "-" else 1
        else:
            cur.append(ch)
        if not ch.isspace():
            prev = ch
    if "".join(cur).strip():
        out.append((sign, "".join(cur).strip()))
    return out


def parse_series(text: str, *, t_cut, h_cut=0, x_window=None, rank=0) -> Series:
    """Parse the text form produced by ``str(series)`` (lossless round-trip)."""
    text = text.strip()
    if text == "0":
        return Series.zero(t_cut=t_cut, h_cut=h_cut, x_window=x_window, rank=rank)
    terms = {}
    for sign, body in _split_terms(text):
        co = Fraction(sign)
        a = b = d = h = 0
        c = [0] * rank
        for piece in body.split("*"):
            piece = piece.strip()
            if not piece:
                continue
            fm = _FACTOR_RE.fullmatch(piece)
            if not fm:
                raise SeriesError(f"cannot parse factor {piece!r}")
            if fm.group("num"):
                co *= Fraction(fm.group("num"))
            elif fm.group("cls") is not None:
                vals = [int(v) for v in fm.group("cls").split(",") if v.strip()]
                if len(vals) != rank:
                    raise SeriesError("class-rank mismatch in parse")
                c = vals
            else:
                var = fm.group("var") or fm.group("bare")
                exp = int(fm.group("exp")) if fm.group("exp") else 1
                if var == "x":
                    a += exp
                elif var == "y":
                    b += exp
                elif var == "t":
                    d += exp
                else:
                    h += exp
        m = (a, b, d, h, tuple(c))
        terms[m] = terms.get(m, ZERO) + co
    return Series(terms, t_cut=t_cut, h_cut=h_cut, x_window=x_window, rank=rank)


# -- compositional inversion on the t-axis (single reserved variable) -----

def invert_series(s: Series) -> Series:
    """Compositional inverse of s = z + O(z^2) on the reserved t-axis.

    Returns t with t(s(z)) = z up to the cut (verified internally).
    """
    n_max = s.t_cut
    coeffs = _axis_coeffs(s, n_max)
    if coeffs.get(1, ZERO) != 1 or coeffs.get(0, ZERO):
        raise SeriesError("inversion requires leading term exactly z")
    inv = {1: ONE}
    for n in range(2, n_max + 1):
        # coefficient of z^n in sum_k inv_k * s^k must vanish
        acc = ZERO
        powers = {1: dict(coeffs)}
        sk = dict(coeffs)
        for k in range(2, n + 1):
            sk = _poly_mul(sk, coeffs, n_max)
            powers[k] = sk
        for k in range(1, n):
            acc += inv.get(k, ZERO) * powers[k].get(n, ZERO)
        inv[n] = -acc
    out = _axis_series(inv, s)
    _verify_inverse(s, out)
    return out


def compose_axis(outer: Series, inner: Series) -> Series:
    """outer(inner) where both are series on the t-axis and inner = O(z)."""
    n_max = min(outer.t_cut, inner.t_cut)
    oc = _axis_coeffs(outer, n_max)
    ic = _axis_coeffs(inner, n_max)
    if ic.get(0, ZERO):
        raise SeriesError("composition requires inner = O(z)")
    out = {0: oc.get(0, ZERO)}
    powk = {0: ONE}
    cur = {0: ONE}
    for k in range(1, n_max + 1):
        cur = _poly_mul(cur, ic, n_max)
        co = oc.get(k, ZERO)
        if co:
            for e, v in cur.items():
                out[e] = out.get(e, ZERO) + co * v
    return _axis_series(out, outer, t_cut=n_max)


def _axis_coeffs(s: Series, n_max: int) -> dict:
    out = {}
    for (a, b, d, h, c), co in s.terms.items():
        if a or b or h or any(c):
            raise SeriesError("not a single-axis series")
        if d <= n_max:
            out[d] = co
    return out


def _axis_series(coeffs: dict, like: Series, t_cut=None) -> Series:
    cut = like.t_cut if t_cut is None else t_cut
    return Series({(0, 0, d, 0, (0,) * like.rank): co
                   for d, co in coeffs.items() if co and d <= cut},
                  t_cut=cut, h_cut=like.h_cut, rank=like.rank)


def _poly_mul(p: dict, q: dict, n_max: int) -> dict:
    out = {}
    for e1, v1 in p.items():
        for e2, v2 in q.items():
            e = e1 + e2
            if e <= n_max:
                out[e] = out.get(e, ZERO) + v1 * v2
    return {e: v for e, v in out.items() if v}


def _verify_inverse(s: Series, t: Series):
    comp = compose_axis(t, s)
    z = Series.monomial(1, d=1, t_cut=comp.t_cut, rank=s.rank)
    if comp != z:
        raise SeriesError("compositional inverse verification failed")


# -- hbar kernels ----------------------------------------------------------

def hbar_vertex(m: int, h_cut: int, rank: int = 0) -> Series:
    """(q^{m/2} - q^{-m/2}) / (i*hbar) as a real even hbar-series.

    Equals 2*sin(m*hbar/2)/hbar = sum_j (-1)^j m^(2j+1) hbar^(2j) / (4^j (2j+1)!).
    """
    if m <= 0:
        raise SeriesError("vertex kernel needs a positive integer")
    terms = {}
    for j in range(0, h_cut // 2 + 1):
        co = Fraction((-1) ** j * m ** (2 * j + 1), 4 ** j * factorial(2 * j + 1))
        terms[(0, 0, 0, 2 * j, (0,) * rank)] = co
    return Series(terms, t_cut=0, h_cut=h_cut, rank=rank)


def hbar_leg(w: int, h_cut: int, rank: int = 0) -> Series:
    """((-1)^{w+1}/w) * i*hbar / (q^{w/2} - q^{-w/2}) as an hbar-series."""
    if w <= 0:
        raise SeriesError("leg kernel needs a positive integer")
    return hbar_vertex(w, h_cut, rank).inverse().scale(Fraction((-1) ** (w + 1), w))


def hbar_ngp(p: int, h_cut: int, rank: int = 0) -> Series:
    """((-1)^{p+1}/p) * i*hbar / (q^{p/2} - q^{-p/2}); same shape as the leg kernel."""
    return hbar_leg(p, h_cut, rank)


def qbracket_poly(entries: Iterable[tuple], h_cut: int, rank: int = 0) -> Series:
    """Symmetric Laurent polynomial in q^{1/2} as an hbar-series.

    ``entries`` lists pairs (k, coef) contributing coef*(q^{k/2}+q^{-k/2})
    for k > 0 and coef*1 for k = 0; q^{k/2}+q^{-k/2} = 2*cos(k*hbar/2).
    """
    terms = {}
    for k, coef in entries:
        coef = Fraction(coef)
        if k == 0:
            m = (0, 0, 0, 0, (0,) * rank)
            terms[m] = terms.get(m, ZERO) + coef
            continue
        for j in range(0, h_cut // 2 + 1):
            co = coef * Fraction(2 * (-1) ** j * k ** (2 * j),
                                 4 ** j * factorial(2 * j))
            m = (0, 0, 0, 2 * j, (0,) * rank)
            terms[m] = terms.get(m, ZERO) + co
    return Series(terms, t_cut=0, h_cut=h_cut, rank=rank)


def qbinom_sym(k: int, j: int, h_cut: int, rank: int = 0) -> Series:
    """Coefficient of X^j in prod_{i=1..k} (1 + q^{(k+1-2i)/2} X), as hbar-series.

    The symmetric q-analogue of binom(k, j); at hbar = 0 it equals binom(k, j).
    """
    if j < 0 or j > k:
        return Series.zero(t_cut=0, h_cut=h_cut, rank=rank)
    # polynomial in u = q^{1/2}: dict exponent -> coeff, per power of X
    polys = [{0: ONE}]
    for i in range(1, k + 1):
        e = k + 1 - 2 * i  # exponent of q^{1/2}
        new = []
        for jj in range(len(polys) + 1):
            cur = {}
            if jj < len(polys):
                cur.update(polys[jj])
            if jj > 0:
                for ee, v in polys[jj - 1].items():
                    cur[ee + e] = cur.get(ee + e, ZERO) + v
            new.append({e2: v for e2, v in cur.items() if v})
        polys = new
    poly = polys[j]
    # symmetric by construction: group into q^{k/2}+q^{-k/2} pairs
    entries = []
    for e, v in poly.items():
        if e > 0:
            entries.append((e, v))
        elif e == 0:
            entries.append((0, v))
    # check symmetry
    for e, v in poly.items():
        if poly.get(-e, ZERO) != v:
            raise SeriesError("q-binomial not symmetric")
    return qbracket_poly(entries, h_cut, rank)


def qlog_slab(a, beta, m_dir, t_cut: int, h_cut: int, rank: int,
              degree: int = 0, x_window=None) -> Series:
    """q-refined slab function for a normalized classical slab term a*s^beta*z^m.

    f(q) = exp( sum_{k>=1} (-1)^{k+1} * [i*hbar/(q^{k/2}-q^{-k/2})]
                 * a^k s^{k beta} z^{k m} t^{k degree} );
    at h_cut = 0 this is exactly 1 + a s^beta z^m t^degree.
    """
    a = Fraction(a)
    beta = tuple(beta)
    ax, by = m_dir
    arg = Series.zero(t_cut=t_cut, h_cut=h_cut, x_window=x_window, rank=rank)
    k = 1
    while True:
        d = k * degree
        if d > t_cut:
            break
        if x_window is not None and not (x_window[0] <= k * ax <= x_window[1]):
            break
        if degree == 0 and x_window is None and k > t_cut + h_cut + 2:
            raise SeriesError("qlog_slab needs a truncation axis for beta = 0")
        # i*hbar/(q^{k/2}-q^{-k/2}) is the reciprocal of the vertex kernel
        kern = hbar_vertex(k, h_cut, rank).inverse().scale(
            Fraction((-1) ** (k + 1)) * a ** k)
        term = Series.monomial(1, a=k * ax, b=k * by, d=d, h=0,
                               c=tuple(k * v for v in beta), t_cut=t_cut,
                               h_cut=h_cut, x_window=x_window, rank=rank)
        arg = arg + kern.with_cuts(t_cut=t_cut, x_window=x_window) * term
        k += 1
    return arg.exp()
