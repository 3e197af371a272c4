"""Numeric evaluation of GL iterated-integral expressions, including at x = 1.

Each suffix word w of an IITerm defines a function W_w(t) = int_0^t l1 W_rest
(with the same formal-primitive regularization as the exact series code, so
per-term divergences are handled consistently; only the total is a genuine
function).  W_w is represented twice:

  * series at 0 in t  (S0), by the integral recursion, no constant;
  * expansion at 1 in u = 1 - t (E1), by the recursion
    E1(W_w) = C_w + int_0^u (-l1(1-u')) E1(W_rest) du',
    with the constant fixed by matching at t = u = 1/2:
    C_w = S0(1/2) - E1_noconst(1/2).

Both series converge geometrically at 1/2 (radius 1 in each variable), so
order ~ 3.4 * dps digits suffices.  The value of the full expression at x = 1
is the u^0 log^0 coefficient of sum_terms pre(u) * E1(word); all singular
terms (u^e with e < 0, or log powers at e = 0) must cancel across terms, and
any non-cancellation above roundoff raises SeriesSingularity.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import SeriesSingularity
from .glrewrite import IIExpr, PowTerm
from .logseries import LogSeries

F = Fraction


def _one_minus_pow_num(alpha: Fraction, order) -> LogSeries:
    """(1 - t)^alpha with mpf coefficients at the current precision."""
    a = mp.mpf(alpha.numerator) / alpha.denominator
    terms = {}
    c = mp.mpf(1)
    k = 0
    while k < order:
        terms[(F(k), 0)] = c
        c = c * (k - a) / (k + 1)
        k += 1
    return LogSeries(terms, order)


def _powterm_series0(pt: PowTerm, order) -> LogSeries:
    """pt as a series in t: c * t^tpow * (1-t)^upow."""
    c = mp.mpf(pt.c.numerator) / pt.c.denominator
    if pt.upow == 0:
        return LogSeries({(pt.tpow, 0): c}, pt.tpow + order)
    return _one_minus_pow_num(pt.upow, order).shift(pt.tpow).scale(c)


def _powterm_series1(pt: PowTerm, order) -> LogSeries:
    """pt as a series in u = 1 - t: c * (1-u)^tpow * u^upow."""
    c = mp.mpf(pt.c.numerator) / pt.c.denominator
    if pt.tpow == 0:
        return LogSeries({(pt.upow, 0): c}, pt.upow + order)
    return _one_minus_pow_num(pt.tpow, order).shift(pt.upow).scale(c)


class _WordEvaluator:
    """Caches S0 / E1 series per word suffix at one (order, precision)."""

    def __init__(self, order: int, dps: int):
        self.order = F(order)
        self.dps = dps
        self._s0: dict = {}
        self._e1: dict = {}
        self._const: dict = {}

    def series0(self, word) -> LogSeries:
        if word in self._s0:
            return self._s0[word]
        if not word:
            result = LogSeries({(F(0), 0): mp.mpf(1)}, self.order)
        else:
            inner = self.series0(word[1:])
            integrand = _powterm_series0(word[0], self.order) * inner
            result = integrand.truncate(self.order - 1).integrate().truncate(self.order)
        self._s0[word] = result
        return result

    def expansion1(self, word) -> LogSeries:
        """E1 including the matched constant."""
        if word in self._e1:
            return self._e1[word]
        if not word:
            result = LogSeries({(F(0), 0): mp.mpf(1)}, self.order)
        else:
            inner = self.expansion1(word[1:])
            integrand = (_powterm_series1(word[0], self.order) * inner).scale(-1)
            noconst = integrand.truncate(self.order - 1).integrate().truncate(self.order)
            half = mp.mpf(1) / 2
            log_half = mp.log(half)
            c_w = self.series0(word).eval_mp(half, log_half) - noconst.eval_mp(
                half, log_half
            )
            self._const[word] = c_w
            result = noconst + LogSeries({(F(0), 0): c_w}, self.order)
        self._e1[word] = result
        return result


def _default_order(dps: int) -> int:
    return int(3.4 * dps) + 25


def eval_gl_at_one(expr: IIExpr, dps: int) -> mpmath.mpf:
    """Value of the GL expression at x = 1 (the x -> 1 limit).

    Singular u-terms must cancel across IITerms to roundoff; residuals above
    the working tolerance raise SeriesSingularity."""
    order = _default_order(dps)
    with mp.workdps(int(1.2 * dps) + 25):
        ev = _WordEvaluator(order, dps)
        total = LogSeries.zero(F(order))
        for t in expr:
            pre = _powterm_series1(t.pre, order)
            total = total + (pre * ev.expansion1(t.word)).truncate(order)
        tol = mp.mpf(10) ** (-(dps - 5))
        scale = max((abs(c) for c in total.terms.values()), default=mp.mpf(1))
        value = mp.mpf(0)
        for (e, k), c in total.terms.items():
            if e < 0 or (e == 0 and k > 0):
                if abs(c) > tol * scale:
                    raise SeriesSingularity(
                        f"non-cancelling singular term u^{e} log^{k} "
                        f"(coeff ~ {mpmath.nstr(abs(c), 3)}) at x=1"
                    )
            elif e == 0 and k == 0:
                value = value + c
    return value


def eval_gl(expr: IIExpr, x, dps: int) -> mpmath.mpf:
    """Value of the GL expression at rational x in (0, 1]."""
    xf = F(x)
    if not 0 < xf <= 1:
        raise ValueError("eval_gl requires x in (0, 1]")
    if xf == 1:
        return eval_gl_at_one(expr, dps)
    order = _default_order(dps)
    with mp.workdps(int(1.2 * dps) + 25):
        ev = _WordEvaluator(order, dps)
        xm = mp.mpf(xf.numerator) / xf.denominator
        total = mp.mpf(0)
        use_zero_side = xf <= F(1, 2)
        log_arg = mp.log(xm) if use_zero_side else mp.log(1 - xm)
        for t in expr:
            upow = mp.mpf(t.pre.upow.numerator) / t.pre.upow.denominator
            tpow = mp.mpf(t.pre.tpow.numerator) / t.pre.tpow.denominator
            pre = (1 - xm) ** upow * xm**tpow
            pre = pre * t.pre.c.numerator / t.pre.c.denominator
            if use_zero_side:
                w = ev.series0(t.word).eval_mp(xm, log_arg)
            else:
                w = ev.expansion1(t.word).eval_mp(1 - xm, log_arg)
            total = total + pre * w
    return total
