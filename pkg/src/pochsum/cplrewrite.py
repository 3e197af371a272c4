"""Direct rewrite of subclass Pochhammer sums into cyclotomic polylogarithms.

Subclass: p = 1/q (q a nonzero integer), a = 1, inner sum a plain multiple
harmonic sum.  Writing tau = (1-x)^{|p|} = (1-x)^{1/|q|}, the generating
function satisfies Sum(x) = G(tau) where G is built recursively from
integrals int_1^tau with integrands that are *rational* in t times the next
level — because every occurrence of t^{1/|p|} is t^{|q|}, a polynomial.
Crucially the inner level's own variable tau_sub = (1-x_sub)^{|p|} with
x_sub = 1-t^{|q|} equals t, so the levels compose in a single variable and
G is exactly a ChainFunction (rational functions times CPL words) closed
under integrate_chain_from_one.

The rules (T := t^{|q|}, sgn := sign(q) = sign(p), pre(tau) :=
tau^{|q|d - sgn} (1-tau^{|q|})^{-d}):

  base d<0 : G = (p)_{-d} * pre
  base d=0 : G = tau^{-sgn} - 1
  base d>0 : G = -(sgn/d!) pre * int_1^tau (1-T)^d t^{sgn-1-d|q|} dt
  c-peel   : G = -|q| (1-tau^{|q|})^{-b} *
                   int_1^tau t^{|q|-1} (1-T)^{b-1} G_sub(t) dt     (c -> c-1)
  inner-peel (c=0, head index m1, rest R):
    d>=0: G = -|q| pre * int_1^tau (1-T)^{d-1} t^{sgn-1-d|q|} G_sub(t) dt
    d<0 : G = pre * [ (p)_{-d} S(-d)
                - |q| int_1^tau (1-T)^{d-1} t^{sgn-1-d|q|} G_sub(t) dt ]
    where G_sub is the rule applied to (p, b=0, c=m1, d-1, R).

At x = 1 we have tau = 0, so the closed form is the exact limit of G at 0.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mp

from .constexpr import ConstExpr
from .cpl import (
    ChainTerm,
    chain_eval_mp,
    chain_term,
    chain_value_at_zero,
    integrate_chain_from_one,
    merge_chain,
)
from .errors import NotInSubclass
from .polys import FactoredDen, Poly, one_minus_tpow_factored
from .sums import NestedSumSpec, PochhammerSumSpec, nested_sum_value, pochhammer

F = Fraction


def check_subclass(spec: PochhammerSumSpec) -> int:
    """Return q for the subclass p = 1/q, a = 1, plain harmonic inner;
    raise NotInSubclass otherwise."""
    if spec.p == 0:
        raise NotInSubclass("p = 0")
    if spec.p.numerator not in (1, -1):
        raise NotInSubclass(f"p = {spec.p} is not of the form 1/q")
    if spec.a != 1:
        raise NotInSubclass(f"a = {spec.a} != 1")
    if not spec.inner.is_plain_harmonic():
        raise NotInSubclass(f"inner sum {spec.inner!r} is not a plain harmonic sum")
    return spec.p.numerator * spec.p.denominator  # q with sign of p


def _rational_powers(q_abs: int, tpow: int, mpow: int) -> tuple[Fraction, Poly, FactoredDen]:
    """(sign, num, den) for t^tpow * (1 - t^{q_abs})^mpow, exact and factored."""
    sign = F(1)
    num = Poly.const(1)
    den = FactoredDen.make()
    if tpow >= 0:
        num = Poly.monomial(tpow)
    else:
        den = den.mul(FactoredDen.make(-tpow))
    if mpow > 0:
        s, fac = one_minus_tpow_factored(q_abs)
        num = num * (fac.expand() ** mpow)
        sign *= F(s) ** mpow
    elif mpow < 0:
        s, fac = one_minus_tpow_factored(q_abs)
        for _ in range(-mpow):
            den = den.mul(fac)
        sign *= F(s) ** mpow  # s = -1, so this is (+-1)
    return sign, num, den


def _scale_rational(cf, q_abs: int, tpow: int, mpow: int, const: Fraction):
    """Multiply a ChainFunction by const * t^tpow (1-t^{q_abs})^mpow."""
    sign, num, den = _rational_powers(q_abs, tpow, mpow)
    c = const * sign
    out = []
    for t in cf:
        out.append(ChainTerm(t.coef * c, t.num * num, t.den.mul(den), t.word))
    return merge_chain(out)


def rewrite_to_cpl(spec: PochhammerSumSpec, order: int | None = None):
    """ChainFunction G with Sum(x) = G((1-x)^{1/|q|}); see module docstring."""
    q = check_subclass(spec)
    if order is None:
        order = _default_order(spec)
    return _cpl(spec.p, q, spec.b, spec.c, spec.d, NestedSumSpec(spec.inner), order)


def _default_order(spec: PochhammerSumSpec) -> int:
    q_abs = abs(spec.p.denominator)
    return spec.weight + q_abs * (abs(spec.d) + abs(spec.b) + 3) + 10


def _cpl(p: Fraction, q: int, b: int, c: int, d: int, inner: NestedSumSpec, order: int):
    q_abs = abs(q)
    sgn = 1 if q > 0 else -1
    if c > 0:
        sub = _cpl(p, q, b, c - 1, d, inner, order)
        integrand = _scale_rational(sub, q_abs, q_abs - 1, b - 1, F(1))
        G = integrate_chain_from_one(integrand, order=order)
        return _scale_rational(G, q_abs, 0, -b, F(-q_abs))
    if len(inner) > 0:
        head, rest = inner[0], NestedSumSpec(inner[1:])
        assert head.a == 1 and head.b == 0 and head.c > 0
        sub = _cpl(p, q, 0, head.c, d - 1, rest, order)
        integrand = _scale_rational(sub, q_abs, sgn - 1 - d * q_abs, d - 1, F(1))
        G = integrate_chain_from_one(integrand, order=order)
        out = _scale_rational(G, q_abs, 0, 0, F(-q_abs))
        if d < 0:
            boundary = pochhammer(p, -d) * nested_sum_value(inner, -d)
            if boundary != 0:
                out = out + [chain_term(boundary)]
        # pre(tau) = tau^{|q|d - sgn} (1-tau^{|q|})^{-d}
        return _scale_rational(out, q_abs, q_abs * d - sgn, -d, F(1))
    # base cases, c = 0, no inner
    if d < 0:
        cf = [chain_term(pochhammer(p, -d))]
        return _scale_rational(cf, q_abs, q_abs * d - sgn, -d, F(1))
    if d == 0:
        # tau^{-sgn} - 1
        if sgn > 0:
            return merge_chain(
                [
                    chain_term(1, den=FactoredDen.make(1)),
                    chain_term(-1),
                ]
            )
        return merge_chain([chain_term(1, num=Poly.monomial(1)), chain_term(-1)])
    # d > 0
    integrand = [chain_term(1)]
    integrand = _scale_rational(integrand, q_abs, sgn - 1 - d * q_abs, d, F(1))
    G = integrate_chain_from_one(integrand, order=order)
    G = _scale_rational(G, q_abs, q_abs * d - sgn, -d, F(-sgn, math.factorial(d)))
    return G


def cpl_closed_form(spec: PochhammerSumSpec, order: int | None = None) -> ConstExpr:
    """Exact value of the sum at x = 1 as a ConstExpr in H_w(1) symbols.

    Requires spec.x == 1 and convergence (validate separately); tau(1) = 0,
    so this is the exact limit of G at 0, with all pole/log cancellation
    asserted."""
    if spec.x != 1:
        raise NotInSubclass("closed form via CPL rewrite requires x = 1")
    if order is None:
        order = _default_order(spec)
    G = rewrite_to_cpl(spec, order=order)
    return chain_value_at_zero(G, order=order)


def cpl_eval_x(spec: PochhammerSumSpec, x, dps: int) -> mpmath.mpf:
    """Numeric value of the generating function at 0 < x < 1 via G(tau)."""
    q_abs = abs(spec.p.denominator)
    with mp.workdps(dps + 10):
        xf = F(x)
        tau = (1 - mp.mpf(xf.numerator) / xf.denominator) ** (mp.mpf(1) / q_abs)
        G = rewrite_to_cpl(spec)
        return chain_eval_mp(G, tau, dps)
