"""Rewrite of Pochhammer sums into iterated integrals over hyperexponential
letters (the "GL representation").

The generating function Sum(x) = sum_n x^n (p)_n S(n)/((an+b)^c (n+d)!) is
rewritten by four rules (all identities in the formal power series ring):

  base, d<0 : Sum = (p)_{-d} x^{-d} (1-x)^{d-p}
  base, d=0 : Sum = (1-x)^{-p} - 1
  base, d>0 : Sum = (1-x)^{d-p} p/(d! x^d) * int_0^x (1-t)^{p-d-1} t^d dt
  c-peel    : Sum = x^{-b/a}/a * int_0^x t^{b/a-1} Sum_{c-1}(t) dt
  inner-peel (c=0, inner sum S = sum_i f(i) with outer layer (a1,b1,c1)):
    d>=0: Sum = (1-x)^{d-p} x^{-d} int_0^x t^{d-1}(1-t)^{p-d-1} Sub(t) dt
    d<0 : Sum = (1-x)^{d-p} x^{-d} [ (p)_{-d} S(-d)
                 + int_0^x t^{d-1}(1-t)^{p-d-1} Sub(t) dt ]
    where Sub = sum_n t^n (p)_n f(n)/(n+d-1)!, i.e. the spec
    (p, a1, b1, c1, d-1, rest).

Letters and prefactors share one shape c * t^alpha (1-t)^beta (PowTerm);
wrapping a new integral absorbs the previous level's prefactor into the new
leading letter.  Validation: exact series of the total expression must equal
the exact sum terms (tests), and each lemma application satisfies its
defining first-order ODE exactly (gl_ode_residual == 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotInSubclass, SeriesSingularity
from .logseries import LogSeries, one_minus_t_power
from .polys import Poly
from .sums import (
    NestedSumSpec,
    PochhammerSumSpec,
    nested_sum_value,
    pochhammer,
)

F = Fraction


@dataclass(frozen=True)
class PowTerm:
    """c * v^tpow * (1-v)^upow  (v is x for prefactors, t for letters)."""

    c: Fraction
    tpow: Fraction = F(0)
    upow: Fraction = F(0)

    def __post_init__(self):
        object.__setattr__(self, "c", F(self.c))
        object.__setattr__(self, "tpow", F(self.tpow))
        object.__setattr__(self, "upow", F(self.upow))

    def mul(self, other: "PowTerm") -> "PowTerm":
        return PowTerm(self.c * other.c, self.tpow + other.tpow, self.upow + other.upow)

    def scale(self, c: Fraction) -> "PowTerm":
        return PowTerm(self.c * c, self.tpow, self.upow)

    def is_zero(self) -> bool:
        return self.c == 0

    def series(self, order: int) -> LogSeries:
        s = one_minus_t_power(self.upow, order).scale(self.c)
        return s.shift(self.tpow)

    def __repr__(self):
        bits = [str(self.c)]
        if self.tpow:
            bits.append(f"v^{self.tpow}")
        if self.upow:
            bits.append(f"(1-v)^{self.upow}")
        return "*".join(bits)


@dataclass(frozen=True)
class IITerm:
    """pre(x) * G(word; x), the iterated integral int_0^x l1(t) G(rest; t) dt."""

    pre: PowTerm
    word: tuple[PowTerm, ...] = ()


IIExpr = list  # list[IITerm]


def ii_scale(expr: IIExpr, c: Fraction) -> IIExpr:
    return [IITerm(t.pre.scale(c), t.word) for t in expr]


def _wrap(pre_new: PowTerm, letter: PowTerm, inner: IIExpr) -> IIExpr:
    """pre_new(x) * int_0^x letter(t) * inner(t) dt  as an IIExpr.

    The inner terms' prefactors are absorbed into the new leading letter."""
    out = []
    for t in inner:
        out.append(IITerm(pre_new, (letter.mul(t.pre),) + t.word))
    return out


def rewrite_to_gl(spec: PochhammerSumSpec) -> IIExpr:
    """GL representation of the generating function of spec (in x).

    The result represents sum_n x^n (p)_n S(n)/((an+b)^c (n+d)!); substitute
    the spec's x value only at evaluation time."""
    return _gl(spec.p, spec.a, spec.b, spec.c, spec.d, NestedSumSpec(spec.inner))


def _gl(p: Fraction, a: int, b: int, c: int, d: int, inner: NestedSumSpec) -> IIExpr:
    if c > 0:
        sub = _gl(p, a, b, c - 1, d, inner)
        pre = PowTerm(F(1, a), F(-b, a), F(0))
        letter = PowTerm(F(1), F(b, a) - 1, F(0))
        return _wrap(pre, letter, sub)
    if len(inner) > 0:
        head, rest = inner[0], NestedSumSpec(inner[1:])
        if head.c < 0:
            raise NotInSubclass(
                "alternating inner sums are not supported by the symbolic rewrite"
            )
        sub = _gl(p, head.a, head.b, head.c, d - 1, rest)
        pre = PowTerm(F(1), F(-d), F(d) - p)
        letter = PowTerm(F(1), F(d - 1), p - d - 1)
        out = _wrap(pre, letter, sub)
        if d < 0:
            boundary = pochhammer(p, -d) * nested_sum_value(inner, -d)
            if boundary != 0:
                out.append(IITerm(pre.scale(boundary)))
        return out
    # base cases: c = 0, no inner sum
    if d < 0:
        return [IITerm(PowTerm(pochhammer(p, -d), F(-d), F(d) - p))]
    if d == 0:
        return [IITerm(PowTerm(F(1), F(0), -p)), IITerm(PowTerm(F(-1)))]
    pre = PowTerm(p / F(math.factorial(d)), F(-d), F(d) - p)
    letter = PowTerm(F(1), F(d), p - d - 1)
    return [IITerm(pre, (letter,))]


# ---------------------------------------------------------------------------
# exact series evaluation
# ---------------------------------------------------------------------------


def _word_series(word: tuple[PowTerm, ...], order: int) -> LogSeries:
    """Exact series at 0 of G(word; x) with formal-primitive regularization."""
    if not word:
        return LogSeries({(F(0), 0): F(1)}, order)
    inner = _word_series(word[1:], order)
    integrand = word[0].series(order) * inner
    return integrand.truncate(order - 1).integrate().truncate(order)


def gl_series(expr: IIExpr, order: int) -> LogSeries:
    """Exact series of the full GL expression; per-term fractional powers and
    logs must cancel in the total (the result must be a plain power series
    with zero constant term) — asserted via SeriesSingularity."""
    total = LogSeries.zero(order)
    for t in expr:
        # negative powers of x in the prefactor and of t in the letters push
        # the truncation point down; work at a higher internal order
        slack = max(0, -math.floor(t.pre.tpow))
        for letter in t.word:
            slack += max(0, -math.floor(letter.tpow)) + 1
        n = order + slack
        total = total + (t.pre.series(n) * _word_series(t.word, n)).truncate(order)
    total = total.truncate(order)
    if not total.is_plain():
        bad = [ek for ek in total.terms if ek[1] != 0 or ek[0].denominator != 1 or ek[0] < 0]
        raise SeriesSingularity(f"GL series not plain: surviving terms {bad[:6]}")
    return total


def gl_coefficients(expr: IIExpr, n_max: int) -> list[Fraction]:
    """Coefficients of x^1..x^n_max of the GL expression, exact."""
    s = gl_series(expr, n_max + 1)
    return [s.terms.get((F(n), 0), F(0)) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# exact derivative and ODE residual checks
# ---------------------------------------------------------------------------


def gl_derivative(expr: IIExpr) -> IIExpr:
    """d/dx of the expression: product rule on the prefactor power product
    plus first-letter peel of the iterated integral."""
    out: list[IITerm] = []
    for t in expr:
        pre = t.pre
        if pre.tpow != 0:
            out.append(IITerm(PowTerm(pre.c * pre.tpow, pre.tpow - 1, pre.upow), t.word))
        if pre.upow != 0:
            out.append(IITerm(PowTerm(-pre.c * pre.upow, pre.tpow, pre.upow - 1), t.word))
        if t.word:
            out.append(IITerm(pre.mul(t.word[0]), t.word[1:]))
    return out


def ii_mul_powterm(expr: IIExpr, f: PowTerm) -> IIExpr:
    return [IITerm(t.pre.mul(f), t.word) for t in expr]


def ii_is_zero(expr: IIExpr) -> bool:
    """Exact zero test: group terms by word, then check that each word's
    prefactor sum vanishes identically.

    Within a group, terms are classed by the fractional parts of the two
    exponents; each class's sum c x^(g+i) (1-x)^(h+j) is, after factoring out
    minimal powers, a polynomial in x that must be identically zero.
    """
    groups: dict[tuple, list[PowTerm]] = {}
    for t in expr:
        groups.setdefault(t.word, []).append(t.pre)
    for pres in groups.values():
        classes: dict[tuple, list[PowTerm]] = {}
        for pre in pres:
            if pre.c == 0:
                continue
            key = (pre.tpow - math.floor(pre.tpow), pre.upow - math.floor(pre.upow))
            classes.setdefault(key, []).append(pre)
        for cls in classes.values():
            tmin = min(p.tpow for p in cls)
            umin = min(p.upow for p in cls)
            poly = Poly()
            for p in cls:
                i = int(p.tpow - tmin)
                j = int(p.upow - umin)
                poly = poly + Poly.monomial(i, p.c) * (Poly([1, -1]) ** j)
            if not poly.is_zero():
                return False
    return True


def gl_ode_residual_inner_peel(
    result: IIExpr, sub: IIExpr, p: Fraction, d: int
) -> IIExpr:
    """Residual of the inner-peel lemma's ODE, multiplied through by x(1-x):

        x(1-x) y' - (p x - d) y - Sub(x)  =  0

    where y = result and Sub is the peeled subsum's GL expression."""
    x_one_minus_x_dy = ii_mul_powterm(gl_derivative(result), PowTerm(F(1), F(1), F(1)))
    px_y = ii_mul_powterm(result, PowTerm(-p, F(1), F(0)))
    d_y = ii_mul_powterm(result, PowTerm(F(d)))
    return x_one_minus_x_dy + px_y + d_y + ii_scale(sub, F(-1))


def gl_ode_residual_c_peel(result: IIExpr, sub: IIExpr, a: int, b: int) -> IIExpr:
    """Residual of the c-peel lemma's ODE, multiplied through by a x:

        a x y' + b y - Sub(x)  =  0

    (d/dx of x^{-b/a}/a int_0^x t^{b/a-1} Sub(t) dt gives -b/(ax) y +
    Sub/(ax))."""
    ax_dy = ii_mul_powterm(gl_derivative(result), PowTerm(F(a), F(1), F(0)))
    b_y = ii_mul_powterm(result, PowTerm(F(b)))
    return ax_dy + b_y + ii_scale(sub, F(-1))
