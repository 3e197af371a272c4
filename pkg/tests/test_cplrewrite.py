"""Tests for the CPL rewrite pipeline (cplrewrite.py)."""

from fractions import Fraction as F

import pytest
from mpmath import mp

from pochsum.cpl import parse_h_symbol, value_at_one
from pochsum.cplrewrite import (
    check_subclass,
    cpl_closed_form,
    cpl_eval_x,
    rewrite_to_cpl,
)
from pochsum.constexpr import ConstExpr
from pochsum.errors import NotInSubclass
from pochsum.numerics import eval_constant, eval_sum_numeric
from pochsum.sums import CycloIndex, NestedSumSpec, PochhammerSumSpec, S


def P(x, p, a, b, c, d, inner=S()):
    return PochhammerSumSpec(x=F(x), p=F(p), a=a, b=b, c=c, d=d, inner=inner)


def eval_constexpr(expr: ConstExpr, dps: int):
    with mp.workdps(dps + 10):
        vals = {s: value_at_one(parse_h_symbol(s), dps) for s in expr.symbols()}
        return expr.eval_mp(vals)


# ---------------------------------------------------------------------------
# subclass membership
# ---------------------------------------------------------------------------


def test_check_subclass_accepts_unit_fraction_p():
    assert check_subclass(P(1, F(1, 2), 1, 0, 1, 1)) == 2
    assert check_subclass(P(1, F(-1, 3), 1, 2, 0, 2, S(1))) == -3


def test_check_subclass_rejects_general_p():
    with pytest.raises(NotInSubclass):
        check_subclass(P(1, F(3, 4), 1, 0, 1, 1))


def test_check_subclass_rejects_a_not_one():
    with pytest.raises(NotInSubclass):
        check_subclass(P(1, F(1, 2), 2, 1, 1, 1))


def test_check_subclass_rejects_cyclotomic_inner():
    inner = NestedSumSpec((CycloIndex(2, 1, 1),))
    with pytest.raises(NotInSubclass):
        check_subclass(P(1, F(1, 2), 1, 0, 1, 1, inner))


def test_check_subclass_rejects_alternating_inner():
    with pytest.raises(NotInSubclass):
        check_subclass(P(1, F(1, 2), 1, 0, 1, 1, S(-1)))


# ---------------------------------------------------------------------------
# the worked example: sum (-1/2)_n S_1(n) / ((n+3)^2 (n-1)!) at x = 1
# ---------------------------------------------------------------------------

WORKED = P(1, F(-1, 2), 1, 3, 2, -1, S(1))


def test_worked_example_h_representation():
    expr = cpl_closed_form(WORKED)
    h20 = ConstExpr.symbol("H[(2,0)]")
    h00_10 = ConstExpr.symbol("H[(0,0),(1,0)]")
    h20_00 = ConstExpr.symbol("H[(2,0),(0,0)]")
    h20_10 = ConstExpr.symbol("H[(2,0),(1,0)]")
    expected = (
        ConstExpr.rational(F(-9367, 7350))
        + h20 * F(-64, 3675)
        + h00_10 * F(-32, 35)
        + h20_00 * F(-32, 35)
        + h20_10 * F(64, 35)
    )
    assert expr == expected


def test_worked_example_closed_form_value():
    # H values at 1 here reduce to pi^2, log(2): value is
    # (-9367 + 560 pi^2 + 6720 log(2)^2 - 128 log(2)) / 7350
    expr = cpl_closed_form(WORKED)
    with mp.workdps(70):
        lhs = eval_constexpr(expr, 60)
        pi = eval_constant("pi", 65)
        l2 = eval_constant("l2", 65)
        rhs = (-9367 + 560 * pi**2 + 6720 * l2**2 - 128 * l2) / 7350
        assert abs(lhs - rhs) < mp.mpf(10) ** -55


def test_worked_example_matches_independent_sum():
    expr = cpl_closed_form(WORKED)
    with mp.workdps(60):
        lhs = eval_constexpr(expr, 50)
        rhs = eval_sum_numeric(WORKED, 45)
        assert abs(lhs - rhs.value) < mp.mpf(10) ** -44


# ---------------------------------------------------------------------------
# base cases against the direct sum
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec",
    [
        P(1, F(1, 2), 1, 0, 1, 1),            # c-peel + d>0 base
        P(1, F(-1, 2), 1, 0, 1, 0),           # d=0 base
        P(1, F(-1, 2), 1, 1, 2, 0),           # two c-peels
        P(1, F(1, 2), 1, 2, 2, -1),           # d<0 base, q>0
        P(1, F(-1, 3), 1, 0, 1, 1),           # |q|=3
        P(1, F(1, 3), 1, 1, 2, 1),            # |q|=3, q>0
    ],
)
def test_no_inner_cases_match_numerics(spec):
    expr = cpl_closed_form(spec)
    with mp.workdps(50):
        lhs = eval_constexpr(expr, 40)
        rhs = eval_sum_numeric(spec, 35)
        assert abs(lhs - rhs.value) < mp.mpf(10) ** -34


@pytest.mark.parametrize(
    "spec",
    [
        P(1, F(-1, 2), 1, 0, 1, 1, S(1)),     # inner-peel d>=0
        P(1, F(-1, 2), 1, 0, 2, -1, S(2)),    # inner-peel with boundary term
        P(1, F(1, 2), 1, 1, 1, 1, S(1, 1)),   # depth-2 inner
        P(1, F(-1, 2), 1, 0, 1, 2, S(2, 1)),  # mixed-weight inner
        P(1, F(1, 3), 1, 0, 2, 0, S(1)),      # |q|=3 with inner
    ],
)
def test_inner_cases_match_numerics(spec):
    expr = cpl_closed_form(spec)
    with mp.workdps(50):
        lhs = eval_constexpr(expr, 40)
        rhs = eval_sum_numeric(spec, 35)
        assert abs(lhs - rhs.value) < mp.mpf(10) ** -34


# ---------------------------------------------------------------------------
# generating function at interior points
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec,x",
    [
        (P(1, F(-1, 2), 1, 3, 2, -1, S(1)), F(3, 4)),
        (P(1, F(1, 2), 1, 1, 1, 1, S(1)), F(1, 2)),
        (P(1, F(-1, 3), 1, 0, 1, 1), F(2, 3)),
    ],
)
def test_generating_function_interior(spec, x):
    direct = eval_sum_numeric(
        PochhammerSumSpec(x=x, p=spec.p, a=spec.a, b=spec.b, c=spec.c, d=spec.d, inner=spec.inner),
        30,
    )
    gf = cpl_eval_x(spec, x, 30)
    with mp.workdps(40):
        assert abs(direct.value - gf) < mp.mpf(10) ** -28


def test_rewrite_words_are_convergent():
    from pochsum.cpl import is_convergent_at_one

    expr = cpl_closed_form(WORKED)
    for sym in expr.symbols():
        assert is_convergent_at_one(parse_h_symbol(sym))


def test_closed_form_requires_x_equal_one():
    with pytest.raises(NotInSubclass):
        cpl_closed_form(P(F(1, 2), F(-1, 2), 1, 3, 2, -1, S(1)))
