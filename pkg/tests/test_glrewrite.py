"""Tests for the iterated-integral (GL) rewrite of Pochhammer sums.

The decisive invariant: the exact power series of the GL expression equals
the exact terms of the original sum, coefficient by coefficient.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pochsum.errors import NotInSubclass
from pochsum.glrewrite import (
    PowTerm,
    gl_coefficients,
    gl_derivative,
    gl_ode_residual_c_peel,
    gl_ode_residual_inner_peel,
    ii_is_zero,
    rewrite_to_gl,
    _gl,
)
from pochsum.sums import NestedSumSpec, PochhammerSumSpec, S, term_exact

F = Fraction


def coefficients_match(spec: PochhammerSumSpec, n_max: int = 16) -> bool:
    expr = rewrite_to_gl(spec)
    coeffs = gl_coefficients(expr, n_max)
    # gl works on the generating function: compare against terms at x = 1
    probe = PochhammerSumSpec(
        x=F(1), p=spec.p, a=spec.a, b=spec.b, c=spec.c, d=spec.d, inner=spec.inner
    )
    return coeffs == [term_exact(probe, n) for n in range(1, n_max + 1)]


class TestBaseCases:
    def test_d_negative(self):
        # sum x^n (p)_n/(n-2)! = (p)_2 x^2 (1-x)^{-2-p}
        spec = PochhammerSumSpec(x=F(1), p=F(-1, 2), d=-2)
        assert coefficients_match(spec)

    def test_d_zero(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 3), d=0)
        assert coefficients_match(spec)

    def test_d_positive(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=3)
        assert coefficients_match(spec)

    def test_c_peel_only(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=2, b=1, c=2, d=1)
        assert coefficients_match(spec)

    def test_negative_b(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=2, b=-1, c=1, d=1)
        assert coefficients_match(spec)


class TestInnerPeel:
    def test_s1_d0(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=1, inner=S(1))
        assert coefficients_match(spec)

    def test_s2_cyclotomic_inner(self):
        spec = PochhammerSumSpec(
            x=F(1), p=F(1, 3), d=1, inner=NestedSumSpec([(2, 1, 1)])
        )
        assert coefficients_match(spec)

    def test_nested_s11(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=1, inner=S(1, 1))
        assert coefficients_match(spec)

    def test_running_example(self):
        spec = PochhammerSumSpec(x=F(1), p=F(-1, 2), a=1, b=3, c=2, d=-1, inner=S(1))
        assert coefficients_match(spec, 20)

    def test_boundary_term_d_negative(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=-2, inner=S(2))
        assert coefficients_match(spec)

    def test_deep_weight(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=1, b=1, c=1, d=1, inner=S(2, 1))
        assert coefficients_match(spec, 12)

    def test_alternating_rejected(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=1, inner=S(-1))
        with pytest.raises(NotInSubclass):
            rewrite_to_gl(spec)

    @given(
        p_num=st.integers(-3, 3).filter(lambda v: v != 0),
        d=st.integers(-2, 2),
        c1=st.integers(1, 2),
    )
    @settings(max_examples=15, deadline=None)
    def test_random_specs(self, p_num, d, c1):
        spec = PochhammerSumSpec(
            x=F(1), p=F(p_num, 4), d=d, inner=S(c1)
        )
        assert coefficients_match(spec, 10)


class TestODEResiduals:
    def test_inner_peel_ode(self):
        # y = inner-peel result for (p, d, inner=S(1)); residual must vanish
        p, d = F(1, 2), 1
        result = _gl(p, 1, 0, 0, d, S(1))
        sub = _gl(p, 1, 0, 1, d - 1, NestedSumSpec())
        resid = gl_ode_residual_inner_peel(result, sub, p, d)
        assert ii_is_zero(resid)

    def test_inner_peel_ode_negative_d(self):
        p, d = F(-1, 2), -1
        result = _gl(p, 1, 0, 0, d, S(1))
        sub = _gl(p, 1, 0, 1, d - 1, NestedSumSpec())
        resid = gl_ode_residual_inner_peel(result, sub, p, d)
        assert ii_is_zero(resid)

    def test_c_peel_ode(self):
        p, a, b = F(1, 2), 2, 1
        result = _gl(p, a, b, 2, 1, NestedSumSpec())
        sub = _gl(p, a, b, 1, 1, NestedSumSpec())
        resid = gl_ode_residual_c_peel(result, sub, a, b)
        assert ii_is_zero(resid)

    def test_ii_is_zero_detects_nonzero(self):
        expr = _gl(F(1, 2), 1, 0, 0, 1, S(1))
        assert not ii_is_zero(expr)


class TestDerivative:
    def test_series_consistency(self):
        # series(d/dx expr) == d/dx series(expr)
        from pochsum.glrewrite import gl_series

        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), d=1, inner=S(1))
        expr = rewrite_to_gl(spec)
        order = 12
        lhs = gl_series(gl_derivative(expr), order - 1)
        rhs = gl_series(expr, order).derivative().truncate(order - 1)
        assert (lhs.truncate(order - 2) - rhs.truncate(order - 2)).is_zero()


class TestPowTerm:
    def test_mul(self):
        a = PowTerm(F(2), F(1, 2), F(-1))
        b = PowTerm(F(3), F(-3, 2), F(2))
        assert a.mul(b) == PowTerm(F(6), F(-1), F(1))

    def test_series(self):
        s = PowTerm(F(2), F(-1), F(1)).series(4)  # 2 (1-t)/t
        assert s.terms == {(F(-1), 0): F(2), (F(0), 0): F(-2)}
