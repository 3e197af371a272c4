"""Tests for the generalized log-power series engine."""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from pochsum.errors import SeriesSingularity
from pochsum.logseries import (
    LogSeries,
    binomial_series,
    compose_plain,
    one_minus_t_power,
    poly_frac_power,
)

F = Fraction


def geometric(order):
    """1/(1-t) as a plain series."""
    return LogSeries({(F(k), 0): F(1) for k in range(order)}, order)


class TestArithmetic:
    def test_add_cancel(self):
        a = LogSeries({(F(1), 0): F(2)}, 10)
        b = LogSeries({(F(1), 0): F(-2)}, 10)
        assert (a + b).is_zero()

    def test_mul_geometric(self):
        g = geometric(8)
        sq = g * g
        # 1/(1-t)^2 = sum (k+1) t^k
        for k in range(8):
            assert sq.terms[(F(k), 0)] == k + 1

    def test_mul_logs(self):
        a = LogSeries.monomial(F(-1, 2), F(1), logpow=1, order=5)
        b = LogSeries.monomial(F(1, 2), F(3), logpow=2, order=5)
        prod = a * b
        assert prod.terms[(F(0), 3)] == 3

    def test_inverse(self):
        g = geometric(10)
        inv = g.inverse()
        assert inv.terms == {(F(0), 0): F(1), (F(1), 0): F(-1)}

    def test_inverse_roundtrip(self):
        s = LogSeries({(F(-1), 0): F(2), (F(0), 0): F(1), (F(2), 0): F(-3)}, 6)
        prod = s * s.inverse()
        assert prod.terms == {(F(0), 0): F(1)}

    def test_inverse_log_lead_raises(self):
        s = LogSeries({(F(0), 1): F(1)}, 5)
        with pytest.raises(SeriesSingularity):
            s.inverse()


class TestIntegration:
    def test_plain_rule(self):
        s = LogSeries({(F(2), 0): F(3)}, 10)
        assert s.integrate().terms == {(F(3), 0): F(1)}

    def test_dlog_rule(self):
        s = LogSeries({(F(-1), 0): F(1)}, 10)
        assert s.integrate().terms == {(F(0), 1): F(1)}

    def test_log_power_rule(self):
        s = LogSeries({(F(-1), 2): F(1)}, 10)
        assert s.integrate().terms == {(F(0), 3): F(1, 3)}

    def test_by_parts(self):
        # integral t log t dt = t^2/2 log t - t^2/4
        s = LogSeries({(F(1), 1): F(1)}, 10)
        assert s.integrate().terms == {(F(2), 1): F(1, 2), (F(2), 0): F(-1, 4)}

    @given(
        e=st.fractions(min_value=-3, max_value=3, max_denominator=4),
        k=st.integers(0, 3),
    )
    @settings(max_examples=40)
    def test_derivative_inverts_integrate(self, e, k):
        s = LogSeries({(F(e), k): F(5, 3)}, e + 10)
        again = s.integrate().derivative()
        assert again.terms == s.terms

    def test_numeric_check_integrate(self):
        # d/dt of the antiderivative equals the integrand numerically
        mp.dps = 30
        s = LogSeries({(F(-1, 2), 1): F(2), (F(-1), 0): F(1), (F(1), 2): F(-3)}, 10)
        anti = s.integrate()
        h = mp.mpf("1e-12")
        t0 = mp.mpf("0.37")
        num_deriv = (anti.eval_mp(t0 + h) - anti.eval_mp(t0 - h)) / (2 * h)
        assert abs(num_deriv - s.eval_mp(t0)) < mp.mpf("1e-10")


class TestConstantTerm:
    def test_clean(self):
        s = LogSeries({(F(0), 0): F(7), (F(1), 2): F(1)}, 5)
        assert s.constant_term() == 7

    def test_pole_raises(self):
        s = LogSeries({(F(-1), 0): F(1)}, 5)
        with pytest.raises(SeriesSingularity):
            s.constant_term()

    def test_log_raises(self):
        s = LogSeries({(F(0), 1): F(1)}, 5)
        with pytest.raises(SeriesSingularity):
            s.constant_term()


class TestPowersAndCompose:
    def test_binomial_vs_mpmath(self):
        mp.dps = 30
        s = binomial_series(F(-1, 2), 40)
        t = mp.mpf("0.3")
        assert abs(s.eval_mp(t) - (1 + t) ** mp.mpf("-0.5")) < mp.mpf("1e-15")

    def test_one_minus_t_power_integer(self):
        s = one_minus_t_power(F(3), 10)
        # (1-t)^3
        assert s.terms == {
            (F(0), 0): 1,
            (F(1), 0): -3,
            (F(2), 0): 3,
            (F(3), 0): -1,
        }

    def test_compose(self):
        # 1/(1-(t+t^2)) via composing geometric with t+t^2
        inner = LogSeries({(F(1), 0): F(1), (F(2), 0): F(1)}, 12)
        out = compose_plain(geometric(12), inner)
        mp.dps = 25
        t = mp.mpf("0.1")
        assert abs(out.eval_mp(t) - 1 / (1 - t - t**2)) < mp.mpf("1e-9")

    def test_poly_frac_power(self):
        mp.dps = 30
        # (t^2 (1 - t))^(1/2) = t (1-t)^(1/2)
        s = poly_frac_power([0, 0, 1, -1], F(1, 2), 30)
        t = mp.mpf("0.4")
        ref = t * mpmath.sqrt(1 - t)
        assert abs(s.eval_mp(t) - ref) < mp.mpf("1e-12")
        assert s.min_exp() == 1

    def test_poly_frac_power_nonmonic_integer_ok(self):
        s = poly_frac_power([2, 2], F(2), 10)  # (2 + 2t)^2
        assert s.terms == {(F(0), 0): 4, (F(1), 0): 8, (F(2), 0): 4}

    def test_poly_frac_power_nonmonic_frac_raises(self):
        with pytest.raises(SeriesSingularity):
            poly_frac_power([2, 1], F(1, 2), 10)
