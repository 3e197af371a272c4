"""Oracle-level tests for exact sum specifications and term arithmetic.

Frozen values here were computed independently (by hand or by a one-off exact
Fraction computation) before being written down.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pochsum.errors import SpecValidationError
from pochsum.sums import (
    CycloIndex,
    NestedSumSpec,
    PochhammerSumSpec,
    S,
    nested_sum_value,
    partial_sum,
    pochhammer,
    term_exact,
    validate_spec,
)

F = Fraction


class TestNestedSumValue:
    def test_plain_s2(self):
        # S_2(3) = 1 + 1/4 + 1/9
        assert nested_sum_value(S(2), 3) == F(49, 36)

    def test_cyclotomic_single(self):
        # S_{(2,1,1)}(2) = 1/3 + 1/5
        assert nested_sum_value(NestedSumSpec([(2, 1, 1)]), 2) == F(8, 15)

    def test_nested_s11(self):
        # S_{1,1}(2) = 1*S_1(1) + (1/2)*S_1(2) = 1 + 3/4
        assert nested_sum_value(S(1, 1), 2) == F(7, 4)

    def test_alternating(self):
        # S_{-1}(2) = -1 + 1/2
        assert nested_sum_value(S(-1), 2) == F(-1, 2)

    def test_empty_is_one(self):
        assert nested_sum_value(NestedSumSpec(), 5) == 1
        assert nested_sum_value(NestedSumSpec(), 0) == 1

    def test_zero_argument(self):
        assert nested_sum_value(S(3), 0) == 0

    @given(n=st.integers(1, 30))
    def test_s1_is_harmonic_number(self, n):
        assert nested_sum_value(S(1), n) == sum(F(1, i) for i in range(1, n + 1))

    @given(n=st.integers(1, 20))
    def test_quasi_shuffle_s1_squared(self, n):
        # S_1(n)^2 = 2 S_{1,1}(n) - S_2(n)  (stuffle relation)
        s1 = nested_sum_value(S(1), n)
        assert s1 * s1 == 2 * nested_sum_value(S(1, 1), n) - nested_sum_value(S(2), n)

    @given(n=st.integers(1, 15))
    def test_quasi_shuffle_s1_s2(self, n):
        # S_1 S_2 = S_{1,2} + S_{2,1} - S_3
        lhs = nested_sum_value(S(1), n) * nested_sum_value(S(2), n)
        rhs = (
            nested_sum_value(S(1, 2), n)
            + nested_sum_value(S(2, 1), n)
            - nested_sum_value(S(3), n)
        )
        assert lhs == rhs

    @given(n=st.integers(1, 25))
    def test_monotone_weights(self, n):
        # S increases with n for positive indices
        assert nested_sum_value(S(2), n + 1) > nested_sum_value(S(2), n)


class TestCycloIndexValidation:
    def test_bad_a(self):
        with pytest.raises(SpecValidationError):
            CycloIndex(0, 0, 1)

    def test_bad_b(self):
        with pytest.raises(SpecValidationError):
            CycloIndex(2, 2, 1)

    def test_zero_c(self):
        with pytest.raises(SpecValidationError):
            CycloIndex(1, 0, 0)

    def test_alternating_only_plain(self):
        with pytest.raises(SpecValidationError):
            CycloIndex(2, 1, -1)


class TestPochhammer:
    def test_small(self):
        assert pochhammer(F(1, 2), 3) == F(1, 2) * F(3, 2) * F(5, 2)
        assert pochhammer(F(-1, 2), 2) == F(-1, 2) * F(1, 2)
        assert pochhammer(F(3), 0) == 1

    @given(n=st.integers(0, 12))
    def test_integer_pochhammer_is_factorial_ratio(self, n):
        import math

        assert pochhammer(F(1), n) == math.factorial(n)

    @given(n=st.integers(1, 12))
    def test_recurrence(self, n):
        p = F(2, 3)
        assert pochhammer(p, n) == pochhammer(p, n - 1) * (p + n - 1)


class TestTermExact:
    def test_running_example_terms(self):
        # sum_n (-1/2)_n S_1(n) / ((n+3)^2 (n-1)!)  at x = 1
        spec = PochhammerSumSpec(
            x=F(1), p=F(-1, 2), a=1, b=3, c=2, d=-1, inner=S(1)
        )
        assert term_exact(spec, 1) == F(-1, 32)
        assert term_exact(spec, 2) == F(-3, 200)
        assert partial_sum(spec, 2) == F(-37, 800)

    def test_negative_factorial_zero(self):
        spec = PochhammerSumSpec(x=F(1), p=F(-1, 2), a=1, b=0, c=2, d=-3, inner=S(1))
        assert term_exact(spec, 1) == 0
        assert term_exact(spec, 2) == 0
        assert term_exact(spec, 3) != 0

    @given(n=st.integers(1, 40))
    @settings(max_examples=30)
    def test_partial_sum_matches_terms(self, n):
        spec = PochhammerSumSpec(x=F(1, 2), p=F(1, 2), a=2, b=1, c=1, d=0, inner=S(2))
        assert partial_sum(spec, n) == sum(term_exact(spec, k) for k in range(1, n + 1))


class TestValidateSpec:
    def test_convergent_at_one(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=1, b=1, c=1, d=1, inner=S(1))
        v = validate_spec(spec)
        assert v.converges_abs and not v.terminating

    def test_divergent_at_one(self):
        # c + d - p = 0 + 0 - 1/2 < 0
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=1, b=0, c=0, d=0)
        with pytest.raises(SpecValidationError):
            validate_spec(spec)

    def test_boundary_divergence(self):
        # c + d - p = 1 + 0 - 1 = 0: harmonic-like divergence at x=1
        spec = PochhammerSumSpec(x=F(1), p=F(1), a=1, b=0, c=1, d=0)
        with pytest.raises(SpecValidationError):
            validate_spec(spec)

    def test_x_gt_one(self):
        spec = PochhammerSumSpec(x=F(3, 2), p=F(1, 2), a=1, b=0, c=5, d=5)
        with pytest.raises(SpecValidationError):
            validate_spec(spec)

    def test_terminating_always_ok(self):
        spec = PochhammerSumSpec(x=F(2), p=F(-3), a=1, b=0, c=0, d=0)
        assert validate_spec(spec).terminating

    def test_negative_c(self):
        spec = PochhammerSumSpec(x=F(1, 2), p=F(1, 2), c=-1)
        with pytest.raises(SpecValidationError):
            validate_spec(spec)

    def test_first_n(self):
        spec = PochhammerSumSpec(x=F(1), p=F(1, 2), a=1, b=0, c=5, d=-4)
        assert validate_spec(spec).first_n == 4
