"""End-to-end pipeline: routing, verification, reporting."""

from fractions import Fraction as F

import pytest
from mpmath import mp

from pochsum.pipeline import PipelineOptions, run_pipeline
from pochsum.sums import S, PochhammerSumSpec


def P(x, p, a=1, b=0, c=0, d=0, inner=()):
    return PochhammerSumSpec(x=F(x), p=F(p), a=a, b=b, c=c, d=d, inner=S(*inner))


RUNNING_EXAMPLE = P(1, F(-1, 2), 1, 3, 2, -1, (1,))


class TestGLPath:
    def test_running_example_numeric(self):
        opts = PipelineOptions(precision=40, tolerance_digits=30, mode="gl")
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert res.path == "gl-numeric"
        assert res.verification.verdict == "pass"
        with mp.workdps(50):
            pi, l2 = mp.pi, mp.log(2)
            truth = (-9367 + 560 * pi**2 + 6720 * l2**2 - 128 * l2) / 7350
            assert abs(res.numeric_value - truth) < mp.mpf(10) ** -35

    def test_interior_x(self):
        spec = P(F(1, 2), F(-1, 2), 1, 3, 2, -1, (1,))
        opts = PipelineOptions(precision=40, tolerance_digits=30, mode="auto")
        res = run_pipeline(spec, opts)
        assert res.path == "gl-numeric"
        assert res.verification.verdict == "pass"

    def test_trace_populated(self):
        opts = PipelineOptions(
            precision=30, tolerance_digits=20, mode="gl", trace=True
        )
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert res.trace
        assert res.ii_text


class TestCPLPath:
    def test_running_example_symbolic(self):
        opts = PipelineOptions(precision=64, tolerance_digits=40, mode="cpl")
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert res.path == "cpl-symbolic"
        assert res.closed_form is not None
        assert res.verification.verdict == "pass"
        # exact rational coefficients of the closed form
        text = str(res.closed_form)
        assert "pi" in text and "l2" in text

    def test_auto_routes_subclass_to_cpl(self):
        opts = PipelineOptions(precision=64, tolerance_digits=40, mode="auto")
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert res.path == "cpl-symbolic"

    def test_auto_routes_interior_x_to_gl(self):
        spec = P(F(1, 2), F(-1, 2), 1, 3, 2, -1, (1,))
        opts = PipelineOptions(precision=30, tolerance_digits=20, mode="auto")
        assert run_pipeline(spec, opts).path == "gl-numeric"


class TestVerification:
    def test_no_verify_skips(self):
        opts = PipelineOptions(
            precision=30, tolerance_digits=20, mode="gl", verify=False
        )
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert res.verification is None

    def test_timings_recorded(self):
        opts = PipelineOptions(precision=30, tolerance_digits=20, mode="gl")
        res = run_pipeline(RUNNING_EXAMPLE, opts)
        assert "evaluate" in res.timings
