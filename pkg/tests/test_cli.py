"""Command-line interface: grammar, exit codes, output formats."""

import json
from fractions import Fraction as F

import pytest

from pochsum.cli import main, parse_sum, render_spec
from pochsum.errors import ParseError
from pochsum.sums import S, CycloIndex, NestedSumSpec


class TestParser:
    def test_running_example(self):
        spec = parse_sum(
            "sum(n=1..inf, Poch(-1/2,n)*S(1;n) / ((n+3)^2 * fact(n-1)))"
        )
        assert (spec.p, spec.a, spec.b, spec.c, spec.d) == (F(-1, 2), 1, 3, 2, -1)
        assert spec.inner == S(1)
        assert spec.x == 1

    def test_multi_index_and_triples(self):
        spec = parse_sum(
            "sum(n=1..inf, Poch(1/2,n)*S((2,1,1),(2,1,1);n)/fact(n+1))"
        )
        assert spec.inner == NestedSumSpec(
            (CycloIndex(2, 1, 1), CycloIndex(2, 1, 1))
        )
        assert spec.d == 1

    def test_x_power(self):
        spec = parse_sum(
            "sum(n=1..inf, x^n*Poch(3,n)*S(3;n)/(n^2*fact(n)))", x=F(1, 2)
        )
        assert spec.x == F(1, 2)
        assert (spec.p, spec.c, spec.d) == (F(3), 2, 0)

    def test_negative_inner_indices(self):
        spec = parse_sum("sum(n=1..inf, Poch(1/2,n)*S(-5,-1;n)/fact(n))")
        assert spec.inner == S(-5, -1)

    def test_scaled_linear_factor(self):
        spec = parse_sum("sum(n=1..inf, Poch(1/2,n)/((2*n+1)^2*fact(n)))")
        assert (spec.a, spec.b, spec.c) == (2, 1, 2)

    @pytest.mark.parametrize(
        "text",
        [
            "sum(n=1..inf, Poch(1/2,n)*Poch(1/3,n)/fact(n))",  # two Poch factors
            "sum(n=1..inf, S(1;n))",                           # no factorial
            "sum(n=2..inf, Poch(1/2,n)/fact(n))",              # wrong lower limit
            "sum(n=1..inf, Poch(1/2,n)/((n+1)*(n+2)*fact(n)))",  # two linear bases
            "sum(n=1..inf, Poch(1/2,n)/fact(n)) trailing",
            "sum(n=1..inf,)",
        ],
    )
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_sum(text)

    @pytest.mark.parametrize(
        "text",
        [
            "sum(n=1..inf, Poch(-1/2,n)*S(1;n) / ((n+3)^2 * fact(n-1)))",
            "sum(n=1..inf, Poch(1/2,n)*S(2,2,2;n)/fact(n+1))",
            "sum(n=1..inf, x^n*Poch(3,n)*S(3;n)/(n^2*fact(n)))",
        ],
    )
    def test_round_trip(self, text):
        spec = parse_sum(text, x=F(1, 2))
        assert parse_sum(render_spec(spec), x=spec.x) == spec


class TestExitCodes:
    def test_parse_error_is_1(self, capsys):
        assert main(["not a sum"]) == 1

    def test_validation_error_is_2(self, capsys):
        # c + d - p <= 0: divergent at x = 1
        assert main(["sum(n=1..inf, Poch(3/2,n)/(n*fact(n)))"]) == 2

    def test_success_is_0(self, capsys):
        rc = main(
            [
                "sum(n=1..inf, Poch(-1/2,n)*S(1;n)/((n+3)^2*fact(n-1)))",
                "--mode",
                "gl",
                "--precision",
                "40",
                "--tolerance",
                "30",
            ]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "pass" in out


class TestJson:
    def test_json_output_fields(self, capsys):
        rc = main(
            [
                "sum(n=1..inf, Poch(-1/2,n)*S(1;n)/((n+3)^2*fact(n-1)))",
                "--mode",
                "gl",
                "--precision",
                "40",
                "--tolerance",
                "30",
                "--format",
                "json",
            ]
        )
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["path"] == "gl-numeric"
        assert doc["verification"]["verdict"] == "pass"
        assert doc["numeric"]["value"].startswith("-0.0952517171389549")


class TestBatch:
    def test_batch_file(self, tmp_path, capsys):
        f = tmp_path / "batch.txt"
        f.write_text(
            "sum(n=1..inf, Poch(-1/2,n)*S(1;n)/((n+3)^2*fact(n-1)))\n"
            "# a comment line\n"
            "sum(n=1..inf, Poch(1/2,n)/(n*fact(n)))\n"
        )
        rc = main(
            ["--batch", str(f), "--mode", "gl", "--precision", "40",
             "--tolerance", "30"]
        )
        assert rc == 0
