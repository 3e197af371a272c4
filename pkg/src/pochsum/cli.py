"""Command-line front end.

Grammar (whitespace-insensitive):

    sum(n=1..inf, TERM)
    TERM    = PRODUCT
    PRODUCT = FACTOR (("*" | "/") FACTOR)*
    FACTOR  = PRIMARY ("^" INT)?
    PRIMARY = "Poch(" RATIONAL "," n ")"
            | "S(" IDXLIST ";" n ")"
            | "fact(" n (("+"|"-") INT)? ")"
            | "x" "^" n
            | LINEAR                      -- n, or (A*n+B) in parentheses
            | "(" PRODUCT ")"
    IDXLIST = IDX ("," IDX)*;  IDX = SIGNED_INT | "(" INT "," INT "," INT ")"

Exit codes: 0 ok (verification passed if enabled), 1 parse error,
2 validation error, 3 rewrite error, 4 reduction/table error,
5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import (
    CertificationError,
    NotInSubclass,
    ParseError,
    PochsumError,
    ReductionError,
    SeriesSingularity,
    SpecValidationError,
    TableError,
)
from .pipeline import PipelineOptions, PipelineResult, run_pipeline
from .sums import CycloIndex, NestedSumSpec, PochhammerSumSpec

F = Fraction

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\.\.|[-+*/^(),;=])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self) -> str:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of input")
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, want: str) -> None:
        tok = self.peek()
        if tok != want:
            pos = self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)
            raise ParseError(f"expected {want!r} at position {pos}, got {tok!r}")
        self.i += 1

    # -- small pieces ----------------------------------------------------

    def signed_int(self) -> int:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.next() == "-":
                sign = -sign
        tok = self.next()
        if not tok.isdigit():
            raise ParseError(f"expected integer, got {tok!r}")
        return sign * int(tok)

    def rational(self) -> Fraction:
        num = self.signed_int()
        if self.peek() == "/":
            self.next()
            den = self.signed_int()
            return F(num, den)
        return F(num)

    def index_entry(self) -> CycloIndex:
        if self.peek() == "(":
            self.next()
            a = self.signed_int()
            self.expect(",")
            b = self.signed_int()
            self.expect(",")
            c = self.signed_int()
            self.expect(")")
            return CycloIndex(a, b, c)
        return CycloIndex(1, 0, self.signed_int())

    # -- factors -----------------------------------------------------------

    def linear_in_n(self) -> tuple[int, int]:
        """A*n+B with A optional (default 1) and B optional (default 0)."""
        a = 1
        if self.peek() != "n":
            a = self.signed_int()
            self.expect("*")
        self.expect("n")
        b = 0
        if self.peek() in ("+", "-"):
            sign = -1 if self.next() == "-" else 1
            b = sign * self.signed_int()
        return a, b

    def factor(self) -> tuple[str, object]:
        tok = self.peek()
        if tok == "Poch":
            self.next()
            self.expect("(")
            p = self.rational()
            self.expect(",")
            self.expect("n")
            self.expect(")")
            return ("poch", p)
        if tok == "S":
            self.next()
            self.expect("(")
            idx = [self.index_entry()]
            while self.peek() == ",":
                self.next()
                idx.append(self.index_entry())
            self.expect(";")
            self.expect("n")
            self.expect(")")
            return ("inner", NestedSumSpec(idx))
        if tok == "fact":
            self.next()
            self.expect("(")
            self.expect("n")
            d = 0
            if self.peek() in ("+", "-"):
                sign = -1 if self.next() == "-" else 1
                d = sign * self.signed_int()
            self.expect(")")
            return ("fact", d)
        if tok == "x":
            self.next()
            self.expect("^")
            self.expect("n")
            return ("xpow", None)
        if tok == "n" or (tok is not None and (tok.isdigit() or tok in "+-")):
            if tok != "n" and self.looks_like_constant():
                return ("const", self.rational())
            a, b = self.linear_in_n()
            return ("lin", (a, b))
        if tok == "(":
            self.next()
            inner = self.product()
            self.expect(")")
            return ("group", inner)
        raise ParseError(f"unexpected token {tok!r}")

    def looks_like_constant(self) -> bool:
        """True when the upcoming number is not the A of A*n+B."""
        j = self.i
        while j < len(self.tokens) and self.tokens[j][0] in ("+", "-"):
            j += 1
        if j >= len(self.tokens) or not self.tokens[j][0].isdigit():
            return False
        k = j + 1
        if k < len(self.tokens) and self.tokens[k][0] == "*":
            return not (k + 1 < len(self.tokens) and self.tokens[k + 1][0] == "n")
        if k < len(self.tokens) and self.tokens[k][0] == "/":
            # rational constant A/B unless B is n
            return not (k + 1 < len(self.tokens) and self.tokens[k + 1][0] == "n")
        return True

    def product(self) -> list[tuple[str, object, int]]:
        """List of (kind, payload, exponent) with sign of exponent recording
        numerator (+) vs denominator (-) position."""
        out = []
        sign = 1

        def push(kind, payload, e):
            if kind == "group":
                for k2, p2, e2 in payload:
                    push(k2, p2, e2 * (1 if e > 0 else -1) * abs(e))
            else:
                out.append((kind, payload, e))

        kind, payload = self.factor()
        e = self.exponent()
        push(kind, payload, e)
        while self.peek() in ("*", "/"):
            op = self.next()
            sign = 1 if op == "*" else -1
            kind, payload = self.factor()
            e = self.exponent()
            push(kind, payload, sign * e)
        return out

    def exponent(self) -> int:
        if self.peek() == "^":
            self.next()
            return self.signed_int()
        return 1


def parse_sum(text: str, x: Fraction | None = None) -> PochhammerSumSpec:
    """Parse a sum expression into a PochhammerSumSpec.

    x: value substituted for an `x^n` factor (from --x); defaults to 1 when
    no x^n factor is present."""
    p = _Parser(text)
    p.expect("sum")
    p.expect("(")
    p.expect("n")
    p.expect("=")
    p.expect("1")
    p.expect("..")
    p.expect("inf")
    p.expect(",")
    factors = p.product()
    p.expect(")")
    if p.peek() is not None:
        raise ParseError(f"trailing input after sum(...): {p.peek()!r}")

    poch = None
    inner = NestedSumSpec()
    seen_inner = False
    lin: tuple[int, int] | None = None
    lin_c = 0
    fact_d = None
    has_x = False
    for kind, payload, e in factors:
        if kind == "poch":
            if e != 1 or poch is not None:
                raise ParseError("exactly one Poch(p,n) factor of power 1 required")
            poch = payload
        elif kind == "inner":
            if e != 1 or seen_inner:
                raise ParseError("at most one S(...;n) factor of power 1 allowed")
            inner = payload
            seen_inner = True
        elif kind == "fact":
            if e != -1 or fact_d is not None:
                raise ParseError("exactly one fact(n+d) factor in the denominator required")
            fact_d = payload
        elif kind == "xpow":
            if e != 1 or has_x:
                raise ParseError("x^n may appear once, in the numerator")
            has_x = True
        elif kind == "lin":
            if e > 0:
                raise ParseError("(a*n+b)^c factors must be in the denominator")
            if lin is None:
                lin = payload
            elif lin != payload:
                raise ParseError(f"two distinct linear factors {lin} and {payload}")
            lin_c += -e
        elif kind == "const":
            if payload != 1:
                raise ParseError("constant prefactors are not part of the grammar")
        else:
            raise ParseError(f"unsupported factor kind {kind}")
    if poch is None:
        raise ParseError("missing Poch(p,n) factor")
    if fact_d is None:
        raise ParseError("missing fact(n+d) factor in the denominator")
    a, b = lin if lin is not None else (1, 0)
    xval = F(x) if (has_x and x is not None) else F(1)
    return PochhammerSumSpec(
        x=xval, p=poch, a=a, b=b, c=lin_c, d=fact_d, inner=inner
    )


def render_spec(spec: PochhammerSumSpec) -> str:
    bits = [f"Poch({spec.p},n)"]
    if spec.x != 1:
        bits.append("x^n")
    if len(spec.inner):
        idx = ",".join(
            str(ix.c) if (ix.a, ix.b) == (1, 0) else f"({ix.a},{ix.b},{ix.c})"
            for ix in spec.inner
        )
        bits.append(f"S({idx};n)")
    den = []
    if spec.c:
        base = "n" if (spec.a, spec.b) == (1, 0) else (
            f"({spec.a}*n{spec.b:+d})" if spec.a != 1 else f"(n{spec.b:+d})"
        )
        den.append(base if spec.c == 1 else f"{base}^{spec.c}")
    den.append(f"fact(n{spec.d:+d})" if spec.d else "fact(n)")
    return f"sum(n=1..inf, {'*'.join(bits)}/({'*'.join(den)}))"


def _result_json(result: PipelineResult, precision: int) -> dict:
    def num(v, digits):
        return {"value": mpmath.nstr(v, min(digits, precision), strip_zeros=False),
                "certified_digits": digits}

    out = {
        "input": render_spec(result.spec),
        "path": result.path,
        "closed_form": repr(result.closed_form) if result.closed_form is not None else None,
        "h_form": repr(result.h_form) if result.h_form is not None else None,
        "ii_rendering": result.ii_text,
        "numeric": num(result.numeric_value, result.certified_digits),
        "timings": {k: round(v, 3) for k, v in result.timings.items()},
    }
    if result.verification is not None:
        v = result.verification
        out["verification"] = {
            "verdict": v.verdict,
            "lhs": num(v.lhs.value, v.lhs.certified_digits),
            "rhs": num(v.rhs.value, v.rhs.certified_digits),
            "residual": mpmath.nstr(v.residual, 5),
            "tolerance": mpmath.nstr(v.tolerance, 5),
        }
    if result.trace:
        out["trace"] = result.trace
    return out


def _print_text(result: PipelineResult, precision: int) -> None:
    print(f"input  : {render_spec(result.spec)}")
    print(f"path   : {result.path}")
    if result.closed_form is not None:
        print(f"closed : {result.closed_form!r}")
    if result.ii_text is not None:
        print(f"gl     : {result.ii_text}")
    digits = min(result.certified_digits, precision)
    print(f"value  : {mpmath.nstr(result.numeric_value, digits, strip_zeros=False)}")
    print(f"digits : {result.certified_digits} certified")
    for line in result.trace:
        print(f"trace  : {line}")
    if result.verification is not None:
        v = result.verification
        print(
            f"verify : {v.verdict} (residual {mpmath.nstr(v.residual, 5)}, "
            f"tolerance {mpmath.nstr(v.tolerance, 5)})"
        )


def _run_one(text: str, args) -> tuple[int, PipelineResult | None, str | None]:
    try:
        spec = parse_sum(text, x=F(args.x) if args.x else None)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        return 1, None, f"parse error: {exc}"
    options = PipelineOptions(
        precision=args.precision,
        tolerance_digits=args.tolerance,
        mode=args.mode,
        table_path=args.table,
        verify=not args.no_verify,
        trace=args.trace,
    )
    try:
        result = run_pipeline(spec, options)
    except SpecValidationError as exc:
        return 2, None, f"validation error: {exc}"
    except (NotInSubclass, SeriesSingularity) as exc:
        return 3, None, f"rewrite error: {exc}"
    except (ReductionError, TableError) as exc:
        return 4, None, f"reduction error: {exc}"
    except CertificationError as exc:
        return 5, None, f"verification error: {exc}"
    except PochsumError as exc:
        return 3, None, f"pipeline error: {exc}"
    if result.verification is not None and result.verification.verdict != "pass":
        return 5, result, "verification failed"
    return 0, result, None


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="pochsum",
        description="Evaluate nested Pochhammer sums to closed form and certify numerically.",
    )
    ap.add_argument("expression", nargs="?", help="sum(n=1..inf, ...) expression")
    ap.add_argument("--precision", type=int, default=64, metavar="D")
    ap.add_argument("--tolerance", type=int, default=40, metavar="E",
                    help="verification tolerance 10^-E")
    ap.add_argument("--table", default=None, help="explicit relation-table file")
    ap.add_argument("--mode", choices=["auto", "gl", "cpl"], default="auto")
    ap.add_argument("--x", default=None, metavar="P/Q", help="value for an x^n factor")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--trace", action="store_true")
    ap.add_argument("--no-verify", action="store_true")
    ap.add_argument("--batch", default=None, metavar="FILE",
                    help="file with one expression per line")
    args = ap.parse_args(argv)

    mp.dps = max(args.precision + 10, mp.dps)

    if args.batch:
        with open(args.batch) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        worst = 0
        outputs = []
        for line in lines:
            code, result, err = _run_one(line, args)
            worst = max(worst, code)
            if args.format == "json":
                entry = {"expression": line, "exit_code": code}
                if result is not None:
                    entry.update(_result_json(result, args.precision))
                if err:
                    entry["error"] = err
                outputs.append(entry)
            else:
                print(f"=== {line}")
                if err:
                    print(f"error  : {err}")
                if result is not None:
                    _print_text(result, args.precision)
        if args.format == "json":
            print(json.dumps(outputs, indent=2))
        return worst

    if not args.expression:
        ap.error("an expression or --batch FILE is required")
    code, result, err = _run_one(args.expression, args)
    if args.format == "json":
        entry = {"exit_code": code}
        if result is not None:
            entry.update(_result_json(result, args.precision))
        if err:
            entry["error"] = err
        print(json.dumps(entry, indent=2))
    else:
        if err:
            print(f"error  : {err}", file=sys.stderr)
        if result is not None:
            _print_text(result, args.precision)
    return code


if __name__ == "__main__":
    sys.exit(main())
