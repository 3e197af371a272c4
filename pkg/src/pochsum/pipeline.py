"""Pipeline orchestration: validate -> rewrite -> integrate -> reduce -> verify.

Two paths:
  * cpl: for sums in the cyclotomic subclass evaluated at x = 1, the symbolic
    route through cyclotomic polylogarithms yields an exact ConstExpr over the
    constant basis (via the shipped reduction tables).
  * gl-numeric: every other spec goes through the GL iterated-integral
    rewrite; the result is a numeric value (certified digits) plus a stable
    text rendering of the integral representation.

Verification (default on) compares the pipeline value against an independent
evaluation of the original sum by convergence acceleration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from .constexpr import ConstExpr
from .cplrewrite import check_subclass, cpl_closed_form
from .errors import NotInSubclass, PochsumError, ReductionError
from .glnumeric import eval_gl
from .glrewrite import IIExpr, PowTerm, rewrite_to_gl
from .numerics import BigFloat, eval_sum_numeric, verify_identity
from .reduction import RelationTable, eval_constexpr_mp, load_shipped_table
from .sums import PochhammerSumSpec, validate_spec

F = Fraction

# which shipped table serves sums with p = +-1/q
TABLE_FOR_Q = {2: "1-2", 3: "1-3", 4: "1-2-4", 5: "1-5"}

_table_cache: dict[str, RelationTable] = {}


def table_for_spec(spec: PochhammerSumSpec) -> RelationTable:
    q = abs(check_subclass(spec))
    name = TABLE_FOR_Q.get(q)
    if name is None:
        raise ReductionError(f"no shipped reduction table for 1/p denominator {q}")
    if name not in _table_cache:
        _table_cache[name] = load_shipped_table(name)
    return _table_cache[name]


@dataclass
class PipelineOptions:
    precision: int = 64          # working precision, decimal digits
    tolerance_digits: int = 40   # verification tolerance 10^-tolerance_digits
    mode: str = "auto"           # auto | cpl | gl
    table_path: str | None = None
    verify: bool = True
    trace: bool = False


@dataclass
class VerificationReport:
    lhs: BigFloat
    rhs: BigFloat
    residual: mpmath.mpf
    tolerance: mpmath.mpf
    verdict: str  # pass | fail | inconclusive


@dataclass
class PipelineResult:
    spec: PochhammerSumSpec
    path: str                           # cpl | gl-numeric
    closed_form: ConstExpr | None = None
    h_form: ConstExpr | None = None     # pre-reduction CPL form (cpl path)
    ii_text: str | None = None          # GL rendering (gl path)
    numeric_value: mpmath.mpf | None = None
    certified_digits: int = 0
    verification: VerificationReport | None = None
    timings: dict[str, float] = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)


def render_powterm(pt: PowTerm, var: str) -> str:
    bits = []
    if pt.c != 1 or (pt.tpow == 0 and pt.upow == 0):
        bits.append(str(pt.c))
    for base, e in ((var, pt.tpow), (f"(1-{var})", pt.upow)):
        if e == 0:
            continue
        if e == 1:
            bits.append(base)
        elif e.denominator == 1:
            bits.append(f"{base}^{e}")
        else:
            bits.append(f"{base}^({e})")
    return "*".join(bits) if bits else "1"


def render_ii(expr: IIExpr) -> str:
    """Stable text rendering: pre(x) * G(l1(t), ...; x) summed over terms."""
    if not expr:
        return "0"
    parts = []
    for t in expr:
        pre = render_powterm(t.pre, "x")
        if t.word:
            letters = ", ".join(render_powterm(letter, "t") for letter in t.word)
            parts.append(f"{pre} * G({letters}; x)")
        else:
            parts.append(pre)
    return " + ".join(parts)


def _verify(
    spec: PochhammerSumSpec,
    value: mpmath.mpf,
    certified: int,
    options: PipelineOptions,
) -> VerificationReport:
    target = max(options.tolerance_digits + 8, 30)
    lhs = eval_sum_numeric(spec, target_digits=target)
    rhs = BigFloat(value, certified)
    with mp.workdps(options.precision + 10):
        tol = mp.mpf(10) ** (-options.tolerance_digits)
        try:
            residual = verify_identity(lhs, rhs, tol)
            verdict = "pass"
        except PochsumError as exc:
            residual = abs(lhs.value - rhs.value)
            verdict = (
                "inconclusive" if "certified" in str(exc) else "fail"
            )
    return VerificationReport(
        lhs=lhs, rhs=rhs, residual=residual, tolerance=tol, verdict=verdict
    )


def run_pipeline(
    spec: PochhammerSumSpec, options: PipelineOptions | None = None
) -> PipelineResult:
    options = options or PipelineOptions()
    timings: dict[str, float] = {}
    trace: list[str] = []
    t0 = time.time()
    validate_spec(spec)
    timings["validate"] = time.time() - t0

    mode = options.mode
    if mode == "auto":
        try:
            check_subclass(spec)
            mode = "cpl" if spec.x == 1 else "gl"
        except NotInSubclass:
            mode = "gl"

    if mode == "cpl":
        result = _run_cpl(spec, options, timings, trace)
    else:
        result = _run_gl(spec, options, timings, trace)

    if options.verify:
        t0 = time.time()
        result.verification = _verify(
            spec, result.numeric_value, result.certified_digits, options
        )
        timings["verify"] = time.time() - t0
    return result


def _run_cpl(spec, options, timings, trace) -> PipelineResult:
    from .reduction import load_table

    t0 = time.time()
    h_form = cpl_closed_form(spec)
    timings["rewrite+integrate"] = time.time() - t0
    if options.trace:
        trace.append(f"cpl H-form: {h_form!r}")

    t0 = time.time()
    if options.table_path:
        table = load_table(options.table_path)
    else:
        table = table_for_spec(spec)
    closed = table.reduce(h_form)
    leftover = [s for s in closed.symbols() if s.startswith("H[")]
    if leftover:
        raise ReductionError(f"unreduced H-symbols remain: {leftover}")
    timings["reduce"] = time.time() - t0
    if options.trace:
        trace.append(f"reduced: {closed!r}")

    t0 = time.time()
    value = eval_constexpr_mp(closed, options.precision)
    timings["evaluate"] = time.time() - t0
    return PipelineResult(
        spec=spec,
        path="cpl",
        closed_form=closed,
        h_form=h_form,
        numeric_value=value,
        certified_digits=options.precision - 5,
        timings=timings,
        trace=trace,
    )


def _run_gl(spec, options, timings, trace) -> PipelineResult:
    t0 = time.time()
    expr = rewrite_to_gl(spec)
    timings["rewrite"] = time.time() - t0
    text = render_ii(expr)
    if options.trace:
        trace.append(f"gl representation: {text}")

    t0 = time.time()
    if 0 < spec.x <= 1:
        value = eval_gl(expr, spec.x, options.precision)
        certified = options.precision - 5
    else:
        # series-side evaluation needs x in (0,1]; fall back to accelerated
        # summation of the original terms
        bf = eval_sum_numeric(spec, target_digits=options.precision)
        value, certified = bf.value, bf.certified_digits
    timings["evaluate"] = time.time() - t0
    return PipelineResult(
        spec=spec,
        path="gl-numeric",
        ii_text=text,
        numeric_value=value,
        certified_digits=certified,
        timings=timings,
        trace=trace,
    )
