"""Exact specification and term-level oracle for nested Pochhammer sums.

The object of study is

    Sum(x, p, a, b, c, d, inner) = sum_{n>=1} x^n (p)_n S_inner(n)
                                             / ((a n + b)^c (n+d)!)

where (p)_n is the Pochhammer symbol and S_inner is a (nested) cyclotomic
harmonic sum

    S_{(a1,b1,c1),(a2,b2,c2),...}(n)
        = sum_{i=1}^n  sgn(c1)^i / (a1 i + b1)^{|c1|} * S_{rest}(i),

with the convention S_{()}(n) = 1.  Negative c gives the alternating
("negative index") extension.  Everything in this module is exact Fraction
arithmetic: it is the ground-truth oracle that all symbolic pipelines are
tested against.

Convention: 1/(n+d)! = 0 whenever n+d < 0, so for d < 0 the first -d-1 terms
of the sum vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import SpecValidationError


@dataclass(frozen=True, slots=True)
class CycloIndex:
    """One layer (a, b, c) of a nested cyclotomic harmonic sum.

    The summand factor is sgn(c)^i / (a*i + b)^|c|.
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0:
            raise SpecValidationError(f"CycloIndex a must be positive, got {self.a}")
        if self.b < 0 or self.b >= self.a:
            raise SpecValidationError(
                f"CycloIndex b must satisfy 0 <= b < a, got (a={self.a}, b={self.b})"
            )
        if self.c == 0:
            raise SpecValidationError("CycloIndex c must be nonzero")
        if self.c < 0 and not (self.a == 1 and self.b == 0):
            raise SpecValidationError(
                "alternating (negative c) indices are only defined for (a,b)=(1,0)"
            )

    @property
    def weight(self) -> int:
        return abs(self.c)


class NestedSumSpec(tuple):
    """A tuple of CycloIndex layers, outermost first.  Empty means S() = 1."""

    def __new__(cls, indices=()):
        norm = []
        for ix in indices:
            if isinstance(ix, CycloIndex):
                norm.append(ix)
            else:
                norm.append(CycloIndex(*ix))
        return super().__new__(cls, norm)

    @property
    def weight(self) -> int:
        return sum(ix.weight for ix in self)

    @property
    def depth(self) -> int:
        return len(self)

    def is_plain_harmonic(self) -> bool:
        """True when every layer has (a, b) = (1, 0) and positive c."""
        return all(ix.a == 1 and ix.b == 0 and ix.c > 0 for ix in self)

    def __repr__(self):
        inner = ",".join(f"({ix.a},{ix.b},{ix.c})" for ix in self)
        return f"S[{inner}]"


def S(*cs: int) -> NestedSumSpec:
    """Shorthand for plain multiple harmonic sums: S(2,1) = S_{2,1}."""
    return NestedSumSpec(tuple(CycloIndex(1, 0, c) for c in cs))


@lru_cache(maxsize=None)
def _nested_value(spec: NestedSumSpec, n: int) -> Fraction:
    if n <= 0:
        return Fraction(1) if len(spec) == 0 else Fraction(0)
    if len(spec) == 0:
        return Fraction(1)
    head, rest = spec[0], NestedSumSpec(spec[1:])
    total = Fraction(0)
    for i in range(1, n + 1):
        sign = -1 if (head.c < 0 and i % 2 == 1) else 1
        total += Fraction(sign, (head.a * i + head.b) ** abs(head.c)) * _nested_value(rest, i)
    return total


def nested_sum_value(spec: NestedSumSpec, n: int) -> Fraction:
    """Exact value of the nested cyclotomic harmonic sum at argument n."""
    return _nested_value(NestedSumSpec(spec), n)


def pochhammer(p: Fraction, n: int) -> Fraction:
    """(p)_n = p (p+1) ... (p+n-1), exact."""
    out = Fraction(1)
    for k in range(n):
        out *= p + k
    return out


@dataclass(frozen=True, slots=True)
class PochhammerSumSpec:
    """Full specification of sum_{n>=1} x^n (p)_n S(n) / ((a n + b)^c (n+d)!)."""

    x: Fraction
    p: Fraction
    a: int = 1
    b: int = 0
    c: int = 0
    d: int = 0
    inner: NestedSumSpec = field(default_factory=NestedSumSpec)

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "inner", NestedSumSpec(self.inner))

    @property
    def weight(self) -> int:
        """Transcendental weight of the expected closed form (heuristic)."""
        return self.c + self.inner.weight + 1

    def __repr__(self):
        return (
            f"PochSum(x={self.x}, p={self.p}, a={self.a}, b={self.b}, "
            f"c={self.c}, d={self.d}, inner={self.inner!r})"
        )


@dataclass(frozen=True, slots=True)
class ValidatedSpec:
    """A PochhammerSumSpec that passed validate_spec, plus derived facts."""

    spec: PochhammerSumSpec
    first_n: int            # first n with a nonzero term
    converges_abs: bool     # absolutely convergent (vs. conditionally)
    terminating: bool       # (p)_n eventually 0, i.e. finite sum


def validate_spec(spec: PochhammerSumSpec) -> ValidatedSpec:
    """Check well-formedness and convergence; raise SpecValidationError if bad.

    Convergence: term_n ~ x^n n^{p - 1 - c - d} (log n)^k, so for |x| < 1 the
    sum always converges; at |x| = 1 we need c + d - p > 0 for absolute
    convergence (c + d - p > -1 suffices for x = -1, but we only admit the
    absolutely convergent regime plus the terminating case).
    """
    if spec.c < 0:
        raise SpecValidationError("denominator exponent c must be >= 0")
    if spec.a <= 0:
        raise SpecValidationError("a must be positive")
    if spec.c > 0 and spec.a + spec.b <= 0 and spec.b % spec.a == 0 and -spec.b // spec.a >= 1:
        raise SpecValidationError("a n + b vanishes at an integer n >= 1")
    if spec.c > 0:
        # a n + b must be nonzero for all n >= 1 with nonzero term
        if spec.b <= -spec.a and (-spec.b) % spec.a == 0:
            raise SpecValidationError("a n + b has an integer root n >= 1")
    first_n = max(1, -spec.d)
    terminating = spec.p.denominator == 1 and spec.p <= 0
    if abs(spec.x) > 1 and not terminating:
        raise SpecValidationError(f"|x| > 1 diverges: x = {spec.x}")
    if abs(spec.x) == 1 and not terminating:
        # term_n ~ n^(p-1-c-d); absolute convergence needs p - 1 - c - d < -1
        if not (spec.c + spec.d - spec.p > 0):
            raise SpecValidationError(
                f"divergent at |x|=1: need c + d - p > 0, got "
                f"{spec.c} + {spec.d} - {spec.p} = {spec.c + spec.d - spec.p}"
            )
    return ValidatedSpec(
        spec=spec,
        first_n=first_n,
        converges_abs=True,
        terminating=terminating,
    )


def term_exact(spec: PochhammerSumSpec, n: int) -> Fraction:
    """Exact n-th term of the sum; 0 when n + d < 0 (or n < 1)."""
    if n < 1 or n + spec.d < 0:
        return Fraction(0)
    num = spec.x**n * pochhammer(spec.p, n) * nested_sum_value(spec.inner, n)
    den = Fraction((spec.a * n + spec.b) ** spec.c) * math.factorial(n + spec.d)
    return num / den


def partial_sum(spec: PochhammerSumSpec, n_max: int) -> Fraction:
    """Exact partial sum of terms 1..n_max.

    Incremental recurrences keep this O(n_max) Fraction multiplications
    instead of recomputing Pochhammer/factorial from scratch each term.
    """
    total = Fraction(0)
    xn = Fraction(1)
    poch = Fraction(1)
    for n in range(1, n_max + 1):
        xn *= spec.x
        poch *= spec.p + (n - 1)
        if n + spec.d < 0:
            continue
        num = xn * poch * nested_sum_value(spec.inner, n)
        den = Fraction((spec.a * n + spec.b) ** spec.c) * math.factorial(n + spec.d)
        total += num / den
    return total
