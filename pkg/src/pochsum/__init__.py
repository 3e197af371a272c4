"""pochsum: symbolic evaluation of infinite nested Pochhammer sums.

The pipeline rewrites sums of the form

    sum_{n>=1} x^n (p)_n S(n) / ((a n + b)^c (n+d)!)

into iterated integrals over hypergeometric-type letters, then (for the
subclass p = 1/q, a = 1, plain harmonic inner sums, x = 1) into cyclotomic
harmonic polylogarithms at 1, and reduces the result to a closed form over a
fixed basis of constants.  Every symbolic identity is independently certified
by arbitrary-precision numerics.
"""

from .sums import (
    CycloIndex,
    NestedSumSpec,
    PochhammerSumSpec,
    S,
    ValidatedSpec,
    nested_sum_value,
    partial_sum,
    pochhammer,
    term_exact,
    validate_spec,
)

__all__ = [
    "CycloIndex",
    "NestedSumSpec",
    "PochhammerSumSpec",
    "S",
    "ValidatedSpec",
    "nested_sum_value",
    "partial_sum",
    "pochhammer",
    "term_exact",
    "validate_spec",
]

__version__ = "0.1.0"
