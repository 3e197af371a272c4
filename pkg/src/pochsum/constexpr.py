"""Exact symbolic constant expressions.

A ConstExpr is a Q-linear combination of monomials in named symbols:
known basis constants (pi, l2, z3, ...) and unresolved CPL values at 1
(symbols named "H[...]").  Coefficients are Fractions; arithmetic is exact.
These are the coefficients that flow through the integration chain and the
final closed forms emitted by the pipeline.

Monomial representation: a sorted tuple of (symbol, power) pairs; the empty
tuple is the rational monomial 1.
"""

from __future__ import annotations

from fractions import Fraction

F = Fraction

Monomial = tuple[tuple[str, int], ...]

# weight registry for the fixed constant basis; H-symbols get their weight
# from the word length and are handled in reduction.py
SYMBOL_WEIGHTS: dict[str, int] = {
    "pi": 1,
    "l2": 1,   # log 2
    "l3": 1,   # log 3
    "l5": 1,   # log 5
    "lphi": 1,  # log((1+sqrt5)/2), golden-ratio logarithm
    "z2": 2,   # zeta(2) is expressed as pi^2/6 and never used as a symbol,
    "z3": 3,
    "z5": 5,
    "z7": 7,
    "z9": 9,
    "z11": 11,
    "p4": 4,   # Li_4(1/2)
    "p5": 5,
    "p6": 6,
    "p7": 7,
    "p8": 8,
    "p9": 9,
    "C": 2,    # Catalan
    "sqrt3": 0,
    "sqrt5": 0,
    # h-constants: cyclotomic H values at 1; weight = word length
    "h1": 2,   # H_{(3,0),(0,0)}(1)
    "h2": 3,   # H_{(3,0),(0,0),(1,0)}(1)
    "h3": 4,   # H_{(3,0),(0,0),(0,0),(0,0)}(1)
    "h4": 4,   # H_{(3,0),(0,0),(1,0),(1,0)}(1)
    "h5": 1,   # H_{(5,1)}(1)
    "h6": 1,   # H_{(5,3)}(1)
    "h7": 2,   # weight-2 {1,5}-cyclotomy value (see reduction tables)
    "h8": 2,
    # s-constants: alternating Euler sums S_{...}(infinity)
    "s1": 6,   # S_{-5,-1}
    "s2": 7,   # S_{5,-1,-1}
    "s3": 7,   # S_{-5,1,1}
    "s4": 8,   # S_{5,3}
    "s5": 8,   # S_{-7,-1}
    "s6": 8,   # S_{-5,-1,-1,-1}
    "s7": 8,   # S_{-5,-1,1,1}
}


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    d = dict(m1)
    for s, p in m2:
        d[s] = d.get(s, 0) + p
    return tuple(sorted((s, p) for s, p in d.items() if p != 0))


def mono_weight(m: Monomial) -> int:
    w = 0
    for s, p in m:
        if s.startswith("H["):
            w += s.count("(") * p
        else:
            w += SYMBOL_WEIGHTS[s] * p
    return w


class ConstExpr:
    """Q-linear combination of symbol monomials, exact."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = F(c)
                if c != 0:
                    self.terms[m] = c

    # -- constructors --------------------------------------------------

    @staticmethod
    def rational(c) -> "ConstExpr":
        return ConstExpr({(): F(c)})

    @staticmethod
    def symbol(name: str, power: int = 1) -> "ConstExpr":
        return ConstExpr({((name, power),): F(1)})

    @staticmethod
    def zero() -> "ConstExpr":
        return ConstExpr()

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == () for m in self.terms)

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not rational: {self!r}")
        return self.terms.get((), F(0))

    def symbols(self) -> set[str]:
        return {s for m in self.terms for s, _ in m}

    def weight_parts(self) -> dict[int, "ConstExpr"]:
        out: dict[int, ConstExpr] = {}
        for m, c in self.terms.items():
            w = mono_weight(m)
            out.setdefault(w, ConstExpr()).terms[m] = c
        return out

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "ConstExpr":
        if isinstance(x, ConstExpr):
            return x
        if isinstance(x, (int, Fraction)):
            return ConstExpr.rational(x)
        return NotImplemented

    def __add__(self, other):
        other = ConstExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, F(0)) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return ConstExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = ConstExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = ConstExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, F(0)) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return ConstExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * ConstExpr.rational(F(1) / F(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of ConstExpr unsupported")
        out = ConstExpr.rational(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = ConstExpr._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- substitution / evaluation ----------------------------------------

    def subs_symbols(self, mapping: dict[str, "ConstExpr"]) -> "ConstExpr":
        """Replace symbols by ConstExpr values (used to resolve H-symbols)."""
        out = ConstExpr.zero()
        for m, c in self.terms.items():
            term = ConstExpr.rational(c)
            for s, p in m:
                rep = mapping.get(s)
                if rep is None:
                    term = term * ConstExpr.symbol(s, p)
                else:
                    term = term * rep**p
            out = out + term
        return out

    def eval_mp(self, values: dict[str, object]):
        """Numeric value given mpf values for every symbol present."""
        total = 0
        for m, c in self.terms.items():
            term = c  # Fraction; mpf * Fraction is exact-to-precision in mpmath
            for s, p in m:
                if s not in values:
                    raise KeyError(f"no numeric value for symbol {s}")
                term = term * values[s] ** p
            total = total + term
        return total

    def max_weight(self) -> int:
        return max((mono_weight(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda kv: (mono_weight(kv[0]), kv[0])):
            if m == ():
                bits.append(str(c))
            else:
                mono = "*".join(s if p == 1 else f"{s}^{p}" for s, p in m)
                if c == 1:
                    bits.append(mono)
                elif c == -1:
                    bits.append(f"-{mono}")
                else:
                    bits.append(f"{c}*{mono}")
        return " + ".join(bits).replace("+ -", "- ")


ZERO = ConstExpr.zero()
ONE = ConstExpr.rational(1)
