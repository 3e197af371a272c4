"""Exact univariate polynomial and rational-function arithmetic over Fraction.

Denominators in this package are never arbitrary: they are built as products
of t-powers and factors (1 - t^m), so they stay in factored form
{t-power, cyclotomic index -> multiplicity} from construction onward and no
general factorization is ever required.  `partial_fractions` decomposes a
rational function with such a denominator into the letter-ready form

    poly part + sum_j c_j / t^j + sum_{a, j} P_{a,j}(t) / Phi_a(t)^j

with deg P_{a,j} < deg Phi_a.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NonCyclotomicDenominator

F = Fraction


class Poly:
    """Dense univariate polynomial with Fraction coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [F(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> "Poly":
        return Poly([F(c)])

    @staticmethod
    def monomial(deg: int, c=1) -> "Poly":
        return Poly([F(0)] * deg + [F(c)])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            return F(0)
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [F(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Poly(a)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [F(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [F(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        dlead = other.lead
        ddeg = other.degree
        while len(r) - 1 >= ddeg and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < ddeg:
                break
            k = len(r) - 1 - ddeg
            coef = r[-1] / dlead
            q[k] = coef
            for i, c in enumerate(other.coeffs):
                r[k + i] -= coef * c
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        out = x * 0  # zero of the right type
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def shift_up(self, k: int) -> "Poly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return Poly([F(0)] * k + list(self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{i}")
        return "Poly(" + " + ".join(parts) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lead
    inv = 1 / lc
    return r0 * inv, s0 * inv, t0 * inv


def poly_invmod(a: Poly, m: Poly) -> Poly:
    """Inverse of a modulo m; a and m must be coprime."""
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree != 0:
        raise ValueError("not invertible: gcd is not constant")
    return s % m


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Poly:
    """The n-th cyclotomic polynomial Phi_n(t), exact."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = Poly.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            num, rem = divmod(num, cyclotomic_poly(d))
            assert rem.is_zero()
    return num


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@dataclass(frozen=True)
class FactoredDen:
    """Denominator (t^tpow) * prod_a Phi_a(t)^{cyc[a]}, kept factored."""

    tpow: int = 0
    cyc: tuple[tuple[int, int], ...] = ()  # sorted ((index, multiplicity), ...)

    @staticmethod
    def make(tpow: int = 0, cyc: dict[int, int] | None = None) -> "FactoredDen":
        items = tuple(sorted((a, m) for a, m in (cyc or {}).items() if m > 0))
        return FactoredDen(tpow=tpow, cyc=items)

    @property
    def cyc_dict(self) -> dict[int, int]:
        return dict(self.cyc)

    def expand(self) -> Poly:
        out = Poly.monomial(self.tpow)
        for a, m in self.cyc:
            out = out * cyclotomic_poly(a) ** m
        return out

    def degree(self) -> int:
        return self.tpow + sum(cyclotomic_poly(a).degree * m for a, m in self.cyc)

    def mul(self, other: "FactoredDen") -> "FactoredDen":
        c = self.cyc_dict
        for a, m in other.cyc:
            c[a] = c.get(a, 0) + m
        return FactoredDen.make(self.tpow + other.tpow, c)

    def is_one(self) -> bool:
        return self.tpow == 0 and not self.cyc


def one_minus_tpow_factored(m: int) -> tuple[int, FactoredDen]:
    """Factor (1 - t^m) = sign * prod_{d | m} Phi_d(t); returns (sign, factors).

    t^m - 1 = prod_{d|m} Phi_d(t), so 1 - t^m = (-1) * that product.
    """
    if m < 1:
        raise ValueError
    return -1, FactoredDen.make(0, {d: 1 for d in divisors(m)})


def factor_as_cyclotomic(p: Poly) -> tuple[Fraction, FactoredDen]:
    """Factor p as c * t^k * prod Phi_a^m by trial division.

    Candidate cyclotomic indices a are those with phi(a) <= deg p; in practice
    the polynomials here come from products of (1 - t^m) with small m, so
    trying a up to 2*deg(p)+2 is exhaustive enough (phi(a) >= sqrt(a/2)).
    Raises NonCyclotomicDenominator if a non-cyclotomic factor remains.
    """
    if p.is_zero():
        raise ValueError("cannot factor zero")
    tpow = 0
    while p.coeffs and p.coeffs[0] == 0:
        p = Poly(p.coeffs[1:])
        tpow += 1
    cyc: dict[int, int] = {}
    deg = p.degree
    a = 1
    limit = 2 * max(deg, 1) ** 2 + 2
    while p.degree > 0 and a <= limit:
        phi_a = cyclotomic_poly(a)
        if phi_a.degree <= p.degree:
            q, r = divmod(p, phi_a)
            while r.is_zero():
                cyc[a] = cyc.get(a, 0) + 1
                p = q
                if p.degree < phi_a.degree:
                    break
                q, r = divmod(p, phi_a)
        a += 1
    if p.degree > 0:
        raise NonCyclotomicDenominator(f"non-cyclotomic factor remains: {p!r}")
    return p.lead, FactoredDen.make(tpow, cyc)


@dataclass
class PartialFractions:
    """Result of partial_fractions: rf = poly + sum c_j/t^j + sum P_{a,j}/Phi_a^j."""

    poly: Poly
    t_terms: dict[int, Fraction]                 # j -> c_j  (term c_j / t^j)
    cyc_terms: dict[tuple[int, int], Poly]       # (a, j) -> P (term P / Phi_a^j)


def partial_fractions(num: Poly, den: FactoredDen) -> PartialFractions:
    """Exact partial-fraction decomposition over the factored denominator."""
    factors: list[tuple[str, int, Poly, int]] = []  # (kind, index, base poly, mult)
    if den.tpow:
        factors.append(("t", 0, Poly.monomial(1), den.tpow))
    for a, m in den.cyc:
        factors.append(("cyc", a, cyclotomic_poly(a), m))

    full = den.expand()
    polypart, num = divmod(num, full)

    t_terms: dict[int, Fraction] = {}
    cyc_terms: dict[tuple[int, int], Poly] = {}

    remaining = num
    rest_den = full
    for kind, idx, base, mult in factors:
        qm = base**mult
        rest_den, r = divmod(rest_den, qm)
        assert r.is_zero()
        if rest_den.degree == 0:
            a_part = (remaining * (1 / rest_den.lead)) % qm
        else:
            inv = poly_invmod(rest_den, qm)
            a_part = (remaining * inv) % qm
            # remaining/ (qm * rest_den) = a_part/qm + b/rest_den
            remaining = (remaining - a_part * rest_den) // qm
        # expand a_part / base^mult into sum_{j=1..mult} A_j / base^j
        for j in range(mult, 0, -1):
            a_part, rj = divmod(a_part, base)
            if not rj.is_zero():
                if kind == "t":
                    assert rj.degree == 0
                    t_terms[j] = rj.coeffs[0]
                else:
                    cyc_terms[(idx, j)] = rj
        assert a_part.is_zero()
    return PartialFractions(poly=polypart, t_terms=t_terms, cyc_terms=cyc_terms)


def recombine(pf: PartialFractions, den: FactoredDen) -> tuple[Poly, Poly]:
    """Inverse of partial_fractions for testing: return (num, den_expanded)."""
    full = den.expand()
    num = pf.poly * full
    for j, c in pf.t_terms.items():
        q = full // Poly.monomial(j)
        num = num + Poly.const(c) * q
    for (a, j), p in pf.cyc_terms.items():
        q = full // (cyclotomic_poly(a) ** j)
        num = num + p * q
    return num, full


def hermite_reduce_step(num: Poly, q: Poly, j: int) -> tuple[Poly, Poly]:
    """One Hermite reduction step for num / q^j with j >= 2, q squarefree.

    Writes num/q^j = d/dt[ -sigma / ((j-1) q^{j-1}) ] + tail / q^{j-1}
    where sigma = num * inv(q') mod q and tail = sigma'/(j-1) + tau with
    tau = (num - sigma*q') / q.  Returns (sigma_over, tail):
    the derivative part's numerator sigma (caller tracks the 1/(j-1) q^{j-1})
    and the new numerator over q^{j-1}.
    """
    if j < 2:
        raise ValueError("hermite step needs multiplicity >= 2")
    qp = q.derivative()
    sigma = (num * poly_invmod(qp % q, q)) % q
    tau, r = divmod(num - sigma * qp, q)
    assert r.is_zero()
    tail = sigma.derivative() * F(1, j - 1) + tau
    return sigma, tail
