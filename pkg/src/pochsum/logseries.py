"""Truncated generalized power series with log terms: sum c * t^e * log(t)^k.

Exponents e are Fractions (possibly negative or non-integer), log powers k are
nonnegative ints, and coefficients are duck-typed: exact Fractions during
symbolic work, mpmath mpf during numerics, or constant expressions carrying
unresolved symbols.  A series carries a truncation order: terms with exponent
>= order have been discarded and are unknown.

The key integration rule matches the regularized iterated-integral definition:
    integral of t^-1 log(t)^k dt = log(t)^{k+1} / (k+1)      (no constant)
    integral of t^e log(t)^k dt  = by parts, e != -1          (no constant)
Constants of integration are the caller's responsibility.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SeriesSingularity

F = Fraction


def _is_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:
        return False


class LogSeries:
    """Truncated series sum_{(e,k)} coeff[(e,k)] * t^e * log(t)^k, e < order."""

    __slots__ = ("terms", "order")

    def __init__(self, terms=None, order: Fraction | int = 0):
        self.order = F(order)
        self.terms: dict[tuple[Fraction, int], object] = {}
        if terms:
            for (e, k), c in terms.items():
                e = F(e)
                if e >= self.order or _is_zero(c):
                    continue
                self.terms[(e, k)] = c

    # ---- constructors -------------------------------------------------

    @staticmethod
    def zero(order) -> "LogSeries":
        return LogSeries({}, order)

    @staticmethod
    def monomial(e, coeff=F(1), logpow: int = 0, order=None) -> "LogSeries":
        e = F(e)
        if order is None:
            order = e + 30
        return LogSeries({(e, logpow): coeff}, order)

    @staticmethod
    def from_poly_coeffs(coeffs, order) -> "LogSeries":
        return LogSeries({(F(i), 0): c for i, c in enumerate(coeffs)}, order)

    # ---- structure ----------------------------------------------------

    def min_exp(self) -> Fraction:
        if not self.terms:
            return self.order
        return min(e for e, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, order) -> "LogSeries":
        order = F(order)
        if order >= self.order:
            return LogSeries(self.terms, self.order)
        return LogSeries({ek: c for ek, c in self.terms.items() if ek[0] < order}, order)

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))

    def max_logpow(self) -> int:
        return max((k for _, k in self.terms), default=0)

    def is_plain(self) -> bool:
        """True if all exponents are nonnegative integers and no logs occur."""
        return all(k == 0 and e.denominator == 1 and e >= 0 for e, k in self.terms)

    # ---- arithmetic ---------------------------------------------------

    def __add__(self, other: "LogSeries") -> "LogSeries":
        order = min(self.order, other.order)
        out: dict = {}
        for ek, c in self.terms.items():
            if ek[0] < order:
                out[ek] = c
        for ek, c in other.terms.items():
            if ek[0] >= order:
                continue
            if ek in out:
                s = out[ek] + c
                if _is_zero(s):
                    del out[ek]
                else:
                    out[ek] = s
            else:
                out[ek] = c
        return LogSeries(out, order)

    def __neg__(self) -> "LogSeries":
        return LogSeries({ek: -c for ek, c in self.terms.items()}, self.order)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + (-other)

    def scale(self, c) -> "LogSeries":
        if _is_zero(c):
            return LogSeries.zero(self.order)
        return LogSeries({ek: coef * c for ek, coef in self.terms.items()}, self.order)

    def shift(self, e, logpow: int = 0) -> "LogSeries":
        """Multiply by t^e log(t)^logpow."""
        e = F(e)
        return LogSeries(
            {(ee + e, kk + logpow): c for (ee, kk), c in self.terms.items()},
            self.order + e,
        )

    def __mul__(self, other: "LogSeries") -> "LogSeries":
        order = min(self.order + other.min_exp(), other.order + self.min_exp())
        out: dict = {}
        for (e1, k1), c1 in self.terms.items():
            for (e2, k2), c2 in other.terms.items():
                e, k = e1 + e2, k1 + k2
                if e >= order:
                    continue
                key = (e, k)
                if key in out:
                    out[key] = out[key] + c1 * c2
                else:
                    out[key] = c1 * c2
        return LogSeries(out, order)

    def div_poly(self, coeffs) -> "LogSeries":
        """Divide by a polynomial sum coeffs[j] t^j with coeffs[0] != 0.

        Linear recurrence per (exp mod 1, logpow) stream: O(order * deg)
        instead of the O(order^2) of expanding 1/poly and multiplying.
        Dividing by a unit keeps the truncation order.
        """
        p0 = coeffs[0]
        if _is_zero(p0):
            raise ValueError("div_poly requires a nonzero constant term")
        tail = [(j, c) for j, c in enumerate(coeffs) if j > 0 and not _is_zero(c)]
        streams: dict = {}
        for (e, k), c in self.terms.items():
            fl = e.__floor__()
            streams.setdefault((e - fl, k), {})[fl] = c
        out: dict = {}
        for (fr, k), coeffs_in in streams.items():
            lo = min(coeffs_in)
            hi = (self.order - fr).__ceil__()
            u: dict = {}
            for n in range(lo, hi):
                s = coeffs_in.get(n)
                for j, pj in tail:
                    prev = u.get(n - j)
                    if prev is None:
                        continue
                    s = -prev * pj if s is None else s - prev * pj
                if s is None or _is_zero(s):
                    continue
                u[n] = s / p0
            for n, c in u.items():
                out[(fr + n, k)] = c
        return LogSeries(out, self.order)

    def pow_int(self, n: int) -> "LogSeries":
        if n < 0:
            return self.inverse().pow_int(-n)
        out = LogSeries.monomial(0, F(1), order=self.order - self.min_exp() * 0 + 0)
        out = LogSeries({(F(0), 0): F(1)}, self.order)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "LogSeries":
        """1/self via geometric series; requires a log-free leading term."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        e0 = self.min_exp()
        if (e0, 0) not in self.terms:
            raise SeriesSingularity("cannot invert series with log in leading term")
        c0 = self.terms[(e0, 0)]
        one = F(1) if isinstance(c0, Fraction) else c0 / c0
        u = self.shift(-e0)
        u = LogSeries({ek: c for ek, c in u.terms.items() if ek != (F(0), 0)}, u.order)
        u = u.scale(one / c0)
        order = u.order
        inv = LogSeries({(F(0), 0): one / c0}, order)
        acc = LogSeries({(F(0), 0): one / c0}, order)
        umin = u.min_exp()
        if not u.is_zero() and umin <= 0:
            raise SeriesSingularity("inverse: correction term not of positive order")
        while not acc.is_zero():
            acc = (acc * u).scale(-1).truncate(order)
            inv = inv + acc
        return inv.shift(-e0)

    def integrate(self) -> "LogSeries":
        """Term-by-term antiderivative with the regularized t^-1 rule."""
        out: dict = {}
        for (e, k), c in self.terms.items():
            if e == -1:
                key = (F(0), k + 1)
                add = c * F(1, k + 1)
                out[key] = out[key] + add if key in out else add
            else:
                # integral t^e log^k = sum_{j=0..k} (-1)^j k!/(k-j)! t^{e+1} log^{k-j} / (e+1)^{j+1}
                fac = 1
                coef = c
                for j in range(0, k + 1):
                    term = coef * F((-1) ** j * _falling(k, j), 1) / F(e + 1) ** (j + 1)
                    key = (e + 1, k - j)
                    if key in out:
                        out[key] = out[key] + term
                    else:
                        out[key] = term
        return LogSeries(out, self.order + 1)

    def derivative(self) -> "LogSeries":
        out: dict = {}
        for (e, k), c in self.terms.items():
            if e != 0:
                key = (e - 1, k)
                out[key] = out.get(key, 0) + c * F(e) if key in out else c * F(e)
            if k > 0:
                key = (e - 1, k - 1)
                add = c * F(k)
                out[key] = out[key] + add if key in out else add
        return LogSeries(out, self.order - 1)

    # ---- evaluation / extraction ---------------------------------------

    def constant_term(self):
        """Coefficient of t^0 log^0; raises if poles or logs survive at t=0.

        This is the "value at 0" of a regularized expansion: all terms with
        negative exponent or with exponent 0 and a log must have cancelled.
        """
        bad = [
            (e, k)
            for (e, k) in self.terms
            if e < 0 or (e == 0 and k > 0)
        ]
        if bad:
            raise SeriesSingularity(f"non-cancelling singular terms at 0: {sorted(bad)}")
        return self.terms.get((F(0), 0), F(0))

    def eval_mp(self, t, log_t=None):
        """Numeric evaluation at t (mpf or float); coefficients must support
        multiplication with mpf."""
        import mpmath

        if log_t is None:
            log_t = mpmath.log(t)
        total = 0
        for (e, k), c in self.items_sorted():
            term = c * mpmath.power(t, e)
            if k:
                term = term * log_t**k
            total = total + term
        return total

    def map_coeffs(self, f) -> "LogSeries":
        return LogSeries({ek: f(c) for ek, c in self.terms.items()}, self.order)

    def __repr__(self):
        if not self.terms:
            return f"LogSeries(0; O(t^{self.order}))"
        bits = []
        for (e, k), c in self.items_sorted()[:8]:
            s = f"({c})t^{e}"
            if k:
                s += f"L^{k}"
            bits.append(s)
        more = "..." if len(self.terms) > 8 else ""
        return f"LogSeries({' + '.join(bits)}{more}; O(t^{self.order}))"


def _falling(k: int, j: int) -> int:
    """k (k-1) ... (k-j+1); equals k!/(k-j)!."""
    out = 1
    for i in range(j):
        out *= k - i
    return out


def binomial_series(alpha: Fraction, order: int) -> LogSeries:
    """(1 + t)^alpha as a plain series to the given order, exact."""
    alpha = F(alpha)
    terms = {}
    c = F(1)
    for k in range(order):
        terms[(F(k), 0)] = c
        c = c * (alpha - k) / (k + 1)
    return LogSeries(terms, order)


def one_minus_t_power(alpha: Fraction, order: int) -> LogSeries:
    """(1 - t)^alpha as a plain series, exact."""
    alpha = F(alpha)
    terms = {}
    c = F(1)
    for k in range(order):
        terms[(F(k), 0)] = c
        c = c * (alpha - k) / (k + 1) * (-1)
    return LogSeries(terms, order)


def compose_plain(outer: LogSeries, inner: LogSeries) -> LogSeries:
    """outer(inner(t)) where outer is plain (integer exponents >= 0, no logs)
    and inner has min_exp >= 1 (so composition is well defined as a series)."""
    if not outer.is_plain():
        raise SeriesSingularity("compose: outer series must be plain")
    if not inner.is_zero() and inner.min_exp() < 1:
        raise SeriesSingularity("compose: inner series must vanish at 0")
    # Horner over descending integer exponents of outer
    max_e = int(max((e for e, _ in outer.terms), default=0))
    m = inner.min_exp() if not inner.is_zero() else F(1)
    order = min(inner.order, outer.order * m)
    out = LogSeries.zero(order)
    for e in range(max_e, -1, -1):
        out = (out * inner).truncate(order)
        c = outer.terms.get((F(e), 0))
        if c is not None:
            out = out + LogSeries({(F(0), 0): c}, order)
    return out


def poly_frac_power(coeffs, alpha: Fraction, order: int) -> LogSeries:
    """(polynomial)^alpha as a LogSeries around t = 0, exact.

    The polynomial is given by its coefficient list; write it as
    c0 t^k (1 + u(t)) with u(0) = 0.  Requires c0^alpha rational, i.e.
    alpha integral or c0 = 1 (all bases used in the pipeline are monic in
    this sense: x, 1-x, 1-x^m).
    """
    alpha = F(alpha)
    cs = [F(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ZeroDivisionError("0^alpha")
    k = 0
    while cs[0] == 0:
        cs.pop(0)
        k += 1
    c0 = cs[0]
    if c0 != 1 and alpha.denominator != 1:
        raise SeriesSingularity(f"cannot take {c0}^{alpha} exactly")
    lead = c0**alpha if alpha.denominator == 1 else F(1)
    u = LogSeries({(F(i), 0): c / c0 for i, c in enumerate(cs) if i > 0}, order)
    res = compose_plain(binomial_series(alpha, order), u).scale(lead)
    return res.shift(k * alpha)
