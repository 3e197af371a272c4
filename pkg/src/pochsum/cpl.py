"""Cyclotomic harmonic polylogarithms (CPLs) and the chain integrator.

A CPL is an iterated integral over the letters

    f_{(0,0)}(t) = 1/t,      f_{(a,b)}(t) = t^b / Phi_a(t)   (a >= 1, 0 <= b < deg Phi_a)

with H_{()}(x) = 1 and H_{(l, w)}(x) = integral_0^x f_l(t) H_w(t) dt, the
integral at the lower bound 0 regularized by the rule
integral t^-1 log^k t dt = log^{k+1} t/(k+1) (equivalently
H_{(0,0)^k}(x) = log^k x / k!).

Words are tuples of letters, outermost letter first.  A word is *convergent
at 1* iff its leading letter is not (1,0) (f_{(1,0)} = 1/(t-1) is the only
letter with a pole at 1).

This module provides exact series expansions of H_w at x = 0 and x = 1
(the latter with coefficients carrying unresolved H_v(1) symbols), numeric
values at 1 by matching the two expansions at x = 1/2, the shuffle product,
and ChainFunction: sums  coef * R(t) * H_w(t)  closed under the
antiderivative operation that the rewrite pipeline iterates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from .constexpr import ConstExpr
from .errors import SeriesSingularity
from .logseries import LogSeries, compose_plain
from .polys import (
    FactoredDen,
    Poly,
    cyclotomic_poly,
    hermite_reduce_step,
    partial_fractions,
)

F = Fraction

Letter = tuple[int, int]
Word = tuple[Letter, ...]

ZERO_LETTER: Letter = (0, 0)
ONE_LETTER: Letter = (1, 0)


def check_letter(letter: Letter) -> Letter:
    a, b = letter
    if (a, b) == (0, 0):
        return letter
    if a < 1 or b < 0 or b >= cyclotomic_poly(a).degree:
        raise ValueError(f"bad CPL letter {letter}")
    return letter


def h_symbol(word: Word) -> str:
    """Symbol name for the unresolved value H_word(1)."""
    return "H[" + ",".join(f"({a},{b})" for a, b in word) + "]"


def parse_h_symbol(name: str) -> Word:
    assert name.startswith("H[") and name.endswith("]")
    body = name[2:-1]
    if not body:
        return ()
    out = []
    for bit in body.replace("(", "").split("),"):
        a, b = bit.rstrip(")").split(",")
        out.append((int(a), int(b)))
    return tuple(out)


def is_convergent_at_one(word: Word) -> bool:
    return not word or word[0] != ONE_LETTER


# ---------------------------------------------------------------------------
# shuffle algebra
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def shuffle(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """Shuffle product of two words; returns ((word, multiplicity), ...)."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict[Word, int] = {}
    for w, m in shuffle(u[1:], v):
        key = (u[0],) + w
        out[key] = out.get(key, 0) + m
    for w, m in shuffle(u, v[1:]):
        key = (v[0],) + w
        out[key] = out.get(key, 0) + m
    return tuple(sorted(out.items()))


def shuffle_expr(u: Word, v: Word) -> dict[Word, int]:
    return dict(shuffle(u, v))


def lyndon_words(alphabet: list[Letter], length: int) -> list[Word]:
    """All Lyndon words of exactly `length` over the ordered alphabet
    (Duval's algorithm)."""
    k = len(alphabet)
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == length:
            out.append(tuple(alphabet[i] for i in w))
        while len(w) < length:
            w.append(w[-m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(out)


# ---------------------------------------------------------------------------
# series at x = 0
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _letter_series_zero(letter: Letter, order: int) -> LogSeries:
    """Exact series of f_letter(t) around t = 0."""
    if letter == ZERO_LETTER:
        return LogSeries({(F(-1), 0): F(1)}, order)
    a, b = letter
    inv = LogSeries.from_poly_coeffs(cyclotomic_poly(a).coeffs, order).inverse()
    return inv.shift(b).truncate(order)


def _mul_letter_zero(inner: LogSeries, letter: Letter, order: int) -> LogSeries:
    """f_letter(t) * inner as a series at 0, via polynomial division."""
    if letter == ZERO_LETTER:
        return inner.shift(-1).truncate(order)
    a, b = letter
    return inner.shift(b).truncate(order).div_poly(cyclotomic_poly(a).coeffs)


def _mul_letter_one(inner: LogSeries, letter: Letter, order: int) -> LogSeries:
    """-f_letter(1-y) * inner as a series in y = 1-x, via division."""
    if letter == ONE_LETTER:
        raise SeriesSingularity("letter (1,0) has a pole at x = 1")
    one_minus_y = Poly([1, -1])
    if letter == ZERO_LETTER:
        # -1/(1-y)
        return inner.scale(F(-1)).truncate(order).div_poly([F(1), F(-1)])
    a, b = letter
    phi_shift = cyclotomic_poly(a)(one_minus_y)
    num = one_minus_y**b
    scaled = inner.scale(F(-1))
    if b:
        acc = LogSeries.zero(scaled.order)
        for j, c in enumerate(num.coeffs):
            if c:
                acc = acc + scaled.shift(j).scale(c)
        scaled = acc
    return scaled.truncate(order).div_poly([F(c) for c in phi_shift.coeffs])


_series0_cache: dict[Word, LogSeries] = {}


def series_at_zero(word: Word, order: int) -> LogSeries:
    """Exact LogSeries of H_word(x) around x = 0 (Fraction coefficients).

    Words with leading (0,0) letters produce log x terms via the regularized
    integration rule; all other coefficients are plain rationals.
    """
    cached = _series0_cache.get(word)
    if cached is not None and cached.order >= order:
        return cached.truncate(order)
    if not word:
        result = LogSeries({(F(0), 0): F(1)}, order)
    else:
        inner = series_at_zero(word[1:], order)
        integrand = _mul_letter_zero(inner, check_letter(word[0]), order)
        result = integrand.truncate(order - 1).integrate().truncate(order)
    _series0_cache[word] = result
    return result


# ---------------------------------------------------------------------------
# expansion at x = 1 (variable y = 1 - x)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def decompose_leading_ones(word: Word) -> tuple[tuple[int, Word, Fraction], ...]:
    """Write H_word = sum c * H_{(1,0)}^m * H_v with v convergent at 1.

    Returns ((m, v, c), ...).  Uses the shuffle identity
    H_{(1,0)} H_{w'} = sum_{s in (1,0) sh w'} H_s  recursively; terminates
    because every other shuffle term has strictly fewer leading (1,0)s
    than are produced by continuing to extract.
    """
    if is_convergent_at_one(word):
        return ((0, word, F(1)),)
    w1 = word[1:]
    acc: dict[tuple[int, Word], Fraction] = {}

    def add(m: int, v: Word, c: Fraction):
        key = (m, v)
        acc[key] = acc.get(key, F(0)) + c
        if acc[key] == 0:
            del acc[key]

    # In (1,0) sh w1 the word itself appears with multiplicity equal to its
    # number of leading (1,0) letters; every other shuffle term has strictly
    # fewer leading ones, so
    #   lead * H_word = H_{(1,0)} H_{w1} - sum_{s != word} mult_s H_s
    # and the recursion terminates on the leading-ones count.
    lead = 0
    while lead < len(word) and word[lead] == ONE_LETTER:
        lead += 1
    inv = F(1, lead)
    for m, v, c in decompose_leading_ones(w1):
        add(m + 1, v, c * inv)
    for s, mult in shuffle((ONE_LETTER,), w1):
        if s == word:
            mult -= lead
        if mult == 0:
            continue
        for m, v, c in decompose_leading_ones(s):
            add(m, v, -c * mult * inv)
    return tuple(sorted((m, v, c) for (m, v), c in acc.items()))


@lru_cache(maxsize=None)
def _letter_series_one(letter: Letter, order: int) -> LogSeries:
    """Exact series of -f_letter(1 - y) around y = 0 (the dH/dy factor).

    Only letters without a pole at 1 are allowed (letter != (1,0)).
    """
    if letter == ONE_LETTER:
        raise SeriesSingularity("letter (1,0) has a pole at x = 1")
    if letter == ZERO_LETTER:
        # -1/(1-y) = -sum y^k
        return LogSeries({(F(k), 0): F(-1) for k in range(order)}, order)
    a, b = letter
    one_minus_y = Poly([1, -1])
    phi_shift = Poly([F(c) for c in cyclotomic_poly(a)(one_minus_y).coeffs])
    num_shift = one_minus_y**b
    inv = LogSeries.from_poly_coeffs(phi_shift.coeffs, order).inverse()
    num = LogSeries.from_poly_coeffs(num_shift.coeffs, order)
    return (num * inv).scale(F(-1)).truncate(order)


_exp1_cache: dict[Word, LogSeries] = {}


def _expansion_at_one_convergent(word: Word, order: int) -> LogSeries:
    """LogSeries in y = 1-x of H_word(1-y), ConstExpr coefficients; word
    convergent at 1.  The integration constant is the symbol H_word(1)."""
    cached = _exp1_cache.get(word)
    if cached is not None and cached.order >= order:
        return cached.truncate(order)
    if not word:
        result = LogSeries({(F(0), 0): ConstExpr.rational(1)}, order)
    else:
        inner = expansion_at_one(word[1:], order)
        integrand = _mul_letter_one(inner, word[0], order).truncate(order - 1)
        if any(e < 0 for e, _ in integrand.terms):
            raise SeriesSingularity("unexpected pole in expansion at 1")
        result = integrand.integrate().truncate(order)
        # H of a pure-(0,0) word is log(x)^k / k!, which vanishes at 1.
        if all(letter == (0, 0) for letter in word):
            const = ConstExpr.zero()
        else:
            const = ConstExpr.symbol(h_symbol(word))
        result = result + LogSeries({(F(0), 0): const}, order)
    _exp1_cache[word] = result
    return result


def expansion_at_one(word: Word, order: int) -> LogSeries:
    """LogSeries in y = 1-x of H_word(1-y) for any word.

    Leading (1,0) letters are extracted by shuffle and become exact
    log(y) powers: H_{(1,0)}(1-y) = log(y).
    """
    total = LogSeries.zero(order)
    for m, v, c in decompose_leading_ones(word):
        part = _expansion_at_one_convergent(v, order)
        if m:
            # H_{(1,0)}(1-y)^m = log(y)^m exactly
            part = part * LogSeries({(F(0), m): F(1)}, order)
        total = total + part.scale(c)
    return total


# ---------------------------------------------------------------------------
# numeric values at 1 (bootstrap by matching expansions at x = 1/2)
# ---------------------------------------------------------------------------

_value1_cache: dict[Word, tuple[int, mpmath.mpf]] = {}


def value_at_one(word: Word, dps: int) -> mpmath.mpf:
    """Numeric H_word(1) for a convergent word, certified to ~dps digits.

    Matches the exact series at 0 and the expansion at 1, both evaluated at
    x = 1/2 (geometric convergence: both have radius >= 1).  Lower-weight
    H(1) symbols appearing in the expansion at 1 are resolved recursively.
    """
    if not is_convergent_at_one(word):
        raise SeriesSingularity(f"{word} diverges at 1")
    if not word:
        return mp.mpf(1)
    cached = _value1_cache.get(word)
    if cached is not None and cached[0] >= dps:
        return cached[1]
    order = int(3.4 * dps) + 25
    with mp.workdps(dps + 15):
        s0 = series_at_zero(word, order)
        e1 = _expansion_at_one_convergent(word, order)
        half = mp.mpf(1) / 2
        lhs = s0.eval_mp(half)
        own = h_symbol(word)
        sym_values = {}
        for s in _series_symbols(e1):
            if s == own:
                sym_values[s] = mp.mpf(0)
            else:
                sym_values[s] = value_at_one(parse_h_symbol(s), dps)
        rhs_without = e1.map_coeffs(
            lambda c: c.eval_mp(sym_values) if isinstance(c, ConstExpr) else c
        ).eval_mp(half)
        val = lhs - rhs_without
        _value1_cache[word] = (dps, val)
    return val


_series0_num_cache: dict = {}
_exp1_num_cache: dict = {}
_value1_fast_cache: dict[Word, tuple[int, mpmath.mpf]] = {}


def _to_mpf(c):
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return mp.mpf(c)


def _series_zero_num(word: Word, order: int) -> LogSeries:
    """mpf-coefficient series of H_word at 0 (same recursion as
    series_at_zero, float coefficients at the current precision)."""
    key = (word, order, mp.prec)
    cached = _series0_num_cache.get(key)
    if cached is not None:
        return cached
    if not word:
        result = LogSeries({(F(0), 0): mp.mpf(1)}, order)
    else:
        inner = _series_zero_num(word[1:], order)
        integrand = _mul_letter_zero(inner, check_letter(word[0]), order)
        result = integrand.truncate(order - 1).integrate().truncate(order)
    _series0_num_cache[key] = result
    return result


def _exp1_num_noconst(word: Word, order: int, dps: int) -> LogSeries:
    """mpf-coefficient expansion at 1 of a convergent word, with the
    integration constant H_word(1) omitted."""
    key = (word, order, mp.prec)
    cached = _exp1_num_cache.get(key)
    if cached is not None:
        return cached
    if not word:
        result = LogSeries({(F(0), 0): mp.mpf(0)}, order)
    else:
        inner = _exp1_num_any(word[1:], order, dps)
        integrand = _mul_letter_one(inner, word[0], order).truncate(order - 1)
        if any(e < 0 for e, _ in integrand.terms):
            raise SeriesSingularity("unexpected pole in expansion at 1")
        result = integrand.integrate().truncate(order)
    _exp1_num_cache[key] = result
    return result


def _exp1_num_any(word: Word, order: int, dps: int) -> LogSeries:
    """mpf-coefficient expansion at 1 of any word (leading (1,0) letters
    become exact log(y) powers; suffix constants resolved numerically)."""
    total = LogSeries.zero(order)
    for m, v, c in decompose_leading_ones(word):
        part = _exp1_num_noconst(v, order, dps)
        if not v:
            part = part + LogSeries({(F(0), 0): mp.mpf(1)}, order)
        elif not all(letter == ZERO_LETTER for letter in v):
            part = part + LogSeries({(F(0), 0): value_at_one_fast(v, dps)}, order)
        if m:
            part = part * LogSeries({(F(0), m): F(1)}, order)
        total = total + part.scale(c)
    return total


def value_at_one_fast(word: Word, dps: int) -> mpmath.mpf:
    """Numeric H_word(1) via the same x = 1/2 matching as value_at_one but
    with mpf series coefficients — orders of magnitude faster at high
    precision, at the cost of float (rather than exact) coefficients."""
    if not is_convergent_at_one(word):
        raise SeriesSingularity(f"{word} diverges at 1")
    if not word:
        return mp.mpf(1)
    cached = _value1_fast_cache.get(word)
    if cached is not None and cached[0] >= dps:
        return cached[1]
    order = int(3.4 * dps) + 25
    with mp.workdps(int(1.2 * dps) + 25):
        s0 = _series_zero_num(word, order)
        e1 = _exp1_num_noconst(word, order, dps)
        half = mp.mpf(1) / 2
        val = s0.eval_mp(half) - e1.eval_mp(half)
        _value1_fast_cache[word] = (dps, val)
    return val


def _series_symbols(series: LogSeries) -> set[str]:
    out: set[str] = set()
    for c in series.terms.values():
        if isinstance(c, ConstExpr):
            out |= c.symbols()
    return out


def h_values_numeric(words, dps: int) -> dict[str, mpmath.mpf]:
    return {h_symbol(w): value_at_one(w, dps) for w in words}


# ---------------------------------------------------------------------------
# ChainFunction: sum of coef * (num/den)(t) * H_word(t)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainTerm:
    coef: ConstExpr
    num: Poly
    den: FactoredDen
    word: Word

    def scaled(self, c: ConstExpr) -> "ChainTerm":
        return ChainTerm(self.coef * c, self.num, self.den, self.word)


ChainFunction = list  # list[ChainTerm]


def chain_term(coef=1, num=None, den=None, word=()) -> ChainTerm:
    if not isinstance(coef, ConstExpr):
        coef = ConstExpr.rational(coef)
    return ChainTerm(
        coef,
        num if num is not None else Poly.const(1),
        den if den is not None else FactoredDen.make(),
        tuple(word),
    )


def antiderivative_term(term: ChainTerm) -> list[ChainTerm]:
    """Antiderivative (no constant) of coef * num/den * H_word as a
    ChainFunction.  Uses letter-prepending for simple poles, integration by
    parts for polynomial/t^-k parts, and Hermite reduction for multiple
    cyclotomic poles; recursion shortens (multiplicities, word length)."""
    out: list[ChainTerm] = []
    pf = partial_fractions(term.num, term.den)
    word = term.word

    # simple poles at cyclotomic factors -> prepend letters
    for (a, j), p in sorted(pf.cyc_terms.items()):
        if j == 1:
            for b, cb in enumerate(p.coeffs):
                if cb == 0:
                    continue
                out.append(
                    ChainTerm(term.coef * cb, Poly.const(1), FactoredDen.make(), ((a, b),) + word)
                )
        else:
            # Hermite: P/Phi^j = d/dt[-sigma/((j-1)Phi^{j-1})] + tail/Phi^{j-1}
            phi = cyclotomic_poly(a)
            sigma, tail = hermite_reduce_step(p, phi, j)
            u_num = sigma * F(-1, j - 1)
            u_den = FactoredDen.make(0, {a: j - 1})
            out.append(ChainTerm(term.coef, u_num, u_den, word))
            out.extend(
                antiderivative_term(ChainTerm(term.coef, tail, u_den, word))
            )
            if word:
                out.extend(
                    _minus_int_u_fprime(term.coef, u_num, u_den, word)
                )

    # 1/t^j pieces
    for j, c in sorted(pf.t_terms.items()):
        if j == 1:
            out.append(
                ChainTerm(term.coef * c, Poly.const(1), FactoredDen.make(), (ZERO_LETTER,) + word)
            )
        else:
            out.extend(_monomial_by_parts(term.coef * c, -j, word))

    # polynomial part
    for k, c in enumerate(pf.poly.coeffs):
        if c != 0:
            out.extend(_monomial_by_parts(term.coef * c, k, word))
    return out


def _letter_rational(letter: Letter) -> tuple[Poly, FactoredDen]:
    if letter == ZERO_LETTER:
        return Poly.const(1), FactoredDen.make(1)
    a, b = letter
    return Poly.monomial(b), FactoredDen.make(0, {a: 1})


def _minus_int_u_fprime(coef, u_num: Poly, u_den: FactoredDen, word: Word) -> list[ChainTerm]:
    """- integral U(t) f_{w1}(t) H_{w'}(t) dt  for U = u_num/u_den (the
    correction term of integration by parts d[U H_w] = U' H_w + U f H_{w'})."""
    fnum, fden = _letter_rational(word[0])
    new = ChainTerm(coef * F(-1), u_num * fnum, u_den.mul(fden), word[1:])
    return antiderivative_term(new)


def _monomial_by_parts(coef: ConstExpr, k: int, word: Word) -> list[ChainTerm]:
    """Antiderivative of coef * t^k * H_word, k != -1."""
    assert k != -1
    u_num = Poly.monomial(k + 1) if k + 1 >= 0 else Poly.const(1)
    u_den = FactoredDen.make(-(k + 1)) if k + 1 < 0 else FactoredDen.make()
    u_coef = coef * F(1, k + 1)
    out = [ChainTerm(u_coef, u_num, u_den, word)]
    if word:
        out.extend(_minus_int_u_fprime(u_coef, u_num, u_den, word))
    return out


def chain_antiderivative(cf: ChainFunction) -> ChainFunction:
    out: list[ChainTerm] = []
    for t in cf:
        out.extend(antiderivative_term(t))
    return merge_chain(out)


def merge_chain(cf: ChainFunction) -> ChainFunction:
    """Combine terms with identical (num, den, word)."""
    acc: dict[tuple, ConstExpr] = {}
    for t in cf:
        key = (t.num, t.den, t.word)
        acc[key] = acc.get(key, ConstExpr.zero()) + t.coef
    return [
        ChainTerm(c, num, den, word)
        for (num, den, word), c in acc.items()
        if not c.is_zero()
    ]


# -- expansions and evaluation of chain functions ---------------------------


def _rational_series_zero(num: Poly, den: FactoredDen, order: int) -> LogSeries:
    s = LogSeries.from_poly_coeffs(num.coeffs, order + den.degree())
    if not den.is_one():
        s = s * LogSeries.from_poly_coeffs(den.expand().coeffs, order + den.degree()).inverse()
    return s.truncate(order)


def _rational_series_one(num: Poly, den: FactoredDen, order: int) -> LogSeries:
    one_minus_y = Poly([1, -1])
    num_y = Poly([F(c) for c in num(one_minus_y).coeffs]) if not num.is_zero() else num
    s = LogSeries.from_poly_coeffs(num_y.coeffs, order + den.degree() + 2)
    if not den.is_one():
        den_y = Poly([F(c) for c in den.expand()(one_minus_y).coeffs])
        s = s * LogSeries.from_poly_coeffs(den_y.coeffs, order + den.degree() + 2).inverse()
    return s.truncate(order)


def chain_series_at_zero(cf: ChainFunction, order: int) -> LogSeries:
    total = LogSeries.zero(order)
    for t in cf:
        s = _rational_series_zero(t.num, t.den, order) * series_at_zero(t.word, order)
        total = total + s.truncate(order).map_coeffs(lambda c, co=t.coef: co * c)
    return total


def chain_expansion_at_one(cf: ChainFunction, order: int) -> LogSeries:
    total = LogSeries.zero(order)
    for t in cf:
        s = _rational_series_one(t.num, t.den, order) * expansion_at_one(t.word, order)
        total = total + s.truncate(order).map_coeffs(lambda c, co=t.coef: co * c)
    return total


def chain_value_at_one(cf: ChainFunction, order: int = 8) -> ConstExpr:
    """Exact limit of the chain function at t -> 1.

    Individual terms may diverge; the total must not — asserted by requiring
    all negative powers and logs of y to cancel exactly."""
    series = chain_expansion_at_one(cf, order)
    c = series.constant_term()
    if not isinstance(c, ConstExpr):
        c = ConstExpr.rational(c)
    return c


def chain_value_at_zero(cf: ChainFunction, order: int = 8) -> ConstExpr:
    """Exact limit at t -> 0 (poles/logs must cancel in total)."""
    series = chain_series_at_zero(cf, order)
    c = series.constant_term()
    if not isinstance(c, ConstExpr):
        c = ConstExpr.rational(c)
    return c


def integrate_chain_from_one(cf: ChainFunction, order: int = 8) -> ChainFunction:
    """G(t) = integral_1^t cf(u) du as a ChainFunction.

    Computes the antiderivative A and subtracts its exact limit A(1)."""
    anti = chain_antiderivative(cf)
    c1 = chain_value_at_one(anti, order=order)
    if not c1.is_zero():
        anti = anti + [chain_term(-c1)]
    return merge_chain(anti)


def chain_eval_mp(
    cf: ChainFunction, t, dps: int, symbol_values: dict[str, mpmath.mpf] | None = None
) -> mpmath.mpf:
    """Numeric value of the chain function at t in (0, 1).

    H words are evaluated by their series at 0 (t <= 0.6) or expansion at 1;
    any H(1) symbols are resolved with value_at_one."""
    with mp.workdps(dps + 10):
        tm = mp.mpf(t)
        order = int(dps / 0.22) + 20 if tm > mp.mpf("0.6") else int(dps / float(-mp.log10(tm))) + 20
        total = mp.mpf(0)
        sym_cache: dict[str, mpmath.mpf] = dict(symbol_values or {})

        def resolve(c):
            if isinstance(c, ConstExpr):
                for s in c.symbols():
                    if s not in sym_cache:
                        sym_cache[s] = value_at_one(parse_h_symbol(s), dps)
                return c.eval_mp(sym_cache)
            return c

        for term in cf:
            num_v = term.num(tm)
            den_v = term.den.expand()(tm)
            if tm <= mp.mpf("0.6"):
                hv = series_at_zero(term.word, order).eval_mp(tm)
            else:
                e1 = expansion_at_one(term.word, order)
                hv = e1.map_coeffs(resolve).eval_mp(1 - tm)
            total += resolve(term.coef) * num_v / den_v * hv
        return +total
