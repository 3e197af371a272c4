"""Reduction of cyclotomic polylogarithm values at 1 to a constant basis.

Per cyclotomy class (e.g. letters over {1,2}: (0,0), (1,0), (2,0)) and weight
k, every convergent word's value H_w(1) is expressed as an exact Q-polynomial
in a small set of generator constants:

1. Shuffle relations H_u(1) H_v(1) = sum_{w in u sh v} H_w(1) for convergent
   u, v with |u| + |v| = k are row-reduced (Gauss-Jordan over Q, pivots
   preferring non-Lyndon words) so that only a basis of free words — in
   practice the Lyndon words — needs independent values.
2. Each free word is evaluated numerically to high precision and PSLQ is run
   against the weight-k monomials in the class's generator constants.  Every
   detected relation is re-verified at extra precision before being trusted.
3. Back-substitution turns every convergent word of weight <= max_weight
   into an exact ConstExpr entry.

Tables are written to / read from a plain text format, one entry per line:
`H[(2,0),(1,0)] = 1/2*l2^2 - 1/12*pi^2`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from .constexpr import ConstExpr, SYMBOL_WEIGHTS
from .cpl import h_symbol, parse_h_symbol, shuffle, value_at_one_fast
from .errors import ReductionError, TableError
from .polys import cyclotomic_poly

F = Fraction

# Words defining the primitive H constants named in the basis.  h7/h8 are
# the two weight-2 {1,5}-class words that PSLQ cannot reduce to products of
# lower-weight constants; they are fixed here so tables are reproducible.
PRIMITIVE_WORDS: dict[str, tuple] = {
    "h1": ((3, 0), (0, 0)),
    "h2": ((3, 0), (0, 0), (1, 0)),
    "h3": ((3, 0), (0, 0), (0, 0), (0, 0)),
    "h4": ((3, 0), (0, 0), (1, 0), (1, 0)),
    "h5": ((5, 1),),
    "h6": ((5, 3),),
    "h7": ((5, 1), (0, 0)),
    "h8": ((5, 2), (0, 0)),
}


@dataclass(frozen=True)
class ClassConfig:
    """What to build a table over: letters, scope, and PSLQ candidates."""

    classes: tuple[int, ...]
    max_weight: int
    generators: tuple[str, ...]        # constant symbols, weights from registry
    radicals: tuple[str, ...] = ()     # weight-0 symbols, degree <= 1 each
    primitive_pool: tuple[str, ...] = ()  # names for new primitives found
    even_pi: bool = False              # restrict candidates to even pi powers
    pi_radical_parity: bool = False    # radical present iff pi power is odd

    def alphabet(self) -> tuple[tuple[int, int], ...]:
        letters = [(0, 0)]
        if 1 in self.classes:
            letters.append((1, 0))
        for a in sorted(self.classes):
            if a > 1:
                phi = cyclotomic_poly(a).degree
                letters.extend((a, b) for b in range(phi))
        return tuple(letters)


# The shipped table scopes.  Weights are the maxima needed by the corpus.
CLASS_CONFIGS: dict[str, ClassConfig] = {
    "1-2": ClassConfig(
        classes=(1, 2),
        max_weight=6,
        generators=("l2", "pi", "z3", "p4", "z5", "p5", "p6", "s1"),
        even_pi=True,
    ),
    "1-3": ClassConfig(
        classes=(1, 3),
        max_weight=4,
        generators=("l3", "pi", "h1", "z3", "h2", "h3", "h4"),
        radicals=("sqrt3",),
        primitive_pool=tuple(f"h{i}" for i in range(10, 26)),
        pi_radical_parity=True,
    ),
    "1-2-4": ClassConfig(
        classes=(1, 2, 4),
        max_weight=3,
        generators=("l2", "pi", "C", "z3"),
        primitive_pool=("h9",),
    ),
    "1-5": ClassConfig(
        classes=(1, 5),
        max_weight=2,
        generators=("pi", "l5", "lphi", "h5", "h6", "h7", "h8"),
        radicals=("sqrt5",),
    ),
}


@dataclass
class RelationTable:
    classes: tuple[int, ...]
    max_weight: int
    entries: dict[str, ConstExpr] = field(default_factory=dict)
    generated_dps: int = 0
    primitives: dict[str, str] = field(default_factory=dict)  # sym -> h_symbol

    def lookup(self, word) -> ConstExpr:
        sym = h_symbol(tuple(word))
        if sym not in self.entries:
            raise ReductionError(f"no table entry for {sym}")
        return self.entries[sym]

    def reduce(self, expr: ConstExpr) -> ConstExpr:
        """Substitute all H[...] symbols in expr by their table entries."""
        mapping = {}
        for sym in expr.symbols():
            if sym.startswith("H["):
                if sym not in self.entries:
                    raise ReductionError(f"no table entry for {sym}")
                mapping[sym] = self.entries[sym]
        return expr.subs_symbols(mapping)


def reduce_to_constants(
    expr: ConstExpr, table: RelationTable, strict: bool = True
) -> ConstExpr:
    """Reduce every H[...] symbol in `expr` through the table.

    With strict=True (the default) a leftover H-symbol -- a word outside the
    table's classes or above its weight -- raises ReductionError instead of
    passing through silently."""
    out = table.reduce(expr)
    if strict:
        leftover = sorted(s for s in out.symbols() if s.startswith("H["))
        if leftover:
            raise ReductionError(
                f"words not covered by the table: {', '.join(leftover)}"
            )
    return out


# ---------------------------------------------------------------------------
# word enumeration
# ---------------------------------------------------------------------------


def convergent_words(alphabet, weight: int):
    """All weight-`weight` words over `alphabet` convergent at 1."""
    out = []

    def rec(prefix):
        if len(prefix) == weight:
            out.append(tuple(prefix))
            return
        for letter in alphabet:
            prefix.append(letter)
            rec(prefix)
            prefix.pop()

    for first in alphabet:
        if first == (1, 0):
            continue
        rec([first])
    return out


def _is_lyndon(word, alphabet) -> bool:
    """Lyndon = strictly smallest among its rotations; (1,0) ordered last so
    Lyndon words of length >= 2 never start with it (hence are convergent)."""
    rank = {letter: i for i, letter in enumerate(_ordered(alphabet))}
    w = tuple(rank[letter] for letter in word)
    n = len(w)
    for i in range(1, n):
        if w[i:] + w[:i] <= w:
            return False
    return True


def _ordered(alphabet):
    return sorted(alphabet, key=lambda letter: (letter == (1, 0), letter))


# ---------------------------------------------------------------------------
# monomial basis
# ---------------------------------------------------------------------------


def weight_monomials(
    generators,
    weight: int,
    radicals=(),
    even_pi: bool = False,
    pi_radical_parity: bool = False,
):
    """All ConstExpr monomials of the given weight in the generators,
    optionally multiplied by one radical (weight-0, degree <= 1).

    even_pi drops monomials with an odd power of pi: in classes whose letter
    values are real without quadrature constants (pure {1,2}), pi enters only
    through zeta(2), so odd powers cannot occur and only dilute PSLQ.

    pi_radical_parity couples pi to the (single) radical: a monomial carries
    the radical iff its pi power is odd.  In classes built on a real quadratic
    field (e.g. {1,3} with sqrt(3)), pi always enters through arguments like
    pi/sqrt(3), so each power of pi brings one factor of the radical and the
    parities must agree."""
    gens = sorted(generators, key=lambda s: (SYMBOL_WEIGHTS[s], s))
    plain: list[dict[str, int]] = []

    def rec(i, remaining, current):
        if remaining == 0:
            if not (even_pi and current.get("pi", 0) % 2):
                plain.append(dict(current))
            return
        if i == len(gens):
            return
        sym = gens[i]
        w = SYMBOL_WEIGHTS[sym]
        rec(i + 1, remaining, current)
        if w <= remaining:
            current[sym] = current.get(sym, 0) + 1
            rec(i, remaining - w, current)
            current[sym] -= 1
            if current[sym] == 0:
                del current[sym]

    rec(0, weight, {})
    out = []
    for mono in plain:
        expr = ConstExpr.rational(1)
        for sym, k in sorted(mono.items()):
            expr = expr * ConstExpr.symbol(sym, k)
        if pi_radical_parity:
            if mono.get("pi", 0) % 2:
                out.append(expr * ConstExpr.symbol(radicals[0]))
            else:
                out.append(expr)
            continue
        out.append(expr)
        for rad in radicals:
            out.append(expr * ConstExpr.symbol(rad))
    return out


S_CONSTANT_INDICES = {
    "s1": (-5, -1),
    "s2": (5, -1, -1),
    "s3": (-5, 1, 1),
    "s4": (5, 3),
    "s5": (-7, -1),
    "s6": (-5, -1, -1, -1),
    "s7": (-5, -1, 1, 1),
}


def euler_word_expansion(indices: tuple[int, ...]) -> dict[tuple, Fraction]:
    """Expand an alternating multiple harmonic value S_{indices}(infinity)
    into level-2 H-words at 1.

    The inclusive nesting k_{j} >= k_{j+1} splits layer by layer into strict
    inequality or equality; equal adjacent layers merge (powers add, signs
    multiply).  Each strictly-nested term is then a word over
    {(0,0), (1,0), (2,0)}: block j contributes (0,0)^{m_j - 1} followed by
    (1,0) when the cumulative sign is +1 and (2,0) when it is -1, with an
    overall factor (-1)^{depth}.
    """
    from itertools import product as iproduct

    k = len(indices)
    out: dict[tuple, Fraction] = {}
    for pattern in iproduct((True, False), repeat=k - 1):
        # True = strict inequality between layer j and j+1, False = merge
        blocks: list[list[int]] = [[indices[0]]]
        for strict, idx in zip(pattern, indices[1:]):
            if strict:
                blocks.append([idx])
            else:
                blocks[-1].append(idx)
        merged = [
            (sum(abs(c) for c in blk), -1 if sum(1 for c in blk if c < 0) % 2 else 1)
            for blk in blocks
        ]
        word: list[tuple[int, int]] = []
        y = 1
        for m, sign in merged:
            y *= sign
            word.extend([(0, 0)] * (m - 1))
            word.append((1, 0) if y == 1 else (2, 0))
        coeff = Fraction((-1) ** len(merged))
        w = tuple(word)
        out[w] = out.get(w, Fraction(0)) + coeff
    return {w: c for w, c in out.items() if c}


def generator_value(sym: str, dps: int) -> mpmath.mpf:
    """Numeric value of a generator constant (shipped cache preferred,
    recomputed from the definition when the cache is absent or too short)."""
    from .numerics import eval_constant

    try:
        return eval_constant(sym, dps)
    except (KeyError, ValueError):
        pass
    if sym in PRIMITIVE_WORDS:
        return value_at_one_fast(PRIMITIVE_WORDS[sym], dps)
    if sym in S_CONSTANT_INDICES:
        with mp.workdps(dps + 10):
            total = mp.mpf(0)
            for word, coeff in euler_word_expansion(S_CONSTANT_INDICES[sym]).items():
                total += mp.mpf(coeff.numerator) / coeff.denominator * value_at_one_fast(
                    word, dps + 5
                )
            return +total
    return eval_constant(sym, dps)


def eval_constexpr_mp(expr: ConstExpr, dps: int) -> mpmath.mpf:
    """Evaluate over generator constants and H[...] symbols."""
    with mp.workdps(dps + 10):
        values = {}
        for sym in expr.symbols():
            if sym.startswith("H["):
                values[sym] = value_at_one_fast(parse_h_symbol(sym), dps)
            else:
                values[sym] = generator_value(sym, dps)
        v = expr.eval_mp(values)
        if isinstance(v, Fraction):
            v = mp.mpf(v.numerator) / v.denominator
        return v


# ---------------------------------------------------------------------------
# PSLQ seeding
# ---------------------------------------------------------------------------


def pslq_reduce_value(
    value: mpmath.mpf,
    monomials: list[ConstExpr],
    mono_values: list[mpmath.mpf],
    dps: int,
    max_coeff: int = 10**10,
) -> ConstExpr | None:
    """Express value as a Q-combination of the monomials via PSLQ, or None.

    Tries a ladder of working precisions up to dps (cheap relations are
    found at lower precision; hard ones get the full budget).  A relation is
    accepted only if its residual is below 10^-(0.8 * run precision), leaving
    headroom so that chance relations at working precision are rejected;
    callers re-verify at extra precision before trusting the result."""
    ladder = sorted({max(60, dps // 2), max(80, (3 * dps) // 4), dps})
    for run_dps in ladder:
        with mp.workdps(run_dps):
            vec = [value] + list(mono_values)
            rel = mp.pslq(vec, maxcoeff=max_coeff, maxsteps=50000)
            if rel is None or rel[0] == 0:
                continue
            resid = mp.fsum(c * v for c, v in zip(rel, vec))
            if abs(resid) > mp.mpf(10) ** (-int(0.8 * run_dps)):
                continue
        c0 = rel[0]
        expr = ConstExpr.zero()
        for c, mono in zip(rel[1:], monomials):
            if c:
                expr = expr + mono * F(-c, c0)
        return expr
    return None


def _prune_dependent(monos, mvals, dps):
    """Drop candidate monomials until no Q-relation remains among them.

    Products of basis constants can satisfy Q-relations (e.g. the level-5
    letter values h5, h6 are arctan-type constants whose product reduces to
    pi^2 terms); a dependent candidate set makes PSLQ return the internal
    relation instead of reducing the target value."""
    monos = list(monos)
    mvals = list(mvals)
    while len(monos) > 1:
        with mp.workdps(dps):
            rel = mp.pslq(mvals, maxcoeff=10**10, maxsteps=20000)
            if rel is None:
                break
            resid = mp.fsum(c * v for c, v in zip(rel, mvals))
            if abs(resid) > mp.mpf(10) ** (-int(0.8 * dps)):
                break
        drop = max(i for i, c in enumerate(rel) if c)
        monos.pop(drop)
        mvals.pop(drop)
    return monos, mvals


# ---------------------------------------------------------------------------
# table construction
# ---------------------------------------------------------------------------


def build_relation_table(cfg: ClassConfig, dps: int = 100, verbose: bool = False) -> RelationTable:
    table = RelationTable(classes=cfg.classes, max_weight=cfg.max_weight, generated_dps=dps)
    alphabet = cfg.alphabet()
    generators = list(cfg.generators)
    pool = list(cfg.primitive_pool)
    entries = table.entries
    mono_value_cache: dict[str, mpmath.mpf] = {}

    def mono_val(expr: ConstExpr, prec: int) -> mpmath.mpf:
        key = repr(expr)
        if key not in mono_value_cache:
            mono_value_cache[key] = eval_constexpr_mp(expr, prec)
        return mono_value_cache[key]

    for k in range(1, cfg.max_weight + 1):
        words = convergent_words(alphabet, k)
        index = {w: i for i, w in enumerate(words)}

        # Gauss-Jordan over Q on shuffle relations; row = {word: coeff}, rhs
        # = ConstExpr built from lower-weight entries.
        pivots: dict[tuple, tuple[dict, ConstExpr]] = {}

        def reduce_row(row: dict, rhs: ConstExpr):
            for w in sorted(row, key=lambda w: index[w]):
                if w in row and w in pivots:
                    c = row.pop(w)
                    prow, prhs = pivots[w]
                    for w2, c2 in prow.items():
                        row[w2] = row.get(w2, F(0)) - c * c2
                        if row[w2] == 0:
                            del row[w2]
                    rhs = rhs - prhs * c
            return row, rhs

        lower = {w2: e for w2, e in entries.items()}
        pairs = []
        for ku in range(1, k // 2 + 1):
            us = convergent_words(alphabet, ku)
            vs = convergent_words(alphabet, k - ku)
            for i, u in enumerate(us):
                start = i if ku == k - ku else 0
                for v in vs[start:]:
                    pairs.append((u, v))
        for u, v in pairs:
            row = {w: F(m) for w, m in shuffle(u, v)}
            rhs = lower[h_symbol(u)] * lower[h_symbol(v)]
            row, rhs = reduce_row(row, rhs)
            if not row:
                if not rhs.is_zero():
                    raise TableError(f"inconsistent shuffle relation {u} x {v}")
                continue
            # pivot preference: non-Lyndon first, then latest in index order
            pw = max(
                row,
                key=lambda w: (not _is_lyndon(w, alphabet), index[w]),
            )
            c = row.pop(pw)
            prow = {w: cc / c for w, cc in row.items()}
            prhs = rhs / c
            # keep previous pivot rows fully reduced in the new pivot's column
            for w2, (row2, rhs2) in list(pivots.items()):
                if pw in row2:
                    c2 = row2.pop(pw)
                    for w3, c3 in prow.items():
                        row2[w3] = row2.get(w3, F(0)) - c2 * c3
                        if row2[w3] == 0:
                            del row2[w3]
                    pivots[w2] = (row2, rhs2 - prhs * c2)
            pivots[pw] = (prow, prhs)

        free = [w for w in words if w not in pivots]
        if verbose:
            print(f"weight {k}: {len(words)} words, {len(pivots)} pivoted, {len(free)} free")

        # values for free words: the pure-log word is 0; others via PSLQ
        monos = weight_monomials(generators, k, cfg.radicals, cfg.even_pi)
        mvals = None
        for w in free:
            sym = h_symbol(w)
            if all(letter == (0, 0) for letter in w):
                entries[sym] = ConstExpr.zero()
                continue
            known = next(
                (p for p, pw_ in PRIMITIVE_WORDS.items() if pw_ == w and p in generators),
                None,
            )
            if known is not None:
                entries[sym] = ConstExpr.symbol(known)
                continue
            if mvals is None:
                mvals = [mono_val(m, dps) for m in monos]
                monos, mvals = _prune_dependent(monos, mvals, dps)
            val = value_at_one_fast(w, dps)
            expr = pslq_reduce_value(val, monos, mvals, dps)
            if expr is not None:
                # re-verify at extra precision before trusting
                check = eval_constexpr_mp(expr, dps + 20)
                vhigh = value_at_one_fast(w, dps + 20)
                if abs(check - vhigh) > mp.mpf(10) ** (-(dps + 5)):
                    raise TableError(f"PSLQ relation for {sym} failed re-verification")
                entries[sym] = expr
                continue
            if pool:
                name = pool.pop(0)
                if name in SYMBOL_WEIGHTS and SYMBOL_WEIGHTS[name] != k:
                    raise TableError(
                        f"primitive {name} has registered weight "
                        f"{SYMBOL_WEIGHTS[name]}, found at weight {k}"
                    )
                SYMBOL_WEIGHTS[name] = k
                PRIMITIVE_WORDS[name] = w
                table.primitives[name] = sym
                generators.append(name)
                monos = weight_monomials(generators, k, cfg.radicals, cfg.even_pi)
                mvals = None
                entries[sym] = ConstExpr.symbol(name)
                if verbose:
                    print(f"  new primitive {name} := {sym}")
                continue
            raise TableError(f"PSLQ found no relation for {sym} at {dps} digits")

        # back-substitute pivot rows (fully reduced: depend on free words only)
        for pw, (row, rhs) in pivots.items():
            expr = rhs
            for w2, c in row.items():
                expr = expr - entries[h_symbol(w2)] * c
            entries[h_symbol(pw)] = expr

    return table


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_table(table: RelationTable, dps: int = 40, sample=None) -> int:
    """Re-verify entries numerically at dps digits; returns count checked.

    sample: optional iterable of h-symbols; default = all entries."""
    syms = list(sample) if sample is not None else list(table.entries)
    checked = 0
    with mp.workdps(dps + 15):
        tol = mp.mpf(10) ** (-(dps - 3))
        for sym in syms:
            word = parse_h_symbol(sym)
            lhs = value_at_one_fast(word, dps + 5)
            rhs = eval_constexpr_mp(table.entries[sym], dps + 5)
            if abs(lhs - rhs) > tol:
                raise TableError(
                    f"table entry {sym} fails at {dps} digits: "
                    f"|lhs-rhs| = {mpmath.nstr(abs(lhs - rhs), 5)}"
                )
            checked += 1
    return checked


# ---------------------------------------------------------------------------
# file IO
# ---------------------------------------------------------------------------


def _format_expr(expr: ConstExpr) -> str:
    if expr.is_zero():
        return "0"
    parts = []
    for mono, coeff in sorted(expr.terms.items()):
        factors = [str(coeff)]
        for sym, power in mono:
            factors.append(sym if power == 1 else f"{sym}^{power}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def _parse_expr(text: str) -> ConstExpr:
    text = text.strip()
    if text == "0":
        return ConstExpr.zero()
    expr = ConstExpr.zero()
    for part in text.split(" + "):
        factors = part.split("*")
        term = ConstExpr.rational(F(factors[0]))
        for f in factors[1:]:
            if "^" in f:
                sym, power = f.rsplit("^", 1)
                term = term * ConstExpr.symbol(sym, int(power))
            else:
                term = term * ConstExpr.symbol(f)
        expr = expr + term
    return expr


def save_table(table: RelationTable, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"# classes={','.join(map(str, table.classes))}\n")
        fh.write(f"# max_weight={table.max_weight}\n")
        fh.write(f"# generated_dps={table.generated_dps}\n")
        for name, sym in sorted(table.primitives.items()):
            fh.write(f"# primitive {name} = {sym}\n")
        for sym in sorted(table.entries, key=lambda s: (len(parse_h_symbol(s)), s)):
            fh.write(f"{sym} = {_format_expr(table.entries[sym])}\n")


def load_table(path_or_file) -> RelationTable:
    if hasattr(path_or_file, "read"):
        lines = path_or_file.read().splitlines()
    else:
        with open(path_or_file) as fh:
            lines = fh.read().splitlines()
    classes: tuple[int, ...] = ()
    max_weight = 0
    dps = 0
    primitives: dict[str, str] = {}
    entries: dict[str, ConstExpr] = {}
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("classes="):
                classes = tuple(int(x) for x in body[8:].split(","))
            elif body.startswith("max_weight="):
                max_weight = int(body[11:])
            elif body.startswith("generated_dps="):
                dps = int(body[14:])
            elif body.startswith("primitive "):
                name, sym = body[10:].split(" = ")
                primitives[name] = sym
                word = parse_h_symbol(sym)
                PRIMITIVE_WORDS.setdefault(name, word)
                SYMBOL_WEIGHTS.setdefault(name, len(word))
            continue
        sym, expr_text = line.split(" = ", 1)
        entries[sym] = _parse_expr(expr_text)
    return RelationTable(
        classes=classes,
        max_weight=max_weight,
        entries=entries,
        generated_dps=dps,
        primitives=primitives,
    )


def load_shipped_table(name: str) -> RelationTable:
    """Load a table shipped in pochsum/data, e.g. name='1-2'."""
    import importlib.resources

    res = importlib.resources.files("pochsum").joinpath(f"data/table_{name}.txt")
    with res.open() as fh:
        return load_table(fh)
