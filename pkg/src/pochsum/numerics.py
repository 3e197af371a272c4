"""Arbitrary-precision numerics: constants, series acceleration, certification.

All heavy lifting (mpf arithmetic, zeta, polylog, tanh-sinh quadrature, the
Levin transformation, PSLQ) is delegated to mpmath; this module adds exact
term generation, certified-digit bookkeeping, the Wynn-rho transformation
(absent from mpmath), and the frozen cache of expensive constants (h- and
s-constants).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import AccelerationError, CertificationError
from .sums import PochhammerSumSpec, nested_sum_value, pochhammer, S, NestedSumSpec

F = Fraction


@dataclass(frozen=True)
class BigFloat:
    """An mpf value together with the number of digits we certify."""

    value: mpmath.mpf
    certified_digits: int

    def __repr__(self):
        return f"BigFloat({mpmath.nstr(self.value, min(self.certified_digits, 30))}, ±1e-{self.certified_digits})"


@dataclass(frozen=True)
class AccelConfig:
    """Configuration for accelerate_sum."""

    method: str = "levin_u"       # direct | levin_u | wynn_rho | richardson
    max_terms: int = 400
    target_digits: int = 50
    extraprec_factor: float = 2.0  # extra working precision multiplier


# ---------------------------------------------------------------------------
# named constants
# ---------------------------------------------------------------------------

_CACHE: dict[str, tuple[int, str]] | None = None


def _load_cache() -> dict[str, tuple[int, str]]:
    """Parse the shipped constants cache: lines `name digits value`."""
    global _CACHE
    if _CACHE is None:
        _CACHE = {}
        try:
            text = (
                importlib.resources.files("pochsum")
                .joinpath("data/constants_cache.txt")
                .read_text()
            )
        except FileNotFoundError:
            text = ""
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, digits, value = line.split()
            _CACHE[name] = (int(digits), value)
    return _CACHE


def eval_constant(name: str, dps: int) -> mpmath.mpf:
    """Numeric value of a basis constant at dps digits.

    Cheap constants are computed directly with mpmath; h- and s-constants come
    from the shipped cache (generated by scripts/generate_constants_cache.py)
    and raise if the cache precision is insufficient.
    """
    with mp.workdps(dps + 10):
        if name == "pi":
            v = mp.pi
        elif name == "l2":
            v = mp.log(2)
        elif name == "l3":
            v = mp.log(3)
        elif name == "l5":
            v = mp.log(5)
        elif name == "lphi":
            v = mp.log((1 + mp.sqrt(5)) / 2)
        elif name == "C":
            v = mp.catalan
        elif name == "sqrt3":
            v = mp.sqrt(3)
        elif name == "sqrt5":
            v = mp.sqrt(5)
        elif name.startswith("z") and name[1:].isdigit():
            v = mp.zeta(int(name[1:]))
        elif name.startswith("p") and name[1:].isdigit():
            v = mpmath.polylog(int(name[1:]), mp.mpf(1) / 2)
        else:
            cache = _load_cache()
            if name not in cache:
                raise KeyError(f"unknown constant {name!r} (not in cache)")
            digits, value = cache[name]
            if digits < dps:
                raise ValueError(
                    f"cache holds {name} to {digits} digits, {dps} requested"
                )
            v = mp.mpf(value)
        return +v


def constant_values(names, dps: int) -> dict[str, mpmath.mpf]:
    return {n: eval_constant(n, dps) for n in names}


# ---------------------------------------------------------------------------
# acceleration
# ---------------------------------------------------------------------------


def wynn_rho(partials: list[mpmath.mpf]) -> mpmath.mpf:
    """Wynn's rho algorithm on a list of partial sums (x_n = n+1).

    rho_{-1}^{(n)} = 0, rho_0^{(n)} = s_n,
    rho_{k+1}^{(n)} = rho_{k-1}^{(n+1)} + (x_{n+k+1} - x_n)/(rho_k^{(n+1)} - rho_k^{(n)}).
    Returns the highest even-order entry.
    """
    n = len(partials)
    if n < 3:
        return partials[-1]
    prev = [mp.mpf(0)] * (n + 1)          # rho_{-1}
    cur = [mp.mpf(s) for s in partials]   # rho_0
    best = cur[-1]
    k = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            denom = cur[i + 1] - cur[i]
            if denom == 0:
                return cur[i + 1]
            nxt.append(prev[i + 1] + (k + 1) / denom)
        prev, cur = cur, nxt
        k += 1
        if k % 2 == 0 and cur:
            best = cur[-1]
    return best


def accelerate_sum(terms, config: AccelConfig) -> BigFloat:
    """Accelerate sum of `terms` (exact Fractions or mpf) to target digits.

    terms: iterable of term values (term 1, term 2, ...).  Returns a BigFloat
    whose certified_digits is derived from the method's internal error
    estimate with a safety margin; raises AccelerationError if the target is
    unreachable within max_terms.
    """
    work_dps = max(mp.dps, int(config.target_digits * config.extraprec_factor) + 20)
    with mp.workdps(work_dps):
        tlist = []
        for i, t in enumerate(terms):
            if i >= config.max_terms:
                break
            if isinstance(t, Fraction):
                t = mp.mpf(t.numerator) / t.denominator
            tlist.append(mp.mpf(t))
        if not tlist:
            return BigFloat(mp.mpf(0), config.target_digits)

        partials = []
        s = mp.mpf(0)
        for t in tlist:
            s += t
            partials.append(+s)

        if config.method == "direct":
            # certify via the last term as a tail proxy with ratio estimate
            if len(tlist) >= 2 and abs(tlist[-2]) > 0:
                r = abs(tlist[-1]) / abs(tlist[-2])
                r = min(r, mp.mpf("0.999"))
                tail = abs(tlist[-1]) * r / (1 - r) * 2
            else:
                tail = abs(tlist[-1])
            value, err = partials[-1], tail
        elif config.method == "levin_u":
            value, err = _levin_best(partials)
        elif config.method == "wynn_rho":
            value = wynn_rho(partials)
            check = wynn_rho(partials[:-4]) if len(partials) > 8 else partials[-1]
            err = abs(value - check)
        elif config.method == "richardson":
            value = mp.richardson(partials)[0]
            err = abs(mp.richardson(partials[: 3 * len(partials) // 4])[0] - value)
        else:
            raise ValueError(f"unknown acceleration method {config.method!r}")

        err = abs(err) + mp.mpf(10) ** (5 - work_dps)
        digits = int(-mp.log10(err)) - 1
        if digits < config.target_digits:
            raise AccelerationError(
                f"{config.method} reached only {digits} digits "
                f"(target {config.target_digits}, {len(tlist)} terms)"
            )
        return BigFloat(+value, min(digits, work_dps - 5))


def _levin_best(partials) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Run Levin-u over the partial sums, tracking the most stable estimate.

    The transform loses accuracy past a few hundred terms (cancellation), so
    we keep the estimate whose step-to-step difference is smallest.
    """
    with mp.extraprec(2 * mp.prec):
        L = mp.levin(method="levin", variant="u")
        best_v, best_e = partials[-1], abs(partials[-1] - partials[len(partials) // 2])
        prev_v = None
        for s in partials:
            try:
                v, _ = L.step_psum(s)
            except ZeroDivisionError:
                break
            if prev_v is not None:
                e = abs(v - prev_v)
                if e < best_e:
                    best_v, best_e = v, e
            prev_v = v
    return +best_v, +best_e


def spec_terms(spec: PochhammerSumSpec, n_max: int):
    """Generator of exact Fraction terms 1..n_max with incremental updates."""
    xn = F(1)
    poch = F(1)
    import math

    for n in range(1, n_max + 1):
        xn *= spec.x
        poch *= spec.p + (n - 1)
        if n + spec.d < 0:
            yield F(0)
            continue
        num = xn * poch * nested_sum_value(spec.inner, n)
        den = F((spec.a * n + spec.b) ** spec.c) * math.factorial(n + spec.d)
        yield num / den


def spec_terms_mpf(spec: PochhammerSumSpec, n_max: int):
    """Generator of mpf terms 1..n_max at the current precision, O(1) each.

    The Pochhammer/factorial ratio is carried as a running mpf product and
    each inner-sum level is updated incrementally, so summing n_max terms is
    O(n_max * depth) — usable for the tail-fit extrapolation where exact
    Fraction partial sums (with factorial-sized denominators) are not.
    """
    x = mp.mpf(spec.x.numerator) / spec.x.denominator
    p = mp.mpf(spec.p.numerator) / spec.p.denominator
    idxs = list(spec.inner)
    inner_vals = [mp.mpf(0)] * len(idxs)
    core = None  # x^n (p)_n / (n+d)!
    for n in range(1, n_max + 1):
        # innermost level first so outer levels see S_rest(n)
        for i in range(len(idxs) - 1, -1, -1):
            ix = idxs[i]
            term = mp.mpf(1) / mp.mpf(ix.a * n + ix.b) ** abs(ix.c)
            if ix.c < 0 and n % 2:
                term = -term
            if i + 1 < len(idxs):
                term *= inner_vals[i + 1]
            inner_vals[i] += term
        if n + spec.d < 0:
            yield mp.mpf(0)
            continue
        if core is None:
            num = spec.x**n * pochhammer(spec.p, n)
            core = mp.mpf(num.numerator) / num.denominator / mp.factorial(n + spec.d)
        else:
            core *= x * (p + n - 1) / (n + spec.d)
        t = core / mp.mpf(spec.a * n + spec.b) ** spec.c
        if idxs:
            t *= inner_vals[0]
        yield +t


def _tail_log_power(spec: PochhammerSumSpec) -> int:
    """Highest power of log n in the inner sum's growth (indices of weight 1)."""
    return sum(1 for ix in spec.inner if ix.c == 1)


def tail_fit_sum(spec: PochhammerSumSpec, target_digits: int = 50) -> BigFloat:
    """Sum at x = 1 by fitting the known tail shape of the partial sums.

    For x = 1 and a non-alternating inner sum the partial sums satisfy
    s_N = s + sum_{i,j} c_ij log^j N / N^{beta+i} with beta = c + d - p and
    j <= J (J = number of weight-1 inner indices).  Solving the square
    linear system through i <= K at geometrically spaced N gives s to
    roughly 4K digits; the error estimate is the difference against the
    K-2 fit on the same data.  Levin-type transforms stall on these series
    because of the log factors.
    """
    if spec.x != 1:
        raise AccelerationError("tail_fit_sum requires x = 1")
    if any(ix.c < 0 for ix in spec.inner):
        raise AccelerationError("tail_fit_sum requires a non-alternating inner sum")
    J = _tail_log_power(spec)
    K = max(10, (target_digits + 10) // 4 + 1)
    beta_f = F(spec.c + spec.d) - spec.p
    if beta_f <= 0:
        raise AccelerationError("sum does not converge at x = 1")
    work_dps = max(int(2.5 * target_digits) + 80, 200)
    with mp.workdps(work_dps):
        beta = mp.mpf(beta_f.numerator) / beta_f.denominator

        def npts(k):
            return 1 + (k + 1) * (J + 1)

        n0 = 300
        n_max_cap = 90000
        ratio = min(1.22, (n_max_cap / n0) ** (1.0 / max(npts(K) - 1, 1)))
        Ns = [int(n0 * ratio**k) for k in range(npts(K))]
        # partial sums at the sample points
        ps = {}
        tgt = set(Ns)
        s = mp.mpf(0)
        for n, t in enumerate(spec_terms_mpf(spec, max(Ns)), start=1):
            s += t
            if n in tgt:
                ps[n] = +s

        def fit(k):
            pts = Ns[: npts(k)] if npts(k) < len(Ns) else Ns
            basis = [None] + [(i, j) for i in range(k + 1) for j in range(J + 1)]
            if len(pts) != len(basis):
                pts = Ns[-len(basis):]
            A = mp.matrix(len(pts), len(basis))
            b = mp.matrix(len(pts), 1)
            for r, N in enumerate(pts):
                lN = mp.log(N)
                A[r, 0] = 1
                for col, (i, j) in enumerate(basis[1:], 1):
                    A[r, col] = lN**j / mp.mpf(N) ** (beta + i)
                b[r] = ps[N]
            return mp.lu_solve(A, b)[0]

        value = fit(K)
        err = abs(value - fit(K - 2)) + mp.mpf(10) ** (40 - work_dps)
        digits = int(-mp.log10(err)) - 1
        if digits < target_digits:
            raise AccelerationError(
                f"tail_fit reached only {digits} digits (target {target_digits})"
            )
        return BigFloat(+value, min(digits, work_dps - 10))


def eval_sum_numeric(
    spec: PochhammerSumSpec, target_digits: int = 50, max_terms: int | None = None
) -> BigFloat:
    """High-precision numeric value of a Pochhammer sum.

    |x| < 1: direct summation with a geometric tail bound.
    x = 1, non-alternating inner with log-growth: tail-shape fit.
    otherwise at |x| = 1: Levin-u acceleration on exact partial sums.
    """
    if abs(spec.x) < 1:
        # terms ~ x^n n^k; choose n so that the tail is below target
        ratio = abs(spec.x)
        n_needed = int(
            (target_digits + 10) / float(-mpmath.log10(ratio))
        ) + 80
        cfg = AccelConfig(
            method="direct", max_terms=max_terms or n_needed, target_digits=target_digits
        )
        return accelerate_sum(spec_terms(spec, cfg.max_terms), cfg)
    if spec.x == 1 and _tail_log_power(spec) > 0 and all(ix.c > 0 for ix in spec.inner):
        return tail_fit_sum(spec, target_digits)
    cfg = AccelConfig(
        method="levin_u",
        max_terms=max_terms or max(300, 4 * target_digits),
        target_digits=target_digits,
    )
    try:
        return accelerate_sum(spec_terms(spec, cfg.max_terms), cfg)
    except AccelerationError:
        if spec.x == 1 and all(ix.c > 0 for ix in spec.inner):
            return tail_fit_sum(spec, target_digits)
        raise


def euler_sum_value(indices: tuple[int, ...], target_digits: int = 40) -> BigFloat:
    """Value of an alternating multiple harmonic sum S_{indices}(infinity).

    Terms of the outermost layer decay like n^{-|c1|} (alternating when
    c1 < 0); Levin-u handles both cases.
    """
    spec = S(*indices)
    head = spec[0]

    def terms(n_max):
        inner = NestedSumSpec(spec[1:])
        for i in range(1, n_max + 1):
            sign = -1 if (head.c < 0 and i % 2 == 1) else 1
            yield F(sign, i ** abs(head.c)) * nested_sum_value(inner, i)

    cfg = AccelConfig(
        method="levin_u", max_terms=max(400, 6 * target_digits), target_digits=target_digits
    )
    return accelerate_sum(terms(cfg.max_terms), cfg)


# ---------------------------------------------------------------------------
# quadrature and certification
# ---------------------------------------------------------------------------


def quad_tanh_sinh(f, a, b, dps: int) -> mpmath.mpf:
    """tanh-sinh quadrature of f on [a, b] at dps digits (endpoint
    singularities integrable)."""
    with mp.workdps(dps + 10):
        return +mp.quad(f, [a, b], method="tanh-sinh")


def verify_identity(
    lhs: BigFloat, rhs: BigFloat, tolerance: mpmath.mpf | str
) -> mpmath.mpf:
    """Assert |lhs - rhs| < tolerance; returns the residual, raises
    CertificationError on failure or if certified digits are insufficient."""
    tol = mp.mpf(tolerance)
    needed = int(-mp.log10(tol)) + 1
    for side, nm in ((lhs, "lhs"), (rhs, "rhs")):
        if side.certified_digits < needed:
            raise CertificationError(
                f"{nm} certified to {side.certified_digits} digits; "
                f"tolerance needs {needed}"
            )
    resid = abs(lhs.value - rhs.value)
    if not resid < tol:
        raise CertificationError(f"identity fails: residual {mpmath.nstr(resid, 8)} >= {tolerance}")
    return resid


def pslq_relation(values, max_coeff: int = 10**12, extra_digits: int = 20):
    """Integer relation among mpf values via mpmath.pslq; None if none found."""
    return mpmath.pslq(values, maxcoeff=max_coeff, maxsteps=3_000_000)
