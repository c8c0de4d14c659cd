"""Exact leading coefficients, bounds, greedy and recursive constructions.

Everything here produces either a number (exact rational where the theory
gives one) or a certified trace of a construction run at desk scale.
Giant prime intervals are never enumerated: the interval recursion is
verified under an idealized/perturbed error model whose per-step error
amplitude is the derived bound a' * 100^(-2^(n/4)).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .arith import OrderTable, divisors, is_probable_prime, ord_p
from .errors import (
    BudgetError,
    CapacityError,
    ContractError,
    InfeasibleError,
    InvariantViolation,
)
from .mersenne import FactorCache, primitive_primes
from .sets import (
    CongruenceSource,
    ExplicitFinitePrimes,
    ListSource,
    PrimeSource,
    omega_array,
    prime_mask,
    squarefree_mask,
)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ExactConstant:
    """An exact rational value; error_bound present iff it truncates a series."""

    value: Fraction
    provenance: str
    error_bound: Fraction | None = None

    @property
    def is_truncation(self) -> bool:
        return self.error_bound is not None

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# Exact leading coefficients for finite S.


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def k_exact_finite_s(s, orders: OrderTable | None = None) -> ExactConstant:
    """The exact rational coefficient of log N in the Mertens sum of finite S.

    Stratified over the lcm-closure of the realized orders: the stratum of
    mbar carries weight |2^mbar - 1|_{S_mbar} / mbar, a harmonic slope
    k'_{S_mbar} = prod p/(p+1), and an inclusion-exclusion correction over
    the distinct values d_p = m_p / gcd(m_p, mbar) of the excluded primes.
    Collisions among the d_p are merged before the subset walk, so the walk
    is over the lcm lattice the slope actually sees.
    """
    if isinstance(s, ExplicitFinitePrimes):
        primes = list(s.primes)
    else:
        primes = sorted(set(int(p) for p in s))
        if any(p == 2 for p in primes):
            raise ContractError("constants: 2 is never a member of S")
        for p in primes:
            if not is_probable_prime(p):
                raise ContractError(f"constants: {p} is not prime")
    if not primes:
        return ExactConstant(Fraction(1), "empty S: full harmonic slope")
    orders = orders or OrderTable()
    m_of = {p: orders.order(p) for p in primes}
    distinct_orders = sorted(set(m_of.values()))
    if len(distinct_orders) > 20:
        raise CapacityError("constants: more than 2^20 lcm strata")
    mbars = {1}
    for m in distinct_orders:
        mbars |= {_lcm(m, c) for c in mbars}

    total = Fraction(0)
    for mbar in sorted(mbars):
        s_m = [p for p in primes if mbar % m_of[p] == 0]
        denom = mbar
        kprime = Fraction(1)
        for p in s_m:
            denom *= p ** (orders.exponent(p) + ord_p(mbar, p))
            kprime *= Fraction(p, p + 1)
        weight = Fraction(1, denom)
        dvals = sorted(
            {m_of[p] // math.gcd(m_of[p], mbar) for p in primes if p not in s_m}
        )
        inner = Fraction(0)
        for bits in range(1 << len(dvals)):
            l = 1
            sign = 1
            for i, d in enumerate(dvals):
                if bits >> i & 1:
                    l = _lcm(l, d)
                    sign = -sign
            val = 1
            for p in s_m:
                val *= p ** ord_p(l, p)
            inner += sign * Fraction(1, l * val)
        total += weight * kprime * inner
    return ExactConstant(
        total, f"lcm-stratified inclusion-exclusion over S={primes}"
    )


def k_order_bounds(ells) -> tuple[Fraction, dict[int, Fraction]]:
    """Upper bound for the coefficient of an order-class set, and the
    per-prime lower-bound multipliers (1 - 1/ell)."""
    ells = sorted(set(int(l) for l in ells))
    for l in ells:
        if not is_probable_prime(l):
            raise ContractError(f"constants: order {l} is not prime")
    upper = Fraction(1)
    for l in ells:
        upper *= 1 - Fraction(1, l) + Fraction(1, l * ((1 << l) - 1))
    multipliers = {l: 1 - Fraction(1, l) for l in ells}
    return upper, multipliers


# ---------------------------------------------------------------------------
# Greedy construction of dense coefficient values.


@dataclass(frozen=True)
class GreedyStep:
    ell: int
    accepted: bool
    k_candidate: Fraction
    k_after: Fraction


@dataclass
class GreedyTrace:
    target: Fraction
    eps: Fraction
    decisions: list[GreedyStep]
    terminal: bool
    k_final: Fraction
    chosen: tuple[int, ...]

    def __post_init__(self):
        last = None
        for step in self.decisions:
            if step.accepted:
                if last is not None and step.k_after > last:
                    raise InvariantViolation("constants: greedy k increased")
                last = step.k_after
        if self.terminal and not (
            self.target <= self.k_final < self.target + self.eps
        ):
            raise InvariantViolation("constants: terminal greedy outside window")


def _next_prime(n: int) -> int:
    n += 1
    while not is_probable_prime(n):
        n += 1
    return n


def greedy_L(
    k,
    eps,
    cache: FactorCache,
    orders: OrderTable | None = None,
    cap: int = 127,
) -> GreedyTrace:
    """Greedy selection of prime orders whose class-set coefficient lands in
    [k, k + eps).

    Candidates are scanned in increasing order and accepted exactly when the
    coefficient stays >= k.  Before running, the upper-bound product over the
    primes in [l0, cap] (l0 the first prime past 1 + k/eps) must already sit
    below k, certifying that the desk-scale cap suffices; otherwise this
    fails loudly rather than running an uncertifiable search.
    """
    k = Fraction(k)
    eps = Fraction(eps)
    if not (0 < k < 1) or eps <= 0:
        raise ContractError("constants: need 0 < k < 1 and eps > 0")
    orders = orders or OrderTable()

    ell0 = _next_prime(math.floor(1 + k / eps))
    certifier = Fraction(1)
    l = ell0
    while l <= cap:
        certifier *= 1 - Fraction(1, l) + Fraction(1, l * ((1 << l) - 1))
        l = _next_prime(l)
    if certifier >= k:
        raise BudgetError(
            f"constants: candidate cap {cap} cannot certify (k, eps)="
            f"({k}, {eps}); the bound product over [{ell0}, {cap}] is "
            f"{float(certifier):.6f} >= k"
        )

    def class_primes(ell: int) -> list[int]:
        return sorted(p for p, _ in primitive_primes(ell, cache, orders))

    chosen: list[int] = []
    union: list[int] = []
    k_cur = Fraction(1)
    decisions: list[GreedyStep] = []
    terminal = False
    l = 2
    while l <= cap:
        if k <= k_cur < k + eps:
            terminal = True
            break
        cand_set = union + class_primes(l)
        k_cand = k_exact_finite_s(cand_set, orders).value
        accepted = k_cand >= k
        if accepted:
            chosen.append(l)
            union = sorted(cand_set)
            k_cur = k_cand
        decisions.append(
            GreedyStep(ell=l, accepted=accepted, k_candidate=k_cand, k_after=k_cur)
        )
        l = _next_prime(l)
    if not terminal and k <= k_cur < k + eps:
        terminal = True
    trace = GreedyTrace(
        target=k,
        eps=eps,
        decisions=decisions,
        terminal=terminal,
        k_final=k_cur,
        chosen=tuple(chosen),
    )
    if not terminal:
        raise BudgetError(
            f"constants: greedy exhausted candidates <= {cap} outside the window",
            partial=trace,
        )
    return trace


# ---------------------------------------------------------------------------
# The transcendental series over ell-power orders.


@dataclass(frozen=True)
class TranscendentalSeries:
    ell: int
    terms: int
    constant: ExactConstant
    convergents: tuple[Fraction, ...]
    term_values: tuple[Fraction, ...]

    @property
    def tail_bound(self) -> Fraction:
        return self.constant.error_bound


def transcendental_series(
    ell: int, terms: int, cache: FactorCache
) -> TranscendentalSeries:
    """Partial sums of sum_e (ell-1) / (ell^{e+1} (2^{ell^e} - 1)) * prod p/(p+1)
    over the primes p dividing 2^{ell^e} - 1, with a rigorous tail bound."""
    if ell < 3 or not is_probable_prime(ell):
        raise ContractError("constants: ell must be an odd prime")
    if terms < 1:
        raise ContractError("constants: need at least one term")
    term_values = []
    convergents = []
    acc = Fraction(0)
    for e in range(terms):
        q = ell**e
        mers = (1 << q) - 1
        term = Fraction(ell - 1, ell ** (e + 1) * mers)
        for p in cache.get(q).primes():
            term *= Fraction(p, p + 1)
        term_values.append(term)
        acc += term
        convergents.append(acc)
    tail = Fraction(1, 1 << (ell**terms - 1))
    constant = ExactConstant(
        acc,
        provenance=f"ell-power order series, ell={ell}, {terms} terms",
        error_bound=tail,
    )
    return TranscendentalSeries(
        ell=ell,
        terms=terms,
        constant=constant,
        convergents=tuple(convergents),
        term_values=tuple(term_values),
    )


# ---------------------------------------------------------------------------
# Counting integers with r prime factors from a prescribed set.


def landau_count(
    x: int,
    r: int,
    source: PrimeSource | None = None,
    mode: str = "exact",
    capacity: int = 10**8,
):
    """|{n <= x : Omega_L(n) = Omega(n) = r}| exactly, or its asymptotic."""
    if r < 1:
        raise ContractError("constants: r must be >= 1")
    if mode == "exact":
        if x > capacity:
            raise CapacityError(f"constants: exact count at {x} over capacity")
        omega = omega_array(x)
        hit = omega == r
        hit[0] = False
        if source is not None:
            bad = np.zeros(x + 1, dtype=bool)
            allowed = np.zeros(x + 1, dtype=bool)
            allowed[source.primes_up_to(x)] = True
            for p in np.flatnonzero(prime_mask(x)).tolist():
                if not allowed[p]:
                    bad[p::p] = True
            hit &= ~bad
        return int(np.count_nonzero(hit))
    if mode == "asymptotic":
        if source is None:
            delta = 1.0
        elif isinstance(source, CongruenceSource):
            from .arith import euler_phi

            q = source.modulus
            units = [a for a in source.residues if math.gcd(a, q) == 1]
            delta = len(units) / euler_phi(q)
        else:
            raise ContractError(
                "constants: asymptotic mode needs a positive-density source"
            )
        lx = math.log(x)
        return (
            delta**r * (x / lx) * math.log(lx) ** (r - 1) / math.factorial(r - 1)
        )
    raise ContractError(f"constants: unknown landau mode {mode!r}")


# ---------------------------------------------------------------------------
# Uniform error bounds for the partial valuation sums.


@dataclass(frozen=True)
class FErrorReport:
    s_prime: tuple[int, ...]
    p_new: int
    grid: tuple[int, ...]
    f_values: tuple[float, ...]
    f_new_values: tuple[float, ...]
    a_bound: float
    ok: bool


def _valuation_harmonic(s: tuple[int, ...], n_max: int) -> np.ndarray:
    """Cumulative sums of |n|_S / n for n <= n_max (index = N)."""
    w = np.zeros(n_max + 1)
    w[1:] = 1.0 / np.arange(1, n_max + 1)
    for p in s:
        pk = p
        while pk <= n_max:
            w[pk::pk] /= p
            pk *= p
    return np.cumsum(w)


def f_error_check(
    s_prime, p_new: int, grid=None, a_margin: float = 0.5
) -> FErrorReport:
    """f_S(N) = sum |n|_S / n - k'_S log N on a grid, and the x2 growth bound
    after adjoining one new prime."""
    s = tuple(sorted(set(int(p) for p in s_prime)))
    if p_new in s:
        raise ContractError(f"constants: {p_new} already in S'")
    grid = tuple(grid) if grid else tuple(g for g in _default_pow_grid(10**6))
    n_max = max(grid)
    kp = 1.0
    for p in s:
        kp *= p / (p + 1.0)
    kp2 = kp * p_new / (p_new + 1.0)
    cum = _valuation_harmonic(s, n_max)
    cum2 = _valuation_harmonic(s + (p_new,), n_max)
    f_vals = tuple(float(cum[g] - kp * math.log(g)) for g in grid)
    f2_vals = tuple(float(cum2[g] - kp2 * math.log(g)) for g in grid)
    a_bound = max(4.0 + a_margin, max(abs(v) for v in f_vals))
    ok = all(abs(v) <= 2.0 * a_bound for v in f2_vals)
    return FErrorReport(
        s_prime=s,
        p_new=p_new,
        grid=grid,
        f_values=f_vals,
        f_new_values=f2_vals,
        a_bound=a_bound,
        ok=ok,
    )


def _default_pow_grid(n_max: int) -> list[int]:
    grid = []
    g = 10
    while g <= n_max:
        grid.append(g)
        g *= 10
    if grid[-1] != n_max:
        grid.append(n_max)
    return grid


# ---------------------------------------------------------------------------
# Interval prime sets (the rational-free density construction).


@dataclass(frozen=True)
class IntervalRecord:
    m: int
    lo: int
    hi: int
    prime_count: int
    sum_logp_over_p: float
    target: float


def interval_L(
    delta: float, m_lo: int, m_hi: int, capacity: int = 3 * 10**7
) -> list[IntervalRecord]:
    """Primes in (2^m, 2^(m+delta)] for m in [m_lo, m_hi], with the per-
    interval sums of log p / p (target delta * log 2 each)."""
    if not 0 < delta <= 1:
        raise ContractError("constants: delta must be in (0, 1]")
    if m_lo < 1 or m_hi < m_lo:
        raise ContractError("constants: bad interval exponent range")
    top = math.floor(2.0 ** (m_hi + delta))
    if top > capacity:
        raise CapacityError(
            f"constants: interval sieve to {top} exceeds capacity {capacity}"
        )
    mask = prime_mask(top)
    out = []
    target = delta * _LN2
    for m in range(m_lo, m_hi + 1):
        lo = 1 << m
        hi = math.floor(2.0 ** (m + delta))
        idx = np.flatnonzero(mask[lo + 1 : hi + 1]) + lo + 1
        ps = idx.astype(np.float64)
        val = float(np.sum(np.log(ps) / ps)) if len(ps) else 0.0
        out.append(
            IntervalRecord(
                m=m,
                lo=lo,
                hi=hi,
                prime_count=int(len(idx)),
                sum_logp_over_p=val,
                target=target,
            )
        )
    return out


# ---------------------------------------------------------------------------
# The interval-length recursion, idealized and perturbed.


@dataclass(frozen=True)
class RecursionStep:
    n: int
    r_n: float            # exp of the exact exponent, for reporting
    log_r_n: Fraction     # the exact exponent (a' - sum b)/2
    b_n: Fraction
    eta: Fraction
    partial_sum: Fraction
    r_cap: float          # delta / R_n
    big_r: int


@dataclass
class RecursionTrace:
    delta: Fraction
    y: int
    a_prime: Fraction
    mode: str
    steps: list[RecursionStep]
    ratio_ok: bool         # 1 < r_n < 1 + delta/R_n at every step
    sandwich_ok: bool      # a'(1 - 2^-n -/+ f(n)) brackets the partial sums
    interval_ok: bool      # modeled log-weight sums decay like 2^(-n/2)
    f_bound_ok: bool       # f(n) < 2^-(n+2) on the whole range
    x: int | None = None

    @property
    def all_ok(self) -> bool:
        return self.ratio_ok and self.sandwich_ok and self.interval_ok and self.f_bound_ok


def _mpf_to_fraction(v) -> Fraction:
    """Exact dyadic rational equal to an mpmath float (no double rounding)."""
    sign, man, exp, _ = v._mpf_
    if man == 0:
        return Fraction(0)
    fr = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -fr if sign else fr


def _g_bounds(n: int) -> tuple[Fraction, Fraction]:
    """Rational lower/upper enclosures of 100^(-2^(n/4))."""
    if n % 4 == 0:
        g = Fraction(1, 100 ** (2 ** (n // 4)))
        return g, g
    with mpmath.workprec(160):
        g = _mpf_to_fraction(
            mpmath.power(100, -mpmath.power(2, mpmath.mpf(n) / 4))
        )
    slack = Fraction(1, 1 << 100)
    return g * (1 - slack), g * (1 + slack)


def _log1p_fraction_lower(q: Fraction) -> Fraction:
    """A rational lower bound of log(1 + q) tight to ~2^-150."""
    with mpmath.workprec(200):
        f = _mpf_to_fraction(
            mpmath.log1p(mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator))
        )
    return f * (1 - Fraction(1, 1 << 150))


def a_prime_window(delta: Fraction, y: int) -> tuple[Fraction, Fraction]:
    """The admissible interval for a': (delta/(5Y), (4/3) log(1 + delta/Y))."""
    lo = delta / (5 * y)
    hi = Fraction(4, 3) * _log1p_fraction_lower(delta / y)
    return lo, hi


def rn_recursion(
    delta,
    y: int,
    n_max: int,
    mode: str = "idealized",
    a_prime=None,
    c=None,
    x: int | None = None,
    seed: int = 0,
    sign_pattern: str = "plus",
) -> RecursionTrace:
    """Run the interval-length recursion r_n and check its three invariants.

    R_n = floor(2^(n/2) Y) exactly (via isqrt of Y^2 2^n).  In idealized mode
    b_n is the exact recursion value (a' - sum_{j<n} b_j)/2, so the partial
    sums equal a'(1 - 2^-n) with zero error; any failure is a bug.  In
    perturbed mode b_n picks up a measurement error eta_n with
    |eta_n| < a' * 100^(-2^(n/4)), signed by `sign_pattern` ("plus", "minus",
    "alternating", "random") at just-inside-extremal magnitude.

    The giant intervals (2^(R_n), 2^(R_n r_n)] are never enumerated; the
    third invariant is checked against the modeled interval sum
    R_n r_n ln2 b_n <= 4 a' Y ln2 2^(-n/2).
    """
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise ContractError("constants: delta must be in (0, 1]")
    if y < 2:
        raise ContractError("constants: Y must be >= 2")
    if mode not in ("idealized", "perturbed"):
        raise ContractError(f"constants: unknown recursion mode {mode!r}")
    if a_prime is None and c is not None:
        # The c route derives its own cut Y; the y argument is ignored then.
        a_prime, y = _a_prime_from_c(Fraction(c), delta, x if x is not None else 3)
    lo, hi = a_prime_window(delta, y)
    if a_prime is None:
        a_prime = (lo + hi) / 2
    a_prime = Fraction(a_prime)
    if not (lo < a_prime < hi):
        raise ContractError(
            f"constants: a'={float(a_prime):.6g} outside the window "
            f"({float(lo):.6g}, {float(hi):.6g})"
        )

    rng = random.Random(seed)
    eta_scale = 1 - Fraction(1, 1 << 20)  # strictly inside the error bound

    steps: list[RecursionStep] = []
    partial = Fraction(0)
    ratio_ok = sandwich_ok = interval_ok = f_bound_ok = True
    f_hat_lo = Fraction(0)  # sum of lower g_j 2^j, scaled by 2^-n on use
    f_hat_hi = Fraction(0)
    interval_cap = 4 * a_prime * y * Fraction(Fraction(_LN2))

    for n in range(1, n_max + 1):
        big_r = math.isqrt(y * y << n)
        log_r = (a_prime - partial) / 2
        g_lo, g_hi = _g_bounds(n)
        if mode == "idealized":
            eta = Fraction(0)
        else:
            if sign_pattern == "plus":
                sign = 1
            elif sign_pattern == "minus":
                sign = -1
            elif sign_pattern == "alternating":
                sign = 1 if n % 2 else -1
            elif sign_pattern == "random":
                sign = rng.choice((-1, 1))
            else:
                raise ContractError(
                    f"constants: unknown sign pattern {sign_pattern!r}"
                )
            eta = sign * eta_scale * a_prime * g_lo
        b_n = log_r + eta
        partial += b_n
        f_hat_lo = f_hat_lo / 2 + g_lo
        f_hat_hi = f_hat_hi / 2 + g_hi

        # (1) 1 < r_n < 1 + delta/R_n, compared on exponents.
        cap = _log1p_fraction_lower(Fraction(delta, big_r))
        step_ratio_ok = 0 < log_r < cap
        ratio_ok &= step_ratio_ok
        # (2) the sandwich around a'(1 - 2^-n).
        center = a_prime * (1 - Fraction(1, 1 << n))
        halfwidth = a_prime * f_hat_lo
        if mode == "idealized":
            if partial != center:
                raise InvariantViolation(
                    f"constants: idealized recursion drifted at n={n}"
                )
        else:
            step_sandwich_ok = abs(partial - center) < halfwidth
            sandwich_ok &= step_sandwich_ok
        # (3) modeled interval log-weight sum.
        r_n = math.exp(log_r)
        lhs = Fraction(big_r) * Fraction(r_n) * Fraction(_LN2) * abs(b_n)
        step_interval_ok = lhs <= interval_cap * Fraction(1, 1 << n) * (1 << (n - n // 2))
        # 2^(-n/2) as 2^(-n) * 2^(ceil(n/2)) keeps the comparison rational.
        interval_ok &= bool(step_interval_ok)
        # f(n) < 2^-(n+2), via the upper enclosure of f.
        f_bound_ok &= f_hat_hi < Fraction(1, 4)

        steps.append(
            RecursionStep(
                n=n,
                r_n=r_n,
                log_r_n=log_r,
                b_n=b_n,
                eta=eta,
                partial_sum=partial,
                r_cap=float(delta) / big_r,
                big_r=big_r,
            )
        )

    if mode == "idealized" and not (ratio_ok and interval_ok and f_bound_ok):
        raise InvariantViolation("constants: idealized recursion broke an invariant")
    return RecursionTrace(
        delta=delta,
        y=y,
        a_prime=a_prime,
        mode=mode,
        steps=steps,
        ratio_ok=bool(ratio_ok),
        sandwich_ok=bool(sandwich_ok),
        interval_ok=bool(interval_ok),
        f_bound_ok=bool(f_bound_ok),
        x=x,
    )


def _a_prime_from_c(
    c: Fraction, delta: Fraction, x: int
) -> tuple[Fraction, int]:
    """Extract (a', Y) from a target product c under the modeled interval sums.

    The modeled sum over (2^m, 2^(m+delta)] is log(1 + delta/m); Y is the
    unique natural with sum_{X<m<=Y} < log c <= sum_{X<m<=Y+1}, and a' is
    log c minus the blocks X < m < Y minus the modeled
    (2^(Y+delta/4), 2^(Y+delta)] block.
    """
    if c <= 1:
        raise ContractError("constants: c must exceed 1")
    a = math.log(float(c))
    d = float(delta)
    total = 0.0
    m = x + 1
    while total + math.log1p(d / m) < a:
        total += math.log1p(d / m)
        m += 1
        if m > 10**7:
            raise ContractError("constants: c too large for the modeled sums")
    y = m - 1
    if y <= x:
        raise ContractError(
            "constants: X too large for this c; no interval blocks fit below it"
        )
    below_y = total - math.log1p(d / y)
    spent = below_y + math.log1p(0.75 * d / (y + d / 4))
    return Fraction(a - spent), y


# ---------------------------------------------------------------------------
# Greedy subset with a prescribed product of (1 + 1/p).


@dataclass(frozen=True)
class ProductSubsetResult:
    chosen: tuple[int, ...]
    achieved: Fraction
    target: Fraction
    eps: Fraction
    sum_logp_over_p: float
    via_search: bool  # False when the plain greedy pass already landed


def greedy_product_subset(pool, c, eps) -> ProductSubsetResult:
    """A subset L' of the pool with prod (1 + 1/p) in (c(1 - eps), c].

    The plain greedy scan (largest factors first) runs first; on a finite
    desk-scale pool its quantized increments can strand the product short of
    the window, in which case an exact branch-and-bound over the remaining
    subset lattice finishes the job.  All window comparisons are exact
    rational arithmetic.
    """
    pool = sorted(set(int(p) for p in pool))
    for p in pool:
        if not is_probable_prime(p):
            raise ContractError(f"constants: pool element {p} is not prime")
    c = Fraction(c)
    eps = Fraction(eps)
    if c <= 1:
        raise ContractError("constants: c must exceed 1")
    if not (0 < eps < 1):
        raise ContractError("constants: eps must be in (0, 1)")
    lo_edge = c * (1 - eps)

    total = Fraction(1)
    for p in pool:
        total *= 1 + Fraction(1, p)
    if total < c:
        raise InfeasibleError(
            f"constants: pool product {float(total):.6f} cannot reach c={float(c):.6f}",
            best=total,
        )

    factors = [(p, 1 + Fraction(1, p)) for p in pool]  # ascending p

    def finish(chosen: list[int], achieved: Fraction, via_search: bool):
        s = sum(math.log(p) / p for p in chosen)
        return ProductSubsetResult(
            chosen=tuple(sorted(chosen)),
            achieved=achieved,
            target=c,
            eps=eps,
            sum_logp_over_p=s,
            via_search=via_search,
        )

    prod = Fraction(1)
    greedy: list[int] = []
    for p, f in factors:
        if prod * f <= c:
            prod *= f
            greedy.append(p)
            if lo_edge < prod:
                return finish(greedy, prod, via_search=False)

    # Exact search, largest factors first, pruned by suffix products.
    suffix = [Fraction(1)] * (len(factors) + 1)
    for i in range(len(factors) - 1, -1, -1):
        suffix[i] = suffix[i + 1] * factors[i][1]

    best = [prod]
    stack = [(0, Fraction(1), ())]
    while stack:
        i, prod, picked = stack.pop()
        if lo_edge < prod <= c:
            return finish(list(picked), prod, via_search=True)
        if i == len(factors) or prod * suffix[i] <= lo_edge:
            if prod > best[0] and prod <= c:
                best[0] = prod
            continue
        stack.append((i + 1, prod, picked))  # skip p_i
        f = factors[i][1]
        if prod * f <= c:
            stack.append((i + 1, prod * f, picked + (factors[i][0],)))
    raise InfeasibleError(
        f"constants: no subset lands in ({float(lo_edge):.9f}, {float(c):.9f}]; "
        f"closest from below is {float(best[0]):.9f}",
        best=best[0],
    )


# ---------------------------------------------------------------------------
# Greedy subsequence tracking a target function.


@dataclass(frozen=True)
class SubsequenceReport:
    selected_count: int
    selected_sum: float
    sup_error: float
    final_error: float
    start_x: int
    max_weight: float
    max_drift: float
    selected: tuple[int, ...] | None


def greedy_subsequence(
    weights: np.ndarray,
    theta,
    x_max: int,
    keep_indices: bool = False,
) -> SubsequenceReport:
    """Select indices greedily so the running sum tracks theta from below.

    weights[n] >= 0 for 1 <= n <= x_max; include n exactly when the running
    sum plus weights[n] stays <= theta(n).  Tracking starts where theta
    first becomes positive.  The sup deviation is checked against
    max(sup of the weights, sup of the unit-step drift of theta).
    """
    if len(weights) < x_max + 1:
        raise ContractError("constants: weights array shorter than x_max")
    s = 0.0
    sup_err = 0.0
    start_x = None
    max_w = 0.0
    max_drift = 0.0
    prev_theta = None
    count = 0
    picked: list[int] = []
    for n in range(1, x_max + 1):
        th = theta(n)
        if start_x is None:
            if th <= 0:
                prev_theta = th
                continue
            start_x = n
        if prev_theta is not None:
            max_drift = max(max_drift, th - prev_theta)
        prev_theta = th
        w = float(weights[n])
        if w > 0:
            max_w = max(max_w, w)
            if s + w <= th:
                s += w
                count += 1
                if keep_indices:
                    picked.append(n)
        sup_err = max(sup_err, abs(s - th))
    if start_x is None:
        return SubsequenceReport(0, 0.0, 0.0, 0.0, x_max + 1, 0.0, 0.0,
                                 tuple(picked) if keep_indices else None)
    final_err = abs(s - theta(x_max))
    allowance = max(max_w, max_drift) + 1e-12
    if sup_err > allowance:
        raise InvariantViolation(
            f"constants: greedy subsequence deviated {sup_err:.6f} > {allowance:.6f}"
        )
    return SubsequenceReport(
        selected_count=count,
        selected_sum=s,
        sup_error=sup_err,
        final_error=final_err,
        start_x=start_x,
        max_weight=max_w,
        max_drift=max_drift,
        selected=tuple(picked) if keep_indices else None,
    )


# ---------------------------------------------------------------------------
# The squarefree harmonic slope.


@dataclass(frozen=True)
class SquarefreeSlope:
    n_max: int
    total: Fraction
    slope: float
    samples: tuple[tuple[int, float], ...]


def squarefree_slope(n_max: int, capacity: int = 10**8) -> SquarefreeSlope:
    """Sum of 1/n over squarefree n <= N and its slope against log N.

    Sampled on the dyadic grid; the regression uses points >= 2^10 to skip
    the early transient (below two grid points the slope is NaN).  Fixed
    point accumulation (96 fractional bits).
    """
    if n_max < 1:
        raise ContractError("constants: n_max must be >= 1")
    if n_max > capacity:
        raise CapacityError(f"constants: {n_max} over capacity")
    mask = squarefree_mask(n_max)
    idx = np.flatnonzero(mask)
    grid = []
    g = 64
    while g < n_max:
        grid.append(g)
        g *= 2
    grid.append(n_max)
    scale = 1 << 96
    acc = 0
    pos = 0
    samples = []
    for g in grid:
        hi = int(np.searchsorted(idx, g, side="right"))
        for n in idx[pos:hi].tolist():
            acc += scale // n
        pos = hi
        samples.append((g, acc / scale))
    fit_pts = [(math.log(g), v) for g, v in samples if g >= 1024]
    if len(fit_pts) < 2:
        fit_pts = [(math.log(g), v) for g, v in samples]
    if len(fit_pts) < 2:
        slope = math.nan
    else:
        a = np.array([[1.0, lg] for lg, _ in fit_pts])
        b = np.array([v for _, v in fit_pts])
        coef, *_ = np.linalg.lstsq(a, b, rcond=None)
        slope = float(coef[1])
    return SquarefreeSlope(
        n_max=n_max,
        total=Fraction(acc, scale),
        slope=slope,
        samples=tuple(samples),
    )


# ---------------------------------------------------------------------------
# The jointly truncated two-product constant (monitored, never asserted).


@dataclass(frozen=True)
class JointProductRow:
    x: int
    value: float
    drift: float  # change from the previous grid point


def joint_product_monitor(
    delta: float, source: PrimeSource, grid
) -> list[JointProductRow]:
    """Partial products (1/Gamma(delta+1)) prod_{p<=x} (1-1/p)^delta
    prod_{p<=x, p not in L} (1+1/p), reported with their drift.

    Both products are truncated at the same x; the truncation diverges under
    independent limits, so only the joint drift is meaningful and no value
    is ever asserted.
    """
    grid = sorted(set(int(g) for g in grid))
    top = grid[-1]
    mask = prime_mask(top)
    primes = np.flatnonzero(mask)
    in_l = np.zeros(top + 1, dtype=bool)
    in_l[source.primes_up_to(top)] = True
    logs = delta * np.log1p(-1.0 / primes)
    outside = ~in_l[primes]
    logs = logs + np.where(outside, np.log1p(1.0 / primes), 0.0)
    cum = np.cumsum(logs)
    base = -math.lgamma(delta + 1.0)
    rows = []
    prev = None
    for g in grid:
        hi = int(np.searchsorted(primes, g, side="right"))
        v = math.exp(base + (cum[hi - 1] if hi else 0.0))
        rows.append(JointProductRow(x=g, value=v, drift=0.0 if prev is None else v - prev))
        prev = v
    return rows
