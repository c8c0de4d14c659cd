"""Exact periodic-point counts, orbit counts and Mertens sums, plus the
dominant-term evaluators that need no factorizations at all.

Two evaluation regimes:

  * exact mode: F(n), O(n) and M_S(N) = sum O(n) 2^-n as exact rationals,
    viable up to a configurable ceiling (default 120, covered by the seed
    factor cache for every divisor).
  * dominant mode: sum_{n <= N, n not in M} 1/n by membership sieving with
    a 96-fractional-bit fixed-point accumulator; the only ingredient is the
    order set, never a factorization.

The lcm-stratified decomposition of F_S(N) is implemented independently of
the direct sum so the two code paths can cross-validate each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import OrderTable, divisors, moebius, ord_p
from .errors import CapacityError, ContractError, InvariantViolation
from .mersenne import FactorCache, primitive_primes
from .sets import (
    ExplicitFinitePrimes,
    InducedPrimes,
    OrderSet,
    PrimeSet,
    mbar_of,
    s_mbar,
)

FRAC_BITS = 96
_SCALE = 1 << FRAC_BITS

EXACT_CEILING = 120
DOMINANT_CAPACITY = 10**7


@dataclass
class MertensSeries:
    """Grid of (N, value) samples; exact rationals or fixed-point dyadics."""

    label: str
    mode: str  # "exact" | "dominant"
    samples: list[tuple[int, Fraction]]

    def __post_init__(self):
        if self.mode not in ("exact", "dominant"):
            raise ContractError(f"mertens-engine: unknown mode {self.mode!r}")
        last_n = 0
        last_v = None
        for n, v in self.samples:
            if n <= last_n:
                raise InvariantViolation("mertens-engine: sample grid not increasing")
            if last_v is not None and v < last_v:
                raise InvariantViolation("mertens-engine: series values decreased")
            last_n, last_v = n, v

    @property
    def grid(self) -> list[int]:
        return [n for n, _ in self.samples]

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.samples]

    def value_at(self, n: int) -> Fraction:
        for g, v in self.samples:
            if g == n:
                return v
        raise KeyError(f"no sample at N={n}")

    def float_samples(self) -> list[tuple[int, float]]:
        return [(n, float(v)) for n, v in self.samples]


@dataclass(frozen=True)
class RemainderBound:
    n: int
    bound_r: float
    bound_q: float


def _normalize_prime_set(s) -> PrimeSet:
    if isinstance(s, PrimeSet):
        return s
    if s is None:
        return ExplicitFinitePrimes([])
    return ExplicitFinitePrimes(sorted(s))


def _removal_exponents(
    n: int, pset: PrimeSet, orders: OrderTable, cache: FactorCache | None
) -> dict[int, int]:
    """{p: ord_p(2^n - 1)} over the members of S that divide 2^n - 1."""
    out: dict[int, int] = {}
    if isinstance(pset, ExplicitFinitePrimes):
        for p in pset.primes:
            m = orders.order(p)
            if n % m == 0:
                out[p] = orders.exponent(p) + ord_p(n, p)
        return out
    if isinstance(pset, InducedPrimes):
        if cache is None:
            raise ContractError("mertens-engine: induced sets need a factor cache")
        oset = pset.order_set
        for d in divisors(n):
            if d in (1, 6) or not oset.contains(d):
                continue
            for p, e_p in primitive_primes(d, cache, orders):
                out[p] = e_p + ord_p(n, p)
        return out
    raise ContractError(f"mertens-engine: unsupported prime-set kind {pset.kind!r}")


def periodic_points(
    n: int, s, orders: OrderTable | None = None, cache: FactorCache | None = None
) -> int:
    """F(n) = (2^n - 1) prod_{p in S} |2^n - 1|_p, as an exact integer."""
    if n < 1:
        raise ContractError(f"mertens-engine: period must be >= 1, got {n}")
    orders = orders or OrderTable()
    pset = _normalize_prime_set(s)
    removal = 1
    for p, e in _removal_exponents(n, pset, orders, cache).items():
        removal *= p**e
    q, r = divmod((1 << n) - 1, removal)
    if r:
        raise InvariantViolation(
            f"mertens-engine: |2^{n}-1|_S removal not exact (S={pset.label()})"
        )
    return q


def orbit_count(
    n: int, s, orders: OrderTable | None = None, cache: FactorCache | None = None
) -> int:
    """O(n) = (1/n) sum_{d|n} mu(n/d) F(d); checked non-negative integer."""
    orders = orders or OrderTable()
    total = 0
    for d in divisors(n):
        total += moebius(n // d) * periodic_points(d, s, orders, cache)
    q, r = divmod(total, n)
    if r or q < 0:
        raise InvariantViolation(
            f"mertens-engine: orbit count at n={n} is not a non-negative integer"
        )
    return q


def mertens_exact(
    n_max: int,
    s,
    orders: OrderTable | None = None,
    cache: FactorCache | None = None,
    ceiling: int = EXACT_CEILING,
) -> MertensSeries:
    """M_S(N) = sum_{n <= N} O(n) 2^-n for every N <= n_max, exactly.

    The entropy log 2 is hardwired through e^{-hn} = 2^{-n}.
    """
    if n_max < 1:
        raise ContractError("mertens-engine: n_max must be >= 1")
    if n_max > ceiling:
        raise ContractError(
            f"mertens-engine: exact mode ceiling is {ceiling}, got n_max={n_max}"
        )
    orders = orders or OrderTable()
    pset = _normalize_prime_set(s)
    acc = Fraction(0)
    samples = []
    for n in range(1, n_max + 1):
        acc += Fraction(orbit_count(n, pset, orders, cache), 1 << n)
        samples.append((n, acc))
    return MertensSeries(label=pset.label(), mode="exact", samples=samples)


def default_grid(n_max: int, start: int = 10) -> list[int]:
    """Half-decade grid up to n_max, always ending at n_max."""
    grid = []
    k = 0
    while True:
        g = int(round(10 ** (k / 2)))
        if g > n_max:
            break
        if g >= start:
            grid.append(g)
        k += 1
    if not grid or grid[-1] != n_max:
        grid.append(n_max)
    return sorted(set(grid))


def dominant_sum(
    n_max: int,
    oset: OrderSet,
    grid: list[int] | None = None,
    capacity: int = DOMINANT_CAPACITY,
) -> MertensSeries:
    """sum_{n <= N, n not in M} 1/n over a grid, by membership sieving.

    Requires M closed under multiplication by the naturals; that closure is
    exactly what reduces every |2^n - 1|_S factor on the surviving n to 1.
    Accumulation is fixed point with 96 fractional bits (term error is one
    ulp, so the total error is below N * 2^-96).
    """
    if not oset.closed_under_nat_multiplication:
        raise ContractError(
            "mertens-engine: order set is not closed under multiplication by N; "
            "use decompose_lcm_closed instead"
        )
    if n_max > capacity:
        raise CapacityError(f"mertens-engine: n_max {n_max} over capacity {capacity}")
    grid = sorted(set(grid)) if grid else default_grid(n_max)
    if grid[-1] > n_max:
        raise ContractError("mertens-engine: grid extends past n_max")
    member = oset.indicator(n_max)
    keep = np.flatnonzero(~member)
    keep = keep[keep >= 1]
    acc = 0
    pos = 0
    samples = []
    for g in grid:
        hi = int(np.searchsorted(keep, g, side="right"))
        for n in keep[pos:hi].tolist():
            acc += _SCALE // n
        pos = hi
        samples.append((g, Fraction(acc, _SCALE)))
    return MertensSeries(label=oset.label(), mode="dominant", samples=samples)


@dataclass(frozen=True)
class StratumContribution:
    mbar: int
    weight: Fraction  # |2^mbar - 1|_{S_mbar} / mbar
    inner_sum: Fraction  # sum of |j|_{S_mbar} / j over the stratum
    contribution: Fraction
    terms: int


def _lcm_closure(gens: list[int], limit: int, cap: int = 4096) -> list[int]:
    closed = {1}
    frontier = [g for g in gens if g <= limit]
    for g in frontier:
        new = {g * c // math.gcd(g, c) for c in closed}
        closed.update(v for v in new if v <= limit)
        if len(closed) > cap:
            raise CapacityError(
                f"mertens-engine: lcm closure exceeds {cap} strata below {limit}"
            )
    return sorted(closed)


def decompose_lcm_closed(
    n_max: int,
    oset: OrderSet,
    orders: OrderTable | None = None,
    cache: FactorCache | None = None,
    grid: list[int] | None = None,
) -> tuple[MertensSeries, list[StratumContribution]]:
    """F_S(N) assembled stratum by stratum over the lcm-closure of the orders.

    Each n is charged to the stratum of mbar_n = lcm of the realized orders
    dividing n; writing n = mbar * j turns the term into
    (|2^mbar - 1|_{S_mbar} / mbar) * |j|_{S_mbar} / j.  The result must agree
    exactly with the direct summation f_series_direct — two independent
    code paths over the same rationals.
    """
    if cache is None:
        raise ContractError("mertens-engine: decomposition needs a factor cache")
    orders = orders or OrderTable()
    from .sets import ExplicitList

    if isinstance(oset, ExplicitList):
        # A finite explicit list is replaced by its lcm closure: the strata
        # are indexed by lcms of realized orders whether or not the list
        # contained them.
        gens = [m for m in oset.values if m not in (1, 6) and m <= n_max]
        mbars = _lcm_closure(gens, n_max)
        effective = ExplicitList(mbars, verify=False)
    elif oset.closed_under_lcm:
        gens = [m for m in oset.generating_orders(n_max) if m not in (1, 6)]
        mbars = sorted(set(gens) | {1})
        effective = oset
    else:
        raise ContractError(
            "mertens-engine: order set must be lcm-closed (or an explicit list)"
        )

    grid = sorted(set(grid)) if grid else default_grid(n_max)
    events: list[tuple[int, Fraction]] = []
    breakdown: list[StratumContribution] = []
    for mbar in mbars:
        stratum = s_mbar(mbar, effective, cache, orders)
        denom = mbar
        for p, e_p in stratum.items():
            denom *= p ** (e_p + ord_p(mbar, p))
        weight = Fraction(1, denom)
        inner = Fraction(0)
        terms = 0
        for j in range(1, n_max // mbar + 1):
            n = mbar * j
            if mbar_of(n, effective) != mbar:
                continue
            val = 1
            for p in stratum:
                val *= p ** ord_p(j, p)
            t = Fraction(1, j * val)
            inner += t
            events.append((n, weight * t))
            terms += 1
        breakdown.append(
            StratumContribution(
                mbar=mbar,
                weight=weight,
                inner_sum=inner,
                contribution=weight * inner,
                terms=terms,
            )
        )
    events.sort(key=lambda e: e[0])
    samples = []
    acc = Fraction(0)
    pos = 0
    for g in grid:
        while pos < len(events) and events[pos][0] <= g:
            acc += events[pos][1]
            pos += 1
        samples.append((g, acc))
    series = MertensSeries(label=oset.label(), mode="dominant", samples=samples)
    return series, breakdown


def f_series_direct(
    n_max: int,
    s,
    orders: OrderTable | None = None,
    cache: FactorCache | None = None,
    grid: list[int] | None = None,
) -> MertensSeries:
    """F_S(N) = sum_{n <= N} |2^n - 1|_S / n summed term by term, exactly."""
    orders = orders or OrderTable()
    pset = _normalize_prime_set(s)
    grid = sorted(set(grid)) if grid else default_grid(n_max)
    acc = Fraction(0)
    samples = []
    gi = 0
    for n in range(1, n_max + 1):
        denom = n
        for p, e in _removal_exponents(n, pset, orders, cache).items():
            denom *= p**e
        acc += Fraction(1, denom)
        while gi < len(grid) and grid[gi] == n:
            samples.append((n, acc))
            gi += 1
    for g in grid[gi:]:
        samples.append((g, acc))
    return MertensSeries(label=pset.label(), mode="dominant", samples=samples)


_LN2 = math.log(2.0)


def remainder_bounds(n: int) -> RemainderBound:
    """Closed-form tail bounds at N = n.

    bound_r dominates |R_S(N) - C_S| via the geometric tails
    2^-N/(1 - 1/2) + 2^{-N/2}/(1 - 2^{-1/2}); bound_q dominates the
    non-dominant stratum tail via 4 * integral_N^inf 2^{-sqrt(t)} dt, using
    phi(n) >= sqrt(n) beyond the sixth term.
    """
    if n < 6:
        raise ContractError(f"mertens-engine: remainder bounds need N >= 6, got {n}")
    bound_r = 2.0 ** (-n) / 0.5 + 2.0 ** (-n / 2) / (1.0 - 2.0 ** (-0.5))
    rt = math.sqrt(n)
    bound_q = 4.0 * 2.0 * (rt / _LN2 + 1.0 / _LN2**2) * 2.0 ** (-rt)
    return RemainderBound(n=n, bound_r=bound_r, bound_q=bound_q)
