"""Factorizations of 2^m - 1 with a persistent, verified cache.

The cache file is line-delimited JSON, one object per line:

    {"m": 29, "factors": [[233, 1], [1103, 1], [2089, 1]]}

Every entry is re-verified by an exact product check on load; a line that
fails the check is a hard error naming the line number.  A seed cache for
all m <= 128, generated by this same engine with a generous budget, ships
inside the package.  Partial factorizations are never cached.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass
from importlib import resources

from .arith import (
    OrderTable,
    factorize,
    is_probable_prime,
    primality_certified,
    divisors,
    small_prime_table,
    _brent_rho,
)
from .errors import BudgetError, CacheMissError, InvariantViolation

SEED_RESOURCE = "mersenne_m128.jsonl"
DEFAULT_BUDGET_SECONDS = 10.0


@dataclass(frozen=True)
class MersenneFactorization:
    """Complete factorization of 2^m - 1, product-checked at construction."""

    m: int
    factors: tuple[tuple[int, int], ...]  # ascending (prime, exponent)
    certified: bool  # all prime factors below the proven Miller-Rabin bound

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvariantViolation(
                    f"mersenne-factors: factors of m={self.m} not ascending/positive"
                )
            last = p
            prod *= p**e
        if prod != (1 << self.m) - 1:
            raise InvariantViolation(
                f"mersenne-factors: product check failed for m={self.m}"
            )

    @property
    def value(self) -> int:
        return (1 << self.m) - 1

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def to_json(self) -> str:
        return json.dumps(
            {"m": self.m, "factors": [list(pe) for pe in self.factors]},
            separators=(",", ":"),
        )


def _from_json_line(line: str, lineno: int, source: str) -> MersenneFactorization:
    try:
        obj = json.loads(line)
        m = int(obj["m"])
        factors = tuple((int(p), int(e)) for p, e in obj["factors"])
    except (ValueError, KeyError, TypeError) as exc:
        raise ValueError(
            f"mersenne-factors: {source} line {lineno}: malformed entry ({exc})"
        ) from exc
    try:
        fz = MersenneFactorization(
            m=m,
            factors=factors,
            certified=all(primality_certified(p) for p, _ in factors),
        )
    except InvariantViolation as exc:
        raise ValueError(
            f"mersenne-factors: {source} line {lineno}: failed the product check"
        ) from exc
    return fz


class FactorCache:
    """Append-only store of verified factorizations.

    Entries from the packaged seed file are always available.  When `path`
    is given, entries from that file are loaded on top and new complete
    factorizations are appended there on flush().  Insertions go through a
    single lock, so readers only ever observe verified entries.
    """

    def __init__(self, path: str | None = None, load_seed: bool = True):
        self.path = path
        self._entries: dict[int, MersenneFactorization] = {}
        self._dirty: list[int] = []
        self._lock = threading.Lock()
        if load_seed:
            seed = resources.files("orbitgrowth.data").joinpath(SEED_RESOURCE)
            self._load_text(seed.read_text(encoding="utf-8"), source=SEED_RESOURCE)
        if path is not None:
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    self._load_text(fh.read(), source=path)
            except FileNotFoundError:
                pass

    def _load_text(self, text: str, source: str) -> None:
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            fz = _from_json_line(line, lineno, source)
            self._entries[fz.m] = fz

    def __contains__(self, m: int) -> bool:
        return m in self._entries

    def get(self, m: int) -> MersenneFactorization:
        try:
            return self._entries[m]
        except KeyError:
            raise CacheMissError(m) from None

    def get_or_none(self, m: int) -> MersenneFactorization | None:
        return self._entries.get(m)

    def put(self, fz: MersenneFactorization) -> None:
        with self._lock:
            if fz.m not in self._entries:
                self._entries[fz.m] = fz
                self._dirty.append(fz.m)

    def flush(self) -> int:
        """Append dirty entries to the backing file; returns count written."""
        with self._lock:
            if self.path is None or not self._dirty:
                self._dirty.clear()
                return 0
            n = 0
            with open(self.path, "a", encoding="utf-8") as fh:
                for m in self._dirty:
                    fh.write(self._entries[m].to_json() + "\n")
                    n += 1
            self._dirty.clear()
            return n

    def exponents(self) -> list[int]:
        return sorted(self._entries)


def factor_mersenne(
    m: int,
    cache: FactorCache | None = None,
    budget: float = DEFAULT_BUDGET_SECONDS,
) -> MersenneFactorization:
    """Complete verified factorization of 2^m - 1.

    Strategy: peel the algebraic part using cached/recursive factorizations
    of 2^d - 1 for proper divisors d | m, trial-divide the primitive part by
    candidates p = 1 (mod m) (any new prime must have order exactly m), then
    split what remains with Brent rho under the time budget.
    """
    if m < 1:
        raise ValueError(f"mersenne-factors: exponent must be >= 1, got {m}")
    if cache is not None and m in cache:
        return cache.get(m)
    deadline = time.monotonic() + budget

    value = (1 << m) - 1
    found: dict[int, int] = {}

    def record(p: int) -> None:
        nonlocal remaining
        e = 0
        while remaining % p == 0:
            remaining //= p
            e += 1
        if e:
            found[p] = found.get(p, 0) + e

    remaining = value
    for d in divisors(m)[:-1]:
        if d == 1:
            continue
        sub = factor_mersenne(d, cache, budget)
        for p in sub.primes():
            record(p)

    # Primitive primes are 1 mod m (and odd), so step the trial candidate
    # by m or 2m accordingly.
    step = m if m % 2 == 0 else 2 * m
    cand = 1 + step
    trial_bound = min(10**7, math.isqrt(remaining) + 1)
    while remaining > 1 and cand <= trial_bound:
        if remaining % cand == 0:
            record(cand)
        cand += step

    composites: list[int] = []
    if remaining > 1:
        if is_probable_prime(remaining):
            record(remaining)
        else:
            composites.append(remaining)
    while composites:
        if time.monotonic() > deadline:
            partial = MersennePartial(
                m=m, factors=dict(found), cofactors=tuple(sorted(composites))
            )
            raise BudgetError(
                f"mersenne-factors: budget exhausted for m={m}; "
                f"composite cofactor(s) {composites} remain",
                partial=partial,
            )
        n = composites.pop()
        root = math.isqrt(n)
        if root * root == n:
            composites.extend((root, root))
            continue
        d = _brent_rho(n)
        for piece in (d, n // d):
            if is_probable_prime(piece):
                record(piece)
            else:
                composites.append(piece)

    fz = MersenneFactorization(
        m=m,
        factors=tuple(sorted(found.items())),
        certified=all(primality_certified(p) for p in found),
    )
    if cache is not None:
        cache.put(fz)
    return fz


@dataclass(frozen=True)
class MersennePartial:
    """Carried by BudgetError: what was split before the deadline."""

    m: int
    factors: dict[int, int]
    cofactors: tuple[int, ...]


def primitive_primes(
    m: int, cache: FactorCache, orders: OrderTable | None = None
) -> frozenset[tuple[int, int]]:
    """{(p, e_p)} for the primes of multiplicative order exactly m.

    Computed by removing from the factors of 2^m - 1 every prime dividing
    some 2^d - 1 with d | m, d < m.  For a primitive p the cached exponent
    is e_p itself, since p = 1 (mod m) forces p > m, hence ord_p(m) = 0.
    """
    fz = cache.get(m)
    earlier: set[int] = set()
    for d in divisors(m)[:-1]:
        if d == 1:
            continue
        earlier.update(cache.get(d).primes())
    members = frozenset((p, e) for p, e in fz.factors if p not in earlier)
    if orders is not None:
        orders.register_class(m, members)
    return members


def primitive_part(n: int, cache: FactorCache) -> int:
    """(2^n - 1)^*: the maximal primitive divisor of 2^n - 1."""
    out = 1
    for p, e in primitive_primes(n, cache):
        out *= p**e
    return out


def order_class(
    m: int, cache: FactorCache, orders: OrderTable | None = None
) -> dict[int, int]:
    """Primitive class of m as a dict p -> e_p (empty for m in {1, 6})."""
    return dict(primitive_primes(m, cache, orders))
