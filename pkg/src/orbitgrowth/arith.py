"""Exact elementary number theory.

Primes and least-factor sieves, multiplicative orders of 2, Möbius and
totient, p-adic valuations, and cyclotomic values Phi_n(2).  Everything
here is exact integer arithmetic; numpy is used only inside the sieves.
All tables are immutable once built and safe to share across threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InvariantViolation

DEFAULT_SIEVE_CAPACITY = 10**8

# Deterministic Miller-Rabin bases.  The first 13 prime bases are a proven
# witness set below 3.3e24; the remaining bases (40 fixed odd-prime bases in
# total) push the error probability below 4^-40 for larger inputs, which is
# the advertised contract for "certified" flags.
_MR_BASES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137,
    139, 149, 151, 157, 163, 167, 173,
)
MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin over the fixed base set; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primality_certified(n: int) -> bool:
    """True when is_probable_prime is a proof rather than 40-round evidence."""
    return n < MR_PROVEN_BOUND


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to `limit` plus a least-prime-factor array."""

    limit: int
    primes: np.ndarray
    smallest_factor: np.ndarray  # index n in [0, limit], 0 at 0 and 1

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            raise CapacityError(f"core-arith: {n} outside table range [2, {self.limit}]")
        return int(self.smallest_factor[n]) == n

    def least_factor(self, n: int) -> int:
        if n < 2 or n > self.limit:
            raise CapacityError(f"core-arith: {n} outside table range [2, {self.limit}]")
        return int(self.smallest_factor[n])

    def factorize(self, n: int) -> dict[int, int]:
        """Factor n by repeated least-factor lookup. Requires 1 <= n <= limit."""
        if n < 1 or n > self.limit:
            raise CapacityError(f"core-arith: {n} outside table range [1, {self.limit}]")
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.smallest_factor[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out


def sieve_primes(limit: int, capacity: int = DEFAULT_SIEVE_CAPACITY) -> PrimeTable:
    """Least-factor sieve of [2, limit]."""
    if limit < 2:
        raise CapacityError(f"core-arith: sieve limit must be >= 2, got {limit}")
    if limit > capacity:
        raise CapacityError(
            f"core-arith: sieve limit {limit} exceeds capacity bound {capacity}"
        )
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    unmarked = spf == 0
    unmarked[:2] = False
    primes = np.flatnonzero(unmarked)
    spf[primes] = primes
    return PrimeTable(limit=limit, primes=primes, smallest_factor=spf)


# Shared small table for factoring moderate integers without re-sieving.
_small_table_lock = threading.Lock()
_small_table: PrimeTable | None = None


def small_prime_table(limit: int = 10**5) -> PrimeTable:
    global _small_table
    with _small_table_lock:
        if _small_table is None or _small_table.limit < limit:
            _small_table = sieve_primes(limit)
    return _small_table


def _brent_rho(n: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n.

    Fully deterministic: the polynomial offset c walks 1, 2, 3, ... so runs
    are reproducible.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InvariantViolation(f"core-arith: rho failed to split {n}")  # pragma: no cover


def factorize(n: int, table: PrimeTable | None = None) -> dict[int, int]:
    """Full factorization of n >= 1 by trial division then rho splitting."""
    if n < 1:
        raise ValueError(f"core-arith: cannot factor {n}")
    out: dict[int, int] = {}
    if n == 1:
        return out
    tab = table if table is not None and n <= table.limit else None
    if tab is None and n <= small_prime_table().limit:
        tab = small_prime_table()
    if tab is not None:
        return tab.factorize(n)
    for p in small_prime_table().primes.tolist():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _brent_rho(m)
        stack.extend((d, m // d))
    return out


def divisors(n: int, table: PrimeTable | None = None) -> list[int]:
    """Sorted divisors of n."""
    divs = [1]
    for p, e in factorize(n, table).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int, table: PrimeTable | None = None) -> int:
    """Möbius function; 0 on squareful n."""
    if n < 1:
        raise ValueError(f"core-arith: moebius undefined at {n}")
    fac = factorize(n, table)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int, table: PrimeTable | None = None) -> int:
    """Euler totient."""
    if n < 1:
        raise ValueError(f"core-arith: totient undefined at {n}")
    out = n
    for p in factorize(n, table):
        out = out // p * (p - 1)
    return out


def ord_p(n: int, p: int) -> int:
    """Largest e with p^e | n.  Returns 0 when p does not divide n."""
    if n < 1:
        raise ValueError(f"core-arith: valuation of {n} is undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def mult_order(p: int, table: PrimeTable | None = None, *, checked: bool = True) -> int:
    """Least m with 2^m = 1 mod p, for an odd prime p.

    Factors p-1 (least-factor table when available, trial/rho otherwise)
    and strips prime factors from the exponent while congruence survives.
    `checked=False` skips the primality test for callers iterating a sieve.
    """
    if p < 3 or p % 2 == 0 or (checked and not is_probable_prime(p)):
        raise ValueError(f"core-arith: mult_order needs an odd prime, got {p}")
    m = p - 1
    for q in factorize(p - 1, table):
        while m % q == 0 and pow(2, m // q, p) == 1:
            m //= q
    return m


class OrderTable:
    """Memo of p -> m_p and p -> e_p = ord_p(2^{m_p}-1), with the inverse index.

    e_p is obtained by lifting: square-and-multiply 2^{m_p} modulo p^k for
    growing k until the congruence breaks.  No factorization of 2^{m_p}-1
    is ever needed, so Wieferich-style e_p >= 2 is handled uniformly.
    """

    def __init__(self, table: PrimeTable | None = None):
        self.table = table
        self._orders: dict[int, int] = {}
        self._exponents: dict[int, int] = {}
        self._classes: dict[int, frozenset[tuple[int, int]]] = {}
        self._lock = threading.Lock()

    def order(self, p: int) -> int:
        m = self._orders.get(p)
        if m is None:
            m = mult_order(p, self.table)
            with self._lock:
                self._orders[p] = m
        return m

    def exponent(self, p: int) -> int:
        e = self._exponents.get(p)
        if e is None:
            m = self.order(p)
            e = 1
            while pow(2, m, p ** (e + 1)) == 1:
                e += 1
            with self._lock:
                self._exponents[p] = e
        return e

    def register_class(self, m: int, members: frozenset[tuple[int, int]]) -> None:
        """Record the complete primitive class of m (from a factor cache)."""
        with self._lock:
            self._classes[m] = members
            for p, e in members:
                self._orders[p] = m
                self._exponents[p] = e

    def complete_class(self, m: int) -> frozenset[tuple[int, int]] | None:
        return self._classes.get(m)

    @property
    def entries(self) -> dict[int, int]:
        return dict(self._orders)


def ord_p_mersenne(p: int, n: int, orders: OrderTable | None = None) -> int:
    """ord_p(2^n - 1) without ever forming 2^n - 1.

    Equals e_p + ord_p(n) when m_p | n and 0 otherwise.
    """
    if n < 1:
        raise ValueError(f"core-arith: exponent must be >= 1, got {n}")
    if orders is None:
        orders = OrderTable()
    m = orders.order(p)
    if n % m:
        return 0
    return orders.exponent(p) + ord_p(n, p)


def cyclotomic_eval2(n: int, table: PrimeTable | None = None) -> int:
    """Phi_n(2), evaluated exactly as prod_{d|n} (2^d - 1)^{mu(n/d)}.

    The mu = +1 and mu = -1 passes are kept as separate integers so the
    final division is a single exact divmod.
    """
    if n < 1:
        raise ValueError(f"core-arith: cyclotomic index must be >= 1, got {n}")
    num = 1
    den = 1
    for d in divisors(n, table):
        mu = moebius(n // d, table)
        if mu == 1:
            num *= (1 << d) - 1
        elif mu == -1:
            den *= (1 << d) - 1
    q, r = divmod(num, den)
    if r:
        raise InvariantViolation(f"core-arith: Phi_{n}(2) division not exact")
    return q
