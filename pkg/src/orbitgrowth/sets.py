"""Declarative order sets M and prime sets S, and the S <-> M correspondence.

An order set is a subset of the naturals; the induced prime set is
S_M = {odd primes p : m_p in M}.  Membership is exact and total; bulk
membership over [1, limit] is served by numpy sieves so that dominant sums
never need factorizations.  Closure flags (multiplication by naturals,
least common multiples) are verified by seeded randomized testing at
construction, with witnesses recorded when a closure genuinely fails.

JSON wire forms (the single schema used by the CLI):

    {"kind": "explicit_finite", "primes": [3, 7]}
    {"kind": "induced", "order_set": {"kind": "multiples_of", "ells": [3]}}

Order-set kinds: explicit_list, prime_list, multiples_of (finite ells or an
ell_set prime source), complement_multiples_of, composite_numbers,
prime_numbers, ell_powers, squarefree_augmented, congruence_primes,
omega_bounded.  Prime sources: {"kind": "list", ...} and
{"kind": "congruence_primes", "modulus": q, "residues": [...]}.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass

import numpy as np

from .arith import OrderTable, PrimeTable, factorize, mult_order, sieve_primes
from .errors import CapacityError, ContractError, InvariantViolation
from .mersenne import FactorCache, primitive_primes

CLOSURE_PAIRS = 10**4
CLOSURE_BOUND = 10**5


# ---------------------------------------------------------------------------
# Shared sieve helpers (memoized per limit).

_mask_lock = threading.Lock()
_prime_masks: dict[int, np.ndarray] = {}
_omega_arrays: dict[int, np.ndarray] = {}
_squarefree_masks: dict[int, np.ndarray] = {}


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array of length limit+1; True exactly at primes."""
    with _mask_lock:
        cached = _prime_masks.get(limit)
    if cached is not None:
        return cached
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    with _mask_lock:
        _prime_masks[limit] = mask
    return mask


def omega_array(limit: int) -> np.ndarray:
    """Omega(n) (prime factors with multiplicity) for n in [0, limit]."""
    with _mask_lock:
        cached = _omega_arrays.get(limit)
    if cached is not None:
        return cached
    omega = np.zeros(limit + 1, dtype=np.int8)
    mask = prime_mask(limit)
    for p in np.flatnonzero(mask).tolist():
        pk = p
        while pk <= limit:
            omega[pk::pk] += 1
            pk *= p
    with _mask_lock:
        _omega_arrays[limit] = omega
    return omega


def squarefree_mask(limit: int) -> np.ndarray:
    """Boolean array; True at squarefree n (True at 1)."""
    with _mask_lock:
        cached = _squarefree_masks.get(limit)
    if cached is not None:
        return cached
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    for p in range(2, math.isqrt(limit) + 1):
        sq = p * p
        if mask[p]:  # p prime is enough; composite p*p already covered
            mask[sq::sq] = False
    with _mask_lock:
        _squarefree_masks[limit] = mask
    return mask


# ---------------------------------------------------------------------------
# Prime sources: the L in multiples_of / omega_bounded.


class PrimeSource:
    def contains_prime(self, p: int) -> bool:
        raise NotImplementedError

    def primes_up_to(self, limit: int) -> list[int]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class ListSource(PrimeSource):
    def __init__(self, primes):
        self.primes = tuple(sorted(set(int(p) for p in primes)))

    def contains_prime(self, p: int) -> bool:
        return p in self.primes

    def primes_up_to(self, limit: int) -> list[int]:
        return [p for p in self.primes if p <= limit]

    def to_json(self) -> dict:
        return {"kind": "list", "primes": list(self.primes)}


class CongruenceSource(PrimeSource):
    """Primes p with p mod modulus in residues."""

    def __init__(self, modulus: int, residues):
        if modulus < 2:
            raise ContractError(f"prime-sets: modulus must be >= 2, got {modulus}")
        self.modulus = int(modulus)
        self.residues = tuple(sorted(set(int(r) % modulus for r in residues)))
        if not self.residues:
            raise ContractError("prime-sets: empty residue set")

    def contains_prime(self, p: int) -> bool:
        return p % self.modulus in self.residues

    def primes_up_to(self, limit: int) -> list[int]:
        mask = prime_mask(limit)
        idx = np.flatnonzero(mask)
        keep = np.isin(idx % self.modulus, self.residues)
        return idx[keep].tolist()

    def to_json(self) -> dict:
        return {
            "kind": "congruence_primes",
            "modulus": self.modulus,
            "residues": list(self.residues),
        }


def prime_source_from_json(obj: dict) -> PrimeSource:
    kind = obj.get("kind")
    if kind == "list":
        return ListSource(obj["primes"])
    if kind == "congruence_primes":
        return CongruenceSource(obj["modulus"], obj["residues"])
    raise ContractError(f"prime-sets: unknown prime source kind {kind!r}")


# ---------------------------------------------------------------------------
# Closure verification.


@dataclass(frozen=True)
class ClosureReport:
    nat_multiplication_ok: bool
    nat_witness: tuple[int, int] | None
    lcm_ok: bool
    lcm_witness: tuple[int, int] | None
    pairs_tested: int


_closure_memo: dict[tuple, ClosureReport] = {}
_closure_lock = threading.Lock()


def _merged_factors(fa: dict[int, int], fb: dict[int, int]) -> dict[int, int]:
    out = dict(fa)
    for p, e in fb.items():
        out[p] = out.get(p, 0) + e
    return out


def _lcm_factors(fa: dict[int, int], fb: dict[int, int]) -> dict[int, int]:
    out = dict(fa)
    for p, e in fb.items():
        if out.get(p, 0) < e:
            out[p] = e
    return out


def verify_closure_flags(
    oset: "OrderSet",
    seed: int = 0,
    pairs: int = CLOSURE_PAIRS,
    bound: int = CLOSURE_BOUND,
) -> ClosureReport:
    """Randomized closure testing of the claimed flags.

    A flag claimed True must survive `pairs` random products/lcms of members
    within [1, bound]; a flag claimed False must come with a concrete witness
    pair, found by a deterministic small search.
    """
    key = (repr(sorted(oset.to_json().items())), seed, pairs, bound)
    with _closure_lock:
        hit = _closure_memo.get(key)
    if hit is not None:
        return hit

    rng = random.Random(seed)
    indicator = oset.indicator(bound)
    members = [m for m in np.flatnonzero(indicator).tolist() if m >= 1]
    factor_memo: dict[int, dict[int, int]] = {}

    def fac(n: int) -> dict[int, int]:
        f = factor_memo.get(n)
        if f is None:
            f = factorize(n)
            factor_memo[n] = f
        return f

    # Multiplicative sampling skips the unit: membership of 1 is bookkeeping
    # for dominant sums, while closure concerns the orders M \ {1, 6}.
    nat_pool = [a for a in members if a >= 2]

    nat_ok, nat_wit = True, None
    lcm_ok, lcm_wit = True, None

    if oset.closed_under_nat_multiplication:
        if nat_pool:
            for _ in range(pairs):
                a = nat_pool[rng.randrange(len(nat_pool))]
                b = rng.randint(1, bound)
                if not oset._member(a * b, _merged_factors(fac(a), fac(b))):
                    nat_ok, nat_wit = False, (a, b)
                    break
    else:
        nat_ok = False
        nat_wit = _search_witness(oset, members, rng, bound, mode="mul")

    if oset.closed_under_lcm:
        if members:
            for _ in range(pairs):
                a = members[rng.randrange(len(members))]
                b = members[rng.randrange(len(members))]
                l = a * b // math.gcd(a, b)
                if not oset._member(l, _lcm_factors(fac(a), fac(b))):
                    lcm_ok, lcm_wit = False, (a, b)
                    break
    else:
        lcm_ok = False
        lcm_wit = _search_witness(oset, members, rng, bound, mode="lcm")

    report = ClosureReport(
        nat_multiplication_ok=nat_ok,
        nat_witness=nat_wit,
        lcm_ok=lcm_ok,
        lcm_witness=lcm_wit,
        pairs_tested=pairs,
    )
    if oset.closed_under_nat_multiplication and not nat_ok:
        raise InvariantViolation(
            f"prime-sets: {oset.kind} claims multiplication closure but "
            f"fails on pair {nat_wit}"
        )
    if oset.closed_under_lcm and not lcm_ok:
        raise InvariantViolation(
            f"prime-sets: {oset.kind} claims lcm closure but fails on pair {lcm_wit}"
        )
    with _closure_lock:
        _closure_memo[key] = report
    return report


def _search_witness(oset, members, rng, bound, mode) -> tuple[int, int] | None:
    """Small deterministic scan, then random probing, for a closure breaker."""
    head = [a for a in members if a <= 512][:64] or members[:64]
    other = range(1, 65) if mode == "mul" else head
    for a in head:
        for b in other:
            if mode == "mul":
                n = a * b
            else:
                n = a * b // math.gcd(a, b)
            if not oset.contains(n):
                return (a, b)
    for _ in range(2000):
        a = members[rng.randrange(len(members))] if members else rng.randint(1, bound)
        b = rng.randint(1, bound)
        if mode == "lcm":
            if members:
                b = members[rng.randrange(len(members))]
            n = a * b // math.gcd(a, b)
        else:
            n = a * b
        if not oset.contains(n):
            return (a, b)
    return None


# ---------------------------------------------------------------------------
# Order sets.


class OrderSet:
    kind = "abstract"
    closed_under_nat_multiplication = False
    closed_under_lcm = False

    def __init__(self, verify: bool = True, seed: int = 0):
        self.closure_report = (
            verify_closure_flags(self, seed=seed) if verify else None
        )

    # Membership --------------------------------------------------------
    def contains(self, n: int, table: PrimeTable | None = None) -> bool:
        if n < 1:
            raise ContractError(f"prime-sets: order-set membership needs n >= 1")
        return self._member(n, factorize(n, table))

    def _member(self, n: int, fac: dict[int, int]) -> bool:
        raise NotImplementedError

    def indicator(self, limit: int) -> np.ndarray:
        """Boolean membership array over [0, limit] (index 0 is False)."""
        raise NotImplementedError

    def generating_orders(self, limit: int) -> list[int]:
        """Members <= limit; the decomposition strips 1 and 6 itself."""
        return np.flatnonzero(self.indicator(limit)).tolist()

    # Serialization ------------------------------------------------------
    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return str(self.to_json())

    def __repr__(self):
        return f"OrderSet({self.to_json()})"


class ExplicitList(OrderSet):
    kind = "explicit_list"

    def __init__(self, values, verify: bool = True, seed: int = 0):
        self.values = tuple(sorted(set(int(v) for v in values)))
        if any(v < 1 for v in self.values):
            raise ContractError("prime-sets: explicit order values must be >= 1")
        # A nonempty finite set cannot absorb multiplication by N.
        self.closed_under_nat_multiplication = not self.values
        self.closed_under_lcm = self._lcm_closed()
        super().__init__(verify=verify, seed=seed)

    def _lcm_closed(self) -> bool:
        vals = set(self.values)
        return all(
            a * b // math.gcd(a, b) in vals for a in vals for b in vals
        )

    def _member(self, n, fac):
        return n in self.values

    def indicator(self, limit):
        out = np.zeros(limit + 1, dtype=bool)
        for v in self.values:
            if v <= limit:
                out[v] = True
        return out

    def to_json(self):
        return {"kind": "explicit_list", "values": list(self.values)}


class PrimeList(ExplicitList):
    """Explicit finite list of prime orders (the dense-theorem ingredient)."""

    kind = "prime_list"

    def __init__(self, primes, verify: bool = True, seed: int = 0):
        from .arith import is_probable_prime

        for p in primes:
            if not is_probable_prime(int(p)):
                raise ContractError(f"prime-sets: prime_list element {p} not prime")
        super().__init__(primes, verify=verify, seed=seed)

    def to_json(self):
        return {"kind": "prime_list", "primes": list(self.values)}


class MultiplesOf(OrderSet):
    """n such that some ell divides n; ells finite or a prime source."""

    kind = "multiples_of"
    closed_under_nat_multiplication = True
    closed_under_lcm = True

    def __init__(self, ells=None, ell_set: PrimeSource | None = None,
                 verify: bool = True, seed: int = 0):
        if (ells is None) == (ell_set is None):
            raise ContractError("prime-sets: multiples_of needs ells or ell_set")
        self.ells = tuple(sorted(set(int(v) for v in ells))) if ells else None
        if self.ells is not None and any(v < 2 for v in self.ells):
            raise ContractError("prime-sets: multiples_of divisors must be >= 2")
        self.ell_set = ell_set
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        if self.ells is not None:
            return any(n % l == 0 for l in self.ells)
        return any(self.ell_set.contains_prime(p) for p in fac)

    def indicator(self, limit):
        out = np.zeros(limit + 1, dtype=bool)
        divs = self.ells if self.ells is not None else self.ell_set.primes_up_to(limit)
        for l in divs:
            if l <= limit:
                out[l::l] = True
        return out

    def to_json(self):
        if self.ells is not None:
            return {"kind": "multiples_of", "ells": list(self.ells)}
        return {"kind": "multiples_of", "ell_set": self.ell_set.to_json()}


class ComplementMultiplesOf(OrderSet):
    """n with ell not dividing n; lcm-closed but not multiplication-closed."""

    kind = "complement_multiples_of"
    closed_under_nat_multiplication = False
    closed_under_lcm = True

    def __init__(self, ell: int, verify: bool = True, seed: int = 0):
        self.ell = int(ell)
        if self.ell < 2:
            raise ContractError("prime-sets: complement divisor must be >= 2")
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        return n % self.ell != 0

    def indicator(self, limit):
        out = np.ones(limit + 1, dtype=bool)
        out[0] = False
        out[self.ell :: self.ell] = False
        return out

    def to_json(self):
        return {"kind": "complement_multiples_of", "ell": self.ell}


class CompositeNumbers(OrderSet):
    """Non-primes.  Contains 1, so excluded n are exactly the primes."""

    kind = "composite_numbers"
    closed_under_nat_multiplication = True
    closed_under_lcm = True

    def __init__(self, verify: bool = True, seed: int = 0):
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        return sum(fac.values()) != 1

    def indicator(self, limit):
        out = ~prime_mask(limit)
        out = out.copy()
        out[0] = False
        return out

    def to_json(self):
        return {"kind": "composite_numbers"}


class PrimeNumbers(OrderSet):
    kind = "prime_numbers"
    closed_under_nat_multiplication = False
    closed_under_lcm = False

    def __init__(self, verify: bool = True, seed: int = 0):
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        return sum(fac.values()) == 1

    def indicator(self, limit):
        return prime_mask(limit).copy()

    def to_json(self):
        return {"kind": "prime_numbers"}


class EllPowers(OrderSet):
    """{ell^e : e >= 0}; a thin, lcm-closed set containing 1."""

    kind = "ell_powers"
    closed_under_nat_multiplication = False
    closed_under_lcm = True

    def __init__(self, ell: int, verify: bool = True, seed: int = 0):
        self.ell = int(ell)
        if self.ell < 2:
            raise ContractError("prime-sets: ell must be >= 2")
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        return n == 1 or set(fac) == {self.ell}

    def indicator(self, limit):
        out = np.zeros(limit + 1, dtype=bool)
        v = 1
        while v <= limit:
            out[v] = True
            v *= self.ell
        return out

    def to_json(self):
        return {"kind": "ell_powers", "ell": self.ell}


class SquarefreeAugmented(OrderSet):
    """Base members plus every non-squarefree n."""

    kind = "squarefree_augmented"

    def __init__(self, base: OrderSet, verify: bool = True, seed: int = 0):
        self.base = base
        self.closed_under_nat_multiplication = base.closed_under_nat_multiplication
        self.closed_under_lcm = base.closed_under_lcm
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        if any(e >= 2 for e in fac.values()):
            return True
        return self.base._member(n, fac)

    def indicator(self, limit):
        out = self.base.indicator(limit) | ~squarefree_mask(limit)
        out[0] = False
        return out

    def to_json(self):
        return {"kind": "squarefree_augmented", "base": self.base.to_json()}


class CongruencePrimes(OrderSet):
    """Primes in fixed residue classes, viewed as an order set."""

    kind = "congruence_primes"
    closed_under_nat_multiplication = False
    closed_under_lcm = False

    def __init__(self, modulus: int, residues, verify: bool = True, seed: int = 0):
        self.source = CongruenceSource(modulus, residues)
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        return sum(fac.values()) == 1 and self.source.contains_prime(n)

    def indicator(self, limit):
        out = np.zeros(limit + 1, dtype=bool)
        out[self.source.primes_up_to(limit)] = True
        return out

    def to_json(self):
        j = self.source.to_json()
        return {"kind": "congruence_primes", "modulus": j["modulus"],
                "residues": j["residues"]}


class OmegaBounded(OrderSet):
    """n with Omega(n/gcd(m,n)) > r, or a factor of n/gcd(m,n) outside L.

    The complement (the n kept by dominant sums) consists of d*q with d | m
    and q built from at most r primes of L.
    """

    kind = "omega_bounded"
    closed_under_nat_multiplication = True
    closed_under_lcm = True

    def __init__(self, r: int, ell_set: PrimeSource, m: int,
                 verify: bool = True, seed: int = 0):
        if r < 1 or m < 1:
            raise ContractError("prime-sets: omega_bounded needs r >= 1, m >= 1")
        self.r = int(r)
        self.ell_set = ell_set
        self.m = int(m)
        self._m_fac = factorize(self.m)
        super().__init__(verify=verify, seed=seed)

    def _member(self, n, fac):
        omega_q = 0
        for p, e in fac.items():
            eq = e - min(e, self._m_fac.get(p, 0))
            if eq:
                if not self.ell_set.contains_prime(p):
                    return True
                omega_q += eq
        return omega_q > self.r

    def indicator(self, limit):
        idx = np.arange(limit + 1, dtype=np.int64)
        g = np.gcd(idx, self.m)
        q = np.ones(limit + 1, dtype=np.int64)
        q[1:] = idx[1:] // g[1:]
        omega = omega_array(limit)
        bad = np.zeros(limit + 1, dtype=bool)
        in_l = np.zeros(limit + 1, dtype=bool)
        in_l[self.ell_set.primes_up_to(limit)] = True
        for p in np.flatnonzero(prime_mask(limit)).tolist():
            if not in_l[p]:
                bad[p::p] = True
        member = (omega[q] > self.r) | bad[q]
        member[0] = False
        return member

    def to_json(self):
        return {
            "kind": "omega_bounded",
            "r": self.r,
            "ell_set": self.ell_set.to_json(),
            "m": self.m,
        }


_ORDER_KINDS = {
    "explicit_list": lambda o, **kw: ExplicitList(o["values"], **kw),
    "prime_list": lambda o, **kw: PrimeList(o["primes"], **kw),
    "multiples_of": lambda o, **kw: MultiplesOf(
        ells=o.get("ells"),
        ell_set=prime_source_from_json(o["ell_set"]) if "ell_set" in o else None,
        **kw,
    ),
    "complement_multiples_of": lambda o, **kw: ComplementMultiplesOf(o["ell"], **kw),
    "composite_numbers": lambda o, **kw: CompositeNumbers(**kw),
    "prime_numbers": lambda o, **kw: PrimeNumbers(**kw),
    "ell_powers": lambda o, **kw: EllPowers(o["ell"], **kw),
    "squarefree_augmented": lambda o, **kw: SquarefreeAugmented(
        order_set_from_json(o["base"], **kw), **kw
    ),
    "congruence_primes": lambda o, **kw: CongruencePrimes(
        o["modulus"], o["residues"], **kw
    ),
    "omega_bounded": lambda o, **kw: OmegaBounded(
        o["r"], prime_source_from_json(o["ell_set"]), o["m"], **kw
    ),
}


def order_set_from_json(obj: dict, verify: bool = True, seed: int = 0) -> OrderSet:
    kind = obj.get("kind")
    builder = _ORDER_KINDS.get(kind)
    if builder is None:
        raise ContractError(f"prime-sets: unknown order-set kind {kind!r}")
    return builder(obj, verify=verify, seed=seed)


def order_set_contains(oset: OrderSet, n: int) -> bool:
    return oset.contains(n)


# ---------------------------------------------------------------------------
# Prime sets.


class PrimeSet:
    """A set of odd primes; 2 is never a member (it changes nothing)."""

    kind = "abstract"

    def contains(self, p: int, orders: OrderTable | None = None) -> bool:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def label(self) -> str:
        return str(self.to_json())


class ExplicitFinitePrimes(PrimeSet):
    kind = "explicit_finite"

    def __init__(self, primes):
        from .arith import is_probable_prime

        ps = sorted(set(int(p) for p in primes))
        for p in ps:
            if not is_probable_prime(p):
                raise ContractError(f"prime-sets: {p} is not prime")
        # Standing exclusion: 2 is dropped rather than rejected, since
        # |2^n - 1|_2 = 1 makes it invisible to every sum.
        self.primes = tuple(p for p in ps if p != 2)

    def contains(self, p: int, orders: OrderTable | None = None) -> bool:
        return p in self.primes

    def to_json(self):
        return {"kind": "explicit_finite", "primes": list(self.primes)}


class InducedPrimes(PrimeSet):
    kind = "induced"

    def __init__(self, order_set: OrderSet):
        self.order_set = order_set
        self._memo: dict[int, bool] = {}

    def contains(self, p: int, orders: OrderTable | None = None) -> bool:
        if p == 2:
            return False
        hit = self._memo.get(p)
        if hit is not None:
            return hit
        if orders is None:
            orders = OrderTable()
        out = self.order_set.contains(orders.order(p))
        self._memo[p] = out
        return out

    def to_json(self):
        return {"kind": "induced", "order_set": self.order_set.to_json()}


def prime_set_from_json(obj: dict, verify: bool = True, seed: int = 0) -> PrimeSet:
    kind = obj.get("kind")
    if kind == "explicit_finite":
        return ExplicitFinitePrimes(obj["primes"])
    if kind == "induced":
        return InducedPrimes(order_set_from_json(obj["order_set"], verify=verify,
                                                 seed=seed))
    raise ContractError(f"prime-sets: unknown prime-set kind {kind!r}")


def prime_set_contains(pset: PrimeSet, p: int, orders: OrderTable | None = None) -> bool:
    return pset.contains(p, orders)


# ---------------------------------------------------------------------------
# m-bar machinery, inner/outer hulls, density, entropy.


def mbar_of(n: int, oset: OrderSet, table: PrimeTable | None = None) -> int:
    """lcm of the realized orders in M dividing n (empty lcm = 1)."""
    from .arith import divisors

    out = 1
    for d in divisors(n, table):
        if d in (1, 6):
            continue
        if oset.contains(d, table):
            out = out * d // math.gcd(out, d)
    return out


def s_mbar(
    mbar: int, oset: OrderSet, cache: FactorCache,
    orders: OrderTable | None = None,
) -> dict[int, int]:
    """The finite stratum set S_mbar as {p: e_p}, from primitive classes."""
    from .arith import divisors

    out: dict[int, int] = {}
    for d in divisors(mbar):
        if d in (1, 6):
            continue
        if oset.contains(d):
            for p, e in primitive_primes(d, cache, orders):
                out[p] = e
    return out


def inner_outer(
    pset: ExplicitFinitePrimes, orders: OrderTable, cache: FactorCache
) -> tuple[InducedPrimes, InducedPrimes]:
    """(S^o, S-bar): largest induced subset and smallest induced superset."""
    if not isinstance(pset, ExplicitFinitePrimes):
        raise ContractError("prime-sets: inner_outer needs an explicit finite set")
    s = set(pset.primes)
    m_s = sorted(set(orders.order(p) for p in s))
    m_inner = [
        m for m in m_s
        if all(p in s for p, _ in primitive_primes(m, cache, orders))
    ]
    inner = InducedPrimes(ExplicitList(m_inner, verify=False))
    outer = InducedPrimes(ExplicitList(m_s, verify=False))
    return inner, outer


@dataclass(frozen=True)
class DensityEstimate:
    limit: int
    member_count: int
    total_count: int

    def __post_init__(self):
        if self.member_count > self.total_count:
            raise InvariantViolation("prime-sets: member_count > total_count")

    @property
    def ratio(self) -> float:
        return self.member_count / self.total_count if self.total_count else 0.0

    def to_json(self) -> dict:
        return {
            "limit": self.limit,
            "member_count": self.member_count,
            "total_count": self.total_count,
            "ratio": self.ratio,
        }


def estimate_density(
    pset: PrimeSet,
    limit: int,
    table: PrimeTable | None = None,
    capacity: int = 10**8,
) -> DensityEstimate:
    """Share of odd primes <= limit lying in the set."""
    if limit > capacity:
        raise CapacityError(f"prime-sets: density limit {limit} over capacity")
    if table is None or table.limit < limit:
        table = sieve_primes(limit)
    odd_primes = table.primes[table.primes > 2].tolist()
    if isinstance(pset, ExplicitFinitePrimes):
        members = sum(1 for p in odd_primes if p in pset.primes)
        return DensityEstimate(limit, members, len(odd_primes))
    oset = pset.order_set
    members = 0
    for p in odd_primes:
        m = mult_order(p, table, checked=False)
        if oset.contains(m, table):
            members += 1
    return DensityEstimate(limit, members, len(odd_primes))


def entropy(pset: PrimeSet | None = None) -> float:
    """Topological entropy of the doubling map on the dual of R_S.

    Independent of S under the standing exclusion of 2: every inverted odd
    prime contributes |2|_p = 1 to the sum of max(log|2|_p, 0).
    """
    return math.log(2.0)
