import math

import pytest

from orbitgrowth.arith import (
    OrderTable,
    cyclotomic_eval2,
    divisors,
    euler_phi,
    factorize,
    moebius,
    mult_order,
    ord_p,
    ord_p_mersenne,
    sieve_primes,
)
from orbitgrowth.errors import CapacityError


def trial_division_prime_count(limit: int) -> int:
    """Independent oracle: count primes <= limit by bare trial division."""
    count = 0
    for n in range(2, limit + 1):
        for d in range(2, math.isqrt(n) + 1):
            if n % d == 0:
                break
        else:
            count += 1
    return count


class TestSieve:
    def test_small(self):
        assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]

    def test_smallest_case(self):
        assert sieve_primes(2).primes.tolist() == [2]

    def test_count_oracle_small(self):
        assert len(sieve_primes(10**4).primes) == trial_division_prime_count(10**4)

    def test_count_1e6(self, table_1e6):
        # 78498 frozen from a trial_division_prime_count(10**6) oracle run
        # at build time (the live oracle above covers 10**4).
        assert len(table_1e6.primes) == 78498

    def test_capacity(self):
        with pytest.raises(CapacityError):
            sieve_primes(10**9, capacity=10**8)
        with pytest.raises(CapacityError):
            sieve_primes(1)

    def test_least_factor(self, table_1e6):
        assert table_1e6.least_factor(91) == 7
        assert table_1e6.least_factor(97) == 97
        assert table_1e6.factorize(360) == {2: 3, 3: 2, 5: 1}


class TestMultOrder:
    def test_paper_anchor(self):
        # three primes share order 29
        assert mult_order(233) == 29
        assert mult_order(1103) == 29
        assert mult_order(2089) == 29

    @pytest.mark.parametrize("p,m", [(3, 2), (7, 3), (5, 4), (31, 5), (73, 9)])
    def test_small_orders(self, p, m):
        assert mult_order(p) == m
        # direct power iteration oracle
        x, k = 2 % p, 1
        while x != 1:
            x = 2 * x % p
            k += 1
        assert k == m

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            mult_order(4)
        with pytest.raises(ValueError):
            mult_order(91)
        with pytest.raises(ValueError):
            mult_order(2)

    def test_divides_p_minus_1_bulk(self, table_1e6):
        for p in table_1e6.primes[1:].tolist():
            m = mult_order(p, table_1e6, checked=False)
            assert (p - 1) % m == 0

    def test_order_at_least_log2(self, table_1e6):
        for p in table_1e6.primes[1:2000].tolist():
            assert mult_order(p, table_1e6, checked=False) >= math.log2(p)


class TestMoebiusPhi:
    def test_unit(self):
        assert moebius(1) == 1
        assert euler_phi(1) == 1

    def test_squareful(self):
        assert moebius(12) == 0
        assert euler_phi(12) == 4

    def test_three_primes(self):
        # 30 = 2 * 3 * 5 by hand
        assert moebius(30) == -1
        assert euler_phi(30) == 8

    def test_domain(self):
        with pytest.raises(ValueError):
            moebius(0)
        with pytest.raises(ValueError):
            euler_phi(0)

    def test_phi_is_unit_group_order(self):
        for n in range(1, 200):
            units = sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)
            assert euler_phi(n) == units


class TestValuations:
    def test_examples(self):
        assert ord_p(63, 3) == 2
        assert ord_p(63, 5) == 0
        assert ord_p(3**7 * 2, 3) == 7

    def test_domain(self):
        with pytest.raises(ValueError):
            ord_p(0, 3)

    def test_mersenne_examples(self, orders):
        assert ord_p_mersenne(3, 6, orders) == 2      # ord_3(63)
        assert ord_p_mersenne(5, 3, orders) == 0      # m_5 = 4 does not divide 3
        assert ord_p_mersenne(1093, 364, orders) == 2  # Wieferich: e_p = 2

    def test_against_big_integer_oracle(self, orders, table_1e6):
        primes = [int(p) for p in table_1e6.primes[1:100]]
        for p in primes:
            for n in range(1, 65):
                value = (1 << n) - 1
                expect = 0
                while value % p == 0:
                    value //= p
                    expect += 1
                assert ord_p_mersenne(p, n, orders) == expect


class TestCyclotomic:
    def test_examples(self):
        assert cyclotomic_eval2(1) == 1
        assert cyclotomic_eval2(6) == 3
        assert cyclotomic_eval2(29) == 536870911  # prime index: 2^29 - 1

    def test_product_identity(self):
        for n in range(1, 201):
            prod = 1
            for d in divisors(n):
                prod *= cyclotomic_eval2(d)
            assert prod == (1 << n) - 1

    def test_lower_bound(self):
        for n in range(3, 201):
            assert cyclotomic_eval2(n) >= 1 << max(euler_phi(n) - 2, 0)

    def test_gcd_with_earlier_divides_n(self):
        for n in range(2, 201):
            phi_n = cyclotomic_eval2(n)
            earlier = ((1 << n) - 1) // phi_n
            assert n % math.gcd(phi_n, earlier) == 0


class TestFactorize:
    def test_matches_recomposition(self):
        for n in (2**20 + 1, 10**12 + 39, 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19):
            fac = factorize(n)
            prod = 1
            for p, e in fac.items():
                prod *= p**e
            assert prod == n

    def test_order_table_exponent_lifting(self, orders):
        # e_p = ord_p(2^{m_p} - 1); spot-check by direct division.
        for p in (3, 5, 7, 23, 89, 233, 1093, 3511):
            m = orders.order(p)
            value = (1 << m) - 1
            e = 0
            while value % p == 0:
                value //= p
                e += 1
            assert orders.exponent(p) == e

    def test_wieferich_exponents(self, orders):
        assert orders.exponent(1093) == 2
        assert orders.exponent(3511) == 2
