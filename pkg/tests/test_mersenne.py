import json

import pytest

from orbitgrowth.arith import OrderTable, euler_phi
from orbitgrowth.errors import BudgetError, CacheMissError
from orbitgrowth.mersenne import (
    FactorCache,
    MersenneFactorization,
    factor_mersenne,
    order_class,
    primitive_part,
    primitive_primes,
)


class TestFactorization:
    def test_order_29_class(self, cache):
        fz = factor_mersenne(29, cache)
        assert fz.factors == ((233, 1), (1103, 1), (2089, 1))

    def test_unit(self, cache):
        assert factor_mersenne(1, cache).factors == ()

    def test_m11(self, cache):
        # 23 * 89 = 2047 by hand
        assert factor_mersenne(11, cache).factors == ((23, 1), (89, 1))

    def test_budget_exhausted_not_cached(self):
        fresh = FactorCache(load_seed=False)
        with pytest.raises(BudgetError) as err:
            factor_mersenne(101, fresh, budget=0.0)
        partial = err.value.partial
        assert partial.cofactors
        assert 101 not in fresh

    def test_product_check_rejects_bad_entry(self):
        with pytest.raises(Exception):
            MersenneFactorization(m=11, factors=((23, 1), (97, 1)), certified=True)


class TestCache:
    def test_seed_complete_and_verified(self, cache):
        assert cache.exponents() == list(range(1, 129))
        for m in (29, 64, 127, 128):
            fz = cache.get(m)
            prod = 1
            for p, e in fz.factors:
                prod *= p**e
            assert prod == (1 << m) - 1

    def test_miss(self, cache):
        with pytest.raises(CacheMissError):
            cache.get(500)

    def test_corrupt_line_is_hard_error(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"m": 11, "factors": [[23, 1], [97, 1]]}\n')
        with pytest.raises(ValueError, match="line 1"):
            FactorCache(path=str(path), load_seed=False)

    def test_append_flush_roundtrip(self, tmp_path):
        path = tmp_path / "user.jsonl"
        c1 = FactorCache(path=str(path), load_seed=False)
        fz = factor_mersenne(11, c1)
        assert c1.flush() == 1
        c2 = FactorCache(path=str(path), load_seed=False)
        assert c2.get(11).factors == fz.factors
        line = json.loads(path.read_text().splitlines()[0])
        assert line == {"m": 11, "factors": [[23, 1], [89, 1]]}


class TestPrimitive:
    def test_zsigmondy_exceptions(self, cache):
        assert primitive_primes(1, cache) == frozenset()
        assert primitive_primes(6, cache) == frozenset()

    def test_order_29(self, cache):
        assert {p for p, _ in primitive_primes(29, cache)} == {233, 1103, 2089}

    def test_m4(self, cache):
        assert primitive_primes(4, cache) == frozenset({(5, 1)})

    def test_zsigmondy_full_range(self, cache):
        empty = [m for m in range(1, 129) if not primitive_primes(m, cache)]
        assert empty == [1, 6]

    def test_primitive_part_examples(self, cache):
        assert primitive_part(6, cache) == 1
        assert primitive_part(11, cache) == 2047
        assert primitive_part(4, cache) == 5

    def test_primitive_part_vs_cyclotomic(self, cache):
        from orbitgrowth.arith import cyclotomic_eval2

        for n in range(2, 65):
            # (2^n - 1)^* >= Phi_n(2) / n
            assert n * primitive_part(n, cache) >= cyclotomic_eval2(n)

    def test_valuation_bound_at_primitive_set(self, cache):
        # |2^n - 1|_S <= n / 2^(phi(n) - 2) for S containing the class of n:
        # equivalently n * (2^n - 1)^* >= 2^(phi(n) - 2).
        for n in range(2, 65):
            assert n * primitive_part(n, cache) >= 1 << max(euler_phi(n) - 2, 0)

    def test_multiple_primitive_primes_exist(self, cache):
        multi = [m for m in range(2, 65) if len(primitive_primes(m, cache)) >= 2]
        assert len(multi) >= 1

    def test_exponent_consistency_with_lifting(self, cache):
        # cached exponent of p in 2^m - 1 equals e_p + ord_p(m)
        from orbitgrowth.arith import ord_p

        orders = OrderTable()
        for m in range(2, 129):
            for p, e in cache.get(m).factors:
                if p > 10**6:
                    continue
                assert e == orders.exponent(p) + ord_p(m, p)

    def test_order_class_registers(self, cache):
        orders = OrderTable()
        members = order_class(29, cache, orders)
        assert members == {233: 1, 1103: 1, 2089: 1}
        assert orders.order(233) == 29
        assert orders.exponent(2089) == 1
