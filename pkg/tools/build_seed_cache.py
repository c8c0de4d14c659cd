#!/usr/bin/env python3
"""Regenerate the packaged seed cache of Mersenne factorizations, m <= 128.

Run from the repository root:

    python tools/build_seed_cache.py [--max-exponent 128] [--budget 300]

Every factorization is produced by orbitgrowth.mersenne.factor_mersenne with
a generous budget and re-verified by the product check before being written.
"""

import argparse
import sys
import time

from orbitgrowth.mersenne import FactorCache, factor_mersenne


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-exponent", type=int, default=128)
    ap.add_argument("--budget", type=float, default=300.0)
    ap.add_argument(
        "--out", default="src/orbitgrowth/data/mersenne_m128.jsonl"
    )
    args = ap.parse_args()

    cache = FactorCache(load_seed=False)
    with open(args.out, "w", encoding="utf-8") as fh:
        for m in range(1, args.max_exponent + 1):
            t0 = time.monotonic()
            fz = factor_mersenne(m, cache, budget=args.budget)
            dt = time.monotonic() - t0
            fh.write(fz.to_json() + "\n")
            tags = "" if fz.certified else "  [probabilistic primality]"
            print(f"m={m:3d}  {dt:7.2f}s  {fz.factors}{tags}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
