"""Command-line surface.

Subcommands: sieve, order, factor, set-density, series, fit, k-exact,
greedy, series-transcendental, construct, reproduce.  Exit codes: 2 on
usage or contract errors, 3 on cache misses, 4 on exhausted budgets, 5 on
internal invariant violations.  All randomness is seeded (--seed, default
0) and outputs are byte-identical across identical invocations.  The
ORBITGROWTH_CACHE environment variable supplies a writable factor-cache
path; the packaged seed cache is always loaded underneath it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from .arith import OrderTable, mult_order, sieve_primes
from .constants import (
    greedy_L,
    k_exact_finite_s,
    rn_recursion,
    transcendental_series,
)
from .errors import (
    BudgetError,
    CacheMissError,
    CapacityError,
    ContractError,
    InvariantViolation,
)
from .fitting import classify_growth, fit_model
from .mersenne import FactorCache, factor_mersenne
from .mertens import (
    default_grid,
    dominant_sum,
    mertens_exact,
    remainder_bounds,
)
from .reproduce import THEOREMS, run_theorem
from .sets import (
    ExplicitFinitePrimes,
    InducedPrimes,
    estimate_density,
    prime_set_from_json,
)

EXIT_USAGE = 2
EXIT_CACHE_MISS = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5


def _fmt18(x: float) -> str:
    return f"{x:.18g}"


def _load_prime_set(path: str, seed: int):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return prime_set_from_json(obj, seed=seed)


def _open_cache(args) -> FactorCache:
    path = getattr(args, "cache", None) or os.environ.get("ORBITGROWTH_CACHE")
    return FactorCache(path=path)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


# ---------------------------------------------------------------------------
# Subcommand implementations.


def _cmd_sieve(args) -> int:
    table = sieve_primes(args.limit)
    print(f"primes <= {args.limit}: {len(table.primes)}")
    if args.out:
        if args.format == "csv":
            with open(args.out, "w", encoding="utf-8") as fh:
                for p in table.primes.tolist():
                    fh.write(f"{p}\n")
        else:
            table.primes.astype("<u8").tofile(args.out)
        print(f"wrote {args.out} ({args.format})")
    return 0


def _cmd_order(args) -> int:
    print(mult_order(args.prime))
    return 0


def _cmd_factor(args) -> int:
    cache = _open_cache(args)
    fz = factor_mersenne(args.exponent, cache, budget=args.budget)
    cache.flush()
    print(
        json.dumps(
            {
                "m": fz.m,
                "factors": [list(pe) for pe in fz.factors],
                "certified": fz.certified,
            },
            sort_keys=True,
        )
    )
    if not fz.certified:
        print(
            "note: contains factors past the deterministic primality bound; "
            "primality is 40-round probabilistic",
            file=sys.stderr,
        )
    return 0


def _cmd_set_density(args) -> int:
    pset = _load_prime_set(args.spec, args.seed)
    est = estimate_density(pset, args.limit)
    print(json.dumps(est.to_json(), sort_keys=True))
    return 0


def _cmd_series(args) -> int:
    pset = _load_prime_set(args.spec, args.seed)
    cache = _open_cache(args)
    orders = OrderTable()
    if args.mode == "exact":
        series = mertens_exact(args.n_max, pset, orders, cache)
    else:
        if not isinstance(pset, InducedPrimes):
            raise ContractError(
                "cli: dominant mode needs an induced prime set (an order set)"
            )
        series = dominant_sum(args.n_max, pset.order_set,
                              grid=default_grid(args.n_max))
    rows = ["N,value,mode,bound_R,bound_Q"]
    for n, v in series.samples:
        if n >= 6:
            rb = remainder_bounds(n)
            br, bq = _fmt18(rb.bound_r), _fmt18(rb.bound_q)
        else:
            br = bq = ""
        val = str(v) if args.mode == "exact" else _fmt18(float(v))
        rows.append(f"{n},{val},{args.mode},{br},{bq}")
    text = "\n".join(rows) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out} ({len(series.samples)} rows)")
    return 0


_MODEL_NAMES = {
    "klog": "k_log",
    "logdelta": "k_logdelta",
    "loglogr": "k_loglogr",
    "bounded": "bounded",
}


def _parse_series_csv(path: str) -> list[tuple[int, float]]:
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        try:
            n_col = header.index("N")
            v_col = header.index("value")
        except ValueError:
            raise ContractError("cli: series CSV needs N and value columns")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) <= max(n_col, v_col) or not parts[n_col]:
                continue
            raw = parts[v_col]
            value = float(Fraction(raw)) if "/" in raw else float(raw)
            samples.append((int(parts[n_col]), value))
    return samples


def _cmd_fit(args) -> int:
    samples = _parse_series_csv(args.infile)
    if args.model == "auto":
        report = classify_growth(samples)
    else:
        report = fit_model(samples, _MODEL_NAMES[args.model])
    payload = json.dumps(report.to_json(), sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    print(payload)
    return 0


def _cmd_k_exact(args) -> int:
    primes = [int(tok) for tok in args.set.split(",") if tok]
    constant = k_exact_finite_s(primes)
    print(constant.value)
    return 0


def _cmd_greedy(args) -> int:
    cache = _open_cache(args)
    trace = greedy_L(
        _parse_fraction(args.target), _parse_fraction(args.eps), cache,
        cap=args.cap,
    )
    print(
        f"orders {list(trace.chosen)}  k_final {trace.k_final} "
        f"({float(trace.k_final):.9f})  window [{args.target}, "
        f"{args.target}+{args.eps})"
    )
    if args.trace:
        payload = {
            "target": str(trace.target),
            "eps": str(trace.eps),
            "terminal": trace.terminal,
            "k_final": str(trace.k_final),
            "chosen": list(trace.chosen),
            "decisions": [
                {
                    "ell": d.ell,
                    "accepted": d.accepted,
                    "k_candidate": str(d.k_candidate),
                    "k_after": str(d.k_after),
                }
                for d in trace.decisions
            ],
        }
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.trace}")
    return 0


def _cmd_series_transcendental(args) -> int:
    cache = _open_cache(args)
    ts = transcendental_series(args.ell, args.terms, cache)
    v = ts.constant.value
    print(f"value {v}")
    print(f"decimal {_fmt18(float(v))}")
    exp = args.ell**args.terms - 1
    print(f"tail_bound 1/2^{exp} = {_fmt18(float(ts.tail_bound))}")
    return 0


def _cmd_construct(args) -> int:
    if args.construction != "rn":
        raise ContractError(f"cli: unknown construction {args.construction!r}")
    seed = args.construct_seed if args.construct_seed is not None else args.seed
    trace = rn_recursion(
        _parse_fraction(args.delta),
        args.y,
        args.n_max,
        mode=args.mode,
        a_prime=_parse_fraction(args.a_prime) if args.a_prime else None,
        c=_parse_fraction(args.c) if args.c else None,
        x=args.x,
        seed=seed,
        sign_pattern=args.sign,
    )
    print(
        f"mode {trace.mode}  delta {trace.delta}  Y {trace.y}  "
        f"a' {_fmt18(float(trace.a_prime))}"
    )
    print("   n          R_n              r_n - 1        cap delta/R_n")
    for step in trace.steps:
        if step.n <= 8 or step.n == len(trace.steps):
            print(
                f"  {step.n:2d}  {step.big_r:12d}  {_fmt18(step.r_n - 1):>22s}"
                f"  {_fmt18(step.r_cap):>20s}"
            )
    print(
        f"invariants: ratio={trace.ratio_ok} sandwich={trace.sandwich_ok} "
        f"intervals={trace.interval_ok} f-bound={trace.f_bound_ok}"
    )
    if args.out:
        payload = {
            "mode": trace.mode,
            "delta": str(trace.delta),
            "y": trace.y,
            "a_prime": str(trace.a_prime),
            "ratio_ok": trace.ratio_ok,
            "sandwich_ok": trace.sandwich_ok,
            "interval_ok": trace.interval_ok,
            "f_bound_ok": trace.f_bound_ok,
            "steps": [
                {
                    "n": s.n,
                    "R_n": s.big_r,
                    "b_n": str(s.b_n),
                    "eta": str(s.eta),
                    "partial_sum": str(s.partial_sum),
                }
                for s in trace.steps
            ],
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.out}")
    return 0 if trace.all_ok else EXIT_INVARIANT


def _cmd_reproduce(args) -> int:
    cache = _open_cache(args)
    orders = OrderTable()
    result = run_theorem(args.theorem, cache, orders)
    for line in result.lines():
        print(line)
    return 0 if result.passed else 1


# ---------------------------------------------------------------------------
# Parser.


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="orbitgrowth",
        description=(
            "Periodic points, orbit counts and dynamical Mertens sums of "
            "S-integer circle-doubling systems."
        ),
    )
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for all randomized components (default 0)")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker bound; evaluation is deterministic single-"
                         "partition at desk scale regardless")
    ap.add_argument("--cache", default=None,
                    help="writable factor-cache path (default "
                         "$ORBITGROWTH_CACHE; the packaged seed cache is "
                         "always loaded)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="enumerate primes with the least-factor sieve")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "binary"), default="csv")
    p.set_defaults(fn=_cmd_sieve)

    p = sub.add_parser("order", help="multiplicative order of 2 modulo a prime")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("factor", help="factor 2^M - 1 (cache-backed)")
    p.add_argument("--exponent", type=int, required=True)
    p.add_argument("--budget", type=float, default=10.0)
    p.set_defaults(fn=_cmd_factor)

    p = sub.add_parser("set-density", help="empirical density of a prime set")
    p.add_argument("--spec", required=True)
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(fn=_cmd_set_density)

    p = sub.add_parser("series", help="Mertens series, exact or dominant mode")
    p.add_argument("--spec", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "dominant"), required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(fn=_cmd_series)

    p = sub.add_parser("fit", help="fit growth regimes to a series CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--model",
                   choices=("auto", "klog", "logdelta", "loglogr", "bounded"),
                   default="auto")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_fit)

    p = sub.add_parser("k-exact", help="exact leading coefficient of finite S")
    p.add_argument("--set", required=True, help="comma-separated primes, e.g. 3,7")
    p.set_defaults(fn=_cmd_k_exact)

    p = sub.add_parser("greedy", help="greedy order selection hitting [k, k+eps)")
    p.add_argument("--target", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--cap", type=int, default=127)
    p.add_argument("--trace", default=None)
    p.set_defaults(fn=_cmd_greedy)

    p = sub.add_parser("series-transcendental",
                       help="partial sums of the ell-power order series")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.set_defaults(fn=_cmd_series_transcendental)

    p = sub.add_parser("construct", help="run a construction (rn: the interval recursion)")
    p.add_argument("construction", choices=("rn",))
    p.add_argument("--delta", required=True)
    p.add_argument("--y", type=int, default=50)
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--mode", choices=("idealized", "perturbed"),
                   default="idealized")
    p.add_argument("--a-prime", default=None)
    p.add_argument("--c", default=None)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--sign", default="plus",
                   choices=("plus", "minus", "alternating", "random"))
    p.add_argument("--seed", dest="construct_seed", type=int, default=None,
                   help="seed for this construction (overrides the global)")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("reproduce", help="run a desk-scale reproduction recipe")
    p.add_argument("--theorem", choices=sorted(THEOREMS), required=True)
    p.set_defaults(fn=_cmd_reproduce)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be >= 1")
    try:
        return args.fn(args)
    except CacheMissError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CACHE_MISS
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ContractError, CapacityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
