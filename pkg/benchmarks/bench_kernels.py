"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --trials 1000000 --k 10

Outputs are compared for equality before any timing is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from servicerule import _backend, _fallback
from servicerule.core import MatchFormat, Rule
from servicerule.schedules import rule_code


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(trials, k):
    deuce = MatchFormat.best_of(21, 2)
    for rule in (Rule.SR, Rule.CR, Rule.TRB):
        args = (rule_code(rule), deuce.points_to_win, 2, 0.7, 0.7, np.zeros(0), np.zeros(0), np.zeros(0, np.int8), 0, 1, 0, trials, 10_000)
        yield f"simulate {rule.value} best-of-21 win-by-2, {trials:,} games", "simulate_block", args
    for rule in (Rule.SR, Rule.AR):
        yield f"schedules {rule.value} k={k}, {2 ** (2 * k + 1):,} schedules", "schedule_outcomes", (rule_code(rule), k)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if "cython" not in _backend.available():
        print("compiled extension not built; only the numpy fallback is available")
        return 1
    fast = _backend.get("cython")
    print(f"{'case':<52} {'numpy s':>9} {'cython s':>9} {'speedup':>8}")
    for label, name, kargs in cases(args.trials, args.k):
        t_ref, ref = best_of(lambda: getattr(_fallback, name)(*kargs), args.repeat)
        t_fast, out = best_of(lambda: getattr(fast, name)(*kargs), args.repeat)
        if not all(np.array_equal(a, b) for a, b in zip(ref, out)):
            raise SystemExit(f"backends disagree on {label}")
        print(f"{label:<52} {t_ref:>9.3f} {t_fast:>9.3f} {t_ref / t_fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
