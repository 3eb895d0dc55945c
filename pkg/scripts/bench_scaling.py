#!/usr/bin/env python3
"""Measure solver wall-clock scaling and print a small table.

Three experiments, mirroring the timing acceptance checks but with knobs:

  fpt        zero-budget parameterized solves on sparse instances with a
             fixed handful of deviators, across growing agent counts
  any        the any-size degree-2 solver on one ordered odd cycle
  max        the max-cardinality degree-2 solver on one odd path, whose
             candidate sweep is quadratic by construction

Each row reports the best of --repeats runs and the log-log slope against
the previous row.  Timings are wall clock on whatever core this runs on;
expect noise at the small end.
"""

import argparse
import math
import random
import time

from devmatch.core import DeviatorProblem, Instance, Objective, SizeRegime
from devmatch.fpt import solve_fpt
from devmatch.generators import GenSpec, generate
from devmatch.shortlist import solve_shortlist_any, solve_shortlist_max


def best_time(solve, p, repeats):
    best = math.inf
    for _ in range(repeats):
        begun = time.perf_counter()
        solve(p)
        best = min(best, time.perf_counter() - begun)
    return best


def fpt_problem(n, deviators, seed):
    drawn = generate(GenSpec(n=n, list_cap=4, deviator_fraction=0.0, seed=seed))
    picked = frozenset(random.Random(seed).sample(range(1, n + 1), deviators))
    return DeviatorProblem(
        drawn.instance, picked, Objective.BLOCKING_PAIRS, SizeRegime.ANY, 0
    )


def cycle_problem(n):
    prefs = [()]
    for i in range(1, n + 1):
        prefs.append((i % n + 1, (i - 2) % n + 1))
    inst = Instance(n, tuple(prefs), None)
    return DeviatorProblem(
        inst,
        frozenset(range(1, n + 1)),
        Objective.BLOCKING_PAIRS,
        SizeRegime.ANY,
        None,
    )


def path_problem(n):
    prefs = [(), (2,)]
    for i in range(2, n):
        prefs.append((i + 1, i - 1))
    prefs.append((n - 1,))
    inst = Instance(n, tuple(prefs), None)
    return DeviatorProblem(
        inst,
        frozenset(range(1, n + 1)),
        Objective.BLOCKING_PAIRS,
        SizeRegime.MAX_CARDINALITY,
        None,
    )


def report(name, sizes, timings):
    print(f"\n{name}")
    print(f"  {'n':>8}  {'best':>12}  {'slope':>6}")
    previous = None
    for n, t in zip(sizes, timings):
        if previous is None:
            slope = ""
        else:
            slope = f"{math.log(t / previous[1]) / math.log(n / previous[0]):.2f}"
        print(f"  {n:>8}  {t * 1000:>10.2f}ms  {slope:>6}")
        previous = (n, t)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=[1001, 2001, 4001],
        help="agent counts for the degree-2 solvers",
    )
    parser.add_argument(
        "--fpt-sizes", type=int, nargs="+", default=[100, 200, 400, 800],
        help="agent counts for the parameterized solver",
    )
    parser.add_argument("--deviators", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    timings = [
        best_time(solve_fpt, fpt_problem(n, args.deviators, args.seed), args.repeats)
        for n in args.fpt_sizes
    ]
    report(f"solve_fpt, k=0, |D|={args.deviators}", args.fpt_sizes, timings)

    odd = [n if n % 2 else n + 1 for n in args.sizes]
    timings = [
        best_time(solve_shortlist_any, cycle_problem(n), args.repeats) for n in odd
    ]
    report("solve_shortlist_any, one ordered odd cycle", odd, timings)

    timings = [
        best_time(solve_shortlist_max, path_problem(n), args.repeats) for n in odd
    ]
    report("solve_shortlist_max, one odd path", odd, timings)


if __name__ == "__main__":
    main()
