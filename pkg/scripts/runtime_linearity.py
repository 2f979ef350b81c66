#!/usr/bin/env python3
"""Time one MDD evaluation at doubling lengths and report the scaling ratio.

A linear-time implementation doubles its runtime when the length doubles.

    python scripts/runtime_linearity.py --lengths 1000,2000,4000,8000 --epsilons 1,2,4,8
"""
import argparse
import timeit

import numpy as np

from multiscale_dubuc import mdd


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lengths", default="1000,2000,4000,8000")
    parser.add_argument("--epsilons", default="1,2,4,8")
    parser.add_argument("--repeat", type=int, default=9)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    lengths = [int(t) for t in args.lengths.split(",")]
    sched = [int(t) for t in args.epsilons.split(",")]
    rng = np.random.default_rng(args.seed)
    mdd(*rng.normal(size=(2, 64)), sched)  # compile outside the timed region

    times = []
    for d in lengths:
        x, y = rng.normal(size=(2, d))
        number = max(10, 100_000 // d)
        best = min(timeit.repeat(lambda: mdd(x, y, sched), number=number, repeat=args.repeat)) / number
        times.append(best)
        print(f"d={d:>7}  {best * 1e6:10.1f} us")
    slope = np.polyfit(np.log2(lengths), np.log2(times), 1)[0]
    print(f"log-log slope {slope:.3f}; runtime ratio per doubling {2 ** slope:.3f}")


if __name__ == "__main__":
    main()
