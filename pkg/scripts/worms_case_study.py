#!/usr/bin/env python3
"""Generic vs customized epsilon schedule on one dataset (Worms by default).

Prints test accuracy for the generic power-of-two schedule and for a
user-supplied schedule that drops the fine scales.

    python scripts/worms_case_study.py --data-dir /path/to/UCRArchive_2018
"""
import argparse
import time

from multiscale_dubuc import generic_epsilon_schedule
from multiscale_dubuc.data import load_ucr_dataset
from multiscale_dubuc.evaluation import MeasureSpec, test_accuracy


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", required=True)
    parser.add_argument("--dataset", default="Worms")
    parser.add_argument("--alpha", type=float, default=0.4)
    parser.add_argument("--custom", default="16,32,64,128,256")
    args = parser.parse_args(argv)

    ds = load_ucr_dataset(args.data_dir, args.dataset)
    print(f"{ds.name}: d={ds.d} train={len(ds.train)} test={len(ds.test)} classes={len(ds.classes)}")
    schedules = {
        "generic": generic_epsilon_schedule(ds.d, args.alpha),
        "custom": [int(t) for t in args.custom.split(",")],
    }
    print(f"{'eud':>8}  {'':<28} acc={test_accuracy(ds, MeasureSpec('eud')):.4f}")
    for label, sched in schedules.items():
        spec = MeasureSpec("mdd", sched)
        start = time.perf_counter()
        acc = test_accuracy(ds, spec)
        print(f"{label:>8}  {spec.describe():<28} acc={acc:.4f}  ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
