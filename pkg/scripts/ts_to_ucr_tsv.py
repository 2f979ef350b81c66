#!/usr/bin/env python3
"""Convert a univariate sktime/aeon ``.ts`` file to the UCR 2018 TSV layout.

Usage:
    python scripts/ts_to_ucr_tsv.py ItalyPowerDemand_TRAIN.ts data/ucr/ItalyPowerDemand_TRAIN.tsv
"""
import argparse
import sys


def convert(lines):
    in_data = False
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not in_data:
            if line.lower() == "@data":
                in_data = True
            continue
        *dims, label = line.split(":")
        if len(dims) != 1:
            raise ValueError("only univariate .ts files are supported")
        yield "\t".join([label.strip(), *dims[0].split(",")])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("src")
    parser.add_argument("dst")
    args = parser.parse_args(argv)
    with open(args.src) as fh:
        rows = list(convert(fh))
    with open(args.dst, "w") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} series to {args.dst}", file=sys.stderr)


if __name__ == "__main__":
    main()
