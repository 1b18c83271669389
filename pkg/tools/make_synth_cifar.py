#!/usr/bin/env python3
"""Emit the synthetic structured corpus as a CIFAR-10-format binary file.

Stand-in data source for pipelines that expect the official binaries, e.g.
the training reproduction package. Usage:

    python tools/make_synth_cifar.py --count 6000 --seed 7 -o plain.bin
"""

import argparse

from blockveil.dataset import write_cifar
from blockveil.synthetic import make_shape_dataset


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=6000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--noise", type=int, default=0)
    ap.add_argument("-o", "--out", required=True)
    args = ap.parse_args()
    write_cifar(make_shape_dataset(args.count, args.seed, noise=args.noise), args.out)
    print(f"wrote {args.count} records to {args.out}")


if __name__ == "__main__":
    main()
