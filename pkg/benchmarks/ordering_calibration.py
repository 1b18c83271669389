#!/usr/bin/env python3
"""Calibration run for the scheme-ordering experiment on the synthetic corpus.

Trains the probe on plain/proposed/naive/catmap variants of the same data
for several seeds and prints per-scheme accuracies, medians, and the margin
quantities the acceptance thresholds freeze.
"""

import time

import numpy as np

from blockveil.keyfile import KeySpec
from blockveil.probe import ProbeConfig, run_probe
from blockveil.schemes import transform_images
from blockveil.synthetic import make_shape_dataset

KEY_SEED = 1234
PROBE_SEEDS = (0, 1, 2)


def main():
    ds = make_shape_dataset(6000, seed=7)
    variants = {"plain": ds.images}
    for scheme in ("proposed", "naive", "catmap"):
        spec = KeySpec(scheme=scheme, seed=KEY_SEED, block_size=4)
        variants[scheme] = transform_images(ds.images, spec)
    accs: dict[str, list[float]] = {}
    t_all = time.perf_counter()
    for name, images in variants.items():
        accs[name] = []
        for seed in PROBE_SEEDS:
            cfg = ProbeConfig(seed=seed)
            t0 = time.perf_counter()
            _, res = run_probe(images, ds.labels, cfg)
            accs[name].append(res.test_accuracy)
            print(f"{name:>9} seed {seed}: acc={res.test_accuracy:.4f} "
                  f"loss={res.final_train_loss:.4f} {time.perf_counter()-t0:.0f}s", flush=True)
    med = {k: float(np.median(v)) for k, v in accs.items()}
    print(f"\nmedians: {med}")
    print(f"plain-proposed gap: {abs(med['plain'] - med['proposed']):.4f} (<= 0.10?)")
    print(f"proposed-catmap margin: {med['proposed'] - med['catmap']:.4f} (>= 0.08?)")
    print(f"naive-catmap margin: {med['naive'] - med['catmap']:.4f} (>= 0.08?)")
    print(f"plain >= 0.35? {med['plain']:.4f}")
    print(f"total elapsed: {time.perf_counter()-t_all:.0f}s")


if __name__ == "__main__":
    main()
