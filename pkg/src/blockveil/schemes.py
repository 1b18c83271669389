"""Uniform dataset-level encrypt/decrypt across the three schemes.

One key per dataset, shared by every image: that is the premise that keeps
the encrypted data learnable, so no per-image keying is offered.
"""

import numpy as np

from . import baselines, cipher
from .dataset import LabeledDataset
from .errors import NotSquare
from .keyfile import KeySpec


def _materialize(spec: KeySpec, image_hw: tuple[int, int]):
    if spec.scheme == "proposed":
        return cipher.derive_key(spec.seed, spec.block_size)
    if spec.scheme == "naive":
        return baselines.derive_naive_key(spec.seed, spec.block_size)
    h, w = image_hw
    if h != w:
        raise NotSquare(f"catmap needs square images, got {h}x{w}")
    return baselines.derive_catmap_key(spec.seed, h, spec.iterations, spec.xor_diffusion)


def transform_images(images: np.ndarray, spec: KeySpec, decrypt: bool = False) -> np.ndarray:
    """Encrypt (or decrypt) a batch (N, H, W, 3) under the key spec."""
    if images.shape[0] == 0:
        return images.copy()
    key = _materialize(spec, (images.shape[1], images.shape[2]))
    if spec.scheme == "proposed":
        fn = cipher.decrypt_images if decrypt else cipher.encrypt_images
    elif spec.scheme == "naive":
        fn = baselines.naive_unshuffle_images if decrypt else baselines.naive_shuffle_images
    else:
        fn = baselines.catmap_decrypt_images if decrypt else baselines.catmap_encrypt_images
    return fn(images, key)


def transform_dataset(ds: LabeledDataset, spec: KeySpec, decrypt: bool = False) -> LabeledDataset:
    """Images are transformed; labels and record order pass through untouched."""
    return ds.with_images(transform_images(ds.images, spec, decrypt=decrypt))
