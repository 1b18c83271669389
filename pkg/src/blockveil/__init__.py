"""Keyed block-wise image encryption that stays learnable.

Encrypts 8-bit RGB images so content is unrecognizable to people while
block-local structure remains learnable by block-aligned networks, plus the
tooling to check that claim: baseline scramblers, CIFAR binary I/O, quality
metrics, and a trainable probe.
"""

from .baselines import (
    CatMapKey,
    NaiveShuffleKey,
    catmap_decrypt,
    catmap_encrypt,
    catmap_step,
    catmap_step_inverse,
    derive_catmap_key,
    derive_naive_key,
    naive_block_shuffle,
    naive_block_unshuffle,
)
from .cipher import (
    EncryptionKey,
    decrypt_image,
    decrypt_images,
    derive_key,
    encrypt_image,
    encrypt_images,
    identity_key,
)
from .dataset import LabeledDataset, export_grid, export_ppm, read_cifar10, read_cifar100, write_cifar
from .errors import BlockveilError
from .keyfile import KeySpec, read_key_file, write_key_file
from .kernels import BACKEND as KERNEL_BACKEND
from .metrics import adjacent_correlation, histogram, measure_image, shannon_entropy
from .probe import ProbeConfig, ProbeModel, ProbeResult, evaluate, forward, init_probe, loss_and_grad, run_probe, sgd_train

__version__ = "0.1.0"

__all__ = [
    "BlockveilError",
    "CatMapKey",
    "EncryptionKey",
    "KeySpec",
    "KERNEL_BACKEND",
    "LabeledDataset",
    "NaiveShuffleKey",
    "ProbeConfig",
    "ProbeModel",
    "ProbeResult",
    "adjacent_correlation",
    "catmap_decrypt",
    "catmap_encrypt",
    "catmap_step",
    "catmap_step_inverse",
    "decrypt_image",
    "decrypt_images",
    "derive_catmap_key",
    "derive_key",
    "derive_naive_key",
    "encrypt_image",
    "encrypt_images",
    "evaluate",
    "export_grid",
    "export_ppm",
    "forward",
    "histogram",
    "identity_key",
    "init_probe",
    "loss_and_grad",
    "measure_image",
    "naive_block_shuffle",
    "naive_block_unshuffle",
    "read_cifar10",
    "read_cifar100",
    "read_key_file",
    "run_probe",
    "sgd_train",
    "shannon_entropy",
    "write_cifar",
    "write_key_file",
]
