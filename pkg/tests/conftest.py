import importlib.util
import os
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
GOLDEN_DIR = TESTS_DIR / "golden"


def _load_module(path: Path):
    spec = importlib.util.spec_from_file_location(path.stem, path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.fixture(scope="session")
def block_oracle():
    """The straight-line golden-block oracle, loaded as a module."""
    return _load_module(TESTS_DIR / "oracles" / "golden_block_oracle.py")


@pytest.fixture(scope="session")
def catmap_oracle():
    return _load_module(TESTS_DIR / "oracles" / "catmap_oracle.py")


def find_cifar10_batch():
    """Path to an official CIFAR-10 binary batch, or None when unavailable."""
    candidates = []
    env = os.environ.get("CIFAR10_DIR")
    if env:
        candidates.append(Path(env) / "data_batch_1.bin")
        candidates.append(Path(env))
    candidates.append(TESTS_DIR.parent / "data" / "cifar-10-batches-bin" / "data_batch_1.bin")
    for c in candidates:
        if c.is_file():
            return c
    return None


def find_cifar100_train():
    env = os.environ.get("CIFAR100_DIR")
    candidates = []
    if env:
        candidates.append(Path(env) / "train.bin")
        candidates.append(Path(env))
    candidates.append(TESTS_DIR.parent / "data" / "cifar-100-binary" / "train.bin")
    for c in candidates:
        if c.is_file():
            return c
    return None
