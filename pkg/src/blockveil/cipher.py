"""Block-wise nibble-shuffling cipher on 8-bit RGB images.

Per M x M block: split every channel byte into its upper and lower 4 bits
(giving 6 nibble channels), complement the nibbles at key-selected slots,
permute all 6*M*M (channel, position) slots with one keyed shuffle, and
recombine. The same (mask, perm) pattern is used for every block of every
image under a key, which is what keeps the result learnable by a network
whose first layer is block-aligned.

All operations are pure functions; keys are immutable after derivation, so
images may be processed concurrently in any order.

Slot layout: idx = c*M*M + r*M + col with c in {0: upper-R, 1: upper-G,
2: upper-B, 3: lower-R, 4: lower-G, 5: lower-B}.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionError, LengthMismatch, NotAPermutation, CountMismatch
from .rng import SplitMix64, fisher_yates, invert_permutation


def check_image(img: np.ndarray) -> np.ndarray:
    """Validate an H x W x 3 uint8 image (the only pixel format accepted)."""
    img = np.asarray(img)
    if img.dtype != np.uint8:
        raise DimensionError(f"expected uint8 pixels, got {img.dtype}")
    if img.ndim != 3 or img.shape[2] != 3:
        raise DimensionError(f"expected an HxWx3 RGB image, got shape {img.shape}")
    return img


def _check_blocked(img: np.ndarray, m: int) -> np.ndarray:
    img = check_image(img)
    h, w, _ = img.shape
    if h % m != 0 or w % m != 0:
        raise DimensionError(f"image {h}x{w} is not divisible into {m}x{m} blocks")
    return img


@dataclass(frozen=True)
class EncryptionKey:
    """Seed-derived reversal mask + slot permutation; sole source of ciphertext determinism.

    mask and perm always cover all 6*M*M slots. inv_perm is computed when not
    supplied. Instances are safe to share across threads.
    """

    seed: int
    block_size: int
    mask: np.ndarray
    perm: np.ndarray
    inv_perm: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        n = 6 * self.block_size * self.block_size
        mask = np.asarray(self.mask, dtype=bool)
        perm = np.asarray(self.perm, dtype=np.int64)
        if mask.shape != (n,):
            raise LengthMismatch(f"mask must have {n} entries, got {mask.shape}")
        if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
            raise NotAPermutation("perm is not a permutation of the slot range")
        inv = self.inv_perm
        if inv is None:
            inv = invert_permutation(perm)
        else:
            inv = np.asarray(inv, dtype=np.int64)
            if not np.array_equal(inv[perm], np.arange(n)):
                raise NotAPermutation("inv_perm does not invert perm")
        for arr in (mask, perm, inv):
            arr.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "inv_perm", inv)

    @property
    def slots(self) -> int:
        return 6 * self.block_size * self.block_size


def derive_key(seed: int, block_size: int) -> EncryptionKey:
    """Derive (mask, perm) from the seed: mask draws first (lowest bit of one
    64-bit draw per slot, in slot order), then the Fisher-Yates shuffle.

    Pure function of (seed, block_size); re-derivation is bit-identical.
    """
    if block_size < 1:
        raise DimensionError("block size must be positive")
    n = 6 * block_size * block_size
    rng = SplitMix64(seed)
    mask = np.fromiter((rng.next_u64() & 1 for _ in range(n)), dtype=bool, count=n)
    perm = fisher_yates(rng, n)
    return EncryptionKey(seed=seed, block_size=block_size, mask=mask, perm=perm)


def identity_key(block_size: int) -> EncryptionKey:
    """All-false mask, identity permutation: encrypts to the plaintext. Test aid."""
    n = 6 * block_size * block_size
    return EncryptionKey(seed=0, block_size=block_size, mask=np.zeros(n, bool), perm=np.arange(n))


# -- single-block reference operations -------------------------------------

def split_blocks(img: np.ndarray, m: int) -> np.ndarray:
    """Divide the image into M x M blocks, row-major block order.

    Returns an array of shape (num_blocks, M, M, 3).
    """
    img = _check_blocked(img, m)
    h, w, _ = img.shape
    gh, gw = h // m, w // m
    return img.reshape(gh, m, gw, m, 3).transpose(0, 2, 1, 3, 4).reshape(gh * gw, m, m, 3)


def merge_blocks(blocks: np.ndarray, grid: tuple[int, int], m: int) -> np.ndarray:
    """Reassemble row-major blocks into an image; inverse of split_blocks."""
    blocks = np.asarray(blocks, dtype=np.uint8)
    gh, gw = grid
    if blocks.shape[0] != gh * gw:
        raise CountMismatch(f"expected {gh * gw} blocks for a {gh}x{gw} grid, got {blocks.shape[0]}")
    if blocks.shape[1:] != (m, m, 3):
        raise CountMismatch(f"blocks must be {m}x{m}x3, got {blocks.shape[1:]}")
    return (
        blocks.reshape(gh, gw, m, m, 3).transpose(0, 2, 1, 3, 4).reshape(gh * m, gw * m, 3)
    )


def split_bitplanes(block: np.ndarray) -> np.ndarray:
    """M x M x 3 bytes -> 6*M*M nibbles in the slot layout above."""
    block = np.asarray(block, dtype=np.uint8)
    m = block.shape[0]
    flat = block.reshape(m * m, 3)
    upper = (flat >> 4).T.reshape(-1)  # channel-major: 3 planes of M*M
    lower = (flat & 0x0F).T.reshape(-1)
    return np.concatenate([upper, lower])


def merge_bitplanes(nibbles: np.ndarray) -> np.ndarray:
    """Inverse of split_bitplanes: 6*M*M nibbles -> M x M x 3 bytes."""
    nibbles = np.asarray(nibbles, dtype=np.uint8)
    mm = nibbles.shape[0] // 6
    m = int(round(mm**0.5))
    if 6 * m * m != nibbles.shape[0]:
        raise LengthMismatch(f"nibble count {nibbles.shape[0]} is not 6*M*M")
    upper = nibbles[: 3 * mm].reshape(3, mm).T
    lower = nibbles[3 * mm :].reshape(3, mm).T
    return ((upper << 4) | lower).reshape(m, m, 3)


def apply_reversal(nibbles: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Complement (v -> 15-v) the nibbles at mask-selected slots. Involution."""
    nibbles = np.asarray(nibbles, dtype=np.uint8)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != nibbles.shape:
        raise LengthMismatch(f"mask length {mask.shape} != nibble length {nibbles.shape}")
    return np.where(mask, 15 - nibbles, nibbles)


def apply_permutation(nibbles: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Reorder slots: out[i] = in[perm[i]]."""
    nibbles = np.asarray(nibbles)
    perm = np.asarray(perm, dtype=np.int64)
    n = nibbles.shape[0]
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise NotAPermutation("perm is not a permutation of the slot range")
    return nibbles[perm]


# -- whole-image paths ------------------------------------------------------

# kind codes for the byte-level lookup: 0 upper, 1 upper complemented,
# 2 lower, 3 lower complemented
def _byte_maps(key: EncryptionKey, decrypt: bool):
    """Collapse (split, reverse, permute, merge) into a per-block byte map.

    For each output byte: the block-local source byte of its upper and lower
    nibble plus a kind code. encrypt: out[i] = rev(mask[perm[i]], in[perm[i]]);
    decrypt: out[i] = rev(mask[i], in[inv_perm[i]]).
    """
    m = key.block_size
    mm = m * m
    if decrypt:
        src_slot = key.inv_perm
        flag = key.mask
    else:
        src_slot = key.perm
        flag = key.mask[key.perm]
    chan = src_slot // mm
    pos = src_slot % mm
    src_byte_all = pos * 3 + np.where(chan < 3, chan, chan - 3)
    kind_all = np.where(chan < 3, 0, 2) + flag.astype(np.int64)

    out_pos = np.arange(3 * mm) // 3
    out_chan = np.arange(3 * mm) % 3
    hi_slot = out_chan * mm + out_pos
    lo_slot = (out_chan + 3) * mm + out_pos
    return (
        src_byte_all[hi_slot].astype(np.int64),
        kind_all[hi_slot].astype(np.uint8),
        src_byte_all[lo_slot].astype(np.int64),
        kind_all[lo_slot].astype(np.uint8),
    )


def _check_batch(images: np.ndarray, m: int) -> np.ndarray:
    images = np.ascontiguousarray(images, dtype=np.uint8)
    if images.ndim != 4 or images.shape[3] != 3:
        raise DimensionError(f"expected a batch of HxWx3 images, got shape {images.shape}")
    _, h, w, _ = images.shape
    if h % m != 0 or w % m != 0:
        raise DimensionError(f"images {h}x{w} are not divisible into {m}x{m} blocks")
    return images


def encrypt_images(images: np.ndarray, key: EncryptionKey) -> np.ndarray:
    """Encrypt a batch (N, H, W, 3); every block of every image gets the same pattern."""
    images = _check_batch(images, key.block_size)
    if images.shape[0] == 0:
        return images.copy()
    return kernels.apply_block_map(images, key.block_size, *_byte_maps(key, decrypt=False))


def decrypt_images(images: np.ndarray, key: EncryptionKey) -> np.ndarray:
    """Exact inverse of encrypt_images."""
    images = _check_batch(images, key.block_size)
    if images.shape[0] == 0:
        return images.copy()
    return kernels.apply_block_map(images, key.block_size, *_byte_maps(key, decrypt=True))


def encrypt_image(img: np.ndarray, key: EncryptionKey) -> np.ndarray:
    img = _check_blocked(img, key.block_size)
    return encrypt_images(img[np.newaxis], key)[0]


def decrypt_image(img: np.ndarray, key: EncryptionKey) -> np.ndarray:
    img = _check_blocked(img, key.block_size)
    return decrypt_images(img[np.newaxis], key)[0]


def encrypt_image_reference(img: np.ndarray, key: EncryptionKey) -> np.ndarray:
    """Slow per-block composition of the four primitive steps.

    Kept as the in-package cross-check for the batched byte-map path; tests
    compare the two routes byte for byte.
    """
    m = key.block_size
    img = _check_blocked(img, m)
    h, w, _ = img.shape
    blocks = split_blocks(img, m)
    out = np.empty_like(blocks)
    for i, block in enumerate(blocks):
        nib = split_bitplanes(block)
        nib = apply_reversal(nib, key.mask)
        nib = apply_permutation(nib, key.perm)
        out[i] = merge_bitplanes(nib)
    return merge_blocks(out, (h // m, w // m), m)


def decrypt_image_reference(img: np.ndarray, key: EncryptionKey) -> np.ndarray:
    """Inverse composition: unshuffle, then un-complement."""
    m = key.block_size
    img = _check_blocked(img, m)
    h, w, _ = img.shape
    blocks = split_blocks(img, m)
    out = np.empty_like(blocks)
    for i, block in enumerate(blocks):
        nib = split_bitplanes(block)
        nib = apply_permutation(nib, key.inv_perm)
        nib = apply_reversal(nib, key.mask)
        out[i] = merge_bitplanes(nib)
    return merge_blocks(out, (h // m, w // m), m)
