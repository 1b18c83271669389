"""Comparison schemes: naive per-block pixel shuffle and a cat-map scrambler.

The naive shuffle moves whole RGB pixels inside each block with one shared
positional permutation, so per-block color histograms survive and object
boundaries stay visible. The cat map is the standard generalized unimodular
grid map x' = (x + p*y) mod N, y' = (q*x + (p*q+1)*y) mod N (determinant 1,
hence a bijection), iterated T times over the whole image, optionally
followed by an XOR keystream pass.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .cipher import _check_batch, check_image
from .errors import DimensionError, NotSquare
from .rng import SplitMix64, fisher_yates, invert_permutation


@dataclass(frozen=True)
class NaiveShuffleKey:
    """Keyed permutation of the M*M pixel positions; RGB triples move together."""

    seed: int
    block_size: int
    pos_perm: np.ndarray
    inv_pos_perm: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        mm = self.block_size * self.block_size
        perm = np.asarray(self.pos_perm, dtype=np.int64)
        if perm.shape != (mm,) or not np.array_equal(np.sort(perm), np.arange(mm)):
            raise DimensionError("pos_perm is not a permutation of the block positions")
        inv = invert_permutation(perm) if self.inv_pos_perm is None else np.asarray(self.inv_pos_perm, np.int64)
        perm.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "pos_perm", perm)
        object.__setattr__(self, "inv_pos_perm", inv)


def derive_naive_key(seed: int, block_size: int) -> NaiveShuffleKey:
    """Fisher-Yates over the M*M positions, straight off the seed stream."""
    if block_size < 1:
        raise DimensionError("block size must be positive")
    rng = SplitMix64(seed)
    return NaiveShuffleKey(seed=seed, block_size=block_size, pos_perm=fisher_yates(rng, block_size * block_size))


def _pixel_byte_src(pos_perm: np.ndarray) -> np.ndarray:
    # out pixel s = in pixel pos_perm[s]; expand to byte indices
    return (pos_perm[:, np.newaxis] * 3 + np.arange(3)).reshape(-1)


def naive_shuffle_images(images: np.ndarray, key: NaiveShuffleKey) -> np.ndarray:
    images = _check_batch(images, key.block_size)
    if images.shape[0] == 0:
        return images.copy()
    return kernels.apply_block_gather(images, key.block_size, _pixel_byte_src(key.pos_perm))


def naive_unshuffle_images(images: np.ndarray, key: NaiveShuffleKey) -> np.ndarray:
    images = _check_batch(images, key.block_size)
    if images.shape[0] == 0:
        return images.copy()
    return kernels.apply_block_gather(images, key.block_size, _pixel_byte_src(key.inv_pos_perm))


def naive_block_shuffle(img: np.ndarray, key: NaiveShuffleKey) -> np.ndarray:
    """Within each block, pixel at flat position s becomes in[pos_perm[s]]."""
    return naive_shuffle_images(check_image(img)[np.newaxis], key)[0]


def naive_block_unshuffle(img: np.ndarray, key: NaiveShuffleKey) -> np.ndarray:
    return naive_unshuffle_images(check_image(img)[np.newaxis], key)[0]


# -- cat map -----------------------------------------------------------------

@dataclass(frozen=True)
class CatMapKey:
    """Grid-map parameters for an N x N image.

    p and q are key-derived in [1, N-1]; the induced position map is a
    bijection for every choice (unimodular, determinant 1 mod N).
    """

    seed: int
    grid_size: int
    p: int
    q: int
    iterations: int = 5
    xor_diffusion: bool = False


def derive_catmap_key(seed: int, grid_size: int, iterations: int = 5,
                      xor_diffusion: bool = False) -> CatMapKey:
    """Two stream draws, each mapped into [1, N-1] by (draw mod (N-1)) + 1."""
    if grid_size < 2:
        raise NotSquare("grid size must be at least 2")
    rng = SplitMix64(seed)
    p = rng.next_below(grid_size - 1) + 1
    q = rng.next_below(grid_size - 1) + 1
    return CatMapKey(seed=seed, grid_size=grid_size, p=p, q=q,
                     iterations=iterations, xor_diffusion=xor_diffusion)


def catmap_step(x: int, y: int, p: int, q: int, n: int) -> tuple[int, int]:
    """One forward application of the grid map to coordinates (x=col, y=row)."""
    return (x + p * y) % n, (q * x + (p * q + 1) * y) % n


def catmap_step_inverse(x: int, y: int, p: int, q: int, n: int) -> tuple[int, int]:
    """Inverse map: undoes catmap_step exactly."""
    return ((p * q + 1) * x - p * y) % n, (-q * x + y) % n


def _position_map(key: CatMapKey) -> np.ndarray:
    """src[dest] after `iterations` forward steps of the whole-grid map."""
    n = key.grid_size
    xs, ys = np.meshgrid(np.arange(n), np.arange(n))  # xs[y,x]=x
    step = np.empty(n * n, dtype=np.int64)
    xd = (xs + key.p * ys) % n
    yd = (key.q * xs + (key.p * key.q + 1) * ys) % n
    step[(yd * n + xd).reshape(-1)] = (ys * n + xs).reshape(-1)
    total = np.arange(n * n, dtype=np.int64)
    for _ in range(key.iterations):
        total = total[step]
    return total


def _keystream(seed: int, nbytes: int) -> np.ndarray:
    # continue the stream past the two (p, q) draws
    rng = SplitMix64(seed)
    rng.next_u64()
    rng.next_u64()
    return np.frombuffer(rng.bytes(nbytes), dtype=np.uint8)


def _check_square(images: np.ndarray, n: int) -> np.ndarray:
    images = np.ascontiguousarray(images, dtype=np.uint8)
    if images.ndim != 4 or images.shape[3] != 3:
        raise NotSquare(f"expected a batch of HxWx3 images, got shape {images.shape}")
    if images.shape[1] != n or images.shape[2] != n:
        raise NotSquare(f"images must be {n}x{n}, got {images.shape[1]}x{images.shape[2]}")
    return images


def catmap_encrypt_images(images: np.ndarray, key: CatMapKey) -> np.ndarray:
    images = _check_square(images, key.grid_size)
    if images.shape[0] == 0:
        return images.copy()
    out = kernels.apply_pixel_gather(images, _position_map(key))
    if key.xor_diffusion:
        ks = _keystream(key.seed, key.grid_size * key.grid_size * 3)
        out = (out.reshape(out.shape[0], -1) ^ ks).reshape(out.shape)
    return out


def catmap_decrypt_images(images: np.ndarray, key: CatMapKey) -> np.ndarray:
    images = _check_square(images, key.grid_size)
    if images.shape[0] == 0:
        return images.copy()
    if key.xor_diffusion:
        ks = _keystream(key.seed, key.grid_size * key.grid_size * 3)
        images = np.ascontiguousarray((images.reshape(images.shape[0], -1) ^ ks).reshape(images.shape))
    return kernels.apply_pixel_gather(images, invert_permutation(_position_map(key)))


def catmap_encrypt(img: np.ndarray, key: CatMapKey) -> np.ndarray:
    """T grid-map iterations over pixel positions, then the optional XOR pass."""
    img = check_image(img)
    if img.shape[0] != img.shape[1]:
        raise NotSquare(f"image must be square, got {img.shape[0]}x{img.shape[1]}")
    return catmap_encrypt_images(img[np.newaxis], key)[0]


def catmap_decrypt(img: np.ndarray, key: CatMapKey) -> np.ndarray:
    """Exact inverse: undo the XOR pass, then invert the position map."""
    img = check_image(img)
    if img.shape[0] != img.shape[1]:
        raise NotSquare(f"image must be square, got {img.shape[0]}x{img.shape[1]}")
    return catmap_decrypt_images(img[np.newaxis], key)[0]
