"""Pure-numpy kernel backend.

Same contract as the compiled module: batch byte transforms on contiguous
(N, H, W, 3) uint8 arrays. Selected automatically when the extension is not
built, or when BLOCKVEIL_PURE=1.
"""

import numpy as np

BACKEND = "python"

# byte -> nibble tables indexed by kind: 0 upper, 1 upper complemented,
# 2 lower, 3 lower complemented
_V = np.arange(256, dtype=np.uint8)
_LUT = np.stack([_V >> 4, 15 - (_V >> 4), _V & 0x0F, 15 - (_V & 0x0F)])


def _to_blocks(images, m):
    n, h, w, _ = images.shape
    gh, gw = h // m, w // m
    blocks = images.reshape(n, gh, m, gw, m, 3).transpose(0, 1, 3, 2, 4, 5)
    return blocks.reshape(n * gh * gw, 3 * m * m), (n, gh, gw, h, w)


def _from_blocks(flat, info, m):
    n, gh, gw, h, w = info
    blocks = flat.reshape(n, gh, gw, m, m, 3).transpose(0, 1, 3, 2, 4, 5)
    return np.ascontiguousarray(blocks.reshape(n, h, w, 3))


def apply_block_map(images, m, src_hi, kind_hi, src_lo, kind_lo):
    """out[j] = LUT[kind_hi[j]][in[src_hi[j]]] << 4 | LUT[kind_lo[j]][in[src_lo[j]]] per block."""
    blocks, info = _to_blocks(images, m)
    hi = _LUT[kind_hi[np.newaxis, :], blocks[:, src_hi]]
    lo = _LUT[kind_lo[np.newaxis, :], blocks[:, src_lo]]
    return _from_blocks((hi << 4) | lo, info, m)


def apply_block_gather(images, m, src):
    """Per-block byte permutation: out[j] = in[src[j]]."""
    blocks, info = _to_blocks(images, m)
    return _from_blocks(blocks[:, src], info, m)


def apply_pixel_gather(images, src):
    """Whole-grid pixel permutation, RGB triples moving together."""
    n, h, w, _ = images.shape
    flat = images.reshape(n, h * w, 3)
    return np.ascontiguousarray(flat[:, src, :].reshape(n, h, w, 3))
