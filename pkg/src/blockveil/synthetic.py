"""Deterministic structured image corpus for experiments and tests.

Ten classes of 32x32 RGB images. Each image is an 8x8 grid of 4x4 striped
tiles drawn with two per-image colors A and B: background tiles carry
horizontal stripes, and the class shape is a 12-tile region of vertical
stripes. Built so that the class signal is *structural*, never statistical:

  - every tile holds exactly 8 A-pixels and 8 B-pixels whichever way it is
    striped, so pixel marginals and color histograms carry no label
    information whatsoever (position scramblers preserve histograms, and no
    pixelwise feature can find the shape);
  - stripe orientation is a within-block arrangement, which block-local
    transforms map to a fixed learnable signature and global scrambles
    destroy;
  - A and B are jittered per image within half-nibble bands (palette values
    sit at nibble centers), so no two images are byte-identical and
    classifiers must generalize rather than memorize;
  - every shape covers exactly 12 tiles, keeping even region size
    class-independent.

Shapes sit at a random whole-tile offset within the grid.
"""

import numpy as np

from .dataset import LabeledDataset

TILE = 4
GRID = 8
NUM_CLASSES = 10
_TILES_PER_SHAPE = 12

# channel values at nibble centers: +-4 jitter never crosses an upper-nibble
# boundary, so the cipher's upper-nibble slots stay deterministic per color
_PALETTE = np.array([
    [216, 56, 56], [56, 184, 56], [56, 88, 216], [216, 216, 56],
    [184, 56, 184], [56, 184, 184], [152, 104, 56], [120, 120, 120],
    [216, 136, 88], [88, 56, 152], [56, 120, 88], [184, 184, 184],
], dtype=np.int64)
_COLOR_JITTER = 4


def _shape_cells() -> list[list[tuple[int, int]]]:
    shapes = [
        # horizontal bar
        [(r, c) for r in (0, 1) for c in range(6)],
        # vertical bar
        [(r, c) for r in range(6) for c in (0, 1)],
        # diagonal, doubled
        [(i, i) for i in range(6)] + [(i, i + 1) for i in range(6)],
        # anti-diagonal, doubled
        [(i, 5 - i) for i in range(6)] + [(i, 6 - i) for i in range(6)],
        # 4x4 ring
        [(r, c) for r in range(4) for c in range(4) if r in (0, 3) or c in (0, 3)],
        # filled 3x4 rectangle
        [(r, c) for r in range(3) for c in range(4)],
        # plus
        sorted(set([(r, c) for r in (1, 2) for c in range(4)] + [(r, c) for r in range(4) for c in (1, 2)])),
        # x, doubled diagonals
        [(i, i) for i in range(6)] + [(i, 5 - i) for i in range(6)],
        # T
        [(0, c) for c in range(6)] + [(r, c) for r in (1, 2, 3) for c in (2, 3)],
        # L
        [(r, c) for r in range(4) for c in (0, 1)] + [(3, c) for c in (2, 3, 4, 5)],
    ]
    for cells in shapes:
        assert len(set(cells)) == _TILES_PER_SHAPE
    return [sorted(set(cells)) for cells in shapes]


_SHAPES = _shape_cells()
_COL_PARITY = (np.arange(GRID * TILE) % 2)[np.newaxis, :, np.newaxis]  # (1, W, 1)
_ROW_PARITY = (np.arange(GRID * TILE) % 2)[:, np.newaxis, np.newaxis]  # (H, 1, 1)


def _render(label: int, rng: np.random.Generator) -> np.ndarray:
    cells = _SHAPES[label]
    max_r = max(r for r, _ in cells)
    max_c = max(c for _, c in cells)
    dr = int(rng.integers(0, GRID - max_r))
    dc = int(rng.integers(0, GRID - max_c))
    ia = int(rng.integers(len(_PALETTE)))
    ib = int((ia + 1 + rng.integers(len(_PALETTE) - 1)) % len(_PALETTE))
    jitter = rng.integers(-_COLOR_JITTER, _COLOR_JITTER + 1, (2, 3))
    a = _PALETTE[ia] + jitter[0]
    b = _PALETTE[ib] + jitter[1]
    # vertical-stripe mask on shape tiles, horizontal elsewhere
    vertical = np.zeros((GRID, GRID), dtype=bool)
    for r, c in cells:
        vertical[r + dr, c + dc] = True
    vmask = np.repeat(np.repeat(vertical, TILE, axis=0), TILE, axis=1)[:, :, np.newaxis]
    # random per-tile stripe phase: swaps the A/B roles tile by tile, so
    # cross-tile pixel comparisons carry no orientation information
    phase = rng.integers(0, 2, (GRID, GRID))
    pmask = np.repeat(np.repeat(phase, TILE, axis=0), TILE, axis=1)[:, :, np.newaxis]
    use_b = (np.where(vmask, _COL_PARITY, _ROW_PARITY) + pmask) % 2 == 1
    img = np.where(use_b, b[np.newaxis, np.newaxis, :], a[np.newaxis, np.newaxis, :])
    return img.astype(np.uint8)


def make_shape_dataset(n: int, seed: int, noise: int = 0) -> LabeledDataset:
    """n labeled images; labels cycle through the classes deterministically."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    labels = np.arange(n, dtype=np.int64) % NUM_CLASSES
    # shuffle label order so train/test prefixes stay class-balanced but unordered
    rng.shuffle(labels)
    images = np.empty((n, GRID * TILE, GRID * TILE, 3), dtype=np.uint8)
    for i in range(n):
        images[i] = _render(int(labels[i]), rng)
    if noise > 0:
        delta = rng.integers(-noise, noise + 1, size=images.shape)
        images = np.clip(images.astype(np.int64) + delta, 0, 255).astype(np.uint8)
    return LabeledDataset(images=images, labels=labels, num_classes=NUM_CLASSES)
