"""CIFAR-10/100 binary I/O and P6 image export.

Record layouts are bit-exact contracts:
  CIFAR-10:  3073 bytes = 1 label + 1024 R + 1024 G + 1024 B (planar, row-major)
  CIFAR-100: 3074 bytes = 1 coarse label + 1 fine label + 3072 pixel bytes

Coarse labels are parsed and dropped (the 100-class task uses fine labels);
they are written back as 0. Labels are never encrypted.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadDims, BadLabel, BadLength, DimsMismatch

CIFAR10_RECORD = 3073
CIFAR100_RECORD = 3074


@dataclass
class LabeledDataset:
    """Images plus class labels; images shape (N, H, W, 3) uint8."""

    images: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        self.images = np.ascontiguousarray(self.images, dtype=np.uint8)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.shape[0] != self.labels.shape[0]:
            raise BadLength(
                f"{self.images.shape[0]} images vs {self.labels.shape[0]} labels")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise BadLabel(f"labels outside [0, {self.num_classes})")

    def __len__(self) -> int:
        return self.images.shape[0]

    def with_images(self, images: np.ndarray) -> "LabeledDataset":
        """Same labels, new pixel data (e.g. after encryption)."""
        return LabeledDataset(images=images, labels=self.labels, num_classes=self.num_classes)


def _parse_records(raw: bytes, record_size: int, path) -> np.ndarray:
    if len(raw) % record_size != 0:
        raise BadLength(
            f"{path}: {len(raw)} bytes is not a multiple of the {record_size}-byte record")
    return np.frombuffer(raw, dtype=np.uint8).reshape(-1, record_size)


def _planar_to_images(planar: np.ndarray) -> np.ndarray:
    # (n, 3072) planar RGB -> (n, 32, 32, 3) interleaved
    n = planar.shape[0]
    return np.ascontiguousarray(planar.reshape(n, 3, 32, 32).transpose(0, 2, 3, 1))


def _images_to_planar(images: np.ndarray) -> np.ndarray:
    n = images.shape[0]
    return np.ascontiguousarray(images.transpose(0, 3, 1, 2).reshape(n, 3072))


def read_cifar10(path) -> LabeledDataset:
    rec = _parse_records(Path(path).read_bytes(), CIFAR10_RECORD, path)
    labels = rec[:, 0].astype(np.int64)
    if labels.size and labels.max() > 9:
        raise BadLabel(f"{path}: label {labels.max()} out of range for CIFAR-10")
    return LabeledDataset(images=_planar_to_images(rec[:, 1:]), labels=labels, num_classes=10)


def read_cifar100(path) -> LabeledDataset:
    rec = _parse_records(Path(path).read_bytes(), CIFAR100_RECORD, path)
    fine = rec[:, 1].astype(np.int64)
    if fine.size and fine.max() > 99:
        raise BadLabel(f"{path}: fine label {fine.max()} out of range for CIFAR-100")
    return LabeledDataset(images=_planar_to_images(rec[:, 2:]), labels=fine, num_classes=100)


def write_cifar(ds: LabeledDataset, path) -> None:
    """Emit the binary layout matching ds.num_classes (10 or 100).

    read(write(ds)) == ds exactly; any trainer of the original files consumes
    the result unchanged.
    """
    if ds.images.shape[1:] != (32, 32, 3):
        raise BadDims(f"CIFAR records are 32x32x3, got {ds.images.shape[1:]}")
    if ds.num_classes == 10:
        rec = np.empty((len(ds), CIFAR10_RECORD), dtype=np.uint8)
        rec[:, 0] = ds.labels
        rec[:, 1:] = _images_to_planar(ds.images)
    elif ds.num_classes == 100:
        rec = np.empty((len(ds), CIFAR100_RECORD), dtype=np.uint8)
        rec[:, 0] = 0  # coarse labels are not retained
        rec[:, 1] = ds.labels
        rec[:, 2:] = _images_to_planar(ds.images)
    else:
        raise BadDims(f"no CIFAR layout for {ds.num_classes} classes")
    Path(path).write_bytes(rec.tobytes())


def read_dataset(path, fmt: str) -> LabeledDataset:
    if fmt == "cifar10":
        return read_cifar10(path)
    if fmt == "cifar100":
        return read_cifar100(path)
    raise BadDims(f"unknown dataset format {fmt!r}")


# -- P6 export ---------------------------------------------------------------

def export_ppm(img: np.ndarray, path) -> None:
    """Binary P6: header ``P6\\n<w> <h>\\n255\\n`` then interleaved RGB bytes."""
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape[0], img.shape[1]
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())


def read_ppm(path) -> np.ndarray:
    """Parse a binary P6 file (maxval 255) back into an H x W x 3 array."""
    raw = Path(path).read_bytes()
    if raw[:2] != b"P6":
        raise BadDims(f"{path}: not a P6 file")
    # header: three whitespace-separated tokens after the magic, then one
    # whitespace byte, then pixel data; # comments allowed
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        tokens.append(raw[start:pos])
    pos += 1  # single whitespace separates header from data
    w, h, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise BadDims(f"{path}: only maxval 255 supported")
    data = raw[pos : pos + w * h * 3]
    if len(data) != w * h * 3:
        raise BadLength(f"{path}: truncated pixel data")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w, 3).copy()


def export_grid(images, cols: int, path) -> None:
    """Tile images row-major into one P6 sheet; ragged last row is black-padded."""
    imgs = [np.ascontiguousarray(im, dtype=np.uint8) for im in images]
    if not imgs:
        raise DimsMismatch("no images to export")
    shape = imgs[0].shape
    if any(im.shape != shape for im in imgs):
        raise DimsMismatch("grid export needs images of identical dimensions")
    h, w = shape[0], shape[1]
    rows = math.ceil(len(imgs) / cols)
    sheet = np.zeros((rows * h, cols * w, 3), dtype=np.uint8)
    for i, im in enumerate(imgs):
        r, c = divmod(i, cols)
        sheet[r * h : (r + 1) * h, c * w : (c + 1) * w] = im
    export_ppm(sheet, path)
