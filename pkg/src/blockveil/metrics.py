"""Histogram, entropy, and adjacent-pixel correlation.

These quantify "encrypted for humans": ciphertext should show near-flat
histograms, entropy close to 8 bits/channel, and adjacent correlations near
zero, where natural images sit near |r| ~ 0.9. Correlation is computed over
all neighbor pairs in double precision; a zero-variance side is reported as
undefined rather than coerced to a number.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyHistogram, TooSmall

DIRECTIONS = ("horizontal", "vertical")
_CHANNELS = "rgb"


def histogram(img: np.ndarray) -> np.ndarray:
    """Exact per-channel 256-bin counts, shape (3, 256)."""
    img = np.asarray(img, dtype=np.uint8)
    return np.stack([np.bincount(img[..., c].reshape(-1), minlength=256) for c in range(3)])


def shannon_entropy(counts: np.ndarray) -> float:
    """-sum p*log2(p) over the nonzero bins, in bits."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptyHistogram("entropy of an empty histogram is undefined")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def adjacent_correlation(img: np.ndarray, direction: str) -> list[float | None]:
    """Pearson r between each pixel and its neighbor, per channel.

    Returns one value per channel, or None where either side has zero
    variance. Raises TooSmall when the image has fewer than 2 pixels along
    the direction.
    """
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    img = np.asarray(img, dtype=np.float64)
    if direction == "horizontal":
        if img.shape[1] < 2:
            raise TooSmall("need at least 2 pixels per row")
        a, b = img[:, :-1, :], img[:, 1:, :]
    else:
        if img.shape[0] < 2:
            raise TooSmall("need at least 2 pixels per column")
        a, b = img[:-1, :, :], img[1:, :, :]
    out: list[float | None] = []
    for c in range(3):
        x = a[..., c].reshape(-1)
        y = b[..., c].reshape(-1)
        xc = x - x.mean()
        yc = y - y.mean()
        sx = float(xc @ xc)
        sy = float(yc @ yc)
        if sx == 0.0 or sy == 0.0:
            out.append(None)
        else:
            out.append(float((xc @ yc) / np.sqrt(sx * sy)))
    return out


@dataclass
class MetricsReport:
    """Single-image measurements; histogram bins sum to the pixel count."""

    width: int
    height: int
    histograms: np.ndarray  # (3, 256)
    entropy_bits: tuple[float, float, float]
    corr_horizontal: list[float | None]
    corr_vertical: list[float | None]

    def to_text(self) -> str:
        """Flat key=value block with stable key names."""
        lines = [f"width={self.width}", f"height={self.height}"]
        for c, name in enumerate(_CHANNELS):
            lines.append(f"entropy_{name}={self.entropy_bits[c]:.6f}")
        for tag, vals in (("h", self.corr_horizontal), ("v", self.corr_vertical)):
            for c, name in enumerate(_CHANNELS):
                v = vals[c]
                lines.append(f"corr_{tag}_{name}=" + ("undefined" if v is None else f"{v:.6f}"))
        for c, name in enumerate(_CHANNELS):
            lines.append(f"hist_{name}=" + ",".join(str(int(x)) for x in self.histograms[c]))
        return "\n".join(lines) + "\n"


def measure_image(img: np.ndarray) -> MetricsReport:
    hist = histogram(img)
    return MetricsReport(
        width=img.shape[1],
        height=img.shape[0],
        histograms=hist,
        entropy_bits=tuple(shannon_entropy(hist[c]) for c in range(3)),
        corr_horizontal=adjacent_correlation(img, "horizontal"),
        corr_vertical=adjacent_correlation(img, "vertical"),
    )


def mean_abs_correlation(images: np.ndarray, direction: str) -> float:
    """Mean over images and channels of |r|, skipping undefined entries."""
    vals = []
    for img in images:
        vals.extend(abs(v) for v in adjacent_correlation(img, direction) if v is not None)
    if not vals:
        raise TooSmall("no defined correlations in the sample")
    return float(np.mean(vals))


def dataset_report(images: np.ndarray) -> str:
    """Aggregate key=value block: pooled-histogram entropy + mean |r| per direction."""
    if images.shape[0] == 0:
        raise EmptyHistogram("no images sampled")
    pooled = np.zeros((3, 256), dtype=np.int64)
    per_dir: dict[str, list[float]] = {"h": [], "v": []}
    undefined = {"h": 0, "v": 0}
    for img in images:
        pooled += histogram(img)
        for tag, direction in (("h", "horizontal"), ("v", "vertical")):
            for v in adjacent_correlation(img, direction):
                if v is None:
                    undefined[tag] += 1
                else:
                    per_dir[tag].append(abs(v))
    lines = [f"images={images.shape[0]}"]
    for c, name in enumerate(_CHANNELS):
        lines.append(f"entropy_{name}={shannon_entropy(pooled[c]):.6f}")
    for tag in ("h", "v"):
        if per_dir[tag]:
            lines.append(f"mean_abs_corr_{tag}={np.mean(per_dir[tag]):.6f}")
        else:
            lines.append(f"mean_abs_corr_{tag}=undefined")
        lines.append(f"undefined_corr_{tag}={undefined[tag]}")
    return "\n".join(lines) + "\n"
