"""Otsu threshold computation and binarization.

The threshold maximizes the between-class variance

    sigma_b(t) = w0 * w1 * (mu0 - mu1)^2

where class 0 holds intensities <= t and class 1 holds intensities > t.
Candidates are scanned over t in [0, 254] with exact integer arithmetic
(cross-multiplied fractions), so the argmax never depends on float
round-off; ties break toward the lowest t.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .raster import BinaryMask, GrayImage


class Polarity(enum.Enum):
    """Which side of the threshold counts as foreground."""

    BRIGHT_FOREGROUND = "bright"
    DARK_FOREGROUND = "dark"


@dataclass(frozen=True)
class OtsuResult:
    threshold: int
    between_class_variance: float


def otsu_threshold(hist) -> OtsuResult:
    counts = np.asarray(hist, dtype=np.int64)
    if counts.shape != (256,):
        raise ValueError(f"histogram must have 256 bins, got shape {counts.shape}")
    if counts.min() < 0:
        raise ValueError("histogram counts must be non-negative")
    total = int(counts.sum())
    if total == 0:
        raise ValueError("empty histogram")

    occupied = np.nonzero(counts)[0]
    if occupied.size == 1:
        # single intensity level: no split exists, return that level
        return OtsuResult(int(occupied[0]), 0.0)

    weighted_total = int((counts * np.arange(256, dtype=np.int64)).sum())
    levels = counts.tolist()

    best_t = 0
    best_num = -1  # sigma_b(t) == best_num / (best_den * total^2)
    best_den = 1
    c0 = 0
    s0 = 0
    for t in range(255):
        c0 += levels[t]
        s0 += t * levels[t]
        c1 = total - c0
        if c0 == 0 or c1 == 0:
            num, den = 0, 1
        else:
            diff = s0 * c1 - (weighted_total - s0) * c0
            num, den = diff * diff, c0 * c1
        if num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den
    return OtsuResult(best_t, best_num / (best_den * total * total))


def binarize(img: GrayImage, t: int, polarity: Polarity) -> BinaryMask:
    """Classify pixels against threshold t: bright foreground is > t,
    dark foreground is <= t. The two polarities are exact complements."""
    if not 0 <= t <= 255:
        raise ValueError(f"threshold must lie in [0, 255], got {t}")
    if polarity is Polarity.BRIGHT_FOREGROUND:
        return BinaryMask(img.pixels > t)
    return BinaryMask(img.pixels <= t)
