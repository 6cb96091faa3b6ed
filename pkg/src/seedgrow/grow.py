"""Multi-seed region growing gated by a threshold and a window-mean rule.

A pixel is acceptable when it passes the foreground-side threshold test
itself and, under the pixel_and_mean rule, the mean of its square window
(replicate-padded) passes the same test. Because acceptance depends only
on the input image, it is precomputed as a mask; the mask is also the
formal bound on what growing may ever label, which is what stops regions
from leaking over object boundaries through thin bright or dark paths.

Growing runs one global best-first frontier: the next pixel labeled is
always the frontier pixel whose intensity is closest to the current mean
of the region claiming it, with FIFO order breaking ties. Region means
update incrementally on exact integer accumulators.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .raster import GrayImage, LabelMap
from .roi import Connectivity
from .seeds import Seed
from .threshold import Polarity

_OFFSETS = {
    Connectivity.FOUR: ((-1, 0), (0, -1), (0, 1), (1, 0)),
    Connectivity.EIGHT: (
        (-1, -1), (-1, 0), (-1, 1),
        (0, -1), (0, 1),
        (1, -1), (1, 0), (1, 1),
    ),
}


class NeighborhoodRule(enum.Enum):
    PIXEL_ONLY = "pixel_only"
    PIXEL_AND_MEAN = "pixel_and_mean"


@dataclass(frozen=True)
class GrowConfig:
    threshold: int
    polarity: Polarity
    grow_radius: int = 1
    connectivity: Connectivity = Connectivity.FOUR
    neighborhood_rule: NeighborhoodRule = NeighborhoodRule.PIXEL_AND_MEAN

    def __post_init__(self):
        if not 0 <= self.threshold <= 255:
            raise ValueError(f"threshold must lie in [0, 255], got {self.threshold}")
        if self.grow_radius < 0:
            raise ValueError(f"grow_radius must be >= 0, got {self.grow_radius}")


@dataclass(frozen=True)
class GrowResult:
    labels: LabelMap  # region i+1 grew from seed i
    region_sizes: list[int]
    frontier_rejections: int  # pixels popped from the frontier but rejected


def _foreground_side(values: np.ndarray, scaled_threshold: int, polarity: Polarity) -> np.ndarray:
    if polarity is Polarity.BRIGHT_FOREGROUND:
        return values > scaled_threshold
    return values <= scaled_threshold


def acceptance_mask(img: GrayImage, cfg: GrowConfig) -> np.ndarray:
    """Boolean mask of pixels satisfying the acceptance rule."""
    pix = img.pixels.astype(np.int64)
    ok = _foreground_side(pix, cfg.threshold, cfg.polarity)
    r = cfg.grow_radius
    if cfg.neighborhood_rule is NeighborhoodRule.PIXEL_ONLY or r == 0:
        return ok
    # window mean > t  <=>  window sum > t * area, exactly, in integers
    size = 2 * r + 1
    padded = np.pad(pix, r, mode="edge")
    integral = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.int64)
    integral[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    sums = (
        integral[size:, size:]
        - integral[:-size, size:]
        - integral[size:, :-size]
        + integral[:-size, :-size]
    )
    return ok & _foreground_side(sums, cfg.threshold * size * size, cfg.polarity)


def accept(img: GrayImage, x: int, y: int, cfg: GrowConfig) -> bool:
    """Acceptance rule for a single pixel (same contract as the mask)."""
    h, w = img.pixels.shape
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"pixel ({x}, {y}) outside {w}x{h} image")
    value = int(img.pixels[y, x])
    if not _foreground_side(np.int64(value), cfg.threshold, cfg.polarity):
        return False
    r = cfg.grow_radius
    if cfg.neighborhood_rule is NeighborhoodRule.PIXEL_ONLY or r == 0:
        return True
    total = 0
    for dy in range(-r, r + 1):
        yy = min(max(y + dy, 0), h - 1)  # index clipping == replicate padding
        for dx in range(-r, r + 1):
            xx = min(max(x + dx, 0), w - 1)
            total += int(img.pixels[yy, xx])
    area = (2 * r + 1) ** 2
    return bool(_foreground_side(np.int64(total), cfg.threshold * area, cfg.polarity))


def grow_regions(img: GrayImage, seeds: list[Seed], cfg: GrowConfig) -> GrowResult:
    """Grow one region per seed over the acceptance mask.

    Every labeled pixel satisfies the acceptance rule and each pixel is
    labeled at most once (no re-examination); identical inputs always give
    identical output.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    positions = [(s.x, s.y) for s in seeds]
    if len(set(positions)) != len(positions):
        raise ValueError("duplicate seed pixels")

    pix = img.pixels
    h, w = pix.shape
    acc = acceptance_mask(img, cfg)
    for s in seeds:
        if not (0 <= s.x < w and 0 <= s.y < h):
            raise ValueError(f"seed ({s.x}, {s.y}) outside {w}x{h} image")
        if not acc[s.y, s.x]:
            raise ValueError(
                f"seed ({s.x}, {s.y}) fails the acceptance rule; "
                "threshold or polarity is inconsistent with the seeds"
            )

    labels = np.zeros((h, w), dtype=np.int32)
    rejected = np.zeros((h, w), dtype=bool)
    sums = [0] * len(seeds)
    counts = [0] * len(seeds)
    offsets = _OFFSETS[cfg.connectivity]
    tick = itertools.count()
    frontier: list[tuple[float, int, int, int, int]] = []

    def enqueue_neighbors(x: int, y: int, region: int) -> None:
        mean = sums[region] / counts[region]
        for dy, dx in offsets:
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and labels[ny, nx] == 0 and not rejected[ny, nx]:
                heapq.heappush(
                    frontier,
                    (abs(int(pix[ny, nx]) - mean), next(tick), ny, nx, region),
                )

    for i, s in enumerate(seeds):
        labels[s.y, s.x] = i + 1
        sums[i] = int(pix[s.y, s.x])
        counts[i] = 1
    for i, s in enumerate(seeds):
        enqueue_neighbors(s.x, s.y, i)

    rejections = 0
    while frontier:
        _, _, y, x, region = heapq.heappop(frontier)
        if labels[y, x] != 0 or rejected[y, x]:
            continue
        if not acc[y, x]:
            # acceptance is a pure function of the image, so a rejected
            # pixel can never be accepted later; count it once
            rejected[y, x] = True
            rejections += 1
            continue
        labels[y, x] = region + 1
        sums[region] += int(pix[y, x])
        counts[region] += 1
        enqueue_neighbors(x, y, region)

    return GrowResult(LabelMap(labels), counts, rejections)
