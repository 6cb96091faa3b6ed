"""Synthetic ground-truth scenes: disk blobs on a constant background."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import GrayImage, LabelMap


@dataclass(frozen=True)
class BlobSpec:
    cx: int
    cy: int
    radius: int
    intensity: int

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError(f"blob radius must be >= 1, got {self.radius}")
        if not 0 <= self.intensity <= 255:
            raise ValueError(f"blob intensity must lie in [0, 255], got {self.intensity}")


def generate_blobs(
    width: int,
    height: int,
    blobs: list[BlobSpec],
    bg_intensity: int,
    noise_sigma: float,
    rng_seed: int,
) -> tuple[GrayImage, LabelMap]:
    """Render disks over a constant background with additive Gaussian noise.

    Blob i is labeled i+1 in the returned ground truth. Blobs must fit
    inside the image, keep at least 3 px of separation between disk
    boundaries, and keep an intensity gap of at least 4*noise_sigma from
    the background so the scene stays separable by construction.
    """
    if width < 1 or height < 1:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")
    if not 0 <= bg_intensity <= 255:
        raise ValueError(f"background intensity must lie in [0, 255], got {bg_intensity}")
    if noise_sigma < 0:
        raise ValueError(f"noise sigma must be >= 0, got {noise_sigma}")
    for b in blobs:
        if b.cx - b.radius < 0 or b.cx + b.radius > width - 1 \
                or b.cy - b.radius < 0 or b.cy + b.radius > height - 1:
            raise ValueError(f"blob at ({b.cx}, {b.cy}) r={b.radius} extends outside the image")
        if abs(b.intensity - bg_intensity) < 4 * noise_sigma:
            raise ValueError(
                f"blob intensity {b.intensity} too close to background {bg_intensity} "
                f"for sigma {noise_sigma} (need a gap of at least {4 * noise_sigma:g})"
            )
    for i in range(len(blobs)):
        for j in range(i + 1, len(blobs)):
            a, b = blobs[i], blobs[j]
            gap = np.hypot(a.cx - b.cx, a.cy - b.cy) - a.radius - b.radius
            if gap < 3:
                raise ValueError(f"blobs {i} and {j} overlap or sit closer than 3 px")

    ys, xs = np.mgrid[0:height, 0:width]
    base = np.full((height, width), float(bg_intensity))
    gt = np.zeros((height, width), dtype=np.int32)
    for i, b in enumerate(blobs):
        disk = (xs - b.cx) ** 2 + (ys - b.cy) ** 2 <= b.radius**2
        base[disk] = float(b.intensity)
        gt[disk] = i + 1

    if noise_sigma > 0:
        rng = np.random.default_rng(rng_seed)
        base = base + rng.normal(0.0, noise_sigma, size=base.shape)
    img = np.clip(np.rint(base), 0, 255).astype(np.uint8)
    return GrayImage(img), LabelMap(gt)
